#include <cmath>

#include "specshare/agents/agents.hpp"
#include "specshare/agents/codec.hpp"

namespace specshare {

namespace {

Eigen::MatrixXd column(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd columns(const std::vector<std::vector<double>>& cols) {
  Eigen::MatrixXd m(cols.front().size(), cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(cols[i].data(), m.rows());
  }
  return m;
}

// Local action of node `k` within an action whose local slots start at
// bernoulli/continuous offset 0.
LocalAction local_from(const ppo::Action& a, int k, const ScenarioConfig& cfg) {
  const int N = cfg.num_subbands;
  return codec::decode_local(a.bernoulli.data() + k * N, a.value.data() + k * (N + 2), cfg);
}

int tier_batch(const ScenarioConfig& cfg, int interval) {
  return static_cast<int>(
      std::ceil(static_cast<double>(cfg.ppo.batch_size) * cfg.delta_l / interval));
}

double tier_discount(const ScenarioConfig& cfg, int interval) {
  return std::pow(cfg.ppo.discount, static_cast<double>(interval) / cfg.delta_l);
}

}  // namespace

// ---- SADRL ----------------------------------------------------------------

SadrlAgent::SadrlAgent(const ScenarioConfig& cfg, std::uint64_t seed) : PpoAgent(cfg, seed) {
  learners_.emplace_back(codec::joint_observation_size(cfg), codec::joint_space(cfg), cfg.ppo, 1,
                         cfg.ppo.batch_size, cfg.ppo.discount, rng_);
}

ActionBundle SadrlAgent::act(const Env& env, bool explore) {
  const int N = cfg_.num_subbands;
  const int R = cfg_.num_regions();
  const ppo::Action a =
      learners_[0].act(column(codec::joint_observation(env)), 0, explore, rng_).front();
  ActionBundle out;
  if (env.global_due()) out.global = codec::decode_global(a.categorical.data(), cfg_);
  if (env.regional_due()) {
    std::vector<RegionalAllocation> regional;
    for (int r = 0; r < R; ++r) {
      regional.push_back(codec::decode_regional(a.categorical.data() + N * (1 + r), cfg_));
    }
    out.regional = std::move(regional);
  }
  if (env.local_due()) {
    std::vector<LocalAction> local;
    for (int j = 0; j < env.num_serving(); ++j) local.push_back(local_from(a, j, cfg_));
    out.local = std::move(local);
  }
  return out;
}

void SadrlAgent::observe(const Env& env, const StepResult& result) {
  (void)env;
  learners_[0].add_reward(0, result.rewards.r_s);
}

void SadrlAgent::end_episode(const Env& env) {
  learners_[0].finish_episode(column(codec::joint_observation(env)), rng_);
}

// ---- MADRL ----------------------------------------------------------------

MadrlAgent::MadrlAgent(const ScenarioConfig& cfg, std::uint64_t seed) : PpoAgent(cfg, seed) {
  learners_.reserve(cfg.num_regions());
  for (int r = 0; r < cfg.num_regions(); ++r) {
    learners_.emplace_back(codec::joint_observation_size(cfg), codec::region_space(cfg), cfg.ppo,
                           1, cfg.ppo.batch_size, cfg.ppo.discount, rng_);
  }
}

ActionBundle MadrlAgent::act(const Env& env, bool explore) {
  const int M = cfg_.nodes_per_region();
  ActionBundle out;
  if (env.global_due()) out.global = codec::round_robin_global(cfg_);
  const Eigen::MatrixXd obs = column(codec::joint_observation(env));
  std::vector<RegionalAllocation> regional;
  std::vector<LocalAction> local;
  for (int r = 0; r < cfg_.num_regions(); ++r) {
    const ppo::Action a = learners_[r].act(obs, 0, explore, rng_).front();
    regional.push_back(codec::decode_regional(a.categorical.data(), cfg_));
    for (int k = 0; k < M; ++k) local.push_back(local_from(a, k, cfg_));
  }
  if (env.regional_due()) out.regional = std::move(regional);
  if (env.local_due()) out.local = std::move(local);
  return out;
}

void MadrlAgent::observe(const Env& env, const StepResult& result) {
  (void)env;
  for (int r = 0; r < cfg_.num_regions(); ++r) learners_[r].add_reward(0, result.rewards.r_l[r]);
}

void MadrlAgent::end_episode(const Env& env) {
  const Eigen::MatrixXd obs = column(codec::joint_observation(env));
  for (Learner& l : learners_) l.finish_episode(obs, rng_);
}

// ---- HDRL -----------------------------------------------------------------

HdrlAgent::HdrlAgent(const ScenarioConfig& cfg, std::uint64_t seed) : PpoAgent(cfg, seed) {
  learners_.reserve(3);
  learners_.emplace_back(global_obs_size(cfg), codec::global_space(cfg), cfg.ppo, 1,
                         tier_batch(cfg, cfg.delta_s), tier_discount(cfg, cfg.delta_s), rng_);
  learners_.emplace_back(regional_obs_size(cfg), codec::regional_space(cfg, cfg.regions_per_hap),
                         cfg.ppo, cfg.num_haps(), tier_batch(cfg, cfg.delta_h),
                         tier_discount(cfg, cfg.delta_h), rng_);
  learners_.emplace_back(local_obs_size(cfg), codec::local_space(cfg), cfg.ppo,
                         cfg.num_regions() * cfg.nodes_per_region(), tier_batch(cfg, cfg.delta_l),
                         tier_discount(cfg, cfg.delta_l), rng_);
}

ActionBundle HdrlAgent::act(const Env& env, bool explore) {
  const int N = cfg_.num_subbands;
  ActionBundle out;
  if (env.global_due()) {
    const ppo::Action a = learners_[0].act(column(env.observe_global()), 0, explore, rng_).front();
    out.global = codec::decode_global(a.categorical.data(), cfg_);
  }
  if (env.regional_due()) {
    const AllocationState granted = env.preview(out.global, std::nullopt);
    std::vector<std::vector<double>> obs;
    for (int h = 0; h < cfg_.num_haps(); ++h) obs.push_back(env.observe_regional(h, granted));
    const auto acts = learners_[1].act(columns(obs), 0, explore, rng_);
    std::vector<RegionalAllocation> regional(cfg_.num_regions());
    for (int h = 0; h < cfg_.num_haps(); ++h) {
      const std::vector<int> regions = env.topology().regions_of_hap(h);
      for (std::size_t k = 0; k < regions.size(); ++k) {
        regional[regions[k]] = codec::decode_regional(acts[h].categorical.data() + k * N, cfg_);
      }
    }
    out.regional = std::move(regional);
  }
  if (env.local_due()) {
    const AllocationState granted = env.preview(out.global, out.regional);
    std::vector<std::vector<double>> obs;
    for (int j = 0; j < env.num_serving(); ++j) obs.push_back(env.observe_local(j, granted));
    const auto acts = learners_[2].act(columns(obs), 0, explore, rng_);
    std::vector<LocalAction> local;
    for (const auto& a : acts) local.push_back(local_from(a, 0, cfg_));
    out.local = std::move(local);
  }
  return out;
}

void HdrlAgent::observe(const Env& env, const StepResult& result) {
  const int M = cfg_.nodes_per_region();
  learners_[0].add_reward(0, result.rewards.r_s);
  for (int h = 0; h < cfg_.num_haps(); ++h) learners_[1].add_reward(h, result.rewards.r_h[h]);
  for (int j = 0; j < env.num_serving(); ++j) {
    learners_[2].add_reward(j, result.rewards.r_l[j / M]);
  }
}

void HdrlAgent::end_episode(const Env& env) {
  finished_ = episode_transitions();
  learners_[0].finish_episode(column(env.observe_global()), rng_);
  std::vector<std::vector<double>> obs;
  for (int h = 0; h < cfg_.num_haps(); ++h) obs.push_back(env.observe_regional(h));
  learners_[1].finish_episode(columns(obs), rng_);
  obs.clear();
  for (int j = 0; j < env.num_serving(); ++j) obs.push_back(env.observe_local(j));
  learners_[2].finish_episode(columns(obs), rng_);
}

std::array<int, 3> HdrlAgent::episode_transitions() const {
  return {learners_[0].episode_transitions(), learners_[1].episode_transitions(),
          learners_[2].episode_transitions()};
}

}  // namespace specshare
