#include "specshare/agents/learner.hpp"

#include <stdexcept>

#include "specshare/ppo/checkpoint.hpp"

namespace specshare {

Learner::Learner(int obs_size, ppo::ActionSpace space, const PpoConfig& cfg, int entities,
                 int batch_size, double gamma, std::mt19937_64& rng)
    : net(obs_size, std::move(space), {cfg.hidden_size, cfg.hidden_size}, rng),
      opt(static_cast<int>(net.params.size()), cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps),
      cfg_(cfg),
      batch_size_(batch_size),
      gamma_(gamma),
      traj_(entities),
      reward_sum_(entities, 0.0),
      reward_count_(entities, 0),
      open_(entities, 0) {}

std::vector<ppo::Action> Learner::act(const Eigen::MatrixXd& obs, int first, bool explore,
                                      std::mt19937_64& rng) {
  const int n = static_cast<int>(obs.cols());
  if (first < 0 || first + n > static_cast<int>(traj_.size())) {
    throw std::out_of_range("Learner: entity index out of range");
  }
  const Eigen::MatrixXd head = net.policy_batch(obs);
  const Eigen::VectorXd log_std = net.log_std();
  std::vector<ppo::Action> out;
  out.reserve(n);
  if (!explore) {
    for (int i = 0; i < n; ++i) {
      out.push_back(ppo::mode_action(net.space(), head.col(i).data(), log_std.data()));
    }
    return out;
  }
  const Eigen::RowVectorXd values = net.value_batch(obs);
  for (int i = 0; i < n; ++i) {
    double logp = 0.0;
    out.push_back(
        ppo::sample_action(net.space(), head.col(i).data(), log_std.data(), rng, &logp));
    const int e = first + i;
    close(e);
    ppo::Trajectory& t = traj_[e];
    t.obs.emplace_back(obs.col(i).data(), obs.col(i).data() + obs.rows());
    t.actions.push_back(out.back());
    t.log_probs.push_back(logp);
    t.values.push_back(values[i]);
    open_[e] = 1;
    ++episode_transitions_;
  }
  return out;
}

void Learner::add_reward(int entity, double reward) {
  if (!open_[entity]) return;
  reward_sum_[entity] += reward;
  ++reward_count_[entity];
}

void Learner::close(int e) {
  if (!open_[e]) return;
  ppo::Trajectory& t = traj_[e];
  t.rewards.push_back(reward_count_[e] > 0 ? reward_sum_[e] / reward_count_[e] : 0.0);
  t.dones.push_back(0);
  reward_sum_[e] = 0.0;
  reward_count_[e] = 0;
  open_[e] = 0;
}

void Learner::finish_episode(const Eigen::MatrixXd& final_obs, std::mt19937_64& rng) {
  const int entities = static_cast<int>(traj_.size());
  if (final_obs.cols() != entities) {
    throw std::invalid_argument("Learner: need one final observation per entity");
  }
  bool any = false;
  for (int e = 0; e < entities; ++e) any = any || !traj_[e].obs.empty();
  if (any) {
    // Episodes end on truncation, so every entity bootstraps from V(s_T).
    const Eigen::RowVectorXd bootstrap = net.value_batch(final_obs);
    for (int e = 0; e < entities; ++e) {
      close(e);
      if (!traj_[e].empty()) batch_.append(traj_[e], bootstrap[e], gamma_, cfg_.gae_lambda);
      traj_[e].clear();
    }
  }
  episode_transitions_ = 0;
  if (static_cast<int>(batch_.size()) >= batch_size_) {
    last_loss_ = ppo::ppo_update(net, opt, std::move(batch_), cfg_, rng);
    batch_.clear();
    ++updates_;
  }
}

nlohmann::json Learner::to_json() const {
  return {{"net", ppo::net_to_json(net)}, {"adam", ppo::adam_to_json(opt)}, {"updates", updates_}};
}

void Learner::load_json(const nlohmann::json& j) {
  ppo::PolicyNet loaded = ppo::net_from_json(j.at("net"));
  if (loaded.obs_size() != net.obs_size() ||
      loaded.params.size() != net.params.size()) {
    throw std::invalid_argument("checkpoint: network shape does not match this scenario");
  }
  net = std::move(loaded);
  opt = ppo::adam_from_json(j.at("adam"));
  updates_ = j.at("updates").get<int>();
}

}  // namespace specshare
