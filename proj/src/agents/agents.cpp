#include "specshare/agents/agents.hpp"

#include <cmath>

#include "specshare/agents/codec.hpp"
#include "specshare/channel.hpp"
#include "specshare/metrics.hpp"
#include "specshare/ppo/checkpoint.hpp"

namespace specshare {

namespace {

constexpr int kAgentCheckpointVersion = 1;

}  // namespace

const char* to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kExhaustive: return "exhaustive";
    case AgentKind::kRandom: return "random";
    case AgentKind::kSadrl: return "sadrl";
    case AgentKind::kMadrl: return "madrl";
    case AgentKind::kHdrl: return "hdrl";
  }
  return "unknown";
}

AgentKind parse_agent_kind(const std::string& name) {
  for (AgentKind k : {AgentKind::kExhaustive, AgentKind::kRandom, AgentKind::kSadrl,
                      AgentKind::kMadrl, AgentKind::kHdrl}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected exhaustive, random, sadrl, madrl or hdrl)");
}

bool is_learnable(AgentKind kind) {
  return kind == AgentKind::kSadrl || kind == AgentKind::kMadrl || kind == AgentKind::kHdrl;
}

nlohmann::json Agent::save() const {
  throw CheckpointError(name() + " is not trainable and has no checkpoint");
}

void Agent::load(const nlohmann::json& j) {
  (void)j;
  throw CheckpointError(name() + " is not trainable and has no checkpoint");
}

std::unique_ptr<Agent> make_agent(AgentKind kind, const ScenarioConfig& cfg, std::uint64_t seed) {
  switch (kind) {
    case AgentKind::kExhaustive: return std::make_unique<ExhaustiveAgent>(cfg);
    case AgentKind::kRandom: return std::make_unique<RandomAgent>(cfg, seed);
    case AgentKind::kSadrl: return std::make_unique<SadrlAgent>(cfg, seed);
    case AgentKind::kMadrl: return std::make_unique<MadrlAgent>(cfg, seed);
    case AgentKind::kHdrl: return std::make_unique<HdrlAgent>(cfg, seed);
  }
  throw std::invalid_argument("make_agent: unknown kind");
}

// ---- Random ---------------------------------------------------------------

RandomAgent::RandomAgent(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(seed) {}

ActionBundle RandomAgent::act(const Env& env, bool explore) {
  (void)explore;
  const int N = cfg_.num_subbands;
  const int M = cfg_.nodes_per_region();
  ActionBundle out;
  if (env.global_due()) {
    std::uniform_int_distribution<int> pick(0, cfg_.beams);
    std::vector<int> slots(N);
    for (int& s : slots) s = pick(rng_);
    out.global = codec::decode_global(slots.data(), cfg_);
  }
  if (env.regional_due()) {
    std::uniform_int_distribution<int> pick(0, M);
    std::vector<RegionalAllocation> regional;
    std::vector<int> slots(N);
    for (int r = 0; r < cfg_.num_regions(); ++r) {
      for (int& s : slots) s = pick(rng_);
      regional.push_back(codec::decode_regional(slots.data(), cfg_));
    }
    out.regional = std::move(regional);
  }
  if (env.local_due()) {
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> move(-cfg_.uav_step, cfg_.uav_step);
    std::vector<LocalAction> local;
    for (int j = 0; j < env.num_serving(); ++j) {
      LocalAction l(N);
      for (int n = 0; n < N; ++n) {
        l.beta[n] = coin(rng_) ? 1 : 0;
        l.alpha[n] = unit(rng_);
      }
      l.dp_x = move(rng_);
      l.dp_y = move(rng_);
      local.push_back(std::move(l));
    }
    out.local = std::move(local);
  }
  return out;
}

// ---- Exhaustive -----------------------------------------------------------

double exhaustive_candidates(const ScenarioConfig& cfg) {
  const double per_region = cfg.nodes_per_region() + 1.0;
  const int regions_per_beam = cfg.haps_per_beam * cfg.regions_per_hap;
  const double per_subband = 1.0 + cfg.beams * std::pow(per_region, regions_per_beam);
  return std::pow(per_subband, cfg.num_subbands);
}

ExhaustiveResult exhaustive_solve(const Env& env, double cap) {
  const ScenarioConfig& cfg = env.config();
  if (!cfg.fading_frozen) {
    throw std::invalid_argument("exhaustive search needs frozen fading (radio.fading_frozen)");
  }
  GlobalEnumerator globals(cfg.beams, cfg.num_subbands, cap);
  const double total = exhaustive_candidates(cfg);
  if (total > cap) {
    throw SearchSpaceTooLarge("search space too large: " + std::to_string(total) +
                              " candidates exceed the cap of " + std::to_string(cap));
  }

  const Topology& topo = env.topology();
  const GainMatrix& gains = env.snapshot().gains;
  const int N = cfg.num_subbands;
  const int M = cfg.nodes_per_region();
  const int R = cfg.num_regions();

  ExhaustiveResult best;
  bool have = false;
  AllocationState cand = AllocationState::zeros(cfg);
  GlobalAllocation g;
  while (globals.next(g)) {
    cand.global = g;
    // Free choices: every (region, subband) whose beam holds the subband.
    std::vector<std::pair<int, int>> free;
    for (int r = 0; r < R; ++r) {
      for (int n = 0; n < N; ++n) {
        if (g.at(topo.regions[r].beam, n)) free.emplace_back(r, n);
      }
    }
    std::vector<int> digits(free.size(), 0);
    while (true) {
      for (int r = 0; r < R; ++r) std::fill(cand.regional[r].a.begin(), cand.regional[r].a.end(), 0);
      for (std::size_t i = 0; i < free.size(); ++i) {
        if (digits[i] > 0) cand.regional[free[i].first].at(digits[i] - 1, free[i].second) = 1;
      }
      for (int j = 0; j < R * M; ++j) cand.local[j] = codec::heuristic_local(cand.regional[j / M], j % M);

      const ChannelSnapshot snap = snapshot_from_gains(topo, gains, cand, cfg);
      const StepMetrics m = compute_step_metrics(topo, env.node_positions(), cand, snap, cfg);
      ++best.candidates;
      const double tol = 1e-12 * std::max(1.0, std::abs(best.eta));
      const bool better = !have || m.eta > best.eta + tol ||
                          (std::abs(m.eta - best.eta) <= tol && m.fairness > best.fairness + 1e-12);
      if (better) {
        best.best = cand;
        best.eta = m.eta;
        best.fairness = m.fairness;
        have = true;
      }

      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] > M) digits[i++] = 0;
      if (i == digits.size()) break;
    }
  }
  return best;
}

ExhaustiveAgent::ExhaustiveAgent(const ScenarioConfig& cfg) : cfg_(cfg) {}

void ExhaustiveAgent::begin_episode(const Env& env) {
  solution_ = exhaustive_solve(env, cfg_.enumeration_cap);
}

ActionBundle ExhaustiveAgent::act(const Env& env, bool explore) {
  (void)explore;
  if (!solution_) throw std::logic_error("ExhaustiveAgent: act before begin_episode");
  ActionBundle out;
  if (env.global_due()) out.global = solution_->best.global;
  if (env.regional_due()) out.regional = solution_->best.regional;
  if (env.local_due()) out.local = solution_->best.local;
  return out;
}

// ---- PPO agents: shared plumbing -----------------------------------------

PpoAgent::PpoAgent(const ScenarioConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

nlohmann::json PpoAgent::save() const {
  nlohmann::json learners = nlohmann::json::array();
  for (const Learner& l : learners_) learners.push_back(l.to_json());
  return {{"version", kAgentCheckpointVersion},
          {"kind", name()},
          {"config_hash", config_hash(cfg_)},
          {"ppo", ppo::ppo_config_to_json(cfg_.ppo)},
          {"rng", ppo::rng_to_string(rng_)},
          {"learners", learners}};
}

void PpoAgent::load(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kAgentCheckpointVersion) {
      throw CheckpointError("checkpoint: unsupported version");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != name()) {
      throw CheckpointError("checkpoint: holds a " + kind + " agent, not " + name());
    }
    const auto hash = j.at("config_hash").get<std::uint64_t>();
    if (hash != config_hash(cfg_)) {
      throw CheckpointError("checkpoint: config hash mismatch (checkpoint " +
                            std::to_string(hash) + ", scenario " +
                            std::to_string(config_hash(cfg_)) + ")");
    }
    const auto& ls = j.at("learners");
    if (ls.size() != learners_.size()) {
      throw CheckpointError("checkpoint: wrong number of policies");
    }
    for (std::size_t i = 0; i < learners_.size(); ++i) learners_[i].load_json(ls[i]);
    rng_ = ppo::rng_from_string(j.at("rng").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("checkpoint: malformed: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(e.what());
  }
}

}  // namespace specshare
