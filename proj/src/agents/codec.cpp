#include "specshare/agents/codec.hpp"

namespace specshare::codec {

ppo::ActionSpace global_space(const ScenarioConfig& cfg) {
  ppo::ActionSpace s;
  s.categorical.assign(cfg.num_subbands, cfg.beams + 1);
  return s;
}

ppo::ActionSpace regional_space(const ScenarioConfig& cfg, int regions) {
  ppo::ActionSpace s;
  s.categorical.assign(regions * cfg.num_subbands, cfg.nodes_per_region() + 1);
  return s;
}

ppo::ActionSpace local_space(const ScenarioConfig& cfg) {
  ppo::ActionSpace s;
  s.bernoulli = cfg.num_subbands;
  s.continuous.assign(cfg.num_subbands, {0.0, 1.0});
  s.continuous.push_back({-cfg.uav_step, cfg.uav_step});
  s.continuous.push_back({-cfg.uav_step, cfg.uav_step});
  return s;
}

namespace {

// Appends `count` copies of the local slots to `s`.
void append_locals(ppo::ActionSpace& s, const ScenarioConfig& cfg, int count) {
  const ppo::ActionSpace l = local_space(cfg);
  for (int i = 0; i < count; ++i) {
    s.bernoulli += l.bernoulli;
    s.continuous.insert(s.continuous.end(), l.continuous.begin(), l.continuous.end());
  }
}

}  // namespace

ppo::ActionSpace joint_space(const ScenarioConfig& cfg) {
  ppo::ActionSpace s = global_space(cfg);
  const ppo::ActionSpace r = regional_space(cfg, cfg.num_regions());
  s.categorical.insert(s.categorical.end(), r.categorical.begin(), r.categorical.end());
  append_locals(s, cfg, cfg.num_regions() * cfg.nodes_per_region());
  return s;
}

ppo::ActionSpace region_space(const ScenarioConfig& cfg) {
  ppo::ActionSpace s = regional_space(cfg, 1);
  append_locals(s, cfg, cfg.nodes_per_region());
  return s;
}

GlobalAllocation decode_global(const int* slots, const ScenarioConfig& cfg) {
  GlobalAllocation g(cfg.beams, cfg.num_subbands);
  for (int n = 0; n < cfg.num_subbands; ++n) {
    if (slots[n] > 0) g.at(slots[n] - 1, n) = 1;
  }
  return g;
}

RegionalAllocation decode_regional(const int* slots, const ScenarioConfig& cfg) {
  RegionalAllocation r(cfg.nodes_per_region(), cfg.num_subbands);
  for (int n = 0; n < cfg.num_subbands; ++n) {
    if (slots[n] > 0) r.at(slots[n] - 1, n) = 1;
  }
  return r;
}

LocalAction decode_local(const std::uint8_t* bits, const double* values,
                         const ScenarioConfig& cfg) {
  const int N = cfg.num_subbands;
  LocalAction l(N);
  for (int n = 0; n < N; ++n) {
    l.beta[n] = bits[n];
    l.alpha[n] = values[n];
  }
  l.dp_x = values[N];
  l.dp_y = values[N + 1];
  return l;
}

std::vector<double> joint_observation(const Env& env) {
  std::vector<double> obs = env.observe_global();
  for (int h = 0; h < env.config().num_haps(); ++h) {
    const auto o = env.observe_regional(h);
    obs.insert(obs.end(), o.begin(), o.end());
  }
  for (int j = 0; j < env.num_serving(); ++j) {
    const auto o = env.observe_local(j);
    obs.insert(obs.end(), o.begin(), o.end());
  }
  return obs;
}

int joint_observation_size(const ScenarioConfig& cfg) {
  return global_obs_size(cfg) + cfg.num_haps() * regional_obs_size(cfg) +
         cfg.num_regions() * cfg.nodes_per_region() * local_obs_size(cfg);
}

GlobalAllocation round_robin_global(const ScenarioConfig& cfg) {
  GlobalAllocation g(cfg.beams, cfg.num_subbands);
  for (int n = 0; n < cfg.num_subbands; ++n) g.at(n % cfg.beams, n) = 1;
  return g;
}

LocalAction heuristic_local(const RegionalAllocation& regional, int slot) {
  LocalAction l(regional.subbands);
  int granted = 0;
  for (int n = 0; n < regional.subbands; ++n) granted += regional.at(slot, n);
  for (int n = 0; n < regional.subbands; ++n) {
    if (regional.at(slot, n)) {
      l.beta[n] = 1;
      l.alpha[n] = 1.0 / granted;
    }
  }
  return l;
}

}  // namespace specshare::codec
