#ifndef SPECSHARE_TESTS_SUPPORT_HPP_
#define SPECSHARE_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "specshare/allocation.hpp"
#include "specshare/channel.hpp"
#include "specshare/config.hpp"
#include "specshare/env.hpp"
#include "specshare/metrics.hpp"

namespace testing {

// B=2, H=1, R=1, N=4, K=4, S=100 with frozen fading.
inline specshare::ScenarioConfig desk_config() {
  specshare::ScenarioConfig cfg;
  cfg.beams = 2;
  cfg.haps_per_beam = 1;
  cfg.regions_per_hap = 1;
  cfg.num_subbands = 4;
  cfg.users_per_region = 4;
  cfg.steps_per_episode = 100;
  cfg.fading_frozen = true;
  return cfg;
}

// Small random scenario for property tests.
inline specshare::ScenarioConfig random_config(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(1, 3);
  specshare::ScenarioConfig cfg;
  cfg.beams = small(rng);
  cfg.haps_per_beam = small(rng);
  cfg.regions_per_hap = small(rng);
  cfg.uavs_per_region = small(rng);
  cfg.users_per_region = std::uniform_int_distribution<int>(1, 6)(rng);
  cfg.num_subbands = std::uniform_int_distribution<int>(1, 6)(rng);
  cfg.steps_per_episode = 50;
  cfg.delta_s = 10;
  cfg.delta_h = 5;
  cfg.delta_l = 1;
  cfg.fading_frozen = std::bernoulli_distribution(0.5)(rng);
  cfg.interference_scope = std::bernoulli_distribution(0.5)(rng)
                               ? specshare::InterferenceScope::kGlobal
                               : specshare::InterferenceScope::kRegion;
  return cfg;
}

// Random feasible allocation: each subband to a random beam or none, each
// granted subband to a random node or none, locals clamped.
inline specshare::AllocationState random_allocation(const specshare::ScenarioConfig& cfg,
                                                    const std::vector<int>& region_beam,
                                                    std::mt19937_64& rng) {
  using namespace specshare;
  AllocationState s = AllocationState::zeros(cfg);
  const int M = cfg.nodes_per_region();
  for (int n = 0; n < cfg.num_subbands; ++n) {
    const int b = std::uniform_int_distribution<int>(-1, cfg.beams - 1)(rng);
    if (b >= 0) s.global.at(b, n) = 1;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int r = 0; r < cfg.num_regions(); ++r) {
    for (int n = 0; n < cfg.num_subbands; ++n) {
      if (!s.global.at(region_beam[r], n)) continue;
      const int m = std::uniform_int_distribution<int>(-1, M - 1)(rng);
      if (m >= 0) s.regional[r].at(m, n) = 1;
    }
    for (int slot = 0; slot < M; ++slot) {
      LocalAction raw(cfg.num_subbands);
      for (int n = 0; n < cfg.num_subbands; ++n) {
        raw.beta[n] = unit(rng) < 0.7 ? 1 : 0;
        raw.alpha[n] = unit(rng);
      }
      raw.dp_x = (2.0 * unit(rng) - 1.0) * 2.0 * cfg.uav_step;
      raw.dp_y = (2.0 * unit(rng) - 1.0) * 2.0 * cfg.uav_step;
      s.local[r * M + slot] = clamp_local(raw, s.regional[r], slot, cfg.uav_step);
    }
  }
  return s;
}

// A random small network state: UAVs displaced (some outside their region),
// random gains, random feasible allocation.
struct RandomState {
  specshare::ScenarioConfig cfg;
  specshare::Topology topo;
  std::vector<specshare::Vec3> positions;
  specshare::GainMatrix gains;
  specshare::AllocationState alloc;
};

inline RandomState random_state(std::mt19937_64& rng) {
  using namespace specshare;
  RandomState s;
  s.cfg = random_config(rng);
  s.cfg.r_min = std::uniform_real_distribution<double>(0.0, 5e7)(rng);
  s.topo = build_topology(s.cfg, rng);
  for (const Node& n : s.topo.nodes) s.positions.push_back(n.position);
  std::uniform_real_distribution<double> jump(-1500.0, 1500.0);
  for (std::size_t j = 0; j < s.topo.nodes.size(); ++j) {
    if (s.topo.nodes[j].tier != Tier::kUav) continue;
    s.positions[j].x += jump(rng);
    s.positions[j].y += jump(rng);
  }
  s.gains = compute_gains(s.topo, s.positions, s.cfg, rng);
  std::vector<int> region_beam;
  for (const auto& r : s.topo.regions) region_beam.push_back(r.beam);
  s.alloc = random_allocation(s.cfg, region_beam, rng);
  return s;
}

inline double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return a == b ? 0.0 : std::abs(a - b) / scale;
}

// Largest relative difference between the library's metrics and the oracle
// over SINR, eta, fairness, QoS violation and UAV penalty.
inline double oracle_gap(const RandomState& s) {
  using namespace specshare;
  const ChannelSnapshot snap = snapshot_from_gains(s.topo, s.gains, s.alloc, s.cfg);
  const StepMetrics m = compute_step_metrics(s.topo, s.positions, s.alloc, snap, s.cfg);
  const oracle::Result o = oracle::evaluate(s.topo, s.positions, s.gains.g, s.alloc, s.cfg);
  double worst = 0.0;
  const int N = s.cfg.num_subbands;
  for (std::size_t u = 0; u < o.rate.size(); ++u) {
    if (o.server[u] != snap.serving[u]) return INFINITY;
    worst = std::max(worst, relative_gap(o.rate[u], m.rate[u]));
    for (int n = 0; n < N; ++n) {
      worst = std::max(worst, relative_gap(o.sinr[u][n], m.sinr[u * N + n]));
    }
  }
  for (std::size_t r = 0; r < m.regions.size(); ++r) {
    worst = std::max(worst, relative_gap(o.eta[r], m.regions[r].eta));
    worst = std::max(worst, relative_gap(o.fairness[r], m.regions[r].fairness));
    worst = std::max(worst, relative_gap(o.qos[r], m.regions[r].qos));
    worst = std::max(worst, relative_gap(o.uav_penalty[r], m.regions[r].uav_penalty));
  }
  return worst;
}

}  // namespace testing

#endif  // SPECSHARE_TESTS_SUPPORT_HPP_
