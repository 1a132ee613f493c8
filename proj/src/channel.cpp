#include "specshare/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specshare {

double path_loss_db(double distance_m, double carrier_hz) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("path_loss_db: distance must be positive");
  }
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz) - 147.55;
}

double fading_gain(Tier tier, std::mt19937_64& rng, double rician_k_db) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  // CN(0, 1): each quadrature has variance 1/2.
  const double re = gauss(rng) * std::sqrt(0.5);
  const double im = gauss(rng) * std::sqrt(0.5);
  if (tier == Tier::kTbs || tier == Tier::kUav) return re * re + im * im;
  const double k = std::pow(10.0, rician_k_db / 10.0);
  const double los = std::sqrt(k / (k + 1.0));
  const double nlos = std::sqrt(1.0 / (k + 1.0));
  const double hr = los + nlos * re;
  const double hi = nlos * im;
  return hr * hr + hi * hi;
}

int serving_index(const Topology& topo, int node_id) {
  const Node& node = topo.nodes[node_id];
  const int per_region = static_cast<int>(topo.regions.front().nodes.size());
  return node.region * per_region + node.slot;
}

GainMatrix compute_gains(const Topology& topo, const std::vector<Vec3>& node_positions,
                         const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const int num_nodes = static_cast<int>(topo.nodes.size());
  const int num_users = static_cast<int>(topo.user_positions.size());
  GainMatrix out(num_nodes, num_users);
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_std_db);
  for (int j = 0; j < num_nodes; ++j) {
    const Tier tier = topo.nodes[j].tier;
    for (int u = 0; u < num_users; ++u) {
      double loss_db = path_loss_db(distance(node_positions[j], topo.user_positions[u]),
                                    cfg.carrier_freq);
      double fade = 1.0;
      if (!cfg.fading_frozen) {
        if (cfg.shadowing_std_db > 0.0) loss_db += shadow(rng);
        fade = fading_gain(tier, rng, cfg.rician_k_db);
      }
      // Cap at unity so pathological near-field draws stay physical.
      out.at(j, u) = std::min(1.0, std::pow(10.0, -loss_db / 10.0) * fade);
    }
  }
  return out;
}

namespace {

bool transmitting(const LocalAction& l) {
  for (auto b : l.beta) {
    if (b) return true;
  }
  return false;
}

}  // namespace

std::vector<int> associate_users(const Topology& topo, const GainMatrix& gains,
                                 const AllocationState& alloc,
                                 const ScenarioConfig& cfg) {
  const int M = cfg.nodes_per_region();
  std::vector<int> serving(topo.user_positions.size(), -1);
  for (int r = 0; r < static_cast<int>(topo.regions.size()); ++r) {
    const RegionInfo& region = topo.regions[r];
    for (int u : region.users) {
      double best = -1.0;
      for (int slot = 0; slot < M; ++slot) {
        if (!transmitting(alloc.local[r * M + slot])) continue;
        const int node = region.nodes[slot];
        const double g = gains.at(node, u);
        if (g > best) {
          best = g;
          serving[u] = node;
        }
      }
    }
  }
  return serving;
}

std::vector<double> compute_interference(const Topology& topo,
                                         const GainMatrix& gains,
                                         const AllocationState& alloc,
                                         const std::vector<int>& serving,
                                         const ScenarioConfig& cfg) {
  const int N = cfg.num_subbands;
  const int M = cfg.nodes_per_region();
  const int num_users = static_cast<int>(topo.user_positions.size());
  std::vector<double> out(num_users * N, 0.0);
  const bool region_only = cfg.interference_scope == InterferenceScope::kRegion;

  for (int r = 0; r < static_cast<int>(topo.regions.size()); ++r) {
    const RegionInfo& region = topo.regions[r];
    for (int slot = 0; slot < M; ++slot) {
      const LocalAction& l = alloc.local[r * M + slot];
      const int node = region.nodes[slot];
      const double power = dbm_to_watts(topo.nodes[node].tx_power_dbm);
      for (int n = 0; n < N; ++n) {
        if (!l.beta[n]) continue;
        const double tx = l.alpha[n] * power;
        for (int u = 0; u < num_users; ++u) {
          if (serving[u] == node) continue;
          if (region_only && topo.user_region[u] != r) continue;
          out[u * N + n] += gains.at(node, u) * tx;
        }
      }
    }
  }
  return out;
}

ChannelSnapshot snapshot_from_gains(const Topology& topo, GainMatrix gains,
                                    const AllocationState& alloc,
                                    const ScenarioConfig& cfg) {
  ChannelSnapshot snap;
  snap.gains = std::move(gains);
  snap.subbands = cfg.num_subbands;
  snap.serving = associate_users(topo, snap.gains, alloc, cfg);
  snap.interference = compute_interference(topo, snap.gains, alloc, snap.serving, cfg);
  return snap;
}

ChannelSnapshot compute_snapshot(const Topology& topo,
                                 const std::vector<Vec3>& node_positions,
                                 const AllocationState& alloc,
                                 const ScenarioConfig& cfg, std::mt19937_64& rng) {
  return snapshot_from_gains(topo, compute_gains(topo, node_positions, cfg, rng),
                             alloc, cfg);
}

}  // namespace specshare
