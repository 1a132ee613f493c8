#include "oracle.hpp"

#include <cmath>

namespace oracle {

Result evaluate(const specshare::Topology& topo, const std::vector<specshare::Vec3>& positions,
                const std::vector<double>& gains, const specshare::AllocationState& alloc,
                const specshare::ScenarioConfig& cfg) {
  const int users = static_cast<int>(topo.user_positions.size());
  const int N = cfg.num_subbands;
  const int M = 2 + cfg.uavs_per_region;
  const double bw = cfg.total_bandwidth / N;
  const double noise = std::pow(10.0, (cfg.noise_psd - 30.0) / 10.0) * bw;
  const bool regional_scope = cfg.interference_scope == specshare::InterferenceScope::kRegion;

  // Serving-node table: node id -> (region, slot).
  std::vector<int> node_region(topo.nodes.size(), -1);
  std::vector<int> node_slot(topo.nodes.size(), -1);
  for (std::size_t r = 0; r < topo.regions.size(); ++r) {
    for (int s = 0; s < M; ++s) {
      node_region[topo.regions[r].nodes[s]] = static_cast<int>(r);
      node_slot[topo.regions[r].nodes[s]] = s;
    }
  }
  auto gain = [&](int node, int u) { return gains[node * users + u]; };
  auto watts = [&](int node) { return std::pow(10.0, (topo.nodes[node].tx_power_dbm - 30.0) / 10.0); };
  auto local = [&](int node) -> const specshare::LocalAction& {
    return alloc.local[node_region[node] * M + node_slot[node]];
  };
  auto transmitting = [&](int node) {
    const auto& l = local(node);
    for (int n = 0; n < N; ++n) {
      if (l.beta[n]) return true;
    }
    return false;
  };

  Result out;
  out.server.assign(users, -1);
  out.sinr.assign(users, std::vector<double>(N, 0.0));
  out.rate.assign(users, 0.0);
  for (int u = 0; u < users; ++u) {
    const int r = topo.user_region[u];
    double best = -1.0;
    for (int s = 0; s < M; ++s) {
      const int node = topo.regions[r].nodes[s];
      if (transmitting(node) && gain(node, u) > best) {
        best = gain(node, u);
        out.server[u] = node;
      }
    }
  }
  std::vector<int> load(topo.nodes.size(), 0);
  for (int u = 0; u < users; ++u) {
    if (out.server[u] >= 0) load[out.server[u]] += 1;
  }
  for (int u = 0; u < users; ++u) {
    const int m = out.server[u];
    if (m < 0) continue;
    double total = 0.0;
    for (int n = 0; n < N; ++n) {
      if (!local(m).beta[n]) continue;
      double interference = 0.0;
      for (std::size_t k = 0; k < topo.nodes.size(); ++k) {
        const int other = static_cast<int>(k);
        if (other == m || node_region[other] < 0) continue;
        if (regional_scope && node_region[other] != topo.user_region[u]) continue;
        if (!local(other).beta[n]) continue;
        interference += gain(other, u) * local(other).alpha[n] * watts(other);
      }
      const double g = gain(m, u) * local(m).alpha[n] * watts(m) / (interference + noise);
      out.sinr[u][n] = g;
      total += bw * std::log2(1.0 + g);
    }
    out.rate[u] = total / load[m];
  }

  for (const auto& region : topo.regions) {
    double sum = 0.0;
    double sq = 0.0;
    double worst = INFINITY;
    for (int u : region.users) {
      sum += out.rate[u];
      sq += out.rate[u] * out.rate[u];
      if (out.rate[u] < worst) worst = out.rate[u];
    }
    const double k = static_cast<double>(region.users.size());
    out.eta.push_back(sum / cfg.total_bandwidth);
    out.fairness.push_back(sq == 0.0 ? 1.0 : sum * sum / (k * sq));
    out.qos.push_back(cfg.r_min - worst > 0.0 ? cfg.r_min - worst : 0.0);
    int outside = 0;
    for (int s = 2; s < M; ++s) {
      const auto& p = positions[region.nodes[s]];
      const auto& b = region.bounds;
      if (p.x < b.x_min || p.x > b.x_max || p.y < b.y_min || p.y > b.y_max) ++outside;
    }
    out.uav_penalty.push_back(static_cast<double>(outside) / cfg.uavs_per_region);
  }
  return out;
}

}  // namespace oracle
