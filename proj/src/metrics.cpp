#include "specshare/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace specshare {

double sinr(double gain, double alpha, double power_w, double interference_w,
            double noise_w) {
  return gain * alpha * power_w / (interference_w + noise_w);
}

double user_rate(double gamma, double total_bandwidth, int subbands) {
  return total_bandwidth / subbands * std::log2(1.0 + gamma);
}

double spectral_efficiency(std::span<const double> rates, double total_bandwidth) {
  return std::accumulate(rates.begin(), rates.end(), 0.0) / total_bandwidth;
}

double jain_fairness(std::span<const double> rates) {
  if (rates.empty()) throw std::invalid_argument("jain_fairness: empty rate list");
  double sum = 0.0;
  double sq = 0.0;
  for (double r : rates) {
    sum += r;
    sq += r * r;
  }
  if (sq == 0.0) return 1.0;
  return sum * sum / (static_cast<double>(rates.size()) * sq);
}

double qos_violation(std::span<const double> rates, double r_min) {
  if (rates.empty()) throw std::invalid_argument("qos_violation: empty rate list");
  return std::max(0.0, r_min - *std::min_element(rates.begin(), rates.end()));
}

double uav_penalty(std::span<const std::array<double, 2>> uav_positions,
                   const Rect& bounds, int uav_count) {
  int outside = 0;
  for (const auto& p : uav_positions) {
    if (!bounds.contains(p[0], p[1])) ++outside;
  }
  return static_cast<double>(outside) / uav_count;
}

NormalizationConstants NormalizationConstants::from_config(const ScenarioConfig& cfg) {
  const double ref = std::log2(1.0 + cfg.reward.gamma_ref);
  return {cfg.subband_bandwidth() * ref, ref};
}

double local_reward(const RegionMetrics& m, const RewardWeights& w,
                    const NormalizationConstants& norms) {
  return w.w_rate * m.mean_rate / norms.rate + w.w_eff * m.eta / norms.efficiency +
         w.w_fair * m.fairness + w.w_uav * m.uav_penalty +
         w.w_qos * m.qos / norms.rate;
}

RewardSet compose_rewards(const std::vector<RegionMetrics>& regions,
                          const std::vector<int>& region_hap, int num_haps,
                          const RewardWeights& weights,
                          const NormalizationConstants& norms) {
  RewardSet out;
  out.r_l.reserve(regions.size());
  for (const auto& m : regions) out.r_l.push_back(local_reward(m, weights, norms));

  out.r_h.assign(num_haps, 0.0);
  std::vector<int> counts(num_haps, 0);
  for (std::size_t i = 0; i < regions.size(); ++i) {
    out.r_h[region_hap[i]] += out.r_l[i];
    ++counts[region_hap[i]];
  }
  double total = 0.0;
  for (int h = 0; h < num_haps; ++h) {
    if (counts[h] > 0) out.r_h[h] /= counts[h];
    total += out.r_h[h];
  }
  out.r_s = total / num_haps;
  return out;
}

StepMetrics compute_step_metrics(const Topology& topo,
                                 const std::vector<Vec3>& node_positions,
                                 const AllocationState& alloc,
                                 const ChannelSnapshot& snapshot,
                                 const ScenarioConfig& cfg) {
  const int N = cfg.num_subbands;
  const int M = cfg.nodes_per_region();
  const int num_users = static_cast<int>(topo.user_positions.size());
  const double noise = cfg.noise_power_w();
  const double W = cfg.total_bandwidth;

  StepMetrics out;
  out.subbands = N;
  out.sinr.assign(num_users * N, 0.0);
  out.rate.assign(num_users, 0.0);

  std::vector<int> load(topo.nodes.size(), 0);
  for (int u = 0; u < num_users; ++u) {
    if (snapshot.serving[u] >= 0) ++load[snapshot.serving[u]];
  }

  for (int u = 0; u < num_users; ++u) {
    const int node = snapshot.serving[u];
    if (node < 0) continue;
    const LocalAction& l = alloc.local[serving_index(topo, node)];
    const double power = dbm_to_watts(topo.nodes[node].tx_power_dbm);
    const double gain = snapshot.gains.at(node, u);
    double rate = 0.0;
    for (int n = 0; n < N; ++n) {
      if (!l.beta[n]) continue;
      const double g = sinr(gain, l.alpha[n], power, snapshot.interference_at(u, n), noise);
      out.sinr[u * N + n] = g;
      rate += user_rate(g, W, N);
    }
    out.rate[u] = rate / load[node];
  }

  const NormalizationConstants norms = NormalizationConstants::from_config(cfg);
  std::vector<int> region_hap;
  double power_sum = 0.0;
  int granted = 0;
  int used = 0;
  for (int r = 0; r < static_cast<int>(topo.regions.size()); ++r) {
    const RegionInfo& region = topo.regions[r];
    region_hap.push_back(region.hap);
    std::vector<double> rates;
    rates.reserve(region.users.size());
    for (int u : region.users) rates.push_back(out.rate[u]);

    std::vector<std::array<double, 2>> uavs;
    for (int slot = 0; slot < M; ++slot) {
      const int node = region.nodes[slot];
      const LocalAction& l = alloc.local[r * M + slot];
      const double p = dbm_to_watts(topo.nodes[node].tx_power_dbm);
      for (int n = 0; n < N; ++n) {
        granted += alloc.regional[r].at(slot, n);
        if (l.beta[n]) {
          ++used;
          power_sum += l.alpha[n] * p;
        }
      }
      if (topo.nodes[node].tier == Tier::kUav) {
        uavs.push_back({node_positions[node].x, node_positions[node].y});
      }
    }

    RegionMetrics m;
    m.throughput = std::accumulate(rates.begin(), rates.end(), 0.0);
    m.eta = spectral_efficiency(rates, W);
    m.fairness = jain_fairness(rates);
    m.qos = qos_violation(rates, cfg.r_min);
    m.uav_penalty = uav_penalty(uavs, region.bounds, cfg.uavs_per_region);
    m.mean_rate = m.throughput / static_cast<double>(rates.size());
    out.regions.push_back(m);
  }

  const double total = std::accumulate(out.rate.begin(), out.rate.end(), 0.0);
  out.r_avg = total / num_users;
  out.eta = total / W;
  out.fairness = jain_fairness(out.rate);
  out.sum_rate = total / cfg.subband_bandwidth();
  out.spectrum_utilization = granted > 0 ? static_cast<double>(used) / granted : 0.0;
  const double mean_power = power_sum / (cfg.num_regions() * M);
  out.local_power_dbm = mean_power > 0.0 ? watts_to_dbm(mean_power)
                                         : -std::numeric_limits<double>::infinity();
  out.rewards = compose_rewards(out.regions, region_hap, cfg.num_haps(), cfg.reward, norms);
  return out;
}

void write_step_csv(std::ostream& os, int step, const StepMetrics& m,
                    const Topology& topo) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < static_cast<int>(m.regions.size()); ++r) {
    const RegionMetrics& rm = m.regions[r];
    os << step << ',' << r << ',' << rm.eta << ',' << rm.fairness << ','
       << rm.qos << ',' << rm.uav_penalty << ',' << m.rewards.r_l[r] << ','
       << m.rewards.r_h[topo.regions[r].hap] << ',' << m.rewards.r_s << ','
       << rm.throughput << '\n';
  }
  os.precision(old_precision);
}

}  // namespace specshare
