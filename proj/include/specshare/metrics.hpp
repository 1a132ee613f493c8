#ifndef SPECSHARE_METRICS_HPP_
#define SPECSHARE_METRICS_HPP_

#include <array>
#include <ostream>
#include <span>
#include <vector>

#include "specshare/allocation.hpp"
#include "specshare/channel.hpp"
#include "specshare/config.hpp"
#include "specshare/topology.hpp"

namespace specshare {

// gamma = H * alpha * P / (I + N0)
double sinr(double gain, double alpha, double power_w, double interference_w,
            double noise_w);

// Rate of one subband of width W/N at the given SINR.
double user_rate(double gamma, double total_bandwidth, int subbands);

double spectral_efficiency(std::span<const double> rates, double total_bandwidth);

// Jain's index over all entries; 1 when every rate is zero. Throws
// std::invalid_argument on an empty list.
double jain_fairness(std::span<const double> rates);

// max(0, r_min - min(rates)). Throws std::invalid_argument on an empty list.
double qos_violation(std::span<const double> rates, double r_min);

// Fraction of `uav_count` UAVs strictly outside the closed rectangle.
double uav_penalty(std::span<const std::array<double, 2>> uav_positions,
                   const Rect& bounds, int uav_count);

// Scale factors that bring rate and efficiency terms to O(1).
struct NormalizationConstants {
  double rate = 1.0;        // bps
  double efficiency = 1.0;  // bps/Hz

  static NormalizationConstants from_config(const ScenarioConfig& cfg);
};

struct RegionMetrics {
  double eta = 0.0;          // bps/Hz
  double fairness = 1.0;
  double qos = 0.0;          // bps
  double uav_penalty = 0.0;
  double mean_rate = 0.0;    // bps
  double throughput = 0.0;   // sum of user rates, bps
};

struct RewardSet {
  double r_s = 0.0;
  std::vector<double> r_h;  // per HAP
  std::vector<double> r_l;  // per region
};

// r_l per region from its metrics; r_h is the mean over a HAP's regions and
// r_s the mean over HAPs.
RewardSet compose_rewards(const std::vector<RegionMetrics>& regions,
                          const std::vector<int>& region_hap, int num_haps,
                          const RewardWeights& weights,
                          const NormalizationConstants& norms);

double local_reward(const RegionMetrics& m, const RewardWeights& weights,
                    const NormalizationConstants& norms);

struct StepMetrics {
  int subbands = 0;
  std::vector<double> sinr;        // users x subbands; 0 where not served
  std::vector<double> rate;        // per user, bps
  std::vector<RegionMetrics> regions;
  double r_avg = 0.0;              // network mean user rate, bps
  double eta = 0.0;                // network spectral efficiency, bps/Hz
  double fairness = 1.0;           // Jain over all users
  double sum_rate = 0.0;           // total rate over one subband's width, bps/Hz
  double spectrum_utilization = 0.0;
  double local_power_dbm = 0.0;    // mean transmitted power per serving node
  RewardSet rewards;
};

// Metrics for one step. A node's active subbands are time-shared equally
// among the users attached to it.
StepMetrics compute_step_metrics(const Topology& topo,
                                 const std::vector<Vec3>& node_positions,
                                 const AllocationState& alloc,
                                 const ChannelSnapshot& snapshot,
                                 const ScenarioConfig& cfg);

inline constexpr const char* kStepCsvHeader =
    "step,region,eta,fairness,qos,uav_penalty,r_l,r_h,r_s,throughput_bps";

// One row per region, in the kStepCsvHeader column order.
void write_step_csv(std::ostream& os, int step, const StepMetrics& m,
                    const Topology& topo);

}  // namespace specshare

#endif  // SPECSHARE_METRICS_HPP_
