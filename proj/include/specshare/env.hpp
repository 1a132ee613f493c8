#ifndef SPECSHARE_ENV_HPP_
#define SPECSHARE_ENV_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "specshare/allocation.hpp"
#include "specshare/channel.hpp"
#include "specshare/config.hpp"
#include "specshare/metrics.hpp"
#include "specshare/topology.hpp"

namespace specshare {

// Steps between decisions of each tier.
struct DecisionSchedule {
  int global = 1;
  int regional = 1;
  int local = 1;

  static DecisionSchedule from_config(const ScenarioConfig& cfg) {
    return {cfg.delta_s, cfg.delta_h, cfg.delta_l};
  }
  static DecisionSchedule flat() { return {1, 1, 1}; }
};

class ScheduleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Actions for one step. `regional` holds one matrix per region (each HAP
// fills in its own regions); `local` holds one raw action per serving node.
struct ActionBundle {
  std::optional<GlobalAllocation> global;
  std::optional<std::vector<RegionalAllocation>> regional;
  std::optional<std::vector<LocalAction>> local;
};

struct StepResult {
  RewardSet rewards;
  bool terminated = false;
  bool truncated = false;
  bool global_decision = false;
  bool regional_decision = false;
};

enum class ObsTier { kGlobal, kRegional, kLocal };

// Observation lengths per tier for a scenario.
int global_obs_size(const ScenarioConfig& cfg);
int regional_obs_size(const ScenarioConfig& cfg);
int local_obs_size(const ScenarioConfig& cfg);

// Gains in dB are mapped linearly from [-160, -60] onto [0, 1] and clipped.
double normalize_gain_db(double gain_db);

class Env {
 public:
  explicit Env(ScenarioConfig cfg,
               std::optional<DecisionSchedule> schedule = std::nullopt);

  // `seed` fixes the instance (topology, user drop); `episode` selects the
  // channel random stream, so episodes of one instance see fresh fading.
  void reset(std::uint64_t seed, std::uint64_t episode = 0);
  StepResult step(const ActionBundle& actions);

  bool global_due() const { return t_ % schedule_.global == 0; }
  bool regional_due() const { return t_ % schedule_.regional == 0; }
  bool local_due() const { return t_ % schedule_.local == 0; }
  bool done() const { return truncated_; }

  // Allocation that would result from applying the given upper-tier actions
  // at the current step, before local actions. Lets lower tiers observe the
  // grants made above them in the same step.
  AllocationState preview(const std::optional<GlobalAllocation>& global,
                          const std::optional<std::vector<RegionalAllocation>>& regional) const;

  std::vector<double> observe_global() const;
  std::vector<double> observe_regional(int hap) const { return observe_regional(hap, alloc_); }
  std::vector<double> observe_regional(int hap, const AllocationState& alloc) const;
  std::vector<double> observe_local(int serving) const { return observe_local(serving, alloc_); }
  std::vector<double> observe_local(int serving, const AllocationState& alloc) const;
  // Dispatch by tier; throws std::out_of_range for an unknown entity.
  std::vector<double> observe(ObsTier tier, int entity) const;

  int global_obs_size() const;
  int regional_obs_size() const;
  int local_obs_size() const;

  int t() const { return t_; }
  const ScenarioConfig& config() const { return cfg_; }
  const DecisionSchedule& schedule() const { return schedule_; }
  const Topology& topology() const { return topo_; }
  const AllocationState& allocation() const { return alloc_; }
  const ChannelSnapshot& snapshot() const { return snapshot_; }
  const StepMetrics& metrics() const { return metrics_; }
  const std::vector<Vec3>& node_positions() const { return positions_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t episode() const { return episode_; }
  int num_serving() const { return cfg_.num_regions() * cfg_.nodes_per_region(); }

  // Multiplies every clamped power fraction; used by power sweeps.
  void set_alpha_scale(double scale) { alpha_scale_ = scale; }
  // JSON-lines trace; a header line is written on reset and one line per step.
  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  void write_trace_header() const;
  void write_trace_step(int t, bool global, bool regional) const;

  ScenarioConfig cfg_;
  DecisionSchedule schedule_;
  std::uint64_t seed_ = 0;
  std::uint64_t episode_ = 0;
  std::mt19937_64 rng_;
  Topology topo_;
  std::vector<int> region_beam_;
  AllocationState alloc_;
  std::vector<Vec3> positions_;
  ChannelSnapshot snapshot_;
  StepMetrics metrics_;
  int t_ = 0;
  bool truncated_ = false;
  double alpha_scale_ = 1.0;
  std::ostream* trace_ = nullptr;
};

struct EpisodeSummary {
  double r_avg = 0.0;
  double eta = 0.0;
  double fairness = 0.0;
  double cumulative_reward = 0.0;
};

// Time means of the network metrics and the summed system reward. Throws
// std::invalid_argument for an empty trace.
EpisodeSummary episode_summary(std::span<const StepMetrics> trace);

}  // namespace specshare

#endif  // SPECSHARE_ENV_HPP_
