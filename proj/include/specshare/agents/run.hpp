#ifndef SPECSHARE_AGENTS_RUN_HPP_
#define SPECSHARE_AGENTS_RUN_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "specshare/agents/agents.hpp"
#include "specshare/config.hpp"
#include "specshare/env.hpp"

namespace specshare {

struct TrainLogRow {
  int episode = 0;
  double cumulative_reward = 0.0;
  double eta = 0.0;
  double fairness = 0.0;
  double r_avg = 0.0;
};

inline constexpr const char* kTrainLogHeader = "episode,cumulative_reward,eta,fairness,r_avg";

// Exploring episodes on the instance fixed by `seed`; episode k draws channel
// stream k. Throws std::invalid_argument for an agent that cannot learn.
std::vector<TrainLogRow> train(Agent& agent, const ScenarioConfig& cfg, int episodes,
                               std::uint64_t seed,
                               const std::function<void(const TrainLogRow&)>& on_episode = {});

// Evaluation episodes use channel streams disjoint from training ones.
inline constexpr std::uint64_t kEvalEpisodeBase = std::uint64_t{1} << 32;

struct EpisodeReport {
  std::uint64_t seed = 0;
  int episode = 0;
  EpisodeSummary summary;
  // Per step: network mean user rate (bps), spectral efficiency, fairness.
  std::vector<double> throughput;
  std::vector<double> eta;
  std::vector<double> fairness;
  double throughput_std = 0.0;
  double sum_rate = 0.0;
  double spectrum_utilization = 0.0;
  double local_power_dbm = 0.0;
  double decision_time_s = 0.0;  // agent computation only
};

struct EvaluationReport {
  std::vector<EpisodeReport> episodes;
  double mean_eta = 0.0;
  double mean_r_avg = 0.0;
  double mean_fairness = 0.0;
  double mean_cumulative_reward = 0.0;
  double mean_throughput_std = 0.0;
  double mean_sum_rate = 0.0;
  double mean_spectrum_utilization = 0.0;
  double mean_local_power_dbm = 0.0;
  double mean_decision_time_s = 0.0;
};

struct EvalOptions {
  int episodes = 1;
  double alpha_scale = 1.0;
  std::ostream* trace = nullptr;
};

// Mode actions on the instance fixed by `seed`. Wall-clock covers
// begin_episode() and act() only, never the environment.
EvaluationReport evaluate(Agent& agent, const ScenarioConfig& cfg, std::uint64_t seed,
                          const EvalOptions& opts);

}  // namespace specshare

#endif  // SPECSHARE_AGENTS_RUN_HPP_
