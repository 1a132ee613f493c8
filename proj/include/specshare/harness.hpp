#ifndef SPECSHARE_HARNESS_HPP_
#define SPECSHARE_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specshare/config.hpp"

namespace specshare::harness {

// A user-facing failure: bad flags, unusable agent, checkpoint refusal.
// The CLI prints the message and exits nonzero.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads SPECSHARE_LOG (error, info or debug; default info) and sets the
// global log level. Unknown values fall back to info with a warning.
void init_logging();

struct TrainArgs {
  std::string config;
  std::string algo = "hdrl";
  std::optional<std::uint64_t> seed;  // defaults to run.seed
  std::optional<int> episodes;        // defaults to run.episodes
  std::string out = "out/train";
};

struct EvaluateArgs {
  std::string config;
  std::string algo = "hdrl";
  std::string checkpoint;             // required for learnable agents
  std::vector<std::uint64_t> seeds;   // defaults to {run.seed}
  int episodes = 1;
  std::string out = "out/evaluate";
  std::string trace;                  // optional JSON-lines trace path
};

struct BenchmarkArgs {
  std::string config;
  std::vector<std::string> algos = {"random", "hdrl"};
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  int episodes = 1;                   // evaluation episodes per seed
  int train_episodes = 0;             // training before evaluation, learnable agents
  std::string sweep;                  // "" or "local_power"
  std::vector<double> sweep_scales = {0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
  int threads = 1;
  std::string out = "out/benchmark";
};

struct ReplayArgs {
  std::string trace;
  std::string out;  // optional; writes replay.json there
};

int cmd_train(const TrainArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_benchmark(const BenchmarkArgs& args);
// Returns 0 for a bit-exact replay and 3 when any metric deviates.
int cmd_replay(const ReplayArgs& args);

// Output helpers shared by the commands.
inline constexpr const char* kStepLogHeader = "seed,episode,step,throughput_bps,eta,fairness";
inline constexpr const char* kBenchmarkHeader =
    "row,algo,scenario,seed,seeds,status,decision_time_s,decision_time_s_std,eta_bps_per_hz,"
    "eta_bps_per_hz_std,throughput_bps,throughput_bps_std,sum_rate_bps_per_hz,"
    "sum_rate_bps_per_hz_std,cumulative_reward,cumulative_reward_std,spectrum_utilization,"
    "spectrum_utilization_std";
inline constexpr const char* kSweepHeader = "algo,alpha_scale,local_power_dbm,sum_rate_bps_per_hz";

// Pretty-printed, keys sorted, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Comma-separated unsigned integers; throws HarnessError.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

// Records a run: written before work starts and rewritten with the finish
// time at the end. Timestamps live only here so metric files stay
// byte-identical across reruns.
class RunManifest {
 public:
  RunManifest(std::filesystem::path out_dir, std::string command, const ScenarioConfig& cfg,
              std::vector<std::uint64_t> seeds, std::vector<std::string> agents);
  void add_output(const std::string& file);
  void finish();
  void write() const;

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::string config_text_;
  std::uint64_t config_hash_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> agents_;
  std::vector<std::string> outputs_;
  std::string started_;
  std::string finished_;
};

// Version string stamped into manifests.
const char* version();

}  // namespace specshare::harness

#endif  // SPECSHARE_HARNESS_HPP_
