#include "specshare/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "specshare/agents/agents.hpp"
#include "specshare/agents/run.hpp"
#include "specshare/env.hpp"
#include "specshare/trace.hpp"

#ifndef SPECSHARE_VERSION
#define SPECSHARE_VERSION "unknown"
#endif

namespace specshare::harness {

namespace fs = std::filesystem;

const char* version() { return SPECSHARE_VERSION; }

void init_logging() {
  const char* env = std::getenv("SPECSHARE_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("SPECSHARE_LOG='{}' not recognised, using info", level);
  }
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ScenarioConfig load_scenario(const std::string& path) {
  if (path.empty()) throw HarnessError("--config is required");
  return load_config(path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw HarnessError("cannot write " + path.string());
  os.precision(std::numeric_limits<double>::max_digits10);
  return os;
}

fs::path prepare_dir(const std::string& out) {
  if (out.empty()) throw HarnessError("--out must not be empty");
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

nlohmann::json stats(const std::vector<double>& v) {
  return {{"mean", mean_of(v)}, {"std", std_of(v)}, {"n", v.size()}};
}

std::unique_ptr<Agent> build_agent(const std::string& algo, const ScenarioConfig& cfg,
                                   std::uint64_t seed) {
  AgentKind kind;
  try {
    kind = parse_agent_kind(algo);
  } catch (const std::invalid_argument& e) {
    throw HarnessError(e.what());
  }
  return make_agent(kind, cfg, seed);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw HarnessError(path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os = open_out(path);
  os << j.dump(2) << '\n';
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : parse_name_list(text)) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      if (item.front() == '-') throw std::invalid_argument("negative");
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw HarnessError("bad seed '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw HarnessError("empty seed list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunManifest::RunManifest(fs::path out_dir, std::string command, const ScenarioConfig& cfg,
                         std::vector<std::uint64_t> seeds, std::vector<std::string> agents)
    : dir_(std::move(out_dir)),
      command_(std::move(command)),
      config_text_(dump_config(cfg)),
      config_hash_(config_hash(cfg)),
      seeds_(std::move(seeds)),
      agents_(std::move(agents)),
      started_(utc_now()) {}

void RunManifest::add_output(const std::string& file) { outputs_.push_back(file); }

void RunManifest::finish() {
  finished_ = utc_now();
  write();
}

void RunManifest::write() const {
  nlohmann::json j = {{"command", command_},
                      {"version", version()},
                      {"config", config_text_},
                      {"config_hash", config_hash_},
                      {"seeds", seeds_},
                      {"agents", agents_},
                      {"output_dir", fs::absolute(dir_).lexically_normal().string()},
                      {"outputs", outputs_},
                      {"started_utc", started_},
                      {"finished_utc", finished_.empty() ? nlohmann::json() : nlohmann::json(finished_)}};
  write_json(dir_ / "manifest.json", j);
}

// ---- train ----------------------------------------------------------------

int cmd_train(const TrainArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.config);
  auto agent = build_agent(args.algo, cfg, args.seed.value_or(cfg.seed));
  if (!agent->learnable()) throw HarnessError(args.algo + " is not trainable");
  const int episodes = args.episodes.value_or(cfg.episodes);
  if (episodes < 1) throw HarnessError("--episodes must be >= 1");
  const std::uint64_t seed = args.seed.value_or(cfg.seed);

  const fs::path dir = prepare_dir(args.out);
  RunManifest manifest(dir, "train", cfg, {seed}, {args.algo});
  manifest.add_output("train_log.csv");
  manifest.add_output("checkpoint.json");
  manifest.write();

  std::ofstream log = open_out(dir / "train_log.csv");
  log << kTrainLogHeader << '\n';
  const int every = std::max(1, episodes / 10);
  spdlog::info("training {} for {} episodes on seed {}", args.algo, episodes, seed);
  train(*agent, cfg, episodes, seed, [&](const TrainLogRow& row) {
    log << row.episode << ',' << row.cumulative_reward << ',' << row.eta << ','
        << row.fairness << ',' << row.r_avg << '\n';
    if (row.episode % every == 0 || row.episode == episodes) {
      spdlog::info("episode {}/{}: reward {:.3f} eta {:.4f}", row.episode, episodes,
                   row.cumulative_reward, row.eta);
    }
  });
  log.close();
  write_json(dir / "checkpoint.json", agent->save());
  manifest.finish();
  spdlog::info("wrote {}", (dir / "checkpoint.json").string());
  return 0;
}

// ---- evaluate -------------------------------------------------------------

namespace {

nlohmann::json units() {
  return {{"decision_time", "s"},
          {"eta", "bps/Hz"},
          {"throughput", "bps (network mean user rate)"},
          {"sum_rate", "bps/Hz"},
          {"local_power", "dBm"},
          {"fairness", "Jain index"},
          {"cumulative_reward", "sum of system reward over the episode"},
          {"spectrum_utilization", "fraction of granted subbands in use"}};
}

// Per-episode metric columns pooled over a set of episode reports.
struct Pool {
  std::vector<double> eta, throughput, fairness, reward, throughput_std, sum_rate, utilization,
      power;

  void add(const EpisodeReport& e) {
    eta.push_back(e.summary.eta);
    throughput.push_back(e.summary.r_avg);
    fairness.push_back(e.summary.fairness);
    reward.push_back(e.summary.cumulative_reward);
    throughput_std.push_back(e.throughput_std);
    sum_rate.push_back(e.sum_rate);
    utilization.push_back(e.spectrum_utilization);
    power.push_back(e.local_power_dbm);
  }

  nlohmann::json to_json() const {
    return {{"eta", stats(eta)},
            {"throughput", stats(throughput)},
            {"fairness", stats(fairness)},
            {"cumulative_reward", stats(reward)},
            {"throughput_step_std", stats(throughput_std)},
            {"sum_rate", stats(sum_rate)},
            {"spectrum_utilization", stats(utilization)},
            {"local_power", stats(power)}};
  }
};

}  // namespace

int cmd_evaluate(const EvaluateArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.config);
  if (args.episodes < 1) throw HarnessError("--episodes must be >= 1");
  const std::vector<std::uint64_t> seeds =
      args.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : args.seeds;

  nlohmann::json checkpoint;
  {
    auto probe = build_agent(args.algo, cfg, 0);
    if (probe->learnable() && args.checkpoint.empty()) {
      throw HarnessError("--checkpoint is required to evaluate " + args.algo);
    }
    if (!args.checkpoint.empty()) {
      checkpoint = read_json(args.checkpoint);
      try {
        probe->load(checkpoint);
      } catch (const CheckpointError& e) {
        throw HarnessError(std::string("refusing checkpoint ") + args.checkpoint + ": " + e.what());
      }
    }
  }

  const fs::path dir = prepare_dir(args.out);
  RunManifest manifest(dir, "evaluate", cfg, seeds, {args.algo});
  for (const char* f : {"report.json", "steps.csv", "timing.json"}) manifest.add_output(f);
  if (!args.trace.empty()) manifest.add_output(fs::absolute(args.trace).string());
  manifest.write();

  std::ofstream steps = open_out(dir / "steps.csv");
  steps << kStepLogHeader << '\n';
  std::ofstream trace;
  if (!args.trace.empty()) {
    trace.open(args.trace);
    if (!trace) throw HarnessError("cannot write " + args.trace);
  }

  Pool pooled;
  nlohmann::json per_seed = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::array();
  std::vector<double> times;
  for (std::uint64_t seed : seeds) {
    auto agent = build_agent(args.algo, cfg, seed);
    if (!checkpoint.is_null()) agent->load(checkpoint);
    EvalOptions opts;
    opts.episodes = args.episodes;
    opts.trace = args.trace.empty() ? nullptr : &trace;
    EvaluationReport rep;
    try {
      rep = evaluate(*agent, cfg, seed, opts);
    } catch (const SearchSpaceTooLarge& e) {
      throw HarnessError(e.what());
    }
    Pool mine;
    std::vector<double> seed_times;
    for (const EpisodeReport& e : rep.episodes) {
      mine.add(e);
      pooled.add(e);
      seed_times.push_back(e.decision_time_s);
      times.push_back(e.decision_time_s);
      for (std::size_t t = 0; t < e.throughput.size(); ++t) {
        steps << seed << ',' << e.episode << ',' << t << ',' << e.throughput[t] << ','
              << e.eta[t] << ',' << e.fairness[t] << '\n';
      }
    }
    nlohmann::json s = mine.to_json();
    s["seed"] = seed;
    per_seed.push_back(s);
    timing.push_back({{"seed", seed}, {"decision_time_s", stats(seed_times)}});
    spdlog::info("seed {}: eta {:.4f}, throughput {:.3e} bps", seed, rep.mean_eta,
                 rep.mean_r_avg);
  }

  write_json(dir / "report.json", {{"agent", args.algo},
                                   {"config_hash", config_hash(cfg)},
                                   {"episodes_per_seed", args.episodes},
                                   {"seeds", seeds},
                                   {"units", units()},
                                   {"per_seed", per_seed},
                                   {"pooled", pooled.to_json()}});
  write_json(dir / "timing.json", {{"agent", args.algo},
                                   {"decision_time_s", stats(times)},
                                   {"per_seed", timing},
                                   {"scope", "agent decision computation per episode"}});
  manifest.finish();
  return 0;
}

// ---- benchmark ------------------------------------------------------------

namespace {

struct SeedResult {
  bool skipped = false;
  std::string reason;
  double time = 0.0;
  double eta = 0.0;
  double throughput = 0.0;
  double sum_rate = 0.0;
  double reward = 0.0;
  double utilization = 0.0;
  // alpha scale -> (power dBm, sum rate)
  std::vector<std::pair<double, double>> sweep;
};

SeedResult run_benchmark_job(const std::string& algo, const ScenarioConfig& cfg,
                             std::uint64_t seed, const BenchmarkArgs& args) {
  SeedResult r;
  auto agent = build_agent(algo, cfg, seed);
  if (algo == "exhaustive") {
    if (!cfg.fading_frozen) {
      r.skipped = true;
      r.reason = "needs frozen fading";
      return r;
    }
    const double count = exhaustive_candidates(cfg);
    if (count > cfg.enumeration_cap) {
      r.skipped = true;
      r.reason = "search space " + std::to_string(count) + " exceeds cap " +
                 std::to_string(cfg.enumeration_cap);
      return r;
    }
  }
  if (agent->learnable() && args.train_episodes > 0) {
    train(*agent, cfg, args.train_episodes, seed);
  }
  EvalOptions opts;
  opts.episodes = args.episodes;
  const EvaluationReport rep = evaluate(*agent, cfg, seed, opts);
  r.time = rep.mean_decision_time_s;
  r.eta = rep.mean_eta;
  r.throughput = rep.mean_r_avg;
  r.sum_rate = rep.mean_sum_rate;
  r.reward = rep.mean_cumulative_reward;
  r.utilization = rep.mean_spectrum_utilization;
  for (double scale : args.sweep.empty() ? std::vector<double>{} : args.sweep_scales) {
    EvalOptions so = opts;
    so.alpha_scale = scale;
    const EvaluationReport sr = evaluate(*agent, cfg, seed, so);
    r.sweep.emplace_back(sr.mean_local_power_dbm, sr.mean_sum_rate);
  }
  return r;
}

}  // namespace

int cmd_benchmark(const BenchmarkArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.config);
  if (args.algos.empty()) throw HarnessError("--algos is empty");
  if (args.seeds.empty()) throw HarnessError("--seeds is empty");
  if (args.episodes < 1) throw HarnessError("--episodes must be >= 1");
  if (!args.sweep.empty() && args.sweep != "local_power") {
    throw HarnessError("unknown sweep '" + args.sweep + "' (supported: local_power)");
  }
  for (const std::string& a : args.algos) build_agent(a, cfg, 0);
  const std::string scenario = fs::path(args.config).stem().string();

  const fs::path dir = prepare_dir(args.out);
  RunManifest manifest(dir, "benchmark", cfg, args.seeds, args.algos);
  manifest.add_output("benchmark.csv");
  manifest.add_output("speedup.json");
  if (!args.sweep.empty()) manifest.add_output("power_sweep.csv");
  manifest.write();

  // Jobs in (algo, seed) order; results land in fixed slots so output order
  // does not depend on scheduling.
  std::vector<std::pair<std::string, std::uint64_t>> jobs;
  for (const auto& a : args.algos) {
    for (std::uint64_t s : args.seeds) jobs.emplace_back(a, s);
  }
  std::vector<SeedResult> results(jobs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, args.threads));
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<SeedResult>> running;
    for (std::size_t i = start; i < std::min(jobs.size(), start + width); ++i) {
      running.push_back(std::async(std::launch::async, run_benchmark_job, jobs[i].first,
                                   std::cref(cfg), jobs[i].second, std::cref(args)));
    }
    for (std::size_t i = 0; i < running.size(); ++i) {
      results[start + i] = running[i].get();
      const auto& [algo, seed] = jobs[start + i];
      if (results[start + i].skipped) {
        spdlog::warn("{} seed {}: skipped ({})", algo, seed, results[start + i].reason);
      } else {
        spdlog::info("{} seed {}: eta {:.4f}, decision time {:.3e} s", algo, seed,
                     results[start + i].eta, results[start + i].time);
      }
    }
  }

  std::ofstream csv = open_out(dir / "benchmark.csv");
  csv << kBenchmarkHeader << '\n';
  std::map<std::string, double> mean_time;
  std::ofstream sweep;
  if (!args.sweep.empty()) {
    sweep = open_out(dir / "power_sweep.csv");
    sweep << kSweepHeader << '\n';
  }
  std::size_t k = 0;
  for (const std::string& algo : args.algos) {
    std::vector<double> time, eta, thr, sum, rew, util;
    bool skipped = false;
    std::vector<std::vector<std::pair<double, double>>> sweeps;
    for (std::uint64_t seed : args.seeds) {
      const SeedResult& r = results[k++];
      if (r.skipped) {
        skipped = true;
        csv << "seed," << algo << ',' << scenario << ',' << seed << ",1,skipped"
            << std::string(12, ',') << '\n';
        continue;
      }
      csv << "seed," << algo << ',' << scenario << ',' << seed << ",1,ok," << r.time << ",0,"
          << r.eta << ",0," << r.throughput << ",0," << r.sum_rate << ",0," << r.reward << ",0,"
          << r.utilization << ",0\n";
      time.push_back(r.time);
      eta.push_back(r.eta);
      thr.push_back(r.throughput);
      sum.push_back(r.sum_rate);
      rew.push_back(r.reward);
      util.push_back(r.utilization);
      sweeps.push_back(r.sweep);
    }
    if (skipped || time.empty()) {
      csv << "aggregate," << algo << ',' << scenario << ",," << args.seeds.size() << ",skipped"
          << std::string(12, ',') << '\n';
      continue;
    }
    csv << "aggregate," << algo << ',' << scenario << ",," << time.size() << ",ok,"
        << mean_of(time) << ',' << std_of(time) << ',' << mean_of(eta) << ',' << std_of(eta)
        << ',' << mean_of(thr) << ',' << std_of(thr) << ',' << mean_of(sum) << ','
        << std_of(sum) << ',' << mean_of(rew) << ',' << std_of(rew) << ',' << mean_of(util)
        << ',' << std_of(util) << '\n';
    mean_time[algo] = mean_of(time);
    if (!args.sweep.empty()) {
      for (std::size_t i = 0; i < args.sweep_scales.size(); ++i) {
        // Power is averaged in linear units, sum rate arithmetically.
        double mw = 0.0;
        double rate = 0.0;
        for (const auto& s : sweeps) {
          mw += std::pow(10.0, s[i].first / 10.0);
          rate += s[i].second;
        }
        const double n = static_cast<double>(sweeps.size());
        sweep << algo << ',' << args.sweep_scales[i] << ',' << 10.0 * std::log10(mw / n) << ','
              << rate / n << '\n';
      }
    }
  }

  nlohmann::json ratios = nlohmann::json::object();
  for (const auto& [a, ta] : mean_time) {
    for (const auto& [b, tb] : mean_time) {
      if (a != b && tb > 0.0) ratios[a + "/" + b] = ta / tb;
    }
  }
  write_json(dir / "speedup.json",
             {{"decision_time_s", mean_time},
              {"time_ratio", ratios},
              {"note", "time_ratio[a/b] = mean decision time of a over that of b per episode"}});
  manifest.finish();
  return 0;
}

// ---- replay ---------------------------------------------------------------

int cmd_replay(const ReplayArgs& args) {
  if (args.trace.empty()) throw HarnessError("--trace is required");
  std::ifstream in(args.trace);
  if (!in) throw HarnessError("cannot read " + args.trace);
  ReplayReport rep;
  try {
    rep = replay_trace(in);
  } catch (const TraceError& e) {
    throw HarnessError(e.what());
  } catch (const ConfigError& e) {
    throw HarnessError(std::string("trace: bad config: ") + e.what());
  }
  const nlohmann::json j = {{"trace", args.trace},
                            {"steps", rep.steps},
                            {"global_decisions", rep.global_decisions},
                            {"regional_decisions", rep.regional_decisions},
                            {"max_abs_deviation", rep.max_abs_deviation},
                            {"worst_line", rep.worst_line},
                            {"worst_field", rep.worst_field}};
  if (!args.out.empty()) {
    const fs::path dir = prepare_dir(args.out);
    write_json(dir / "replay.json", j);
  }
  std::cout << j.dump(2) << '\n';
  return rep.max_abs_deviation == 0.0 ? 0 : 3;
}

}  // namespace specshare::harness
