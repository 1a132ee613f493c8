#include "specshare/agents/run.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace specshare {

std::vector<TrainLogRow> train(Agent& agent, const ScenarioConfig& cfg, int episodes,
                               std::uint64_t seed,
                               const std::function<void(const TrainLogRow&)>& on_episode) {
  if (!agent.learnable()) throw std::invalid_argument(agent.name() + " is not trainable");
  Env env(cfg, agent.schedule());
  std::vector<TrainLogRow> log;
  std::vector<StepMetrics> steps;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(seed, static_cast<std::uint64_t>(ep));
    agent.begin_episode(env);
    steps.clear();
    while (!env.done()) {
      const ActionBundle bundle = agent.act(env, true);
      const StepResult res = env.step(bundle);
      agent.observe(env, res);
      steps.push_back(env.metrics());
    }
    agent.end_episode(env);
    const EpisodeSummary s = episode_summary(steps);
    log.push_back({ep + 1, s.cumulative_reward, s.eta, s.fairness, s.r_avg});
    if (on_episode) on_episode(log.back());
  }
  return log;
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

EvaluationReport evaluate(Agent& agent, const ScenarioConfig& cfg, std::uint64_t seed,
                          const EvalOptions& opts) {
  using Clock = std::chrono::steady_clock;
  Env env(cfg, agent.schedule());
  env.set_alpha_scale(opts.alpha_scale);
  env.set_trace(opts.trace);
  EvaluationReport report;
  std::vector<StepMetrics> steps;
  for (int ep = 0; ep < opts.episodes; ++ep) {
    env.reset(seed, kEvalEpisodeBase + static_cast<std::uint64_t>(ep));
    EpisodeReport er;
    er.seed = seed;
    er.episode = ep;
    Clock::duration spent{};
    auto t0 = Clock::now();
    agent.begin_episode(env);
    spent += Clock::now() - t0;
    steps.clear();
    double power_mw = 0.0;
    while (!env.done()) {
      t0 = Clock::now();
      const ActionBundle bundle = agent.act(env, false);
      spent += Clock::now() - t0;
      env.step(bundle);
      const StepMetrics& m = env.metrics();
      steps.push_back(m);
      er.throughput.push_back(m.r_avg);
      er.eta.push_back(m.eta);
      er.fairness.push_back(m.fairness);
      er.sum_rate += m.sum_rate;
      er.spectrum_utilization += m.spectrum_utilization;
      if (std::isfinite(m.local_power_dbm)) power_mw += std::pow(10.0, m.local_power_dbm / 10.0);
    }
    const double n = static_cast<double>(steps.size());
    er.summary = episode_summary(steps);
    er.throughput_std = stddev(er.throughput);
    er.sum_rate /= n;
    er.spectrum_utilization /= n;
    // Time mean of the linear power, in dBm.
    er.local_power_dbm = 10.0 * std::log10(power_mw / n);
    er.decision_time_s = std::chrono::duration<double>(spent).count();
    report.episodes.push_back(std::move(er));
  }
  const double e = static_cast<double>(report.episodes.size());
  for (const EpisodeReport& er : report.episodes) {
    report.mean_eta += er.summary.eta / e;
    report.mean_r_avg += er.summary.r_avg / e;
    report.mean_fairness += er.summary.fairness / e;
    report.mean_cumulative_reward += er.summary.cumulative_reward / e;
    report.mean_throughput_std += er.throughput_std / e;
    report.mean_sum_rate += er.sum_rate / e;
    report.mean_spectrum_utilization += er.spectrum_utilization / e;
    report.mean_local_power_dbm += er.local_power_dbm / e;
    report.mean_decision_time_s += er.decision_time_s / e;
  }
  return report;
}

}  // namespace specshare
