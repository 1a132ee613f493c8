#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "specshare/config.hpp"
#include "specshare/harness.hpp"

namespace h = specshare::harness;

int main(int argc, char** argv) {
  h::init_logging();
  CLI::App app{"Hierarchical spectrum sharing simulator and agent harness"};
  app.set_version_flag("--version", std::string(h::version()));
  app.require_subcommand(1);

  h::TrainArgs train;
  std::uint64_t train_seed = 0;
  int train_episodes = 0;
  auto* t = app.add_subcommand("train", "train a learning agent and write a checkpoint");
  t->add_option("--config", train.config, "scenario config file")->required()->check(CLI::ExistingFile);
  t->add_option("--algo", train.algo, "hdrl, sadrl or madrl")->capture_default_str();
  auto* t_seed = t->add_option("--seed", train_seed, "instance seed (default: run.seed)");
  auto* t_eps = t->add_option("--episodes", train_episodes, "episodes (default: run.episodes)");
  t->add_option("--out", train.out, "output directory")->capture_default_str();

  h::EvaluateArgs eval;
  std::string eval_seeds;
  std::uint64_t eval_seed = 0;
  auto* e = app.add_subcommand("evaluate", "evaluate an agent with mode actions");
  e->add_option("--config", eval.config, "scenario config file")->required()->check(CLI::ExistingFile);
  e->add_option("--algo", eval.algo, "exhaustive, random, sadrl, madrl or hdrl")->capture_default_str();
  e->add_option("--checkpoint", eval.checkpoint, "checkpoint from train (learning agents)");
  auto* e_seeds = e->add_option("--seeds", eval_seeds, "comma-separated seeds");
  auto* e_seed = e->add_option("--seed", eval_seed, "single seed");
  e_seeds->excludes(e_seed);
  e->add_option("--episodes", eval.episodes, "episodes per seed")->capture_default_str();
  e->add_option("--out", eval.out, "output directory")->capture_default_str();
  e->add_option("--trace", eval.trace, "write a JSON-lines trace for replay");

  h::BenchmarkArgs bench;
  std::string bench_algos = "random,hdrl";
  std::string bench_seeds = "0,1,2";
  auto* b = app.add_subcommand("benchmark", "compare agents over seeds");
  b->add_option("--config", bench.config, "scenario config file")->required()->check(CLI::ExistingFile);
  b->add_option("--algos", bench_algos, "comma-separated agent names")->capture_default_str();
  b->add_option("--algo", bench_algos, "alias of --algos");
  b->add_option("--seeds", bench_seeds, "comma-separated seeds")->capture_default_str();
  b->add_option("--episodes", bench.episodes, "evaluation episodes per seed")->capture_default_str();
  b->add_option("--train-episodes", bench.train_episodes,
                "training episodes for learning agents before evaluation")
      ->capture_default_str();
  b->add_option("--sweep", bench.sweep, "local_power: sweep the power scale")
      ->check(CLI::IsMember({"local_power"}));
  b->add_option("--threads", bench.threads, "concurrent (algo, seed) runs")->capture_default_str();
  b->add_option("--out", bench.out, "output directory")->capture_default_str();

  h::ReplayArgs replay;
  auto* r = app.add_subcommand("replay", "recompute metrics from a trace and diff them");
  r->add_option("--trace", replay.trace, "trace written by evaluate --trace")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--out", replay.out, "optional directory for replay.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) {
      if (t_seed->count() > 0) train.seed = train_seed;
      if (t_eps->count() > 0) train.episodes = train_episodes;
      return h::cmd_train(train);
    }
    if (e->parsed()) {
      if (e_seeds->count() > 0) eval.seeds = h::parse_seed_list(eval_seeds);
      if (e_seed->count() > 0) eval.seeds = {eval_seed};
      return h::cmd_evaluate(eval);
    }
    if (b->parsed()) {
      bench.algos = h::parse_name_list(bench_algos);
      bench.seeds = h::parse_seed_list(bench_seeds);
      return h::cmd_benchmark(bench);
    }
    if (r->parsed()) return h::cmd_replay(replay);
  } catch (const std::exception& ex) {
    spdlog::error("{}", ex.what());
    return 1;
  }
  return 1;
}
