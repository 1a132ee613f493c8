#include <doctest.h>

#include <cmath>
#include <random>

#include "specshare/agents/agents.hpp"
#include "specshare/agents/codec.hpp"
#include "specshare/agents/run.hpp"
#include "support.hpp"

using namespace specshare;

namespace {

ScenarioConfig quick_config() {
  ScenarioConfig cfg = testing::desk_config();
  cfg.steps_per_episode = 20;
  cfg.delta_s = 10;
  cfg.delta_h = 5;
  cfg.ppo.hidden_size = 16;
  cfg.ppo.batch_size = 40;
  cfg.ppo.minibatch_size = 32;
  cfg.ppo.sgd_iters = 2;
  return cfg;
}

double eta_of(const Env& env, const AllocationState& s) {
  const ChannelSnapshot snap = snapshot_from_gains(env.topology(), env.snapshot().gains, s, env.config());
  return compute_step_metrics(env.topology(), env.node_positions(), s, snap, env.config()).eta;
}

}  // namespace

TEST_CASE("agent names") {
  for (const char* name : {"exhaustive", "random", "sadrl", "madrl", "hdrl"}) {
    CHECK(std::string(to_string(parse_agent_kind(name))) == name);
  }
  CHECK_THROWS_WITH_AS(parse_agent_kind("greedy"), doctest::Contains("unknown algorithm"),
                       std::invalid_argument);
  CHECK(is_learnable(AgentKind::kHdrl));
  CHECK_FALSE(is_learnable(AgentKind::kRandom));
  CHECK_FALSE(is_learnable(AgentKind::kExhaustive));
}

TEST_CASE("every agent emits feasible bundles") {
  const ScenarioConfig cfg = quick_config();
  for (AgentKind kind : {AgentKind::kExhaustive, AgentKind::kRandom, AgentKind::kSadrl,
                         AgentKind::kMadrl, AgentKind::kHdrl}) {
    auto agent = make_agent(kind, cfg, 3);
    Env env(cfg, agent->schedule());
    agent->begin_episode(env);
    for (bool explore : {true, false}) {
      env.reset(cfg.seed, explore ? 0 : 1);
      agent->begin_episode(env);
      while (!env.done()) {
        env.step(agent->act(env, explore && agent->learnable()));
        REQUIRE_FALSE(validate(env.allocation(), cfg, env.topology()).has_value());
      }
    }
  }
}

TEST_CASE("random agent stays feasible on random scenarios") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const ScenarioConfig cfg = testing::random_config(rng);
    auto agent = make_agent(AgentKind::kRandom, cfg, trial);
    Env env(cfg, agent->schedule());
    while (!env.done()) {
      env.step(agent->act(env, true));
      REQUIRE_FALSE(validate(env.allocation(), cfg, env.topology()).has_value());
    }
  }
}

TEST_CASE("hierarchical agent only acts locally between intervals") {
  const ScenarioConfig cfg;
  auto agent = make_agent(AgentKind::kHdrl, cfg, 1);
  Env env(cfg, agent->schedule());
  agent->begin_episode(env);
  for (int t = 0; t < 7; ++t) env.step(agent->act(env, false));
  const ActionBundle b = agent->act(env, false);
  CHECK_FALSE(b.global.has_value());
  CHECK_FALSE(b.regional.has_value());
  CHECK(b.local.has_value());
  env.step(b);
  for (int t = 8; t < 10; ++t) env.step(agent->act(env, false));
  const ActionBundle at10 = agent->act(env, false);
  CHECK_FALSE(at10.global.has_value());
  CHECK(at10.regional.has_value());
}

TEST_CASE("single-agent action schema") {
  const ScenarioConfig cfg;
  const ppo::ActionSpace s = codec::joint_space(cfg);
  const int N = cfg.num_subbands;
  const int B = cfg.beams;
  const int M = cfg.nodes_per_region();
  const int regions = cfg.num_regions();
  CHECK(s.head_size() == N * (B + 1) + regions * N * (M + 1) + regions * M * (2 * N + 2));
  auto agent = make_agent(AgentKind::kSadrl, cfg, 0);
  const auto& ppo_agent = dynamic_cast<const PpoAgent&>(*agent);
  CHECK(ppo_agent.learners()[0].net.space().head_size() == s.head_size());
  CHECK(ppo_agent.learners()[0].net.obs_size() == codec::joint_observation_size(cfg));
}

TEST_CASE("exhaustive search: dominant node on a single subband") {
  ScenarioConfig cfg;
  cfg.beams = 1;
  cfg.haps_per_beam = 1;
  cfg.regions_per_hap = 1;
  cfg.num_subbands = 1;
  cfg.users_per_region = 1;
  cfg.fading_frozen = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    Env env(cfg);
    const ExhaustiveResult r = exhaustive_solve(env, cfg.enumeration_cap);
    const RegionInfo& region = env.topology().regions[0];
    int expect = 0;
    double best = -1.0;
    for (int m = 0; m < cfg.nodes_per_region(); ++m) {
      const int node = region.nodes[m];
      const double rx = env.snapshot().gains.at(node, region.users[0]) *
                        dbm_to_watts(env.topology().nodes[node].tx_power_dbm);
      if (rx > best) {
        best = rx;
        expect = m;
      }
    }
    CHECK(r.best.global.at(0, 0) == 1);
    CHECK(r.best.regional[0].owner(0) == expect);
    CHECK(r.candidates == exhaustive_candidates(cfg));
  }
}

TEST_CASE("exhaustive search beats every candidate") {
  ScenarioConfig cfg = testing::desk_config();
  cfg.num_subbands = 2;
  Env env(cfg);
  const ExhaustiveResult r = exhaustive_solve(env, cfg.enumeration_cap);
  CHECK(r.eta == doctest::Approx(eta_of(env, r.best)).epsilon(1e-12));
  for (int n = 0; n < 2; ++n) CHECK(r.best.global.owner(n) >= 0);

  // Independent enumeration: per subband a beam (or none), then per region
  // a node (or none), with the same heuristic locals.
  const int M = cfg.nodes_per_region();
  int visited = 0;
  AllocationState s = AllocationState::zeros(cfg);
  for (int c0 = 0; c0 <= cfg.beams * (M + 1); ++c0) {
    for (int c1 = 0; c1 <= cfg.beams * (M + 1); ++c1) {
      s = AllocationState::zeros(cfg);
      const int choice[2] = {c0, c1};
      for (int n = 0; n < 2; ++n) {
        if (choice[n] == 0) continue;
        const int b = (choice[n] - 1) / (M + 1);
        const int m = (choice[n] - 1) % (M + 1) - 1;
        s.global.at(b, n) = 1;
        if (m >= 0) s.regional[b].at(m, n) = 1;  // desk: region r sits in beam r
      }
      for (int j = 0; j < cfg.num_regions() * M; ++j) {
        s.local[j] = codec::heuristic_local(s.regional[j / M], j % M);
      }
      REQUIRE_FALSE(validate(s, cfg, env.topology()).has_value());
      CHECK(eta_of(env, s) <= r.eta * (1.0 + 1e-12));
      ++visited;
    }
  }
  CHECK(visited == r.candidates);
}

TEST_CASE("exhaustive search guards") {
  ScenarioConfig cfg = testing::desk_config();
  cfg.num_subbands = 3;
  Env env(cfg);
  CHECK_THROWS_AS(exhaustive_solve(env, 10), SearchSpaceTooLarge);
  cfg.num_subbands = 12;
  Env big(cfg);
  CHECK_THROWS_AS(exhaustive_solve(big, 1e5), SearchSpaceTooLarge);
  cfg.num_subbands = 2;
  cfg.fading_frozen = false;
  Env live(cfg);
  CHECK_THROWS_AS(exhaustive_solve(live, 1e5), std::invalid_argument);
}

TEST_CASE("training writes one row per episode") {
  const ScenarioConfig cfg = quick_config();
  auto agent = make_agent(AgentKind::kHdrl, cfg, 2);
  const auto rows = train(*agent, cfg, 1, 0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].episode == 1);
  CHECK(std::isfinite(rows[0].cumulative_reward));
  CHECK(std::isfinite(rows[0].eta));
  CHECK(std::isfinite(rows[0].fairness));
  CHECK(std::isfinite(rows[0].r_avg));

  auto exhaustive = make_agent(AgentKind::kExhaustive, cfg, 0);
  CHECK_THROWS_WITH_AS(train(*exhaustive, cfg, 1, 0), doctest::Contains("not trainable"),
                       std::invalid_argument);
}

TEST_CASE("hierarchical buffers fill at each tier's rate") {
  const ScenarioConfig cfg;
  auto agent = make_agent(AgentKind::kHdrl, cfg, 2);
  auto& hdrl = dynamic_cast<HdrlAgent&>(*agent);
  Env env(cfg, agent->schedule());
  agent->begin_episode(env);
  while (!env.done()) {
    const StepResult res = env.step(agent->act(env, true));
    agent->observe(env, res);
  }
  const auto counts = hdrl.episode_transitions();
  const int S = cfg.steps_per_episode;
  CHECK(counts[0] == S / cfg.delta_s);
  CHECK(counts[1] == S / cfg.delta_h * cfg.num_haps());
  CHECK(counts[2] == S * cfg.num_regions() * cfg.nodes_per_region());
  agent->end_episode(env);
  CHECK(hdrl.last_episode_transitions() == counts);
}

TEST_CASE("zero learning rate leaves every policy unchanged") {
  ScenarioConfig cfg = quick_config();
  cfg.ppo.learning_rate = 0.0;
  for (AgentKind kind : {AgentKind::kHdrl, AgentKind::kSadrl, AgentKind::kMadrl}) {
    auto agent = make_agent(kind, cfg, 4);
    auto& ppo_agent = dynamic_cast<PpoAgent&>(*agent);
    std::vector<Eigen::VectorXd> before;
    for (const Learner& l : ppo_agent.learners()) before.push_back(l.net.params);
    train(*agent, cfg, 20, 0);
    int updates = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(ppo_agent.learners()[i].net.params == before[i]);
      updates += ppo_agent.learners()[i].updates();
    }
    CHECK(updates > 0);
  }
}

TEST_CASE("evaluation is deterministic") {
  const ScenarioConfig cfg = quick_config();
  for (AgentKind kind : {AgentKind::kRandom, AgentKind::kHdrl, AgentKind::kExhaustive}) {
    auto a = make_agent(kind, cfg, 8);
    auto b = make_agent(kind, cfg, 8);
    EvalOptions opts;
    opts.episodes = 2;
    const EvaluationReport ra = evaluate(*a, cfg, 3, opts);
    const EvaluationReport rb = evaluate(*b, cfg, 3, opts);
    REQUIRE(ra.episodes.size() == 2);
    CHECK(ra.episodes[1].throughput.size() == static_cast<std::size_t>(cfg.steps_per_episode));
    for (std::size_t e = 0; e < 2; ++e) {
      CHECK(ra.episodes[e].throughput == rb.episodes[e].throughput);
      CHECK(ra.episodes[e].eta == rb.episodes[e].eta);
    }
    CHECK(ra.mean_eta == rb.mean_eta);
  }
}

TEST_CASE("exhaustive optimum bounds the other agents on a frozen instance") {
  const ScenarioConfig cfg = quick_config();
  EvalOptions opts;
  auto exhaustive = make_agent(AgentKind::kExhaustive, cfg, 0);
  const double best = evaluate(*exhaustive, cfg, 0, opts).mean_eta;
  for (AgentKind kind : {AgentKind::kRandom, AgentKind::kHdrl}) {
    auto agent = make_agent(kind, cfg, 1);
    CHECK(evaluate(*agent, cfg, 0, opts).mean_eta <= best * (1.0 + 1e-9));
  }
}

TEST_CASE("checkpoints round-trip and refuse other scenarios") {
  const ScenarioConfig cfg = quick_config();
  auto agent = make_agent(AgentKind::kHdrl, cfg, 6);
  train(*agent, cfg, 3, 0);
  const std::string text = agent->save().dump();

  auto restored = make_agent(AgentKind::kHdrl, cfg, 99);
  restored->load(nlohmann::json::parse(text));
  EvalOptions opts;
  CHECK(evaluate(*agent, cfg, 1, opts).episodes[0].throughput ==
        evaluate(*restored, cfg, 1, opts).episodes[0].throughput);

  ScenarioConfig other = cfg;
  other.num_subbands = 3;
  auto mismatch = make_agent(AgentKind::kHdrl, other, 6);
  CHECK_THROWS_WITH_AS(mismatch->load(nlohmann::json::parse(text)),
                       doctest::Contains("config hash mismatch"), CheckpointError);
  auto wrong_kind = make_agent(AgentKind::kSadrl, cfg, 6);
  CHECK_THROWS_AS(wrong_kind->load(nlohmann::json::parse(text)), CheckpointError);
  auto random = make_agent(AgentKind::kRandom, cfg, 6);
  CHECK_THROWS_WITH_AS(random->save(), doctest::Contains("not trainable"), CheckpointError);
}
