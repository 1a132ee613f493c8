#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ppo_support.hpp"
#include "specshare/ppo/checkpoint.hpp"
#include "specshare/ppo/gae.hpp"
#include "specshare/ppo/mlp.hpp"

using namespace specshare;
using namespace specshare::ppo;
using testing::LossProblem;
using testing::mixed_space;
using testing::random_loss_problem;
using testing::check_loss_gradient;

namespace {

// Discounted reward-to-go, the textbook double loop.
std::vector<double> reward_to_go(const std::vector<double>& r, double gamma) {
  std::vector<double> out(r.size(), 0.0);
  for (std::size_t t = 0; t < r.size(); ++t) {
    double g = 1.0;
    for (std::size_t k = t; k < r.size(); ++k) {
      out[t] += g * r[k];
      g *= gamma;
    }
  }
  return out;
}

ActionSpace categorical_only(std::vector<int> arities) {
  ActionSpace s;
  s.categorical = std::move(arities);
  return s;
}

}  // namespace

TEST_CASE("zero network outputs uniform logits and zero value") {
  std::mt19937_64 rng(1);
  std::mt19937_64 r2(2);
  PolicyNet net(5, mixed_space(r2), {16, 16}, rng);
  net.params.setZero();
  const auto out = net.forward(std::vector<double>{1, -2, 3, 0.5, 9});
  CHECK(out.head.isZero(0.0));
  CHECK(out.value == 0.0);
  CHECK(out.log_std.isZero(0.0));
}

TEST_CASE("forward is a pure function of the observation") {
  std::mt19937_64 rng(3);
  PolicyNet net(4, mixed_space(rng), {8, 8}, rng);
  const std::vector<double> o = {0.1, 0.2, -0.3, 0.4};
  const auto a = net.forward(o);
  const auto b = net.forward(o);
  CHECK(a.head == b.head);
  CHECK(a.value == b.value);
  Eigen::MatrixXd batch(4, 2);
  batch.col(0) = Eigen::Map<const Eigen::VectorXd>(o.data(), 4);
  batch.col(1) = batch.col(0);
  const Eigen::MatrixXd heads = net.policy_batch(batch);
  CHECK((heads.col(0) - a.head).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(heads.col(0) == heads.col(1));
  CHECK(std::abs(net.value_batch(batch)(0) - a.value) < 1e-14);
  CHECK_THROWS_AS(net.forward(std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("hidden units can be permuted without changing outputs") {
  std::mt19937_64 rng(4);
  const int in = 3;
  const int h = 6;
  const int out = 2;
  Mlp mlp({in, h, out});
  std::vector<double> p(mlp.num_params());
  std::normal_distribution<double> g(0.0, 1.0);
  for (double& v : p) v = g(rng);
  std::vector<int> perm(h);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  // Layout: W1 (h x in, column-major), b1 (h), W2 (out x h), b2 (out).
  std::vector<double> q = p;
  const int w1 = 0;
  const int b1 = h * in;
  const int w2 = b1 + h;
  for (int k = 0; k < h; ++k) {
    for (int i = 0; i < in; ++i) q[w1 + i * h + k] = p[w1 + i * h + perm[k]];
    q[b1 + k] = p[b1 + perm[k]];
    for (int o = 0; o < out; ++o) q[w2 + k * out + o] = p[w2 + perm[k] * out + o];
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(in, 5);
  const Eigen::MatrixXd ya = mlp.forward(p.data(), x);
  const Eigen::MatrixXd yb = mlp.forward(q.data(), x);
  CHECK((ya - yb).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("confident logits pick their category") {
  const ActionSpace s = categorical_only({4});
  const std::vector<double> head = {0.0, 20.0, 0.0, 0.0};
  std::mt19937_64 rng(5);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    double lp = 0.0;
    const Action a = sample_action(s, head.data(), nullptr, rng, &lp);
    if (a.categorical[0] == 1) {
      ++hits;
      CHECK(std::exp(lp) > 0.999);
    }
  }
  CHECK(hits >= 9990);
  CHECK(mode_action(s, head.data(), nullptr).categorical[0] == 1);
}

TEST_CASE("minimum log-std samples sit at the squashed mean") {
  ActionSpace s;
  s.continuous = {{-1.0, 1.0}};
  const std::vector<double> head = {0.0};
  const std::vector<double> log_std = {kLogStdMin};
  std::mt19937_64 rng(6);
  double dev = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Action a = sample_action(s, head.data(), log_std.data(), rng);
    if (i == 0) CHECK(std::abs(a.value[0]) < 0.01);
    CHECK(a.value[0] >= -1.0);
    CHECK(a.value[0] <= 1.0);
    dev += std::abs(a.value[0]);
  }
  CHECK(dev / n < 0.01);
  CHECK(mode_action(s, head.data(), log_std.data()).value[0] == 0.0);
}

TEST_CASE("sampled log-probs are finite and consistent") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ActionSpace s = mixed_space(rng);
    std::normal_distribution<double> g(0.0, 3.0);
    std::vector<double> head(s.head_size());
    for (double& v : head) v = g(rng);
    std::vector<double> log_std(s.num_continuous());
    for (double& v : log_std) v = std::clamp(g(rng), kLogStdMin, kLogStdMax);
    for (int i = 0; i < 1000; ++i) {
      double lp = 0.0;
      const Action a = sample_action(s, head.data(), log_std.data(), rng, &lp);
      REQUIRE(std::isfinite(lp));
      CHECK(lp == log_prob(s, head.data(), log_std.data(), a));
      for (int k = 0; k < s.num_continuous(); ++k) {
        CHECK(a.value[k] >= s.continuous[k].lo);
        CHECK(a.value[k] <= s.continuous[k].hi);
      }
    }
  }
}

TEST_CASE("uniform categorical entropy is log of the arity") {
  const ActionSpace s = categorical_only({2, 5, 7});
  const std::vector<double> head(s.head_size(), 0.0);
  CHECK(entropy(s, head.data(), nullptr) ==
        doctest::Approx(std::log(2.0) + std::log(5.0) + std::log(7.0)).epsilon(1e-12));
  std::vector<double> skew = head;
  skew[3] = 1.5;
  CHECK(entropy(s, skew.data(), nullptr) < entropy(s, head.data(), nullptr));
}

TEST_CASE("GAE examples") {
  const std::vector<std::uint8_t> done1 = {1};
  auto a = gae(std::vector<double>{1.0}, std::vector<double>{0.0}, done1, 0.0, 0.99, 0.95);
  CHECK(a.advantages[0] == 1.0);
  CHECK(a.returns[0] == 1.0);

  const std::vector<std::uint8_t> done2 = {0, 1};
  auto b = gae(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}, done2, 0.0, 1.0, 1.0);
  CHECK(b.advantages[0] == 3.0);
  CHECK(b.advantages[1] == 2.0);

  const std::vector<std::uint8_t> open = {0, 0, 0};
  auto c = gae(std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>{2.5, 2.5, 2.5}, open, 2.5,
               1.0, 0.9);
  for (double v : c.advantages) CHECK(v == 0.0);

  CHECK_THROWS_AS(gae(std::vector<double>{1.0}, std::vector<double>{}, done1, 0.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("GAE with lambda 1 and zero values is the discounted return") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    const double gamma = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<double> r(n);
    for (double& v : r) v = g(rng);
    std::vector<std::uint8_t> dones(n, 0);
    dones.back() = 1;
    const auto res = gae(r, std::vector<double>(n, 0.0), dones, 0.0, gamma, 1.0);
    const auto ref = reward_to_go(r, gamma);
    for (int t = 0; t < n; ++t) CHECK(std::abs(res.advantages[t] - ref[t]) < 1e-10);
  }
}

TEST_CASE("GAE matches the explicit weighted sum of TD residuals") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const double gamma = 0.9;
    const double lambda = 0.8;
    std::vector<double> r(n);
    std::vector<double> v(n);
    std::vector<std::uint8_t> d(n, 0);
    for (int t = 0; t < n; ++t) {
      r[t] = g(rng);
      v[t] = g(rng);
      d[t] = std::bernoulli_distribution(0.1)(rng);
    }
    const double boot = g(rng);
    const auto res = gae(r, v, d, boot, gamma, lambda);
    for (int t = 0; t < n; ++t) {
      double sum = 0.0;
      double w = 1.0;
      for (int k = t; k < n; ++k) {
        const double next = d[k] ? 0.0 : (k + 1 < n ? v[k + 1] : boot);
        sum += w * (r[k] + gamma * next - v[k]);
        if (d[k]) break;
        w *= gamma * lambda;
      }
      CHECK(res.advantages[t] == doctest::Approx(sum).epsilon(1e-12));
      CHECK(res.returns[t] == doctest::Approx(sum + v[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss examples") {
  std::mt19937_64 rng(10);
  LossProblem p = random_loss_problem(rng);
  // Old log-probs equal to the current ones: every ratio is 1.
  for (std::size_t i = 0; i < p.batch.size(); ++i) {
    const auto out = p.net.forward(p.batch.obs[i]);
    p.batch.log_probs[i] =
        log_prob(p.net.space(), out.head.data(), out.log_std.data(), p.batch.actions[i]);
  }
  const double mean_adv = std::accumulate(p.batch.advantages.begin(), p.batch.advantages.end(), 0.0) /
                          static_cast<double>(p.batch.size());
  const LossReport r1 = ppo_loss(p.net, p.batch, p.idx, p.cfg, nullptr);
  CHECK(r1.policy == doctest::Approx(-mean_adv).epsilon(1e-12));
  CHECK(r1.clip_fraction == 0.0);

  SUBCASE("ratio above the clip range is capped") {
    for (auto& lp : p.batch.log_probs) lp -= std::log(1.5);
    for (auto& a : p.batch.advantages) a = 1.0;
    const LossReport r = ppo_loss(p.net, p.batch, p.idx, p.cfg, nullptr);
    CHECK(r.policy == doctest::Approx(-1.2).epsilon(1e-12));
    CHECK(r.clip_fraction == 1.0);
  }
  SUBCASE("only the entropy term remains") {
    for (std::size_t i = 0; i < p.batch.size(); ++i) {
      p.batch.advantages[i] = 0.0;
      p.batch.returns[i] = p.net.value(p.batch.obs[i]);
    }
    const LossReport r = ppo_loss(p.net, p.batch, p.idx, p.cfg, nullptr);
    CHECK(r.total == doctest::Approx(-p.cfg.entropy_coef * r.entropy).epsilon(1e-12));
  }
}

TEST_CASE("advantage normalization") {
  std::vector<double> a = {1.0, 2.0, 3.0, 10.0};
  normalize_advantages(a);
  double mean = 0.0;
  double sq = 0.0;
  for (double v : a) mean += v / 4.0;
  for (double v : a) sq += (v - mean) * (v - mean) / 4.0;
  CHECK(std::abs(mean) < 1e-12);
  CHECK(sq == doctest::Approx(1.0));
  std::vector<double> flat = {2.0, 2.0};
  normalize_advantages(flat);
  CHECK(flat == std::vector<double>{0.0, 0.0});
}

TEST_CASE("zero learning rate leaves parameters bit-identical") {
  std::mt19937_64 rng(11);
  LossProblem p = random_loss_problem(rng);
  p.cfg.learning_rate = 0.0;
  p.cfg.sgd_iters = 3;
  p.cfg.minibatch_size = 4;
  Adam opt(static_cast<int>(p.net.params.size()), 0.9, 0.999, 1e-8);
  const Eigen::VectorXd before = p.net.params;
  ppo_update(p.net, opt, p.batch, p.cfg, rng);
  CHECK(p.net.params == before);
  CHECK(opt.t == 3 * 3);
}

TEST_CASE("an update lowers the loss on its own batch") {
  std::mt19937_64 rng(12);
  LossProblem p = random_loss_problem(rng);
  p.cfg.learning_rate = 1e-3;
  p.cfg.sgd_iters = 20;
  p.cfg.minibatch_size = 1024;
  normalize_advantages(p.batch.advantages);
  const double before = ppo_loss(p.net, p.batch, p.idx, p.cfg, nullptr).total;
  Adam opt(static_cast<int>(p.net.params.size()), 0.9, 0.999, 1e-8);
  ppo_update(p.net, opt, p.batch, p.cfg, rng);
  CHECK(ppo_loss(p.net, p.batch, p.idx, p.cfg, nullptr).total < before);
  CHECK(p.net.finite());
}

TEST_CASE("gradient of a linear value net") {
  std::mt19937_64 rng(13);
  Mlp lin({4, 1});
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 9);
  Eigen::RowVectorXd y = Eigen::RowVectorXd::Random(9);
  Eigen::VectorXd p(lin.num_params());
  std::vector<double> init(lin.num_params());
  lin.init(init.data(), rng, 1.0);
  p = Eigen::Map<Eigen::VectorXd>(init.data(), lin.num_params());
  p.array() += 0.3;
  const LossFn loss = [&](const Eigen::VectorXd& w, Eigen::VectorXd* grad) {
    Mlp::Cache cache;
    const Eigen::MatrixXd out = lin.forward(w.data(), x, grad ? &cache : nullptr);
    const Eigen::MatrixXd err = out - y;
    if (grad) {
      grad->setZero(w.size());
      lin.backward(w.data(), cache, 2.0 * err / 9.0, grad->data());
    }
    return err.squaredNorm() / 9.0;
  };
  const GradCheckResult r = grad_check(p, loss, 1e-6);
  CHECK(r.passed);
  CHECK(r.max_relative_error < 1e-6);
}

TEST_CASE("gradient of the full actor-critic loss") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const LossProblem p = random_loss_problem(rng);
    const GradCheckResult r = check_loss_gradient(p, 1e-3);
    INFO("trial " << trial << " index " << r.worst_index << " analytic " << r.analytic
                  << " numeric " << r.numeric);
    CHECK(r.max_relative_error < 1e-3);
  }
}

TEST_CASE("zero loss has zero gradient both ways") {
  const LossFn zero = [](const Eigen::VectorXd& w, Eigen::VectorXd* grad) {
    if (grad) grad->setZero(w.size());
    return 0.0;
  };
  const GradCheckResult r = grad_check(Eigen::VectorXd::Random(7), zero, 1e-9);
  CHECK(r.max_relative_error == 0.0);
  CHECK(r.analytic == 0.0);
  CHECK(r.numeric == 0.0);
}

TEST_CASE("checkpoints restore bit-exactly") {
  std::mt19937_64 rng(15);
  LossProblem p = random_loss_problem(rng);
  Adam opt(static_cast<int>(p.net.params.size()), 0.9, 0.999, 1e-8);
  p.cfg.sgd_iters = 2;
  ppo_update(p.net, opt, p.batch, p.cfg, rng);

  const std::string net_text = net_to_json(p.net).dump();
  const PolicyNet back = net_from_json(nlohmann::json::parse(net_text));
  CHECK(back.params == p.net.params);
  CHECK(back.hidden() == p.net.hidden());
  const std::vector<double> o(p.net.obs_size(), 0.25);
  CHECK(back.forward(o).head == p.net.forward(o).head);

  const Adam opt2 = adam_from_json(nlohmann::json::parse(adam_to_json(opt).dump()));
  CHECK(opt2.m == opt.m);
  CHECK(opt2.v == opt.v);
  CHECK(opt2.t == opt.t);

  std::mt19937_64 copy = rng_from_string(rng_to_string(rng));
  CHECK(copy() == rng());

  const PpoConfig cfg2 = ppo_config_from_json(ppo_config_to_json(p.cfg));
  CHECK(cfg2.clip_eps == p.cfg.clip_eps);
  CHECK(cfg2.learning_rate == p.cfg.learning_rate);
}
