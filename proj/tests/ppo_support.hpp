#ifndef SPECSHARE_TESTS_PPO_SUPPORT_HPP_
#define SPECSHARE_TESTS_PPO_SUPPORT_HPP_

#include <random>
#include <vector>

#include "specshare/config.hpp"
#include "specshare/ppo/distribution.hpp"
#include "specshare/ppo/grad_check.hpp"
#include "specshare/ppo/policy_net.hpp"
#include "specshare/ppo/ppo.hpp"

namespace testing {

// Mixed action space with every head type.
inline specshare::ppo::ActionSpace mixed_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(1, 3);
  specshare::ppo::ActionSpace s;
  for (int i = 0, n = small(rng); i < n; ++i) s.categorical.push_back(1 + small(rng));
  s.bernoulli = small(rng);
  for (int i = 0, n = small(rng); i < n; ++i) {
    const double lo = std::uniform_real_distribution<double>(-2.0, 0.0)(rng);
    s.continuous.push_back({lo, lo + std::uniform_real_distribution<double>(0.5, 3.0)(rng)});
  }
  return s;
}

struct LossProblem {
  specshare::ppo::PolicyNet net;
  specshare::ppo::Batch batch;
  specshare::PpoConfig cfg;
  std::vector<int> idx;
};

// Small random net and a batch of samples whose old log-probs are off by a
// random factor, so ratios fall on both sides of the clip range.
inline LossProblem random_loss_problem(std::mt19937_64& rng) {
  using namespace specshare::ppo;
  LossProblem p;
  const int obs = std::uniform_int_distribution<int>(2, 6)(rng);
  const int hidden = std::uniform_int_distribution<int>(3, 8)(rng);
  p.net = PolicyNet(obs, mixed_space(rng), {hidden, hidden}, rng,
                    std::uniform_real_distribution<double>(-1.0, 0.5)(rng));
  // Larger output weights than the default init so heads are not near zero.
  std::normal_distribution<double> jitter(0.0, 0.3);
  for (Eigen::Index i = 0; i < p.net.params.size(); ++i) p.net.params[i] += jitter(rng);
  p.net.clamp_log_std();
  p.cfg.clip_eps = 0.2;
  p.cfg.entropy_coef = 0.05;
  p.cfg.vf_coef = 0.7;
  std::normal_distribution<double> unit(0.0, 1.0);
  const int n = std::uniform_int_distribution<int>(4, 12)(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<double> o(obs);
    for (double& v : o) v = unit(rng);
    const PolicyNet::Output out = p.net.forward(o);
    double lp = 0.0;
    const Action a = sample_action(p.net.space(), out.head.data(), out.log_std.data(), rng, &lp);
    p.batch.obs.push_back(o);
    p.batch.actions.push_back(a);
    p.batch.log_probs.push_back(lp + 0.4 * unit(rng));
    p.batch.advantages.push_back(unit(rng));
    p.batch.returns.push_back(unit(rng));
    p.idx.push_back(i);
  }
  return p;
}

inline specshare::ppo::GradCheckResult check_loss_gradient(const LossProblem& p,
                                                           double tolerance) {
  using namespace specshare::ppo;
  const LossFn fn = [&p](const Eigen::VectorXd& params, Eigen::VectorXd* grad) {
    PolicyNet net = p.net;
    net.params = params;
    return ppo_loss(net, p.batch, p.idx, p.cfg, grad).total;
  };
  return grad_check(p.net.params, fn, tolerance);
}

}  // namespace testing

#endif  // SPECSHARE_TESTS_PPO_SUPPORT_HPP_
