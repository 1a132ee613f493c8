#ifndef SPECSHARE_PPO_PPO_HPP_
#define SPECSHARE_PPO_PPO_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "specshare/config.hpp"
#include "specshare/ppo/policy_net.hpp"

namespace specshare::ppo {

// One entity's rollout, in step order.
struct Trajectory {
  std::vector<std::vector<double>> obs;
  std::vector<Action> actions;
  std::vector<double> log_probs;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<std::uint8_t> dones;

  std::size_t size() const { return rewards.size(); }
  bool empty() const { return rewards.empty(); }
  void clear();
  // Throws std::invalid_argument if the sequences are misaligned or a reward
  // is not finite.
  void check() const;
};

// Flattened training samples with advantages and returns filled in.
struct Batch {
  std::vector<std::vector<double>> obs;
  std::vector<Action> actions;
  std::vector<double> log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return advantages.size(); }
  void clear();
  // Runs GAE over the trajectory and appends its samples.
  void append(const Trajectory& traj, double bootstrap, double gamma, double lambda);
};

struct LossReport {
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double total = 0.0;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Adam {
 public:
  Adam() = default;
  Adam(int size, double beta1, double beta2, double eps);
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr);

  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Shifts and scales to zero mean, unit variance; only centres when the
// spread is negligible.
void normalize_advantages(std::vector<double>& adv);

// Clipped-surrogate loss over the samples in `idx`, averaged:
// -min(rA, clip(r)A) + vf_coef (V - R)^2 - entropy_coef H.
// If grad is given it receives dLoss/dparams (overwritten).
LossReport ppo_loss(const PolicyNet& net, const Batch& batch, std::span<const int> idx,
                    const PpoConfig& cfg, Eigen::VectorXd* grad);

// sgd_iters epochs of shuffled minibatches. Advantages are normalized over the
// whole batch first; gradient norms are clipped separately for the policy
// (actor and log-std) and the critic. Throws NonFiniteLoss and leaves the net
// at its last finite state if a loss turns non-finite. Returns means over all
// minibatch steps.
LossReport ppo_update(PolicyNet& net, Adam& opt, Batch batch, const PpoConfig& cfg,
                      std::mt19937_64& rng);

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_PPO_HPP_
