#ifndef SPECSHARE_PPO_GRAD_CHECK_HPP_
#define SPECSHARE_PPO_GRAD_CHECK_HPP_

#include <functional>

#include <Eigen/Dense>

namespace specshare::ppo {

// Returns the loss at `params`; writes the analytic gradient when asked.
using LossFn = std::function<double(const Eigen::VectorXd& params, Eigen::VectorXd* grad)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  Eigen::Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  bool passed = true;
};

// Central differences with step h against the analytic gradient. The error
// for each component is |a - n| / max(|a|, |n|, abs_floor), so components
// where both are tiny are compared in absolute terms.
GradCheckResult grad_check(const Eigen::VectorXd& params, const LossFn& loss, double tolerance,
                           double h = 1e-5, double abs_floor = 1e-6);

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_GRAD_CHECK_HPP_
