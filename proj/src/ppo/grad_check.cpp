#include "specshare/ppo/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace specshare::ppo {

GradCheckResult grad_check(const Eigen::VectorXd& params, const LossFn& loss, double tolerance,
                           double h, double abs_floor) {
  Eigen::VectorXd analytic(params.size());
  loss(params, &analytic);
  Eigen::VectorXd p = params;
  GradCheckResult out;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double up = loss(p, nullptr);
    p[i] = orig - h;
    const double down = loss(p, nullptr);
    p[i] = orig;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), abs_floor});
    const double err = std::abs(analytic[i] - numeric) / denom;
    if (err > out.max_relative_error || out.worst_index < 0) {
      out.max_relative_error = err;
      out.worst_index = i;
      out.analytic = analytic[i];
      out.numeric = numeric;
    }
  }
  out.passed = out.max_relative_error < tolerance;
  return out;
}

}  // namespace specshare::ppo
