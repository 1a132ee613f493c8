#ifndef SPECSHARE_PPO_POLICY_NET_HPP_
#define SPECSHARE_PPO_POLICY_NET_HPP_

#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specshare/ppo/distribution.hpp"
#include "specshare/ppo/mlp.hpp"

namespace specshare::ppo {

// Actor and critic MLPs with separate trunks plus a state-independent log-std
// per continuous slot. All parameters sit in one flat vector:
// [actor | log_std | critic].
class PolicyNet {
 public:
  PolicyNet() = default;
  PolicyNet(int obs_size, ActionSpace space, std::vector<int> hidden,
            std::mt19937_64& rng, double init_log_std = 0.0);

  struct Output {
    Eigen::VectorXd head;
    Eigen::VectorXd log_std;  // clamped
    double value = 0.0;
  };

  // Throws std::invalid_argument when obs has the wrong length.
  Output forward(std::span<const double> obs) const;
  // Actor only; skips the critic.
  Output policy(std::span<const double> obs) const;
  double value(std::span<const double> obs) const;
  Eigen::VectorXd log_std() const;
  // Batched versions, one observation per column.
  Eigen::MatrixXd policy_batch(const Eigen::MatrixXd& obs) const;
  Eigen::RowVectorXd value_batch(const Eigen::MatrixXd& obs) const;

  // Projects log-std parameters back into [kLogStdMin, kLogStdMax].
  void clamp_log_std();
  bool finite() const { return params.allFinite(); }

  int obs_size() const { return actor.input_size(); }
  const ActionSpace& space() const { return space_; }
  const std::vector<int>& hidden() const { return hidden_; }
  int actor_offset() const { return 0; }
  int log_std_offset() const { return actor.num_params(); }
  int critic_offset() const { return actor.num_params() + space_.num_continuous(); }
  // Parameters clipped together: actor and log-std.
  int policy_param_count() const { return critic_offset(); }

  Mlp actor;
  Mlp critic;
  Eigen::VectorXd params;

 private:
  void check_obs(std::size_t n) const;

  ActionSpace space_;
  std::vector<int> hidden_;
};

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_POLICY_NET_HPP_
