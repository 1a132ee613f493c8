#include "specshare/ppo/policy_net.hpp"

#include <stdexcept>
#include <string>

namespace specshare::ppo {

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

PolicyNet::PolicyNet(int obs_size, ActionSpace space, std::vector<int> hidden,
                     std::mt19937_64& rng, double init_log_std)
    : actor(layer_sizes(obs_size, hidden, space.head_size())),
      critic(layer_sizes(obs_size, hidden, 1)),
      space_(std::move(space)),
      hidden_(std::move(hidden)) {
  params = Eigen::VectorXd::Zero(critic_offset() + critic.num_params());
  // Small policy-head weights start every distribution close to uniform.
  actor.init(params.data() + actor_offset(), rng, 0.01);
  critic.init(params.data() + critic_offset(), rng, 1.0);
  params.segment(log_std_offset(), space_.num_continuous()).setConstant(init_log_std);
  clamp_log_std();
}

void PolicyNet::check_obs(std::size_t n) const {
  if (static_cast<int>(n) != obs_size()) {
    throw std::invalid_argument("PolicyNet: observation has " + std::to_string(n) +
                                " entries, expected " + std::to_string(obs_size()));
  }
}

PolicyNet::Output PolicyNet::policy(std::span<const double> obs) const {
  check_obs(obs.size());
  const Eigen::MatrixXd x =
      Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  Output out;
  out.head = actor.forward(params.data() + actor_offset(), x).col(0);
  out.log_std = log_std();
  return out;
}

double PolicyNet::value(std::span<const double> obs) const {
  check_obs(obs.size());
  const Eigen::MatrixXd x =
      Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  return critic.forward(params.data() + critic_offset(), x)(0, 0);
}

PolicyNet::Output PolicyNet::forward(std::span<const double> obs) const {
  Output out = policy(obs);
  out.value = value(obs);
  return out;
}

Eigen::MatrixXd PolicyNet::policy_batch(const Eigen::MatrixXd& obs) const {
  check_obs(static_cast<std::size_t>(obs.rows()));
  return actor.forward(params.data() + actor_offset(), obs);
}

Eigen::RowVectorXd PolicyNet::value_batch(const Eigen::MatrixXd& obs) const {
  check_obs(static_cast<std::size_t>(obs.rows()));
  return critic.forward(params.data() + critic_offset(), obs).row(0);
}

Eigen::VectorXd PolicyNet::log_std() const {
  return params.segment(log_std_offset(), space_.num_continuous())
      .cwiseMax(kLogStdMin)
      .cwiseMin(kLogStdMax);
}

void PolicyNet::clamp_log_std() {
  auto seg = params.segment(log_std_offset(), space_.num_continuous());
  seg = seg.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

}  // namespace specshare::ppo
