#include "specshare/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "specshare/ppo/gae.hpp"

namespace specshare::ppo {

void Trajectory::clear() {
  obs.clear();
  actions.clear();
  log_probs.clear();
  values.clear();
  rewards.clear();
  dones.clear();
}

void Trajectory::check() const {
  const std::size_t n = rewards.size();
  if (obs.size() != n || actions.size() != n || log_probs.size() != n ||
      values.size() != n || dones.size() != n) {
    throw std::invalid_argument("Trajectory: sequences have different lengths");
  }
  for (double r : rewards) {
    if (!std::isfinite(r)) throw std::invalid_argument("Trajectory: non-finite reward");
  }
}

void Batch::clear() {
  obs.clear();
  actions.clear();
  log_probs.clear();
  advantages.clear();
  returns.clear();
}

void Batch::append(const Trajectory& traj, double bootstrap, double gamma, double lambda) {
  traj.check();
  const GaeResult g = gae(traj.rewards, traj.values, traj.dones, bootstrap, gamma, lambda);
  obs.insert(obs.end(), traj.obs.begin(), traj.obs.end());
  actions.insert(actions.end(), traj.actions.begin(), traj.actions.end());
  log_probs.insert(log_probs.end(), traj.log_probs.begin(), traj.log_probs.end());
  advantages.insert(advantages.end(), g.advantages.begin(), g.advantages.end());
  returns.insert(returns.end(), g.returns.begin(), g.returns.end());
}

Adam::Adam(int size, double b1, double b2, double e)
    : m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)),
      beta1(b1), beta2(b2), eps(e) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

void normalize_advantages(std::vector<double>& adv) {
  if (adv.empty()) return;
  const double n = static_cast<double>(adv.size());
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= n;
  const double sd = std::sqrt(var);
  for (double& a : adv) a = sd > 1e-8 ? (a - mean) / sd : a - mean;
}

LossReport ppo_loss(const PolicyNet& net, const Batch& batch, std::span<const int> idx,
                    const PpoConfig& cfg, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(idx.size());
  if (n == 0) throw std::invalid_argument("ppo_loss: empty minibatch");
  const ActionSpace& space = net.space();
  const int obs_size = net.obs_size();

  Eigen::MatrixXd x(obs_size, n);
  for (int i = 0; i < n; ++i) {
    const auto& o = batch.obs[idx[i]];
    if (static_cast<int>(o.size()) != obs_size) {
      throw std::invalid_argument("ppo_loss: observation size mismatch");
    }
    x.col(i) = Eigen::Map<const Eigen::VectorXd>(o.data(), obs_size);
  }
  Mlp::Cache actor_cache;
  Mlp::Cache critic_cache;
  const Eigen::MatrixXd head =
      net.actor.forward(net.params.data() + net.actor_offset(), x, grad ? &actor_cache : nullptr);
  const Eigen::MatrixXd value = net.critic.forward(net.params.data() + net.critic_offset(), x,
                                                   grad ? &critic_cache : nullptr);
  const Eigen::VectorXd log_std = net.log_std();

  Eigen::MatrixXd d_head;
  Eigen::MatrixXd d_value;
  Eigen::VectorXd d_log_std;
  if (grad) {
    d_head = Eigen::MatrixXd::Zero(head.rows(), n);
    d_value = Eigen::MatrixXd::Zero(1, n);
    d_log_std = Eigen::VectorXd::Zero(space.num_continuous());
  }

  LossReport r;
  const double inv_n = 1.0 / n;
  int clipped = 0;
  for (int i = 0; i < n; ++i) {
    const int s = idx[i];
    const double* h = head.col(i).data();
    const double lp = log_prob(space, h, log_std.data(), batch.actions[s]);
    const double ratio = std::exp(lp - batch.log_probs[s]);
    const double adv = batch.advantages[s];
    const double surr1 = ratio * adv;
    const double surr2 = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * adv;
    r.policy -= std::min(surr1, surr2) * inv_n;
    if (std::abs(ratio - 1.0) > cfg.clip_eps) ++clipped;
    const double ent = entropy(space, h, log_std.data());
    r.entropy += ent * inv_n;
    const double err = value(0, i) - batch.returns[s];
    r.value += err * err * inv_n;

    if (grad) {
      if (surr1 <= surr2) {
        log_prob_grad(space, h, log_std.data(), batch.actions[s], -adv * ratio * inv_n,
                      d_head.col(i).data(), d_log_std.data());
      }
      entropy_grad(space, h, log_std.data(), -cfg.entropy_coef * inv_n, d_head.col(i).data(),
                   d_log_std.data());
      d_value(0, i) = 2.0 * cfg.vf_coef * err * inv_n;
    }
  }
  r.clip_fraction = static_cast<double>(clipped) * inv_n;
  r.total = r.policy + cfg.vf_coef * r.value - cfg.entropy_coef * r.entropy;

  if (grad) {
    grad->setZero(net.params.size());
    net.actor.backward(net.params.data() + net.actor_offset(), actor_cache, d_head,
                       grad->data() + net.actor_offset());
    net.critic.backward(net.params.data() + net.critic_offset(), critic_cache, d_value,
                        grad->data() + net.critic_offset());
    // The clamp has zero slope outside the log-std range.
    const int k = space.num_continuous();
    for (int j = 0; j < k; ++j) {
      const double p = net.params[net.log_std_offset() + j];
      if (p >= kLogStdMin && p <= kLogStdMax) (*grad)[net.log_std_offset() + j] = d_log_std[j];
    }
  }
  return r;
}

namespace {

void clip_norm(Eigen::VectorXd& grad, Eigen::Index start, Eigen::Index len, double max_norm) {
  if (len == 0 || max_norm <= 0.0) return;
  auto seg = grad.segment(start, len);
  const double norm = seg.norm();
  if (norm > max_norm) seg *= max_norm / norm;
}

}  // namespace

LossReport ppo_update(PolicyNet& net, Adam& opt, Batch batch, const PpoConfig& cfg,
                      std::mt19937_64& rng) {
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw std::invalid_argument("ppo_update: empty batch");
  if (opt.m.size() != net.params.size()) {
    throw std::invalid_argument("ppo_update: optimizer does not match the network");
  }
  normalize_advantages(batch.advantages);

  const int mb = std::min(cfg.minibatch_size, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd grad;
  LossReport mean;
  int steps = 0;
  for (int epoch = 0; epoch < cfg.sgd_iters; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int start = 0; start < n; start += mb) {
      const int len = std::min(mb, n - start);
      const LossReport r =
          ppo_loss(net, batch, std::span<const int>(order.data() + start, len), cfg, &grad);
      if (!std::isfinite(r.total) || !grad.allFinite()) {
        std::ostringstream msg;
        msg << "ppo_update: non-finite loss at epoch " << epoch << " (policy " << r.policy
            << ", value " << r.value << ", entropy " << r.entropy << ")";
        throw NonFiniteLoss(msg.str());
      }
      clip_norm(grad, 0, net.policy_param_count(), cfg.max_grad_norm);
      clip_norm(grad, net.critic_offset(), net.critic.num_params(), cfg.max_grad_norm);
      opt.step(net.params, grad, cfg.learning_rate);
      net.clamp_log_std();

      mean.policy += r.policy;
      mean.value += r.value;
      mean.entropy += r.entropy;
      mean.clip_fraction += r.clip_fraction;
      mean.total += r.total;
      ++steps;
    }
  }
  if (steps > 0) {
    mean.policy /= steps;
    mean.value /= steps;
    mean.entropy /= steps;
    mean.clip_fraction /= steps;
    mean.total /= steps;
  }
  return mean;
}

}  // namespace specshare::ppo
