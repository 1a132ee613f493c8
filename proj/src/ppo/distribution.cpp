#include "specshare/ppo/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace specshare::ppo {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 - tanh(u)^2), stable for large |u|.
double log_dtanh(double u) {
  return 2.0 * (std::numbers::ln2 - u - softplus(-2.0 * u));
}

// Softmax and log-softmax of one categorical slot.
void softmax(const double* z, int k, std::vector<double>& p, std::vector<double>& logp) {
  const double mx = *std::max_element(z, z + k);
  double sum = 0.0;
  p.resize(k);
  logp.resize(k);
  for (int i = 0; i < k; ++i) {
    p[i] = std::exp(z[i] - mx);
    sum += p[i];
  }
  const double log_sum = std::log(sum);
  for (int i = 0; i < k; ++i) {
    p[i] /= sum;
    logp[i] = z[i] - mx - log_sum;
  }
}

}  // namespace

int ActionSpace::num_logits() const {
  return std::accumulate(categorical.begin(), categorical.end(), 0);
}

double squash(double u, const Box& box) {
  return box.lo + (box.hi - box.lo) * 0.5 * (std::tanh(u) + 1.0);
}

double log_prob(const ActionSpace& space, const double* head, const double* log_std,
                const Action& action) {
  double lp = 0.0;
  std::vector<double> p;
  std::vector<double> logp;
  const double* z = head;
  for (std::size_t s = 0; s < space.categorical.size(); ++s) {
    const int k = space.categorical[s];
    softmax(z, k, p, logp);
    lp += logp[action.categorical[s]];
    z += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) {
    lp += action.bernoulli[i] ? -softplus(-z[i]) : -softplus(z[i]);
  }
  z += space.bernoulli;
  for (int i = 0; i < space.num_continuous(); ++i) {
    const double u = action.raw[i];
    const double x = (u - z[i]) * std::exp(-log_std[i]);
    const Box& box = space.continuous[i];
    lp += -0.5 * x * x - log_std[i] - kHalfLog2Pi;
    lp -= std::log(0.5 * (box.hi - box.lo)) + log_dtanh(u);
  }
  return lp;
}

double entropy(const ActionSpace& space, const double* head, const double* log_std) {
  double h = 0.0;
  std::vector<double> p;
  std::vector<double> logp;
  const double* z = head;
  for (int k : space.categorical) {
    softmax(z, k, p, logp);
    for (int i = 0; i < k; ++i) h -= p[i] * logp[i];
    z += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) {
    const double q = sigmoid(z[i]);
    h += q * softplus(-z[i]) + (1.0 - q) * softplus(z[i]);
  }
  // Entropy of the pre-squash Gaussian.
  for (int i = 0; i < space.num_continuous(); ++i) h += log_std[i] + 0.5 + kHalfLog2Pi;
  return h;
}

void log_prob_grad(const ActionSpace& space, const double* head, const double* log_std,
                   const Action& action, double scale, double* d_head, double* d_log_std) {
  std::vector<double> p;
  std::vector<double> logp;
  const double* z = head;
  double* dz = d_head;
  for (std::size_t s = 0; s < space.categorical.size(); ++s) {
    const int k = space.categorical[s];
    softmax(z, k, p, logp);
    for (int i = 0; i < k; ++i) dz[i] -= scale * p[i];
    dz[action.categorical[s]] += scale;
    z += k;
    dz += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) {
    dz[i] += scale * (static_cast<double>(action.bernoulli[i]) - sigmoid(z[i]));
  }
  z += space.bernoulli;
  dz += space.bernoulli;
  for (int i = 0; i < space.num_continuous(); ++i) {
    const double inv_var = std::exp(-2.0 * log_std[i]);
    const double diff = action.raw[i] - z[i];
    dz[i] += scale * diff * inv_var;
    d_log_std[i] += scale * (diff * diff * inv_var - 1.0);
  }
}

void entropy_grad(const ActionSpace& space, const double* head, const double* log_std,
                  double scale, double* d_head, double* d_log_std) {
  (void)log_std;
  std::vector<double> p;
  std::vector<double> logp;
  const double* z = head;
  double* dz = d_head;
  for (int k : space.categorical) {
    softmax(z, k, p, logp);
    double h = 0.0;
    for (int i = 0; i < k; ++i) h -= p[i] * logp[i];
    for (int i = 0; i < k; ++i) dz[i] -= scale * p[i] * (logp[i] + h);
    z += k;
    dz += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) {
    // dH/dz = -q(1-q) z for the logit parameterization.
    const double q = sigmoid(z[i]);
    dz[i] -= scale * q * (1.0 - q) * z[i];
  }
  for (int i = 0; i < space.num_continuous(); ++i) d_log_std[i] += scale;
}

Action sample_action(const ActionSpace& space, const double* head, const double* log_std,
                     std::mt19937_64& rng, double* logp) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Action a;
  std::vector<double> p;
  std::vector<double> lp;
  const double* z = head;
  for (int k : space.categorical) {
    softmax(z, k, p, lp);
    const double r = uniform(rng);
    double c = 0.0;
    int pick = k - 1;
    for (int i = 0; i < k; ++i) {
      c += p[i];
      if (r < c) {
        pick = i;
        break;
      }
    }
    a.categorical.push_back(pick);
    z += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) {
    a.bernoulli.push_back(uniform(rng) < sigmoid(z[i]) ? 1 : 0);
  }
  z += space.bernoulli;
  for (int i = 0; i < space.num_continuous(); ++i) {
    const double u = z[i] + std::exp(log_std[i]) * normal(rng);
    a.raw.push_back(u);
    a.value.push_back(squash(u, space.continuous[i]));
  }
  if (logp != nullptr) *logp = log_prob(space, head, log_std, a);
  return a;
}

Action mode_action(const ActionSpace& space, const double* head, const double* log_std) {
  (void)log_std;
  Action a;
  const double* z = head;
  for (int k : space.categorical) {
    a.categorical.push_back(static_cast<int>(std::max_element(z, z + k) - z));
    z += k;
  }
  for (int i = 0; i < space.bernoulli; ++i) a.bernoulli.push_back(z[i] >= 0.0 ? 1 : 0);
  z += space.bernoulli;
  for (int i = 0; i < space.num_continuous(); ++i) {
    a.raw.push_back(z[i]);
    a.value.push_back(squash(z[i], space.continuous[i]));
  }
  return a;
}

void to_json(nlohmann::json& j, const ActionSpace& s) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const Box& b : s.continuous) boxes.push_back({b.lo, b.hi});
  j = {{"categorical", s.categorical}, {"bernoulli", s.bernoulli}, {"continuous", boxes}};
}

void from_json(const nlohmann::json& j, ActionSpace& s) {
  s.categorical = j.at("categorical").get<std::vector<int>>();
  s.bernoulli = j.at("bernoulli").get<int>();
  s.continuous.clear();
  for (const auto& b : j.at("continuous")) {
    s.continuous.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  }
}

}  // namespace specshare::ppo
