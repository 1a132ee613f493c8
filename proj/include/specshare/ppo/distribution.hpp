#ifndef SPECSHARE_PPO_DISTRIBUTION_HPP_
#define SPECSHARE_PPO_DISTRIBUTION_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

namespace specshare::ppo {

struct Box {
  double lo = -1.0;
  double hi = 1.0;
};

// Factorized action space. The actor head is laid out as: logits of every
// categorical slot (concatenated), one logit per Bernoulli slot, one mean per
// continuous slot. Continuous slots are Gaussian draws squashed into their
// box with tanh; each has a state-independent log-std.
struct ActionSpace {
  std::vector<int> categorical;
  int bernoulli = 0;
  std::vector<Box> continuous;

  int num_logits() const;
  int head_size() const { return num_logits() + bernoulli + num_continuous(); }
  int num_continuous() const { return static_cast<int>(continuous.size()); }
  // Number of scalars in a flattened action.
  int flat_size() const {
    return static_cast<int>(categorical.size()) + bernoulli + num_continuous();
  }
};

struct Action {
  std::vector<int> categorical;
  std::vector<std::uint8_t> bernoulli;
  std::vector<double> raw;    // pre-squash Gaussian value
  std::vector<double> value;  // squashed into the slot's box
};

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

// `head` has space.head_size() entries, `log_std` space.num_continuous().
double log_prob(const ActionSpace& space, const double* head, const double* log_std,
                const Action& action);
double entropy(const ActionSpace& space, const double* head, const double* log_std);

// Adds scale * d(log_prob)/d(head, log_std).
void log_prob_grad(const ActionSpace& space, const double* head, const double* log_std,
                   const Action& action, double scale, double* d_head, double* d_log_std);
// Adds scale * d(entropy)/d(head, log_std).
void entropy_grad(const ActionSpace& space, const double* head, const double* log_std,
                  double scale, double* d_head, double* d_log_std);

// Draws an action; *logp (if given) is exactly log_prob() of the result.
Action sample_action(const ActionSpace& space, const double* head, const double* log_std,
                     std::mt19937_64& rng, double* logp = nullptr);
// Argmax logits, p >= 0.5 Bernoullis, squashed means.
Action mode_action(const ActionSpace& space, const double* head, const double* log_std);

double squash(double u, const Box& box);

void to_json(nlohmann::json& j, const ActionSpace& s);
void from_json(const nlohmann::json& j, ActionSpace& s);

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_DISTRIBUTION_HPP_
