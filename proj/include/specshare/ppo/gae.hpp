#ifndef SPECSHARE_PPO_GAE_HPP_
#define SPECSHARE_PPO_GAE_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace specshare::ppo {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Generalized advantage estimates for one trajectory. dones[t] = 1 cuts the
// bootstrap after step t; `bootstrap` is V of the state after the last step.
// Throws std::invalid_argument on length mismatch.
GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              std::span<const std::uint8_t> dones, double bootstrap, double gamma,
              double lambda);

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_GAE_HPP_
