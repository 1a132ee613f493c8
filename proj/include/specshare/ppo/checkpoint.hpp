#ifndef SPECSHARE_PPO_CHECKPOINT_HPP_
#define SPECSHARE_PPO_CHECKPOINT_HPP_

#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "specshare/config.hpp"
#include "specshare/ppo/policy_net.hpp"
#include "specshare/ppo/ppo.hpp"

namespace specshare::ppo {

inline constexpr int kCheckpointVersion = 1;

// Doubles are written in shortest round-trip form, so save/load is bit-exact.
nlohmann::json net_to_json(const PolicyNet& net);
PolicyNet net_from_json(const nlohmann::json& j);

nlohmann::json adam_to_json(const Adam& opt);
Adam adam_from_json(const nlohmann::json& j);

nlohmann::json ppo_config_to_json(const PpoConfig& cfg);
PpoConfig ppo_config_from_json(const nlohmann::json& j);

std::string rng_to_string(const std::mt19937_64& rng);
std::mt19937_64 rng_from_string(const std::string& s);

}  // namespace specshare::ppo

#endif  // SPECSHARE_PPO_CHECKPOINT_HPP_
