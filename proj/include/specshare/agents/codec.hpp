#ifndef SPECSHARE_AGENTS_CODEC_HPP_
#define SPECSHARE_AGENTS_CODEC_HPP_

#include <vector>

#include "specshare/allocation.hpp"
#include "specshare/config.hpp"
#include "specshare/env.hpp"
#include "specshare/ppo/distribution.hpp"

// Mapping between policy actions and allocation structures.
namespace specshare::codec {

// N slots of arity B+1: 0 = unassigned, b+1 = beam b.
ppo::ActionSpace global_space(const ScenarioConfig& cfg);
// N slots of arity M+1 per region: 0 = unassigned, m+1 = node slot m.
ppo::ActionSpace regional_space(const ScenarioConfig& cfg, int regions);
// N Bernoulli access bits, N power fractions in [0, 1], 2 moves in
// [-uav_step, uav_step].
ppo::ActionSpace local_space(const ScenarioConfig& cfg);
// Global, then every region, then every serving node.
ppo::ActionSpace joint_space(const ScenarioConfig& cfg);
// One region's allocation slots plus the local slots of its nodes.
ppo::ActionSpace region_space(const ScenarioConfig& cfg);

// `slots` points at N categorical values.
GlobalAllocation decode_global(const int* slots, const ScenarioConfig& cfg);
RegionalAllocation decode_regional(const int* slots, const ScenarioConfig& cfg);
// `bits` has N entries, `values` N power fractions followed by the move.
LocalAction decode_local(const std::uint8_t* bits, const double* values,
                         const ScenarioConfig& cfg);

// Concatenation of the global observation, every HAP's regional observation
// and every serving node's local observation, all against the current
// allocation.
std::vector<double> joint_observation(const Env& env);
int joint_observation_size(const ScenarioConfig& cfg);

// All subbands granted, subband n to beam n mod B.
GlobalAllocation round_robin_global(const ScenarioConfig& cfg);

// Every granted subband active with an equal share of the power budget; no
// movement.
LocalAction heuristic_local(const RegionalAllocation& regional, int slot);

}  // namespace specshare::codec

#endif  // SPECSHARE_AGENTS_CODEC_HPP_
