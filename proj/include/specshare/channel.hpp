#ifndef SPECSHARE_CHANNEL_HPP_
#define SPECSHARE_CHANNEL_HPP_

#include <random>
#include <vector>

#include "specshare/allocation.hpp"
#include "specshare/config.hpp"
#include "specshare/topology.hpp"

namespace specshare {

// Free-space path loss in dB. Throws std::invalid_argument for d <= 0.
double path_loss_db(double distance_m, double carrier_hz);

// Small-scale power factor with unit mean: Rician (K-factor in dB) for
// satellite and HAP links, Rayleigh for TBS and UAV links.
double fading_gain(Tier tier, std::mt19937_64& rng, double rician_k_db = 10.0);

// Linear power gain for every (node, user) pair, row-major by node.
struct GainMatrix {
  int nodes = 0;
  int users = 0;
  std::vector<double> g;

  GainMatrix() = default;
  GainMatrix(int nodes, int users) : nodes(nodes), users(users), g(nodes * users, 0.0) {}

  double at(int node, int user) const { return g[node * users + user]; }
  double& at(int node, int user) { return g[node * users + user]; }
};

struct ChannelSnapshot {
  GainMatrix gains;
  std::vector<int> serving;  // node id serving each user, -1 when unserved
  int subbands = 0;
  std::vector<double> interference;  // watts, user-major (users x subbands)

  double interference_at(int user, int n) const {
    return interference[user * subbands + n];
  }
};

// Gains at the given node positions. With cfg.fading_frozen every random
// factor is 1 and shadowing is 0 dB, so no draws are taken from `rng`.
GainMatrix compute_gains(const Topology& topo, const std::vector<Vec3>& node_positions,
                         const ScenarioConfig& cfg, std::mt19937_64& rng);

// Each user attaches to the in-region serving node with the highest gain
// among nodes actively transmitting on at least one subband.
std::vector<int> associate_users(const Topology& topo, const GainMatrix& gains,
                                 const AllocationState& alloc,
                                 const ScenarioConfig& cfg);

// Co-channel interference per (user, subband): every transmitter other than
// the user's server that is active on the subband, weighted by its power
// fraction. Under InterferenceScope::kRegion only same-region transmitters
// count.
std::vector<double> compute_interference(const Topology& topo,
                                         const GainMatrix& gains,
                                         const AllocationState& alloc,
                                         const std::vector<int>& serving,
                                         const ScenarioConfig& cfg);

ChannelSnapshot compute_snapshot(const Topology& topo,
                                 const std::vector<Vec3>& node_positions,
                                 const AllocationState& alloc,
                                 const ScenarioConfig& cfg, std::mt19937_64& rng);

// Snapshot from known gains (replay, exhaustive search).
ChannelSnapshot snapshot_from_gains(const Topology& topo, GainMatrix gains,
                                    const AllocationState& alloc,
                                    const ScenarioConfig& cfg);

// Index of node `node_id` among serving nodes (region * M + slot).
int serving_index(const Topology& topo, int node_id);

}  // namespace specshare

#endif  // SPECSHARE_CHANNEL_HPP_
