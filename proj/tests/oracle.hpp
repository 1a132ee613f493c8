#ifndef SPECSHARE_TESTS_ORACLE_HPP_
#define SPECSHARE_TESTS_ORACLE_HPP_

#include <vector>

#include "specshare/allocation.hpp"
#include "specshare/config.hpp"
#include "specshare/topology.hpp"

namespace oracle {

struct Result {
  std::vector<int> server;             // node id per user, -1 if none
  std::vector<std::vector<double>> sinr;  // [user][subband]
  std::vector<double> rate;
  std::vector<double> eta;             // per region
  std::vector<double> fairness;
  std::vector<double> qos;
  std::vector<double> uav_penalty;
};

// Straight-line recomputation of association, interference, SINR, rates and
// the per-region metrics from raw inputs. Deliberately shares no code with
// the library beyond the input types.
Result evaluate(const specshare::Topology& topo, const std::vector<specshare::Vec3>& positions,
                const std::vector<double>& gains,  // nodes x users, row-major
                const specshare::AllocationState& alloc, const specshare::ScenarioConfig& cfg);

}  // namespace oracle

#endif  // SPECSHARE_TESTS_ORACLE_HPP_
