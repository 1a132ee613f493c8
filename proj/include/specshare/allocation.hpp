#ifndef SPECSHARE_ALLOCATION_HPP_
#define SPECSHARE_ALLOCATION_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specshare/config.hpp"
#include "specshare/topology.hpp"

namespace specshare {

// Beam x subband binary matrix; a subband goes to at most one beam.
struct GlobalAllocation {
  int beams = 0;
  int subbands = 0;
  std::vector<std::uint8_t> a;

  GlobalAllocation() = default;
  GlobalAllocation(int beams, int subbands)
      : beams(beams), subbands(subbands), a(beams * subbands, 0) {}

  std::uint8_t at(int b, int n) const { return a[b * subbands + n]; }
  std::uint8_t& at(int b, int n) { return a[b * subbands + n]; }
  // Beam owning subband n, or -1.
  int owner(int n) const;

  friend bool operator==(const GlobalAllocation&, const GlobalAllocation&) = default;
};

// Node x subband binary matrix over one region's serving nodes.
struct RegionalAllocation {
  int nodes = 0;
  int subbands = 0;
  std::vector<std::uint8_t> a;

  RegionalAllocation() = default;
  RegionalAllocation(int nodes, int subbands)
      : nodes(nodes), subbands(subbands), a(nodes * subbands, 0) {}

  std::uint8_t at(int m, int n) const { return a[m * subbands + n]; }
  std::uint8_t& at(int m, int n) { return a[m * subbands + n]; }
  int owner(int n) const;

  friend bool operator==(const RegionalAllocation&, const RegionalAllocation&) = default;
};

struct LocalAction {
  std::vector<std::uint8_t> beta;  // access mask per subband
  std::vector<double> alpha;       // power fraction per subband
  double dp_x = 0.0;
  double dp_y = 0.0;

  LocalAction() = default;
  explicit LocalAction(int subbands) : beta(subbands, 0), alpha(subbands, 0.0) {}

  bool active(int n) const { return beta[n] != 0; }

  friend bool operator==(const LocalAction&, const LocalAction&) = default;
};

// The nested allocation. `local` is indexed by serving-node index
// (region * nodes_per_region + slot).
struct AllocationState {
  GlobalAllocation global;
  std::vector<RegionalAllocation> regional;
  std::vector<LocalAction> local;

  static AllocationState zeros(const ScenarioConfig& cfg);

  const LocalAction& local_of(int region, int slot, int nodes_per_region) const {
    return local[region * nodes_per_region + slot];
  }

  friend bool operator==(const AllocationState&, const AllocationState&) = default;
};

struct Violation {
  std::string constraint;
  std::vector<int> indices;
  std::string message;
};

// Tolerance on the per-node power budget.
inline constexpr double kPowerBudgetTol = 1e-12;

// Returns the first violated constraint or nullopt. Throws
// std::invalid_argument on a dimension mismatch. `region_beam[i]` is the beam
// containing region i.
std::optional<Violation> validate(const AllocationState& state,
                                  const ScenarioConfig& cfg,
                                  const std::vector<int>& region_beam);
std::optional<Violation> validate(const AllocationState& state,
                                  const ScenarioConfig& cfg,
                                  const Topology& topo);

// Projects a raw local action onto the feasible set for `slot` of a region
// with allocation `regional`. Slots >= 2 are UAVs; TBS moves are zeroed.
LocalAction clamp_local(const LocalAction& raw,
                        const RegionalAllocation& regional, int slot,
                        double uav_step);

// Zeroes regional grants whose beam lacks the subband.
void mask_regional(RegionalAllocation& regional, const GlobalAllocation& global,
                   int beam);

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Yields every beam x subband matrix with at most one beam per subband, each
// exactly once, in odometer order (subband 0 varies fastest).
class GlobalEnumerator {
 public:
  GlobalEnumerator(int beams, int subbands, double cap);

  bool next(GlobalAllocation& out);
  double size() const { return size_; }

 private:
  int beams_;
  int subbands_;
  double size_;
  std::vector<int> digits_;  // per subband: 0 = unassigned, b+1 = beam b
  bool done_ = false;
};

void to_json(nlohmann::json& j, const GlobalAllocation& g);
void from_json(const nlohmann::json& j, GlobalAllocation& g);
void to_json(nlohmann::json& j, const RegionalAllocation& r);
void from_json(const nlohmann::json& j, RegionalAllocation& r);
void to_json(nlohmann::json& j, const LocalAction& l);
void from_json(const nlohmann::json& j, LocalAction& l);
void to_json(nlohmann::json& j, const AllocationState& s);
void from_json(const nlohmann::json& j, AllocationState& s);

}  // namespace specshare

#endif  // SPECSHARE_ALLOCATION_HPP_
