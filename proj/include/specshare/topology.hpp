#ifndef SPECSHARE_TOPOLOGY_HPP_
#define SPECSHARE_TOPOLOGY_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "specshare/config.hpp"

namespace specshare {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double distance(const Vec3& a, const Vec3& b);

enum class Tier { kSatellite, kHap, kTbs, kUav };

const char* to_string(Tier tier);

struct Node {
  int id = 0;
  Tier tier = Tier::kTbs;
  Vec3 position;
  double tx_power_dbm = 0.0;
  int beam = -1;    // -1 for the satellite
  int hap = -1;     // global HAP index, -1 above the HAP tier
  int region = -1;  // global region index, -1 above the region tier
  int slot = -1;    // index among the region's serving nodes, -1 otherwise
};

// Closed axis-aligned rectangle on the ground plane.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

struct RegionInfo {
  int beam = 0;
  int hap = 0;
  Rect bounds;
  // Node ids of the serving nodes: TBS west, TBS east, then UAVs.
  std::vector<int> nodes;
  // Global user ids, contiguous.
  std::vector<int> users;
};

// Static network geometry. Immutable once built; UAV motion is tracked by the
// environment, not here.
struct Topology {
  std::vector<Node> nodes;
  std::vector<RegionInfo> regions;
  std::vector<Vec3> user_positions;
  std::vector<int> user_region;
  int satellite = 0;

  int num_beams = 0;
  int num_haps = 0;

  std::vector<int> regions_of_hap(int hap) const;
  std::vector<int> regions_of_beam(int beam) const;
  std::vector<int> serving_nodes() const;
  int count(Tier tier) const;
};

Topology build_topology(const ScenarioConfig& cfg, std::mt19937_64& rng);

}  // namespace specshare

#endif  // SPECSHARE_TOPOLOGY_HPP_
