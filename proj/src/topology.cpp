#include "specshare/topology.hpp"

#include <cmath>

namespace specshare {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::kSatellite:
      return "satellite";
    case Tier::kHap:
      return "hap";
    case Tier::kTbs:
      return "tbs";
    case Tier::kUav:
      return "uav";
  }
  return "?";
}

std::vector<int> Topology::regions_of_hap(int hap) const {
  std::vector<int> out;
  for (int r = 0; r < static_cast<int>(regions.size()); ++r) {
    if (regions[r].hap == hap) out.push_back(r);
  }
  return out;
}

std::vector<int> Topology::regions_of_beam(int beam) const {
  std::vector<int> out;
  for (int r = 0; r < static_cast<int>(regions.size()); ++r) {
    if (regions[r].beam == beam) out.push_back(r);
  }
  return out;
}

std::vector<int> Topology::serving_nodes() const {
  std::vector<int> out;
  for (const auto& region : regions) {
    out.insert(out.end(), region.nodes.begin(), region.nodes.end());
  }
  return out;
}

int Topology::count(Tier tier) const {
  int n = 0;
  for (const auto& node : nodes) n += node.tier == tier ? 1 : 0;
  return n;
}

// Each HAP owns one grid row of `regions_per_hap` regions and a beam owns
// `haps_per_beam` consecutive rows, so every beam is a contiguous block.
Topology build_topology(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  Topology topo;
  topo.num_beams = cfg.beams;
  topo.num_haps = cfg.num_haps();

  const double w = cfg.region_width;
  const double h = cfg.region_height;
  const int cols = cfg.regions_per_hap;
  const int rows = cfg.num_haps();

  auto add_node = [&topo](Tier tier, Vec3 pos, double power) {
    Node n;
    n.id = static_cast<int>(topo.nodes.size());
    n.tier = tier;
    n.position = pos;
    n.tx_power_dbm = power;
    topo.nodes.push_back(n);
    return n.id;
  };

  const double sat_power = 0.5 * (cfg.tx_power_sat_min + cfg.tx_power_sat_max);
  const double hap_power = 0.5 * (cfg.tx_power_hap_min + cfg.tx_power_hap_max);

  topo.satellite = add_node(
      Tier::kSatellite, {0.5 * cols * w, 0.5 * rows * h, cfg.sat_altitude},
      sat_power);

  // HAPs sit above the centroid of their beam group. With the row layout the
  // beam group of a HAP is its beam's block of rows.
  for (int b = 0; b < cfg.beams; ++b) {
    const double y0 = b * cfg.haps_per_beam * h;
    const double y1 = (b + 1) * cfg.haps_per_beam * h;
    for (int k = 0; k < cfg.haps_per_beam; ++k) {
      const int id = add_node(Tier::kHap,
                              {0.5 * cols * w, 0.5 * (y0 + y1), cfg.hap_altitude},
                              hap_power);
      topo.nodes[id].beam = b;
      topo.nodes[id].hap = b * cfg.haps_per_beam + k;
    }
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int hap = 0; hap < rows; ++hap) {
    const int beam = hap / cfg.haps_per_beam;
    for (int c = 0; c < cols; ++c) {
      RegionInfo region;
      region.beam = beam;
      region.hap = hap;
      region.bounds = {c * w, hap * h, (c + 1) * w, (hap + 1) * h};
      const int region_id = static_cast<int>(topo.regions.size());

      const double cy = region.bounds.center_y();
      const Vec3 west{region.bounds.x_min + 0.25 * w, cy, 0.0};
      const Vec3 east{region.bounds.x_min + 0.75 * w, cy, 0.0};
      int slot = 0;
      for (const Vec3& pos : {west, east}) {
        const int id = add_node(Tier::kTbs, pos, cfg.tx_power_tbs);
        region.nodes.push_back(id);
        topo.nodes[id].slot = slot++;
      }
      for (int u = 0; u < cfg.uavs_per_region; ++u) {
        const int id = add_node(
            Tier::kUav,
            {region.bounds.center_x(), cy, cfg.uav_altitude}, cfg.tx_power_uav);
        region.nodes.push_back(id);
        topo.nodes[id].slot = slot++;
      }
      for (int id : region.nodes) {
        topo.nodes[id].beam = beam;
        topo.nodes[id].hap = hap;
        topo.nodes[id].region = region_id;
      }

      for (int k = 0; k < cfg.users_per_region; ++k) {
        const double x = region.bounds.x_min + unit(rng) * w;
        const double y = region.bounds.y_min + unit(rng) * h;
        region.users.push_back(static_cast<int>(topo.user_positions.size()));
        topo.user_positions.push_back({x, y, 0.0});
        topo.user_region.push_back(region_id);
      }
      topo.regions.push_back(std::move(region));
    }
  }
  return topo;
}

}  // namespace specshare
