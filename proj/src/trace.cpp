#include "specshare/trace.hpp"

#include <cmath>

#include "specshare/channel.hpp"
#include "specshare/env.hpp"

namespace specshare {

nlohmann::json metrics_to_json(const StepMetrics& m) {
  nlohmann::json regions = nlohmann::json::array();
  for (std::size_t r = 0; r < m.regions.size(); ++r) {
    const RegionMetrics& rm = m.regions[r];
    regions.push_back({{"eta", rm.eta},
                       {"fairness", rm.fairness},
                       {"qos", rm.qos},
                       {"uav_penalty", rm.uav_penalty},
                       {"mean_rate", rm.mean_rate},
                       {"throughput", rm.throughput},
                       {"r_l", m.rewards.r_l[r]}});
  }
  return {{"rate", m.rate},
          {"regions", regions},
          {"r_h", m.rewards.r_h},
          {"r_s", m.rewards.r_s},
          {"r_avg", m.r_avg},
          {"eta", m.eta},
          {"fairness", m.fairness}};
}

namespace {

// Walks two JSON values of the same shape and tracks the largest numeric
// difference.
void compare(const nlohmann::json& logged, const nlohmann::json& fresh,
             const std::string& path, double& worst, std::string& worst_path) {
  if (logged.is_number() && fresh.is_number()) {
    const double d = std::abs(logged.get<double>() - fresh.get<double>());
    if (d > worst || std::isnan(d)) {
      worst = std::isnan(d) ? INFINITY : d;
      worst_path = path;
    }
    return;
  }
  if (logged.is_array() && fresh.is_array()) {
    if (logged.size() != fresh.size()) throw TraceError("trace: shape mismatch at " + path);
    for (std::size_t i = 0; i < logged.size(); ++i) {
      compare(logged[i], fresh[i], path + "[" + std::to_string(i) + "]", worst, worst_path);
    }
    return;
  }
  if (logged.is_object() && fresh.is_object()) {
    for (const auto& [key, value] : fresh.items()) {
      if (!logged.contains(key)) throw TraceError("trace: missing field " + path + "." + key);
      compare(logged.at(key), value, path + "." + key, worst, worst_path);
    }
    return;
  }
  throw TraceError("trace: type mismatch at " + path);
}

}  // namespace

ReplayReport replay_trace(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::optional<ScenarioConfig> cfg;
  Topology topo;
  ReplayReport report;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TraceError("trace: line " + std::to_string(line_no) + " is not JSON: " + e.what());
    }
    try {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        if (j.at("version").get<int>() != kTraceVersion) {
          throw TraceError("trace: unsupported version");
        }
        cfg = parse_config(j.at("config").get<std::string>());
        std::mt19937_64 rng(j.at("seed").get<std::uint64_t>());
        topo = build_topology(*cfg, rng);
        continue;
      }
      if (kind != "step") throw TraceError("trace: unknown record kind '" + kind + "'");
      if (!cfg) throw TraceError("trace: step record before header");

      const auto alloc = j.at("alloc").get<AllocationState>();
      std::vector<Vec3> positions;
      for (const auto& p : j.at("positions")) {
        positions.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      }
      GainMatrix gains(static_cast<int>(topo.nodes.size()),
                       static_cast<int>(topo.user_positions.size()));
      gains.g = j.at("gains").get<std::vector<double>>();
      if (gains.g.size() != static_cast<std::size_t>(gains.nodes * gains.users) ||
          positions.size() != topo.nodes.size()) {
        throw TraceError("trace: line " + std::to_string(line_no) + " has wrong dimensions");
      }
      const ChannelSnapshot snap = snapshot_from_gains(topo, std::move(gains), alloc, *cfg);
      const StepMetrics fresh = compute_step_metrics(topo, positions, alloc, snap, *cfg);

      double worst = 0.0;
      std::string where;
      compare(j.at("metrics"), metrics_to_json(fresh), "metrics", worst, where);
      if (worst > report.max_abs_deviation) {
        report.max_abs_deviation = worst;
        report.worst_line = line_no;
        report.worst_field = where;
      }
      ++report.steps;
      if (j.at("global").get<bool>()) ++report.global_decisions;
      if (j.at("regional").get<bool>()) report.regional_decisions += cfg->num_haps();
    } catch (const nlohmann::json::exception& e) {
      throw TraceError("trace: line " + std::to_string(line_no) + " malformed: " + e.what());
    } catch (const std::invalid_argument& e) {
      throw TraceError("trace: line " + std::to_string(line_no) + " invalid: " + e.what());
    }
  }
  if (report.steps == 0) throw TraceError("trace: no step records");
  return report;
}

}  // namespace specshare
