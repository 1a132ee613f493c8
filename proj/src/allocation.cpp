#include "specshare/allocation.hpp"

#include <algorithm>
#include <cmath>

namespace specshare {

int GlobalAllocation::owner(int n) const {
  for (int b = 0; b < beams; ++b) {
    if (at(b, n)) return b;
  }
  return -1;
}

int RegionalAllocation::owner(int n) const {
  for (int m = 0; m < nodes; ++m) {
    if (at(m, n)) return m;
  }
  return -1;
}

AllocationState AllocationState::zeros(const ScenarioConfig& cfg) {
  AllocationState s;
  s.global = GlobalAllocation(cfg.beams, cfg.num_subbands);
  s.regional.assign(cfg.num_regions(),
                    RegionalAllocation(cfg.nodes_per_region(), cfg.num_subbands));
  s.local.assign(cfg.num_regions() * cfg.nodes_per_region(),
                 LocalAction(cfg.num_subbands));
  return s;
}

namespace {

Violation violation(std::string id, std::vector<int> idx, std::string msg) {
  return {std::move(id), std::move(idx), std::move(msg)};
}

void check_dims(const AllocationState& s, const ScenarioConfig& cfg,
                const std::vector<int>& region_beam) {
  const int n = cfg.num_subbands;
  const int m = cfg.nodes_per_region();
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("allocation: dimension mismatch in " + what);
  };
  if (s.global.beams != cfg.beams || s.global.subbands != n ||
      s.global.a.size() != static_cast<std::size_t>(cfg.beams * n)) {
    fail("global");
  }
  if (static_cast<int>(s.regional.size()) != cfg.num_regions() ||
      static_cast<int>(region_beam.size()) != cfg.num_regions()) {
    fail("regional");
  }
  for (const auto& r : s.regional) {
    if (r.nodes != m || r.subbands != n ||
        r.a.size() != static_cast<std::size_t>(m * n)) {
      fail("regional");
    }
  }
  if (static_cast<int>(s.local.size()) != cfg.num_regions() * m) fail("local");
  for (const auto& l : s.local) {
    if (static_cast<int>(l.beta.size()) != n ||
        static_cast<int>(l.alpha.size()) != n) {
      fail("local");
    }
  }
}

}  // namespace

std::optional<Violation> validate(const AllocationState& s,
                                  const ScenarioConfig& cfg,
                                  const std::vector<int>& region_beam) {
  check_dims(s, cfg, region_beam);
  const int N = cfg.num_subbands;
  const int M = cfg.nodes_per_region();

  for (int n = 0; n < N; ++n) {
    int sum = 0;
    for (int b = 0; b < cfg.beams; ++b) sum += s.global.at(b, n);
    if (sum > 1) {
      return violation("global_exclusive", {n},
                       "subband " + std::to_string(n) +
                           " allocated to more than one beam");
    }
  }

  for (int i = 0; i < cfg.num_regions(); ++i) {
    const auto& reg = s.regional[i];
    for (int n = 0; n < N; ++n) {
      int sum = 0;
      for (int m = 0; m < M; ++m) sum += reg.at(m, n);
      if (sum > 1) {
        return violation("regional_exclusive", {i, n},
                         "region " + std::to_string(i) + " subband " +
                             std::to_string(n) +
                             " allocated to more than one node");
      }
    }
    for (int m = 0; m < M; ++m) {
      for (int n = 0; n < N; ++n) {
        if (reg.at(m, n) > s.global.at(region_beam[i], n)) {
          return violation("regional_nesting", {i, m, n},
                           "region " + std::to_string(i) + " node " +
                               std::to_string(m) + " holds subband " +
                               std::to_string(n) + " its beam lacks");
        }
      }
    }
  }

  for (int i = 0; i < cfg.num_regions(); ++i) {
    for (int m = 0; m < M; ++m) {
      const LocalAction& l = s.local[i * M + m];
      double budget = 0.0;
      for (int n = 0; n < N; ++n) {
        if (l.beta[n] > s.regional[i].at(m, n)) {
          return violation("local_access", {i, m, n},
                           "node accesses a subband it was not granted");
        }
        if (!(l.alpha[n] >= 0.0 && l.alpha[n] <= 1.0)) {
          return violation("local_alpha_range", {i, m, n},
                           "power fraction outside [0, 1]");
        }
        if (l.beta[n]) budget += l.alpha[n];
      }
      if (budget > 1.0 + kPowerBudgetTol) {
        return violation("local_power_budget", {i, m},
                         "active power fractions sum above 1");
      }
      const bool uav = m >= 2;
      const double lim = uav ? cfg.uav_step : 0.0;
      if (!(std::abs(l.dp_x) <= lim && std::abs(l.dp_y) <= lim)) {
        return violation("local_move_range", {i, m},
                         uav ? "UAV move exceeds uav_step"
                             : "TBS cannot move");
      }
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate(const AllocationState& state,
                                  const ScenarioConfig& cfg,
                                  const Topology& topo) {
  std::vector<int> region_beam;
  for (const auto& r : topo.regions) region_beam.push_back(r.beam);
  return validate(state, cfg, region_beam);
}

LocalAction clamp_local(const LocalAction& raw,
                        const RegionalAllocation& regional, int slot,
                        double uav_step) {
  const int N = regional.subbands;
  if (static_cast<int>(raw.beta.size()) != N ||
      static_cast<int>(raw.alpha.size()) != N) {
    throw std::invalid_argument("clamp_local: action length mismatch");
  }
  LocalAction out(N);
  double budget = 0.0;
  for (int n = 0; n < N; ++n) {
    out.beta[n] = (raw.beta[n] && regional.at(slot, n)) ? 1 : 0;
    const double a = raw.alpha[n];
    out.alpha[n] = std::isnan(a) ? 0.0 : std::clamp(a, 0.0, 1.0);
    if (out.beta[n]) budget += out.alpha[n];
  }
  if (budget > 1.0 + kPowerBudgetTol) {
    const double scale = 1.0 / budget;
    for (double& a : out.alpha) a *= scale;
  }
  if (slot >= 2) {
    auto clip = [uav_step](double v) {
      return std::isnan(v) ? 0.0 : std::clamp(v, -uav_step, uav_step);
    };
    out.dp_x = clip(raw.dp_x);
    out.dp_y = clip(raw.dp_y);
  }
  return out;
}

void mask_regional(RegionalAllocation& regional, const GlobalAllocation& global,
                   int beam) {
  for (int m = 0; m < regional.nodes; ++m) {
    for (int n = 0; n < regional.subbands; ++n) {
      if (!global.at(beam, n)) regional.at(m, n) = 0;
    }
  }
}

GlobalEnumerator::GlobalEnumerator(int beams, int subbands, double cap)
    : beams_(beams),
      subbands_(subbands),
      size_(std::pow(static_cast<double>(beams + 1), subbands)),
      digits_(subbands, 0) {
  if (beams < 1 || subbands < 1) {
    throw std::invalid_argument("enumerate_global: beams and subbands must be >= 1");
  }
  if (size_ > cap) {
    throw SearchSpaceTooLarge("search space too large: " +
                              std::to_string(static_cast<long double>(size_)) +
                              " global allocations exceed cap " +
                              std::to_string(static_cast<long double>(cap)));
  }
}

bool GlobalEnumerator::next(GlobalAllocation& out) {
  if (done_) return false;
  out = GlobalAllocation(beams_, subbands_);
  for (int n = 0; n < subbands_; ++n) {
    if (digits_[n] > 0) out.at(digits_[n] - 1, n) = 1;
  }
  int n = 0;
  while (n < subbands_) {
    if (++digits_[n] <= beams_) break;
    digits_[n] = 0;
    ++n;
  }
  if (n == subbands_) done_ = true;
  return true;
}

void to_json(nlohmann::json& j, const GlobalAllocation& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (int b = 0; b < g.beams; ++b) {
    std::vector<int> row(g.subbands);
    for (int n = 0; n < g.subbands; ++n) row[n] = g.at(b, n);
    rows.push_back(row);
  }
  j = rows;
}

namespace {

template <typename Matrix>
void matrix_from_json(const nlohmann::json& j, Matrix& out, int& rows,
                      int& cols) {
  rows = static_cast<int>(j.size());
  cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  out.assign(rows * cols, 0);
  for (int r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<int>(row.size()) != cols) {
      throw std::invalid_argument("allocation json: ragged matrix");
    }
    for (int c = 0; c < cols; ++c) {
      out[r * cols + c] = static_cast<std::uint8_t>(row.at(c).get<int>());
    }
  }
}

}  // namespace

void from_json(const nlohmann::json& j, GlobalAllocation& g) {
  matrix_from_json(j, g.a, g.beams, g.subbands);
}

void to_json(nlohmann::json& j, const RegionalAllocation& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (int m = 0; m < r.nodes; ++m) {
    std::vector<int> row(r.subbands);
    for (int n = 0; n < r.subbands; ++n) row[n] = r.at(m, n);
    rows.push_back(row);
  }
  j = rows;
}

void from_json(const nlohmann::json& j, RegionalAllocation& r) {
  matrix_from_json(j, r.a, r.nodes, r.subbands);
}

void to_json(nlohmann::json& j, const LocalAction& l) {
  std::vector<int> beta(l.beta.begin(), l.beta.end());
  j = nlohmann::json{{"beta", beta}, {"alpha", l.alpha}, {"dp", {l.dp_x, l.dp_y}}};
}

void from_json(const nlohmann::json& j, LocalAction& l) {
  const auto beta = j.at("beta").get<std::vector<int>>();
  l.beta.assign(beta.begin(), beta.end());
  l.alpha = j.at("alpha").get<std::vector<double>>();
  l.dp_x = j.at("dp").at(0).get<double>();
  l.dp_y = j.at("dp").at(1).get<double>();
}

void to_json(nlohmann::json& j, const AllocationState& s) {
  j = nlohmann::json{{"global", s.global}, {"regional", s.regional}, {"local", s.local}};
}

void from_json(const nlohmann::json& j, AllocationState& s) {
  s.global = j.at("global").get<GlobalAllocation>();
  s.regional = j.at("regional").get<std::vector<RegionalAllocation>>();
  s.local = j.at("local").get<std::vector<LocalAction>>();
}

}  // namespace specshare
