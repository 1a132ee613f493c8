#include "specshare/env.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "specshare/trace.hpp"

namespace specshare {

double normalize_gain_db(double gain_db) {
  return std::clamp((gain_db + 160.0) / 100.0, 0.0, 1.0);
}

namespace {

double gain_feature(double linear) {
  if (!(linear > 0.0)) return 0.0;
  return normalize_gain_db(10.0 * std::log10(linear));
}

double unit_clip(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Env::Env(ScenarioConfig cfg, std::optional<DecisionSchedule> schedule)
    : cfg_(std::move(cfg)),
      schedule_(schedule.value_or(DecisionSchedule::from_config(cfg_))) {
  cfg_.validate();
  if (schedule_.global < 1 || schedule_.regional < 1 || schedule_.local < 1) {
    throw std::invalid_argument("Env: decision intervals must be >= 1");
  }
  reset(cfg_.seed);
}

void Env::reset(std::uint64_t seed, std::uint64_t episode) {
  seed_ = seed;
  episode_ = episode;
  std::mt19937_64 topo_rng(seed);
  topo_ = build_topology(cfg_, topo_rng);
  std::seed_seq channel_seed{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(episode), static_cast<std::uint32_t>(episode >> 32)};
  rng_.seed(channel_seed);
  region_beam_.clear();
  for (const auto& r : topo_.regions) region_beam_.push_back(r.beam);
  alloc_ = AllocationState::zeros(cfg_);
  positions_.clear();
  for (const auto& n : topo_.nodes) positions_.push_back(n.position);
  snapshot_ = compute_snapshot(topo_, positions_, alloc_, cfg_, rng_);
  metrics_ = compute_step_metrics(topo_, positions_, alloc_, snapshot_, cfg_);
  t_ = 0;
  truncated_ = false;
  write_trace_header();
}

AllocationState Env::preview(
    const std::optional<GlobalAllocation>& global,
    const std::optional<std::vector<RegionalAllocation>>& regional) const {
  AllocationState next = alloc_;
  if (global) {
    if (global->beams != cfg_.beams || global->subbands != cfg_.num_subbands ||
        global->a.size() != static_cast<std::size_t>(cfg_.beams * cfg_.num_subbands)) {
      throw std::invalid_argument("Env: global action has wrong shape");
    }
    next.global = *global;
    for (int n = 0; n < cfg_.num_subbands; ++n) {
      int sum = 0;
      for (int b = 0; b < cfg_.beams; ++b) sum += next.global.at(b, n);
      if (sum > 1) {
        throw std::invalid_argument("Env: global action assigns subband " +
                                    std::to_string(n) + " to several beams");
      }
    }
  }
  if (regional) {
    if (static_cast<int>(regional->size()) != cfg_.num_regions()) {
      throw std::invalid_argument("Env: regional action has wrong region count");
    }
    next.regional = *regional;
  }
  for (int r = 0; r < cfg_.num_regions(); ++r) {
    RegionalAllocation& reg = next.regional[r];
    if (reg.nodes != cfg_.nodes_per_region() || reg.subbands != cfg_.num_subbands ||
        reg.a.size() != static_cast<std::size_t>(reg.nodes * reg.subbands)) {
      throw std::invalid_argument("Env: regional action has wrong shape");
    }
    mask_regional(reg, next.global, region_beam_[r]);
    for (int n = 0; n < cfg_.num_subbands; ++n) {
      int sum = 0;
      for (int m = 0; m < reg.nodes; ++m) sum += reg.at(m, n);
      if (sum > 1) {
        throw std::invalid_argument("Env: regional action assigns subband " +
                                    std::to_string(n) + " to several nodes");
      }
    }
  }
  return next;
}

StepResult Env::step(const ActionBundle& actions) {
  if (truncated_) throw std::logic_error("Env: step after episode end; call reset");

  auto gate = [](bool due, bool given, const char* tier) {
    if (given && !due) {
      throw ScheduleError(std::string("off-schedule action: ") + tier);
    }
    if (due && !given) {
      throw ScheduleError(std::string("missing required action: ") + tier);
    }
  };
  const bool g_due = global_due();
  const bool r_due = regional_due();
  gate(g_due, actions.global.has_value(), "global");
  gate(r_due, actions.regional.has_value(), "regional");
  gate(local_due(), actions.local.has_value(), "local");

  AllocationState next = preview(actions.global, actions.regional);

  const int M = cfg_.nodes_per_region();
  const int S = num_serving();
  if (actions.local && static_cast<int>(actions.local->size()) != S) {
    throw std::invalid_argument("Env: expected one local action per serving node");
  }
  for (int j = 0; j < S; ++j) {
    const LocalAction& raw = actions.local ? (*actions.local)[j] : alloc_.local[j];
    LocalAction l = clamp_local(raw, next.regional[j / M], j % M, cfg_.uav_step);
    if (alpha_scale_ != 1.0) {
      for (double& a : l.alpha) a = std::clamp(a * alpha_scale_, 0.0, 1.0);
    }
    next.local[j] = std::move(l);
  }
  alloc_ = std::move(next);

  // UAVs move and may leave their region; they are only held back by a wall
  // three region-widths across, centred on the region.
  for (int r = 0; r < cfg_.num_regions(); ++r) {
    const Rect& b = topo_.regions[r].bounds;
    for (int slot = 2; slot < M; ++slot) {
      const int node = topo_.regions[r].nodes[slot];
      const LocalAction& l = alloc_.local[r * M + slot];
      Vec3& p = positions_[node];
      p.x = std::clamp(p.x + l.dp_x, b.center_x() - 1.5 * b.width(),
                       b.center_x() + 1.5 * b.width());
      p.y = std::clamp(p.y + l.dp_y, b.center_y() - 1.5 * b.height(),
                       b.center_y() + 1.5 * b.height());
    }
  }

  snapshot_ = compute_snapshot(topo_, positions_, alloc_, cfg_, rng_);
  metrics_ = compute_step_metrics(topo_, positions_, alloc_, snapshot_, cfg_);

  const int t = t_;
  ++t_;
  truncated_ = t_ >= cfg_.steps_per_episode;
  write_trace_step(t, g_due, r_due);

  StepResult res;
  res.rewards = metrics_.rewards;
  res.truncated = truncated_;
  res.global_decision = g_due;
  res.regional_decision = r_due;
  return res;
}

int global_obs_size(const ScenarioConfig& cfg) { return cfg.num_subbands + 2 * cfg.beams; }

int regional_obs_size(const ScenarioConfig& cfg) {
  return cfg.num_subbands + 2 * cfg.regions_per_hap * cfg.nodes_per_region();
}

int local_obs_size(const ScenarioConfig& cfg) {
  return 2 * cfg.num_subbands + 3 * cfg.users_per_region + 2;
}

int Env::global_obs_size() const { return specshare::global_obs_size(cfg_); }
int Env::regional_obs_size() const { return specshare::regional_obs_size(cfg_); }
int Env::local_obs_size() const { return specshare::local_obs_size(cfg_); }

std::vector<double> Env::observe_global() const {
  std::vector<double> obs;
  obs.reserve(global_obs_size());
  // Every subband is available to the satellite.
  for (int n = 0; n < cfg_.num_subbands; ++n) obs.push_back(1.0);

  const double total_users = static_cast<double>(topo_.user_positions.size());
  std::vector<double> users(cfg_.beams, 0.0);
  std::vector<double> gain(cfg_.beams, 0.0);
  for (const auto& region : topo_.regions) {
    for (int u : region.users) {
      double best = 0.0;
      for (int node : region.nodes) best = std::max(best, snapshot_.gains.at(node, u));
      users[region.beam] += 1.0;
      gain[region.beam] += gain_feature(best);
    }
  }
  for (int b = 0; b < cfg_.beams; ++b) obs.push_back(users[b] / total_users);
  for (int b = 0; b < cfg_.beams; ++b) {
    obs.push_back(users[b] > 0 ? gain[b] / users[b] : 0.0);
  }
  return obs;
}

std::vector<double> Env::observe_regional(int hap, const AllocationState& alloc) const {
  if (hap < 0 || hap >= cfg_.num_haps()) {
    throw std::out_of_range("Env: unknown HAP " + std::to_string(hap));
  }
  std::vector<double> obs;
  obs.reserve(regional_obs_size());
  const int beam = hap / cfg_.haps_per_beam;
  for (int n = 0; n < cfg_.num_subbands; ++n) obs.push_back(alloc.global.at(beam, n));

  // Load: share of region users for which the node is the strongest server.
  std::vector<double> load;
  std::vector<double> gain;
  for (int r : topo_.regions_of_hap(hap)) {
    const RegionInfo& region = topo_.regions[r];
    std::vector<double> best_count(region.nodes.size(), 0.0);
    std::vector<double> gain_sum(region.nodes.size(), 0.0);
    for (int u : region.users) {
      int arg = 0;
      for (std::size_t m = 0; m < region.nodes.size(); ++m) {
        const double g = snapshot_.gains.at(region.nodes[m], u);
        gain_sum[m] += gain_feature(g);
        if (g > snapshot_.gains.at(region.nodes[arg], u)) arg = static_cast<int>(m);
      }
      best_count[arg] += 1.0;
    }
    const double k = static_cast<double>(region.users.size());
    for (std::size_t m = 0; m < region.nodes.size(); ++m) {
      load.push_back(best_count[m] / k);
      gain.push_back(gain_sum[m] / k);
    }
  }
  obs.insert(obs.end(), load.begin(), load.end());
  obs.insert(obs.end(), gain.begin(), gain.end());
  return obs;
}

std::vector<double> Env::observe_local(int serving, const AllocationState& alloc) const {
  if (serving < 0 || serving >= num_serving()) {
    throw std::out_of_range("Env: unknown serving node " + std::to_string(serving));
  }
  const int M = cfg_.nodes_per_region();
  const int r = serving / M;
  const int slot = serving % M;
  const RegionInfo& region = topo_.regions[r];
  const Rect& b = region.bounds;
  const int node = region.nodes[slot];

  std::vector<double> obs;
  obs.reserve(local_obs_size());
  for (int n = 0; n < cfg_.num_subbands; ++n) obs.push_back(alloc.regional[r].at(slot, n));
  for (int u : region.users) {
    obs.push_back(unit_clip((topo_.user_positions[u].x - b.x_min) / b.width()));
    obs.push_back(unit_clip((topo_.user_positions[u].y - b.y_min) / b.height()));
  }
  obs.push_back(unit_clip((positions_[node].x - b.x_min) / b.width()));
  obs.push_back(unit_clip((positions_[node].y - b.y_min) / b.height()));
  for (int u : region.users) obs.push_back(gain_feature(snapshot_.gains.at(node, u)));
  for (int n = 0; n < cfg_.num_subbands; ++n) {
    double sum = 0.0;
    for (int u : region.users) sum += snapshot_.interference_at(u, n);
    obs.push_back(gain_feature(sum / static_cast<double>(region.users.size())));
  }
  return obs;
}

std::vector<double> Env::observe(ObsTier tier, int entity) const {
  switch (tier) {
    case ObsTier::kGlobal:
      if (entity != 0) throw std::out_of_range("Env: the global tier has one entity");
      return observe_global();
    case ObsTier::kRegional:
      return observe_regional(entity);
    case ObsTier::kLocal:
      return observe_local(entity);
  }
  throw std::out_of_range("Env: unknown tier");
}

void Env::write_trace_header() const {
  if (trace_ == nullptr) return;
  nlohmann::json j = {{"kind", "header"},
                      {"version", kTraceVersion},
                      {"config", dump_config(cfg_)},
                      {"seed", seed_},
                      {"episode", episode_},
                      {"schedule", {schedule_.global, schedule_.regional, schedule_.local}}};
  *trace_ << j.dump() << '\n';
}

void Env::write_trace_step(int t, bool global, bool regional) const {
  if (trace_ == nullptr) return;
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : positions_) positions.push_back({p.x, p.y, p.z});
  nlohmann::json j = {{"kind", "step"},
                      {"t", t},
                      {"global", global},
                      {"regional", regional},
                      {"alloc", alloc_},
                      {"positions", positions},
                      {"gains", snapshot_.gains.g},
                      {"metrics", metrics_to_json(metrics_)}};
  *trace_ << j.dump() << '\n';
}

EpisodeSummary episode_summary(std::span<const StepMetrics> trace) {
  if (trace.empty()) throw std::invalid_argument("episode_summary: empty trace");
  EpisodeSummary s;
  for (const auto& m : trace) {
    s.r_avg += m.r_avg;
    s.eta += m.eta;
    s.fairness += m.fairness;
    s.cumulative_reward += m.rewards.r_s;
  }
  const double n = static_cast<double>(trace.size());
  s.r_avg /= n;
  s.eta /= n;
  s.fairness /= n;
  return s;
}

}  // namespace specshare
