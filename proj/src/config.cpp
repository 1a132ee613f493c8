#include "specshare/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace specshare {

namespace {

struct Field {
  const char* section;
  const char* key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: field '" + key + "' expects a number, got '" +
                      v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config: field '" + key + "' expects an integer, got '" +
                      v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: field '" + key + "' expects true/false, got '" +
                    v + "'");
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

template <typename T>
Field int_field(const char* section, const char* key, T ScenarioConfig::*m) {
  return {section, key,
          [key, m](ScenarioConfig& c, const std::string& v) {
            c.*m = static_cast<T>(parse_int(key, v));
          },
          [m](const ScenarioConfig& c) { return std::to_string(c.*m); }};
}

Field dbl_field(const char* section, const char* key,
                double ScenarioConfig::*m) {
  return {section, key,
          [key, m](ScenarioConfig& c, const std::string& v) {
            c.*m = parse_double(key, v);
          },
          [m](const ScenarioConfig& c) { return fmt_double(c.*m); }};
}

template <typename S, typename T>
Field nested_field(const char* section, const char* key, S ScenarioConfig::*s,
                   T S::*m) {
  return {section, key,
          [key, s, m](ScenarioConfig& c, const std::string& v) {
            if constexpr (std::is_floating_point_v<T>) {
              (c.*s).*m = parse_double(key, v);
            } else {
              (c.*s).*m = static_cast<T>(parse_int(key, v));
            }
          },
          [s, m](const ScenarioConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return fmt_double((c.*s).*m);
            } else {
              return std::to_string((c.*s).*m);
            }
          }};
}

const std::vector<Field>& fields() {
  using C = ScenarioConfig;
  static const std::vector<Field> table = {
      int_field("topology", "beams", &C::beams),
      int_field("topology", "haps_per_beam", &C::haps_per_beam),
      int_field("topology", "regions_per_hap", &C::regions_per_hap),
      int_field("topology", "uavs_per_region", &C::uavs_per_region),
      int_field("topology", "users_per_region", &C::users_per_region),
      int_field("topology", "time_blocks_per_region",
                &C::time_blocks_per_region),
      dbl_field("topology", "region_width", &C::region_width),
      dbl_field("topology", "region_height", &C::region_height),
      dbl_field("topology", "uav_step", &C::uav_step),
      dbl_field("topology", "uav_altitude", &C::uav_altitude),
      dbl_field("topology", "hap_altitude", &C::hap_altitude),
      dbl_field("topology", "sat_altitude", &C::sat_altitude),

      dbl_field("radio", "total_bandwidth", &C::total_bandwidth),
      int_field("radio", "num_subbands", &C::num_subbands),
      dbl_field("radio", "carrier_freq", &C::carrier_freq),
      dbl_field("radio", "tx_power_sat_min", &C::tx_power_sat_min),
      dbl_field("radio", "tx_power_sat_max", &C::tx_power_sat_max),
      dbl_field("radio", "tx_power_hap_min", &C::tx_power_hap_min),
      dbl_field("radio", "tx_power_hap_max", &C::tx_power_hap_max),
      dbl_field("radio", "tx_power_tbs", &C::tx_power_tbs),
      dbl_field("radio", "tx_power_uav", &C::tx_power_uav),
      dbl_field("radio", "noise_psd", &C::noise_psd),
      dbl_field("radio", "r_min", &C::r_min),
      {"radio", "fading_frozen",
       [](C& c, const std::string& v) {
         c.fading_frozen = parse_bool("fading_frozen", v);
       },
       [](const C& c) { return std::string(c.fading_frozen ? "true" : "false"); }},
      dbl_field("radio", "shadowing_std_db", &C::shadowing_std_db),
      dbl_field("radio", "rician_k_db", &C::rician_k_db),
      {"radio", "interference_scope",
       [](C& c, const std::string& raw) {
         const std::string v = trim(raw);
         if (v == "global") {
           c.interference_scope = InterferenceScope::kGlobal;
         } else if (v == "region") {
           c.interference_scope = InterferenceScope::kRegion;
         } else {
           throw ConfigError(
               "config: field 'interference_scope' expects global|region, got '" +
               v + "'");
         }
       },
       [](const C& c) { return std::string(to_string(c.interference_scope)); }},

      nested_field("reward", "w_rate", &C::reward, &RewardWeights::w_rate),
      nested_field("reward", "w_eff", &C::reward, &RewardWeights::w_eff),
      nested_field("reward", "w_fair", &C::reward, &RewardWeights::w_fair),
      nested_field("reward", "w_uav", &C::reward, &RewardWeights::w_uav),
      nested_field("reward", "w_qos", &C::reward, &RewardWeights::w_qos),
      nested_field("reward", "gamma_ref", &C::reward, &RewardWeights::gamma_ref),

      nested_field("ppo", "learning_rate", &C::ppo, &PpoConfig::learning_rate),
      nested_field("ppo", "minibatch_size", &C::ppo, &PpoConfig::minibatch_size),
      nested_field("ppo", "batch_size", &C::ppo, &PpoConfig::batch_size),
      nested_field("ppo", "sgd_iters", &C::ppo, &PpoConfig::sgd_iters),
      nested_field("ppo", "discount", &C::ppo, &PpoConfig::discount),
      nested_field("ppo", "gae_lambda", &C::ppo, &PpoConfig::gae_lambda),
      nested_field("ppo", "clip_eps", &C::ppo, &PpoConfig::clip_eps),
      nested_field("ppo", "entropy_coef", &C::ppo, &PpoConfig::entropy_coef),
      nested_field("ppo", "vf_coef", &C::ppo, &PpoConfig::vf_coef),
      nested_field("ppo", "max_grad_norm", &C::ppo, &PpoConfig::max_grad_norm),
      nested_field("ppo", "adam_beta1", &C::ppo, &PpoConfig::adam_beta1),
      nested_field("ppo", "adam_beta2", &C::ppo, &PpoConfig::adam_beta2),
      nested_field("ppo", "adam_eps", &C::ppo, &PpoConfig::adam_eps),
      nested_field("ppo", "hidden_size", &C::ppo, &PpoConfig::hidden_size),

      int_field("run", "episodes", &C::episodes),
      int_field("run", "steps_per_episode", &C::steps_per_episode),
      int_field("run", "delta_s", &C::delta_s),
      int_field("run", "delta_h", &C::delta_h),
      int_field("run", "delta_l", &C::delta_l),
      {"run", "seed",
       [](C& c, const std::string& v) {
         const long long s = parse_int("seed", v);
         if (s < 0) throw ConfigError("config: field 'seed' must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       },
       [](const C& c) { return std::to_string(c.seed); }},
      dbl_field("run", "enumeration_cap", &C::enumeration_cap),
  };
  return table;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

const char* to_string(InterferenceScope scope) {
  return scope == InterferenceScope::kGlobal ? "global" : "region";
}

double ScenarioConfig::noise_power_w() const {
  return dbm_to_watts(noise_psd) * subband_bandwidth();
}

void ScenarioConfig::validate() const {
  require(beams >= 1, "field 'beams' must be >= 1");
  require(haps_per_beam >= 1, "field 'haps_per_beam' must be >= 1");
  require(regions_per_hap >= 1, "field 'regions_per_hap' must be >= 1");
  require(uavs_per_region >= 1, "field 'uavs_per_region' must be >= 1");
  require(users_per_region >= 1, "field 'users_per_region' must be >= 1");
  require(time_blocks_per_region >= 1,
          "field 'time_blocks_per_region' must be >= 1");
  require(num_subbands >= 1, "field 'num_subbands' must be >= 1");
  require(episodes >= 1, "field 'episodes' must be >= 1");
  require(steps_per_episode >= 1, "field 'steps_per_episode' must be >= 1");
  require(total_bandwidth > 0, "field 'total_bandwidth' must be > 0");
  require(carrier_freq > 0, "field 'carrier_freq' must be > 0");
  require(region_width > 0 && region_height > 0,
          "fields 'region_width'/'region_height' must be > 0");
  require(uav_step >= 0, "field 'uav_step' must be >= 0");
  require(uav_altitude > 0 && hap_altitude > 0 && sat_altitude > 0,
          "altitudes must be > 0");
  require(delta_l >= 1, "decision interval ordering: 'delta_l' must be >= 1");
  require(delta_s >= delta_h && delta_h >= delta_l,
          "decision interval ordering: need delta_s >= delta_h >= delta_l");
  require(delta_s % delta_l == 0 && delta_h % delta_l == 0,
          "decision interval ordering: delta_s and delta_h must be multiples "
          "of delta_l");
  require(tx_power_sat_min <= tx_power_sat_max,
          "field 'tx_power_sat_min' must be <= 'tx_power_sat_max'");
  require(tx_power_hap_min <= tx_power_hap_max,
          "field 'tx_power_hap_min' must be <= 'tx_power_hap_max'");
  require(noise_psd < 0, "field 'noise_psd' must be < 0 dBm/Hz");
  require(r_min >= 0, "field 'r_min' must be >= 0");
  require(shadowing_std_db >= 0, "field 'shadowing_std_db' must be >= 0");
  require(reward.gamma_ref > 0, "field 'gamma_ref' must be > 0");
  require(ppo.learning_rate >= 0, "field 'learning_rate' must be >= 0");
  require(ppo.minibatch_size >= 1, "field 'minibatch_size' must be >= 1");
  require(ppo.batch_size >= 1, "field 'batch_size' must be >= 1");
  require(ppo.sgd_iters >= 1, "field 'sgd_iters' must be >= 1");
  require(ppo.discount >= 0 && ppo.discount <= 1,
          "field 'discount' must be in [0, 1]");
  require(ppo.gae_lambda >= 0 && ppo.gae_lambda <= 1,
          "field 'gae_lambda' must be in [0, 1]");
  require(ppo.clip_eps > 0, "field 'clip_eps' must be > 0");
  require(ppo.max_grad_norm > 0, "field 'max_grad_norm' must be > 0");
  require(ppo.hidden_size >= 1, "field 'hidden_size' must be >= 1");
  require(enumeration_cap >= 1, "field 'enumeration_cap' must be >= 1");
}

ScenarioConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: parse failure: ") + e.what());
  }

  ScenarioConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section +
                        "' appears outside of a [section]");
    }
    for (const auto& [key, value] : body) {
      const Field* match = nullptr;
      for (const auto& f : fields()) {
        if (section == f.section && key == f.key) {
          match = &f;
          break;
        }
      }
      if (match == nullptr) {
        throw ConfigError("config: unknown field '" + section + "." + key + "'");
      }
      match->set(cfg, value.data());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  std::string current;
  for (const auto& f : fields()) {
    if (current != f.section) {
      if (!current.empty()) os << '\n';
      current = f.section;
      os << '[' << current << "]\n";
    }
    os << f.key << " = " << f.get(cfg) << '\n';
  }
  return os.str();
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  // FNV-1a over the canonical rendering of the shaping fields.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& f : fields()) {
    const std::string section = f.section;
    const bool shaping = section == "topology" || section == "radio" ||
                         section == "reward" ||
                         std::string(f.key) == "hidden_size";
    if (!shaping) continue;
    mix(section);
    mix(f.key);
    mix(f.get(cfg));
  }
  return h;
}

}  // namespace specshare
