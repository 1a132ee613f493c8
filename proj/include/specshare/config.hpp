#ifndef SPECSHARE_CONFIG_HPP_
#define SPECSHARE_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specshare {

// Thrown for malformed config text or an invariant violation; the message
// names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InterferenceScope { kGlobal, kRegion };

struct RewardWeights {
  double w_rate = 1.0;
  double w_eff = 1.5;
  double w_fair = 0.5;
  double w_uav = -1.0;
  double w_qos = -0.5;
  // SINR of a "good link", used to bring rate and efficiency terms to O(1).
  double gamma_ref = 1.0;
};

struct PpoConfig {
  double learning_rate = 0.0005;
  int minibatch_size = 512;
  int batch_size = 2000;
  int sgd_iters = 30;
  double discount = 0.99;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  double entropy_coef = 0.01;
  double vf_coef = 1.0;
  double max_grad_norm = 0.5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int hidden_size = 128;
};

struct ScenarioConfig {
  // [topology]
  int beams = 2;
  int haps_per_beam = 1;
  int regions_per_hap = 2;
  int uavs_per_region = 1;
  int users_per_region = 10;
  int time_blocks_per_region = 2;  // stored only, the simulator never reads it
  double region_width = 2000.0;
  double region_height = 2000.0;
  double uav_step = 10.0;
  double uav_altitude = 100.0;
  double hap_altitude = 20e3;
  double sat_altitude = 550e3;

  // [radio]
  double total_bandwidth = 200e6;
  int num_subbands = 10;
  double carrier_freq = 28e9;
  double tx_power_sat_min = 33.0;
  double tx_power_sat_max = 45.0;
  double tx_power_hap_min = 28.0;
  double tx_power_hap_max = 36.0;
  double tx_power_tbs = 16.0;
  double tx_power_uav = 8.0;
  double noise_psd = -174.0;
  double r_min = 0.0;  // bps; 0 disables the QoS term
  bool fading_frozen = false;
  double shadowing_std_db = 4.0;
  double rician_k_db = 10.0;
  InterferenceScope interference_scope = InterferenceScope::kGlobal;

  // [reward]
  RewardWeights reward;

  // [ppo]
  PpoConfig ppo;

  // [run]
  int episodes = 1000;
  int steps_per_episode = 500;
  int delta_s = 50;
  int delta_h = 10;
  int delta_l = 1;
  std::uint64_t seed = 0;
  double enumeration_cap = 1e5;

  int num_haps() const { return beams * haps_per_beam; }
  int num_regions() const { return num_haps() * regions_per_hap; }
  // Serving nodes per region: two TBSs plus the UAVs.
  int nodes_per_region() const { return 2 + uavs_per_region; }
  int num_users() const { return num_regions() * users_per_region; }
  double subband_bandwidth() const { return total_bandwidth / num_subbands; }
  // Noise power over one subband, in watts.
  double noise_power_w() const;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Canonical `key = value` rendering, sectioned. parse_config(dump(c)) == c.
std::string dump_config(const ScenarioConfig& cfg);

// Hash over everything that shapes the environment and the networks
// ([topology], [radio], [reward], ppo.hidden_size). Run-only settings are
// excluded so checkpoints move between runs of the same scenario.
std::uint64_t config_hash(const ScenarioConfig& cfg);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

const char* to_string(InterferenceScope scope);

}  // namespace specshare

#endif  // SPECSHARE_CONFIG_HPP_
