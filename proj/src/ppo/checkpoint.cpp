#include "specshare/ppo/checkpoint.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace specshare::ppo {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json net_to_json(const PolicyNet& net) {
  return {{"obs_size", net.obs_size()},
          {"hidden", net.hidden()},
          {"space", net.space()},
          {"params", to_vec(net.params)}};
}

PolicyNet net_from_json(const nlohmann::json& j) {
  std::mt19937_64 scratch(0);
  PolicyNet net(j.at("obs_size").get<int>(), j.at("space").get<ActionSpace>(),
                j.at("hidden").get<std::vector<int>>(), scratch);
  const auto params = j.at("params").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(params.size()) != net.params.size()) {
    throw std::invalid_argument("checkpoint: parameter count does not match the network shape");
  }
  net.params = from_vec(params);
  return net;
}

nlohmann::json adam_to_json(const Adam& opt) {
  return {{"m", to_vec(opt.m)}, {"v", to_vec(opt.v)}, {"t", opt.t},
          {"beta1", opt.beta1}, {"beta2", opt.beta2}, {"eps", opt.eps}};
}

Adam adam_from_json(const nlohmann::json& j) {
  Adam opt;
  opt.m = from_vec(j.at("m").get<std::vector<double>>());
  opt.v = from_vec(j.at("v").get<std::vector<double>>());
  opt.t = j.at("t").get<std::int64_t>();
  opt.beta1 = j.at("beta1").get<double>();
  opt.beta2 = j.at("beta2").get<double>();
  opt.eps = j.at("eps").get<double>();
  return opt;
}

nlohmann::json ppo_config_to_json(const PpoConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"minibatch_size", c.minibatch_size},
          {"batch_size", c.batch_size},       {"sgd_iters", c.sgd_iters},
          {"discount", c.discount},           {"gae_lambda", c.gae_lambda},
          {"clip_eps", c.clip_eps},           {"entropy_coef", c.entropy_coef},
          {"vf_coef", c.vf_coef},             {"max_grad_norm", c.max_grad_norm},
          {"adam_beta1", c.adam_beta1},       {"adam_beta2", c.adam_beta2},
          {"adam_eps", c.adam_eps},           {"hidden_size", c.hidden_size}};
}

PpoConfig ppo_config_from_json(const nlohmann::json& j) {
  PpoConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.minibatch_size = j.at("minibatch_size").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.sgd_iters = j.at("sgd_iters").get<int>();
  c.discount = j.at("discount").get<double>();
  c.gae_lambda = j.at("gae_lambda").get<double>();
  c.clip_eps = j.at("clip_eps").get<double>();
  c.entropy_coef = j.at("entropy_coef").get<double>();
  c.vf_coef = j.at("vf_coef").get<double>();
  c.max_grad_norm = j.at("max_grad_norm").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  c.hidden_size = j.at("hidden_size").get<int>();
  return c;
}

std::string rng_to_string(const std::mt19937_64& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

std::mt19937_64 rng_from_string(const std::string& s) {
  std::istringstream is(s);
  std::mt19937_64 rng;
  is >> rng;
  if (is.fail()) throw std::invalid_argument("checkpoint: malformed RNG state");
  return rng;
}

}  // namespace specshare::ppo
