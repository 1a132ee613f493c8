#ifndef SPECSHARE_AGENTS_LEARNER_HPP_
#define SPECSHARE_AGENTS_LEARNER_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "specshare/config.hpp"
#include "specshare/ppo/policy_net.hpp"
#include "specshare/ppo/ppo.hpp"

namespace specshare {

// One PPO policy acting for `entities` decision makers that share its
// parameters. While exploring, each decision opens a transition for its
// entity; rewards arriving until the entity's next decision are averaged into
// it. finish_episode() runs GAE per entity and updates once the pending batch
// holds at least `batch_size` samples.
class Learner {
 public:
  Learner(int obs_size, ppo::ActionSpace space, const PpoConfig& cfg, int entities,
          int batch_size, double gamma, std::mt19937_64& rng);

  // Decides for entities [first, first + obs.cols()). Samples and records
  // when exploring, otherwise returns mode actions.
  std::vector<ppo::Action> act(const Eigen::MatrixXd& obs, int first, bool explore,
                               std::mt19937_64& rng);
  void add_reward(int entity, double reward);
  // `final_obs` holds the state after the last step for every entity (one
  // column each) and bootstraps the truncated returns.
  void finish_episode(const Eigen::MatrixXd& final_obs, std::mt19937_64& rng);

  // Transitions opened in the current episode.
  int episode_transitions() const { return episode_transitions_; }
  int updates() const { return updates_; }
  const ppo::LossReport& last_loss() const { return last_loss_; }
  std::size_t pending() const { return batch_.size(); }

  ppo::PolicyNet net;
  ppo::Adam opt;

  nlohmann::json to_json() const;
  void load_json(const nlohmann::json& j);

 private:
  void close(int entity);

  PpoConfig cfg_;
  int batch_size_;
  double gamma_;
  std::vector<ppo::Trajectory> traj_;
  std::vector<double> reward_sum_;
  std::vector<int> reward_count_;
  std::vector<std::uint8_t> open_;
  ppo::Batch batch_;
  int episode_transitions_ = 0;
  int updates_ = 0;
  ppo::LossReport last_loss_;
};

}  // namespace specshare

#endif  // SPECSHARE_AGENTS_LEARNER_HPP_
