#ifndef SPECSHARE_AGENTS_AGENTS_HPP_
#define SPECSHARE_AGENTS_AGENTS_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specshare/agents/learner.hpp"
#include "specshare/allocation.hpp"
#include "specshare/config.hpp"
#include "specshare/env.hpp"

namespace specshare {

enum class AgentKind { kExhaustive, kRandom, kSadrl, kMadrl, kHdrl };

const char* to_string(AgentKind kind);
// Accepts the lowercase names used on the command line; throws
// std::invalid_argument otherwise.
AgentKind parse_agent_kind(const std::string& name);
bool is_learnable(AgentKind kind);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Agent {
 public:
  virtual ~Agent() = default;

  virtual std::string name() const = 0;
  virtual bool learnable() const { return false; }
  // Decision intervals the agent's environment must run with.
  virtual DecisionSchedule schedule() const = 0;

  // Called after every env.reset().
  virtual void begin_episode(const Env& env) { (void)env; }
  // Builds the bundle for the current step. Learners sample and record when
  // `explore` is set and return mode actions otherwise.
  virtual ActionBundle act(const Env& env, bool explore) = 0;
  // Credits the step's rewards to the open transitions.
  virtual void observe(const Env& env, const StepResult& result) {
    (void)env;
    (void)result;
  }
  // Closes the episode's rollouts and updates when a batch is full.
  virtual void end_episode(const Env& env) { (void)env; }

  // Agent kind, config hash and all learner state. Non-learners throw.
  virtual nlohmann::json save() const;
  // Throws CheckpointError on a kind or config-hash mismatch.
  virtual void load(const nlohmann::json& j);
};

std::unique_ptr<Agent> make_agent(AgentKind kind, const ScenarioConfig& cfg, std::uint64_t seed);

class RandomAgent : public Agent {
 public:
  RandomAgent(const ScenarioConfig& cfg, std::uint64_t seed);
  std::string name() const override { return "random"; }
  DecisionSchedule schedule() const override { return DecisionSchedule::from_config(cfg_); }
  ActionBundle act(const Env& env, bool explore) override;

 private:
  ScenarioConfig cfg_;
  std::mt19937_64 rng_;
};

struct ExhaustiveResult {
  AllocationState best;
  double eta = 0.0;
  double fairness = 0.0;
  double candidates = 0;
};

// Number of global x regional allocations the search visits:
// (1 + sum over beams of (M+1)^(regions in beam))^N.
double exhaustive_candidates(const ScenarioConfig& cfg);

// Enumerates every global and regional allocation with heuristic local
// actions on the environment's current instance, one frozen step each, and
// returns the one with the highest network spectral efficiency (ties go to
// higher fairness, then to the first found). Throws std::invalid_argument
// without frozen fading and SearchSpaceTooLarge when the count exceeds cap.
ExhaustiveResult exhaustive_solve(const Env& env, double cap);

class ExhaustiveAgent : public Agent {
 public:
  explicit ExhaustiveAgent(const ScenarioConfig& cfg);
  std::string name() const override { return "exhaustive"; }
  DecisionSchedule schedule() const override { return DecisionSchedule::from_config(cfg_); }
  // Solves the instance; part of the agent's decision time.
  void begin_episode(const Env& env) override;
  ActionBundle act(const Env& env, bool explore) override;
  const std::optional<ExhaustiveResult>& solution() const { return solution_; }

 private:
  ScenarioConfig cfg_;
  std::optional<ExhaustiveResult> solution_;
};

// Base for the PPO agents: owns the learners and the sampling stream.
class PpoAgent : public Agent {
 public:
  bool learnable() const override { return true; }
  nlohmann::json save() const override;
  void load(const nlohmann::json& j) override;
  const std::vector<Learner>& learners() const { return learners_; }
  std::vector<Learner>& learners() { return learners_; }

 protected:
  PpoAgent(const ScenarioConfig& cfg, std::uint64_t seed);
  ScenarioConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Learner> learners_;
};

// One network over the joint observation emitting the whole joint action
// every step.
class SadrlAgent : public PpoAgent {
 public:
  SadrlAgent(const ScenarioConfig& cfg, std::uint64_t seed);
  std::string name() const override { return "sadrl"; }
  DecisionSchedule schedule() const override { return DecisionSchedule::flat(); }
  ActionBundle act(const Env& env, bool explore) override;
  void observe(const Env& env, const StepResult& result) override;
  void end_episode(const Env& env) override;
};

// Independent learners, one per region, each seeing the joint observation and
// emitting its region's allocation and local actions every step. The global
// allocation is fixed round-robin.
class MadrlAgent : public PpoAgent {
 public:
  MadrlAgent(const ScenarioConfig& cfg, std::uint64_t seed);
  std::string name() const override { return "madrl"; }
  DecisionSchedule schedule() const override { return {cfg_.delta_s, 1, 1}; }
  ActionBundle act(const Env& env, bool explore) override;
  void observe(const Env& env, const StepResult& result) override;
  void end_episode(const Env& env) override;
};

// Three shared policies: learners()[0] global, [1] regional (one entity per
// HAP), [2] local (one entity per serving node). Upper tiers decide only at
// their interval steps; each tier's transitions carry the tier reward
// averaged over the steps the decision was held.
class HdrlAgent : public PpoAgent {
 public:
  HdrlAgent(const ScenarioConfig& cfg, std::uint64_t seed);
  std::string name() const override { return "hdrl"; }
  DecisionSchedule schedule() const override { return DecisionSchedule::from_config(cfg_); }
  ActionBundle act(const Env& env, bool explore) override;
  void observe(const Env& env, const StepResult& result) override;
  void end_episode(const Env& env) override;

  // Transitions recorded per tier (global, regional, local) in the current
  // episode and in the last finished one.
  std::array<int, 3> episode_transitions() const;
  std::array<int, 3> last_episode_transitions() const { return finished_; }

 private:
  std::array<int, 3> finished_{0, 0, 0};
};

}  // namespace specshare

#endif  // SPECSHARE_AGENTS_AGENTS_HPP_
