#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roguegym/observe.hpp"
#include "roguegym/runtime.hpp"

namespace roguegym {

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  TransitionInfo info;
};

/// Episodic reset/step interface over one GameState.
class Env {
 public:
  explicit Env(GameConfig config, std::uint64_t seed = 0);

  /// Starts a new episode from `seed` (or the stored seed) with runtime
  /// stream "runtime/<reset_count>", then increments reset_count.
  Observation reset(std::optional<std::uint64_t> seed = std::nullopt);

  StepResult step(Action action);
  /// Key character from the action table, e.g. 'l'. Throws std::invalid_argument.
  StepResult step(char key);
  /// Action index in [0, 10]. Throws std::invalid_argument.
  StepResult step(int index);

  const GameConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t reset_count() const { return reset_count_; }
  /// Null before the first reset.
  const GameState* state() const { return current_ ? &*current_ : nullptr; }

 private:
  GameConfig config_;
  std::optional<GameState> current_;
  std::uint64_t seed_;
  std::uint64_t reset_count_ = 0;
};

using ActionProbs = std::array<double, kNumActions>;

struct Decision {
  int action = 0;
  std::optional<ActionProbs> probs;
};

/// Anything that maps observations to actions. The evaluator owns all
/// randomness and hands each episode its own stream.
class AgentPolicy {
 public:
  virtual ~AgentPolicy() = default;
  virtual std::string name() const = 0;
  /// Independent copy for another worker thread.
  virtual std::unique_ptr<AgentPolicy> clone() const = 0;
  virtual void begin_episode(std::uint64_t /*seed*/, int /*episode*/) {}
  virtual Decision act(const Observation& obs, RngStream& rng) = 0;
};

class RandomAgent final : public AgentPolicy {
 public:
  std::string name() const override { return "random"; }
  std::unique_ptr<AgentPolicy> clone() const override { return std::make_unique<RandomAgent>(); }
  Decision act(const Observation& obs, RngStream& rng) override;
};

/// Walks the seen region breadth-first toward '%', descends on it, explores
/// unvisited frontier cells otherwise, and searches when nothing is left.
class GreedyDescendAgent final : public AgentPolicy {
 public:
  std::string name() const override { return "greedy"; }
  std::unique_ptr<AgentPolicy> clone() const override { return std::make_unique<GreedyDescendAgent>(); }
  void begin_episode(std::uint64_t seed, int episode) override;
  Decision act(const Observation& obs, RngStream& rng) override;

 private:
  int depth_ = 0;
  int searches_ = 0;
  std::vector<std::uint8_t> visited_;
};

/// Replays a fixed action list, then NoOps.
class ScriptedAgent final : public AgentPolicy {
 public:
  explicit ScriptedAgent(std::vector<Action> script) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  std::unique_ptr<AgentPolicy> clone() const override { return std::make_unique<ScriptedAgent>(script_); }
  void begin_episode(std::uint64_t, int) override { next_ = 0; }
  Decision act(const Observation& obs, RngStream& rng) override;

 private:
  std::vector<Action> script_;
  std::size_t next_ = 0;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(std::uint64_t seed, int episode, int step, const std::string& what);
  std::uint64_t seed() const { return seed_; }
  int episode() const { return episode_; }
  int step() const { return step_; }

 private:
  std::uint64_t seed_;
  int episode_;
  int step_;
};

struct SeedResult {
  double mean = 0.0;
  std::vector<double> rewards;         // one per episode
  std::vector<double> entropy_sums;    // nats, summed over steps with probabilities
  std::vector<int> entropy_steps;
  friend bool operator==(const SeedResult&, const SeedResult&) = default;
};

struct EvalReport {
  std::string agent;
  std::map<std::uint64_t, SeedResult> per_seed;
  double aggregate_mean = 0.0;  // mean over seeds of per-seed means
  double aggregate_std = 0.0;   // population std over all episode rewards
  int episodes_per_seed = 0;
  std::uint64_t eval_seed = 0;
  std::optional<double> mean_policy_entropy;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

using FloorSource = std::function<Floor(const GameConfig&, std::uint64_t seed)>;

struct EvalOptions {
  int workers = 1;
  /// Replaces generate_floor(config, seed, 1) for the first floor; fixtures only.
  FloorSource floor_source;
};

std::string agent_label(std::uint64_t seed, int episode);

/// Runs `episodes_per_seed` full episodes per seed. Results depend only on
/// (agent, seeds, episodes_per_seed, config, eval_seed), not on `workers`.
EvalReport evaluate(const AgentPolicy& agent, const std::vector<std::uint64_t>& seeds, int episodes_per_seed,
                    const GameConfig& config, std::uint64_t eval_seed, const EvalOptions& options = {});

double policy_entropy(const ActionProbs& probs);

/// Shortest text that round-trips to the same double.
std::string format_number(double value);

/// "seed,episode,reward" rows in ascending seed order.
void write_csv(const EvalReport& report, std::ostream& out);
nlohmann::json summary_json(const EvalReport& report);

std::unique_ptr<AgentPolicy> make_builtin_agent(const std::string& name);

}  // namespace roguegym
