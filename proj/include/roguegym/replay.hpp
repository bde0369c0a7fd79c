#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "roguegym/config.hpp"
#include "roguegym/harness.hpp"
#include "roguegym/runtime.hpp"

namespace roguegym {

// JSON-lines replay log:
//   {"config":{...},"format":"roguegym-replay","reset_index":0,"rng":"splitmix64-ctr/1","seed":7,"version":1}
//   {"action_key":"l","done":false,"reward":0.0,"t":1}
//   ...
//   {"crc32":123456789,"end":true,"steps":N}
// Every line is compact canonical JSON; crc32 covers all bytes before the
// trailer line.
inline constexpr std::string_view kReplayFormat = "roguegym-replay";
inline constexpr int kReplayVersion = 1;

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, truncated or malformed log. `line()` is 1-based.
class ReplayParseError : public ReplayError {
 public:
  ReplayParseError(std::size_t line, const std::string& what)
      : ReplayError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ReplayVersionError : public ReplayError {
 public:
  using ReplayError::ReplayError;
};

/// Re-execution disagrees with the log at step `t`.
class ReplayDivergence : public ReplayError {
 public:
  ReplayDivergence(int t, const std::string& what) : ReplayError("step " + std::to_string(t) + ": " + what), t_(t) {}
  int step() const { return t_; }

 private:
  int t_;
};

/// Bytes changed without changing what re-execution produces.
class ReplayIntegrityError : public ReplayError {
 public:
  using ReplayError::ReplayError;
};

struct ReplayStep {
  int t = 0;
  char action_key = '.';
  double reward = 0.0;
  bool done = false;
  friend bool operator==(const ReplayStep&, const ReplayStep&) = default;
};

struct Trajectory {
  GameConfig config;
  std::uint64_t seed = 0;
  std::uint64_t reset_index = 0;
  std::vector<ReplayStep> steps;
  GameState final_state;
};

class ReplayRecorder {
 public:
  ReplayRecorder(const GameConfig& config, std::uint64_t seed, std::uint64_t reset_index = 0);

  void record(Action action, const Transition& transition);
  std::size_t steps() const { return steps_; }
  /// Log text including the trailer.
  std::string finish() const;

 private:
  std::string body_;
  std::size_t steps_ = 0;
};

/// Replays and verifies the log text.
Trajectory replay_text(std::string_view text);
/// Throws std::ios_base::failure if the file cannot be read.
Trajectory replay_file(const std::string& path);

/// Runs one episode under `agent` and returns its log.
std::string record_episode(const GameConfig& config, std::uint64_t seed, AgentPolicy& agent,
                           std::uint64_t agent_seed, std::uint64_t reset_index = 0);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace roguegym
