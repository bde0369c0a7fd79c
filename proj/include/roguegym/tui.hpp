#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "roguegym/harness.hpp"
#include "roguegym/replay.hpp"

namespace roguegym {

struct PlayOptions {
  bool reveal = false;       // draw the whole floor, hidden features included
  bool clear_screen = false; // ANSI home+clear before each frame
};

/// One human play-through: an Env plus its transcript.
class Session {
 public:
  enum class KeyResult { Acted, Ignored, Quit, Finished };

  Session(GameConfig config, std::uint64_t seed, PlayOptions options = {});

  /// Agent view (or revealed map) followed by the status row.
  std::string frame() const;
  std::string status_row() const;
  /// Action keys advance the game, 'q' quits, anything else only sets a help message.
  KeyResult handle_key(char key);

  const std::string& message() const { return message_; }
  const Env& env() const { return env_; }
  const PlayOptions& options() const { return options_; }
  std::string transcript() const { return recorder_.finish(); }
  std::size_t actions_taken() const { return recorder_.steps(); }

 private:
  Env env_;
  ReplayRecorder recorder_;
  PlayOptions options_;
  std::string message_;
};

std::string help_line();

/// Reads keys from `keys` until 'q', end of input, or episode end, drawing a
/// frame after every key.
void run_session(Session& session, std::istream& keys, std::ostream& screen);

}  // namespace roguegym
