#include "roguegym/tui.hpp"

#include <istream>
#include <ostream>

namespace roguegym {

std::string help_line() {
  std::string line = "keys:";
  for (int i = 0; i < kNumActions; ++i) {
    const auto a = static_cast<Action>(i);
    line += std::string(" ") + action_key(a) + "=" + action_name(a);
    line += i + 1 < kNumActions ? "," : "";
  }
  return line + ", q=quit";
}

Session::Session(GameConfig config, std::uint64_t seed, PlayOptions options)
    : env_(std::move(config), seed), recorder_(env_.config(), seed, 0), options_(options) {
  env_.reset();
}

std::string Session::status_row() const {
  const GameState& s = *env_.state();
  std::string row = "Depth: " + std::to_string(s.depth) + "  Gold: " + format_number(s.gold_collected) +
                    "  Step: " + std::to_string(s.step_count) + "/" + std::to_string(s.config.max_steps);
  if (s.config.enemies.enabled) row += "  HP: " + std::to_string(s.hp);
  return row;
}

std::string Session::frame() const {
  const GameState& s = *env_.state();
  const CharGrid view = options_.reveal ? render_revealed(s) : render_view(s);
  return view.to_string() + status_row() + "\n";
}

Session::KeyResult Session::handle_key(char key) {
  if (key == 'q') {
    message_ = "bye";
    return KeyResult::Quit;
  }
  if (env_.state()->done) {
    message_ = "episode finished; press q";
    return KeyResult::Finished;
  }
  const auto action = action_from_key(key);
  if (!action) {
    message_ = help_line();
    return KeyResult::Ignored;
  }
  const StepResult r = env_.step(*action);
  recorder_.record(*action, {r.reward, r.done, r.info});
  message_ = r.reward > 0 ? "+" + format_number(r.reward) + " gold" : "";
  if (r.done) {
    message_ += message_.empty() ? "episode finished" : ", episode finished";
    return KeyResult::Finished;
  }
  return KeyResult::Acted;
}

void run_session(Session& session, std::istream& keys, std::ostream& screen) {
  const bool clear = session.options().clear_screen;
  auto draw = [&] {
    if (clear) screen << "\x1b[H\x1b[2J";
    screen << session.frame() << session.message() << "\n";
    screen.flush();
  };
  draw();
  char key = 0;
  while (keys.get(key)) {
    if (key == '\n' || key == '\r') continue;
    const auto result = session.handle_key(key);
    if (result == Session::KeyResult::Quit) break;
    draw();
    if (result == Session::KeyResult::Finished) break;
  }
}

}  // namespace roguegym
