#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roguegym/config.hpp"
#include "roguegym/dungeon.hpp"
#include "roguegym/rng.hpp"

namespace roguegym {

/// Raised when the caller breaks the episode protocol (e.g. acting after done).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Index order is part of the observation/action contract; do not reorder.
enum class Action : std::uint8_t {
  NoOp,
  Left,
  Down,
  Up,
  Right,
  DownRight,
  DownLeft,
  UpRight,
  UpLeft,
  Descend,
  Search,
};

inline constexpr int kNumActions = 11;
inline constexpr std::array<char, kNumActions> kActionKeys = {'.', 'h', 'j', 'k', 'l', 'n',
                                                              'b', 'u', 'y', '>', 's'};

char action_key(Action a);
int action_index(Action a);
std::optional<Action> action_from_key(char key);
std::optional<Action> action_from_index(int index);
std::string action_name(Action a);
/// Compass offset for movement actions, {0, 0} otherwise. y grows downward.
Pos action_delta(Action a);

struct Enemy {
  Pos pos;
  int hp = 0;
  char symbol = 'E';
  friend bool operator==(const Enemy&, const Enemy&) = default;
};

struct GameState {
  GameConfig config;
  std::uint64_t seed = 0;
  Floor floor;
  Pos player;
  int depth = 1;
  int step_count = 0;
  double gold_collected = 0.0;
  Grid<std::uint8_t> seen;
  bool done = false;
  RngStream rng{0, "runtime/0"};
  int hp = 0;
  std::vector<Enemy> enemies;

  friend bool operator==(const GameState&, const GameState&) = default;
};

struct TransitionInfo {
  int depth = 1;
  int step_count = 0;
  double gold_collected = 0.0;
  Action action_taken = Action::NoOp;
  friend bool operator==(const TransitionInfo&, const TransitionInfo&) = default;
};

struct Transition {
  double reward = 0.0;
  bool done = false;
  TransitionInfo info;
};

/// Depth-1 floor from `seed`; runtime draws (searches, enemies) come from
/// "runtime/<reset_index>".
GameState new_game(const GameConfig& config, std::uint64_t seed, std::uint64_t reset_index = 0);

/// Starts an episode on a prebuilt floor. Used for handcrafted fixtures.
GameState new_game_on_floor(const GameConfig& config, Floor floor, std::uint64_t seed = 0,
                            std::uint64_t reset_index = 0);

/// Advances `state` by one action. Throws ContractError if the episode is over.
Transition apply(GameState& state, Action action);

/// Walkable and not hidden.
bool is_passable(const GameState& state, Pos p);

/// Cells that become visible from the current position and were not seen
/// before; also merges them into `state.seen`.
std::vector<Pos> visible_from(GameState& state);

/// Cells in the player's current field of view (lit room or 3x3).
std::vector<Pos> field_of_view(const GameState& state);

struct EnemyMove {
  std::size_t enemy = 0;
  Pos from;
  Pos to;
  bool attacked = false;
};

/// One turn for every enemy. No-op returning {} when enemies are disabled.
std::vector<EnemyMove> enemy_turn(GameState& state);

}  // namespace roguegym
