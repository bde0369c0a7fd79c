#include "roguegym/runtime.hpp"

#include <algorithm>
#include <cstdlib>

namespace roguegym {

char action_key(Action a) { return kActionKeys[static_cast<std::size_t>(a)]; }

int action_index(Action a) { return static_cast<int>(a); }

std::optional<Action> action_from_key(char key) {
  for (int i = 0; i < kNumActions; ++i) {
    if (kActionKeys[static_cast<std::size_t>(i)] == key) return static_cast<Action>(i);
  }
  return std::nullopt;
}

std::optional<Action> action_from_index(int index) {
  if (index < 0 || index >= kNumActions) return std::nullopt;
  return static_cast<Action>(index);
}

std::string action_name(Action a) {
  switch (a) {
    case Action::NoOp: return "no-op";
    case Action::Left: return "move left";
    case Action::Up: return "move up";
    case Action::Down: return "move down";
    case Action::Right: return "move right";
    case Action::DownRight: return "move right down";
    case Action::DownLeft: return "move left down";
    case Action::UpRight: return "move right up";
    case Action::UpLeft: return "move left up";
    case Action::Descend: return "go downstairs";
    case Action::Search: return "search";
  }
  return "?";
}

Pos action_delta(Action a) {
  switch (a) {
    case Action::Left: return {-1, 0};
    case Action::Up: return {0, -1};
    case Action::Down: return {0, 1};
    case Action::Right: return {1, 0};
    case Action::DownRight: return {1, 1};
    case Action::DownLeft: return {-1, 1};
    case Action::UpRight: return {1, -1};
    case Action::UpLeft: return {-1, -1};
    default: return {0, 0};
  }
}

bool is_passable(const GameState& state, Pos p) {
  if (!state.floor.grid.in_bounds(p)) return false;
  const Cell& c = state.floor.grid[p];
  return is_walkable_kind(c.kind) && !c.hidden;
}

namespace {

// Diagonal steps need both orthogonal neighbours open.
bool can_step(const GameState& state, Pos from, Pos delta) {
  const Pos to = from + delta;
  if (!is_passable(state, to)) return false;
  if (delta.x != 0 && delta.y != 0) {
    return is_passable(state, {from.x + delta.x, from.y}) && is_passable(state, {from.x, from.y + delta.y});
  }
  return true;
}

std::optional<std::size_t> enemy_at(const GameState& state, Pos p) {
  for (std::size_t i = 0; i < state.enemies.size(); ++i) {
    if (state.enemies[i].pos == p) return i;
  }
  return std::nullopt;
}

void spawn_enemies(GameState& state) {
  state.enemies.clear();
  if (!state.config.enemies.enabled) return;
  const auto spawn_room = state.floor.room_at(state.player);
  std::vector<Pos> candidates;
  for (std::size_t r = 0; r < state.floor.rooms.size(); ++r) {
    const Room& room = state.floor.rooms[r];
    if (room.kind == RoomKind::Gone || (spawn_room && *spawn_room == r)) continue;
    const Rect in = room.interior();
    for (int y = in.y; y <= in.bottom(); ++y) {
      for (int x = in.x; x <= in.right(); ++x) {
        if (is_passable(state, {x, y})) candidates.push_back({x, y});
      }
    }
  }
  const std::string& symbols = state.config.enemies.symbols;
  for (int i = 0; i < state.config.enemies.count && !candidates.empty(); ++i) {
    const auto k = static_cast<std::size_t>(
        state.rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1));
    const char symbol =
        symbols[static_cast<std::size_t>(state.rng.uniform_int(0, static_cast<std::int64_t>(symbols.size()) - 1))];
    state.enemies.push_back({candidates[k], state.config.enemies.hp, symbol});
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(k));
  }
}

void enter_floor(GameState& state, Floor floor) {
  state.floor = std::move(floor);
  state.depth = state.floor.depth;
  state.player = state.floor.spawn;
  state.seen = Grid<std::uint8_t>(state.floor.width(), state.floor.height(), 0);
  spawn_enemies(state);
  visible_from(state);
}

// Bresenham; every cell strictly between the endpoints must be passable.
bool line_of_sight(const GameState& state, Pos from, Pos to) {
  int dx = std::abs(to.x - from.x);
  int dy = -std::abs(to.y - from.y);
  const int sx = from.x < to.x ? 1 : -1;
  const int sy = from.y < to.y ? 1 : -1;
  int err = dx + dy;
  Pos p = from;
  while (true) {
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
    if (p == to) return true;
    if (!is_passable(state, p)) return false;
  }
}

int dist2(Pos a, Pos b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); }

}  // namespace

GameState new_game_on_floor(const GameConfig& config, Floor floor, std::uint64_t seed,
                            std::uint64_t reset_index) {
  GameState state;
  state.config = config;
  state.seed = seed;
  state.rng = derive_stream(seed, runtime_label(reset_index));
  state.hp = config.enemies.enabled ? config.enemies.player_hp : 0;
  enter_floor(state, std::move(floor));
  return state;
}

GameState new_game(const GameConfig& config, std::uint64_t seed, std::uint64_t reset_index) {
  return new_game_on_floor(config, generate_floor(config, seed, 1), seed, reset_index);
}

std::vector<Pos> field_of_view(const GameState& state) {
  std::vector<Pos> cells;
  const auto room = state.floor.room_at(state.player);
  if (room && state.floor.rooms[*room].kind == RoomKind::Normal) {
    const Rect& b = state.floor.rooms[*room].bounds;
    for (int y = b.y; y <= b.bottom(); ++y) {
      for (int x = b.x; x <= b.right(); ++x) cells.push_back({x, y});
    }
    return cells;
  }
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const Pos p{state.player.x + dx, state.player.y + dy};
      if (state.floor.grid.in_bounds(p)) cells.push_back(p);
    }
  }
  return cells;
}

std::vector<Pos> visible_from(GameState& state) {
  std::vector<Pos> fresh;
  for (Pos p : field_of_view(state)) {
    if (!state.seen[p]) {
      state.seen[p] = 1;
      fresh.push_back(p);
    }
  }
  return fresh;
}

std::vector<EnemyMove> enemy_turn(GameState& state) {
  std::vector<EnemyMove> moves;
  if (!state.config.enemies.enabled) return moves;
  for (std::size_t i = 0; i < state.enemies.size(); ++i) {
    Enemy& enemy = state.enemies[i];
    EnemyMove move{i, enemy.pos, enemy.pos, false};
    if (std::max(std::abs(enemy.pos.x - state.player.x), std::abs(enemy.pos.y - state.player.y)) <= 1) {
      state.hp -= state.config.enemies.damage;
      move.attacked = true;
      moves.push_back(move);
      continue;
    }
    std::vector<Pos> options;
    for (Pos d : kNeighbors8) {
      const Pos to = enemy.pos + d;
      if (can_step(state, enemy.pos, d) && to != state.player && !enemy_at(state, to)) options.push_back(to);
    }
    if (!options.empty()) {
      if (line_of_sight(state, enemy.pos, state.player)) {
        Pos best = enemy.pos;
        for (Pos to : options) {
          if (dist2(to, state.player) < dist2(best, state.player)) best = to;
        }
        move.to = best;
      } else {
        move.to = options[static_cast<std::size_t>(
            state.rng.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))];
      }
      enemy.pos = move.to;
    }
    moves.push_back(move);
  }
  return moves;
}

Transition apply(GameState& state, Action action) {
  if (state.done) throw ContractError("episode is over; call reset before acting again");
  double reward = 0.0;
  bool finished = false;

  switch (action) {
    case Action::NoOp:
      break;
    case Action::Descend:
      if (state.floor.grid[state.player].kind == CellKind::Stairs) {
        reward += state.config.pseudo_reward_descend;
        const int next_depth = state.depth + 1;
        enter_floor(state, generate_floor(state.config, state.seed, next_depth));
        if (state.config.amulet.enabled && next_depth >= state.config.amulet.depth) {
          reward += state.config.amulet.bonus;
          finished = true;
        }
      }
      break;
    case Action::Search:
      for (Pos d : kNeighbors8) {
        const Pos q = state.player + d;
        if (!state.floor.grid.in_bounds(q)) continue;
        Cell& c = state.floor.grid[q];
        if (c.hidden && state.rng.bernoulli(state.config.search_success_prob)) c.hidden = false;
      }
      break;
    default: {
      const Pos delta = action_delta(action);
      const Pos target = state.player + delta;
      if (!can_step(state, state.player, delta)) break;
      if (const auto hit = enemy_at(state, target)) {
        if (--state.enemies[*hit].hp <= 0) state.enemies.erase(state.enemies.begin() + static_cast<std::ptrdiff_t>(*hit));
        break;
      }
      state.player = target;
      Cell& c = state.floor.grid[target];
      if (c.gold > 0) {
        reward += c.gold;
        c.gold = 0;
      }
      break;
    }
  }

  enemy_turn(state);
  ++state.step_count;
  visible_from(state);
  state.gold_collected += reward;
  if (state.step_count >= state.config.max_steps) finished = true;
  if (state.config.enemies.enabled && state.hp <= 0) finished = true;
  state.done = finished;
  return {reward, state.done, {state.depth, state.step_count, state.gold_collected, action}};
}

}  // namespace roguegym
