#include "roguegym/dungeon.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

#include "roguegym/rng.hpp"

namespace roguegym {

bool is_walkable_kind(CellKind kind) {
  return kind == CellKind::Floor || kind == CellKind::Passage || kind == CellKind::Door ||
         kind == CellKind::Stairs;
}

std::optional<std::size_t> Floor::room_at(Pos p) const {
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    if (rooms[i].kind != RoomKind::Gone && rooms[i].interior().contains(p)) return i;
  }
  return std::nullopt;
}

std::optional<Pos> Floor::find_stairs() const {
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) {
      if (grid[{x, y}].kind == CellKind::Stairs) return Pos{x, y};
    }
  }
  return std::nullopt;
}

std::int64_t Floor::total_gold() const {
  std::int64_t sum = 0;
  for (const Cell& c : grid.data()) sum += c.gold;
  return sum;
}

namespace {

constexpr double kExtraConnectionProb = 0.3;

struct Slot {
  Rect area;
};

// Everything the generator needs in one place; member functions consume the
// stream in a fixed order.
class FloorBuilder {
 public:
  FloorBuilder(const GameConfig& config, std::uint64_t seed, int depth)
      : config_(config), depth_(depth), rng_(derive_stream(seed, worldgen_label(depth))) {
    floor_.grid = Grid<Cell>(config.width, config.height);
    floor_.depth = depth;
  }

  Floor build() {
    layout_slots();
    place_rooms();
    connect_rooms();
    place_spawn_and_stairs();
    place_gold();
    return std::move(floor_);
  }

 private:
  Cell& at(Pos p) { return floor_.grid[p]; }

  void layout_slots() {
    const int nx = config_.dungeon.room_num_x;
    const int ny = config_.dungeon.room_num_y;
    const int sw = config_.slot_width();
    const int sh = config_.slot_height();
    if (sw < 7 || sh < 7) throw GenerationError("room grid does not fit the screen");
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int x0 = i * sw;
        const int y0 = j * sh;
        const int w = i == nx - 1 ? config_.width - x0 : sw;
        const int h = j == ny - 1 ? config_.height - y0 : sh;
        slots_.push_back({{x0, y0, w, h}});
      }
    }
  }

  std::vector<Pos> walkable_interior(const Room& room) const {
    std::vector<Pos> cells;
    const Rect in = room.interior();
    for (int y = in.y; y <= in.bottom(); ++y) {
      for (int x = in.x; x <= in.right(); ++x) {
        const CellKind k = floor_.grid[{x, y}].kind;
        if (k == CellKind::Floor || k == CellKind::Passage) cells.push_back({x, y});
      }
    }
    return cells;
  }

  Pos pick(const std::vector<Pos>& cells) {
    return cells[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))];
  }

  void place_rooms() {
    const std::size_t n = slots_.size();
    std::vector<bool> gone(n);
    for (std::size_t k = 0; k < n; ++k) gone[k] = rng_.bernoulli(config_.dungeon.gone_room_prob);
    if (std::all_of(gone.begin(), gone.end(), [](bool g) { return g; })) {
      gone[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(n) - 1))] = false;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Rect& s = slots_[k].area;
      Room room;
      if (gone[k]) {
        const int jx = static_cast<int>(rng_.uniform_int(s.x + 1, s.right() - 1));
        const int jy = static_cast<int>(rng_.uniform_int(s.y + 1, s.bottom() - 1));
        room.bounds = {jx, jy, 1, 1};
        room.kind = RoomKind::Gone;
        at({jx, jy}).kind = CellKind::Passage;
        floor_.rooms.push_back(room);
        continue;
      }
      // 1-cell margin on every side of the slot.
      const int avail_w = s.w - 2;
      const int avail_h = s.h - 2;
      const int rw = static_cast<int>(rng_.uniform_int(5, avail_w));
      const int rh = static_cast<int>(rng_.uniform_int(5, avail_h));
      const int rx = static_cast<int>(rng_.uniform_int(s.x + 1, s.x + 1 + avail_w - rw));
      const int ry = static_cast<int>(rng_.uniform_int(s.y + 1, s.y + 1 + avail_h - rh));
      room.bounds = {rx, ry, rw, rh};
      if (rng_.bernoulli(config_.dungeon.maze_room_prob)) {
        room.kind = RoomKind::Maze;
      } else if (rng_.bernoulli(config_.dungeon.dark_prob_at(depth_))) {
        room.kind = RoomKind::Dark;
      }
      carve_room(room);
      floor_.rooms.push_back(room);
    }
  }

  void carve_room(const Room& room) {
    const Rect& b = room.bounds;
    for (int y = b.y; y <= b.bottom(); ++y) {
      for (int x = b.x; x <= b.right(); ++x) {
        CellKind kind = CellKind::Floor;
        if (y == b.y || y == b.bottom()) {
          kind = CellKind::WallH;
        } else if (x == b.x || x == b.right()) {
          kind = CellKind::WallV;
        } else if (room.kind == RoomKind::Maze) {
          kind = CellKind::Void;
        }
        at({x, y}).kind = kind;
      }
    }
    if (room.kind == RoomKind::Maze) carve_maze(room.interior());
  }

  // Recursive backtracker over the nodes at even offsets of the interior.
  void carve_maze(const Rect& in) {
    const int nodes_x = (in.w + 1) / 2;
    const int nodes_y = (in.h + 1) / 2;
    Grid<std::uint8_t> visited(nodes_x, nodes_y, 0);
    auto cell_of = [&](Pos node) { return Pos{in.x + 2 * node.x, in.y + 2 * node.y}; };

    Pos start{static_cast<int>(rng_.uniform_int(0, nodes_x - 1)),
              static_cast<int>(rng_.uniform_int(0, nodes_y - 1))};
    std::vector<Pos> stack{start};
    visited[start] = 1;
    at(cell_of(start)).kind = CellKind::Passage;
    while (!stack.empty()) {
      const Pos cur = stack.back();
      std::vector<Pos> options;
      for (Pos d : kNeighbors4) {
        const Pos next = cur + d;
        if (visited.in_bounds(next) && !visited[next]) options.push_back(next);
      }
      if (options.empty()) {
        stack.pop_back();
        continue;
      }
      const Pos next = pick(options);
      const Pos a = cell_of(cur);
      const Pos b = cell_of(next);
      at({(a.x + b.x) / 2, (a.y + b.y) / 2}).kind = CellKind::Passage;
      at(b).kind = CellKind::Passage;
      visited[next] = 1;
      stack.push_back(next);
    }
  }

  struct Endpoint {
    Pos exit;                  // first passage cell outside the room
    std::optional<Pos> door;
  };

  enum class Side { Left, Right, Top, Bottom };

  Endpoint endpoint(std::size_t room_index, Side side) {
    Room& room = floor_.rooms[room_index];
    if (room.kind == RoomKind::Gone) return {{room.bounds.x, room.bounds.y}, std::nullopt};
    const Rect& b = room.bounds;
    std::vector<Pos> doors;
    Pos inward{};
    Pos outward{};
    switch (side) {
      case Side::Left:
      case Side::Right: {
        const int x = side == Side::Left ? b.x : b.right();
        inward = {side == Side::Left ? 1 : -1, 0};
        for (int y = b.y + 1; y < b.bottom(); ++y) doors.push_back({x, y});
        break;
      }
      case Side::Top:
      case Side::Bottom: {
        const int y = side == Side::Top ? b.y : b.bottom();
        inward = {0, side == Side::Top ? 1 : -1};
        for (int x = b.x + 1; x < b.right(); ++x) doors.push_back({x, y});
        break;
      }
    }
    outward = {-inward.x, -inward.y};
    const Rect in = room.interior();
    if (room.kind == RoomKind::Maze) {
      // Maze nodes sit at even interior offsets; a door in a node row/column
      // is at most one carved cell away from the maze.
      std::erase_if(doors, [&](Pos d) { return inward.x != 0 ? (d.y - in.y) % 2 != 0 : (d.x - in.x) % 2 != 0; });
    } else {
      std::erase_if(doors, [&](Pos d) { return !is_walkable_kind(floor_.grid[d + inward].kind); });
    }
    if (doors.empty()) throw GenerationError("room wall has no door position");
    const Pos door = pick(doors);
    for (Pos p = door + inward; in.contains(p) && floor_.grid[p].kind == CellKind::Void; p = p + inward) {
      at(p).kind = CellKind::Passage;
    }
    at(door).kind = CellKind::Door;
    room.doors.push_back(door);
    return {door + outward, door};
  }

  void dig(Pos p) {
    Cell& c = at(p);
    if (c.kind == CellKind::Void) {
      c.kind = CellKind::Passage;
    } else if (c.kind != CellKind::Passage) {
      throw GenerationError("corridor ran into a room");
    }
  }

  void dig_line(Pos from, Pos to) {
    const Pos step{(to.x > from.x) - (to.x < from.x), (to.y > from.y) - (to.y < from.y)};
    Pos p = from;
    dig(p);
    while (p != to) {
      p = p + step;
      dig(p);
    }
  }

  void maybe_hide_entry(const Endpoint& e) {
    if (!e.door) return;
    if (rng_.bernoulli(config_.dungeon.hidden_door_prob)) at(*e.door).hidden = true;
    if (rng_.bernoulli(config_.dungeon.hidden_door_prob / 2.0)) at(e.exit).hidden = true;
  }

  // `a` is the left (horizontal) or upper (vertical) slot.
  void connect(std::size_t a, std::size_t b, bool horizontal) {
    const Endpoint ea = endpoint(a, horizontal ? Side::Right : Side::Bottom);
    const Endpoint eb = endpoint(b, horizontal ? Side::Left : Side::Top);
    if (horizontal) {
      const int mx = static_cast<int>(rng_.uniform_int(ea.exit.x, eb.exit.x));
      dig_line(ea.exit, {mx, ea.exit.y});
      dig_line({mx, ea.exit.y}, {mx, eb.exit.y});
      dig_line({mx, eb.exit.y}, eb.exit);
    } else {
      const int my = static_cast<int>(rng_.uniform_int(ea.exit.y, eb.exit.y));
      dig_line(ea.exit, {ea.exit.x, my});
      dig_line({ea.exit.x, my}, {eb.exit.x, my});
      dig_line({eb.exit.x, my}, eb.exit);
    }
    maybe_hide_entry(ea);
    maybe_hide_entry(eb);
  }

  void connect_rooms() {
    const int nx = config_.dungeon.room_num_x;
    const int ny = config_.dungeon.room_num_y;
    struct Edge {
      std::size_t a, b;
      bool horizontal;
    };
    std::vector<Edge> edges;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const auto k = static_cast<std::size_t>(j * nx + i);
        if (i + 1 < nx) edges.push_back({k, k + 1, true});
        if (j + 1 < ny) edges.push_back({k, k + static_cast<std::size_t>(nx), false});
      }
    }
    for (std::size_t i = edges.size(); i > 1; --i) {
      const auto r = static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(edges[i - 1], edges[r]);
    }
    // Randomised Kruskal: tree edges always, the rest with a fixed probability.
    std::vector<std::size_t> parent(slots_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const Edge& e : edges) {
      const std::size_t ra = root(e.a);
      const std::size_t rb = root(e.b);
      const bool tree_edge = ra != rb;
      if (tree_edge) parent[ra] = rb;
      if (tree_edge || rng_.bernoulli(kExtraConnectionProb)) connect(e.a, e.b, e.horizontal);
    }
  }

  // Breadth-first step counts inside one room under the movement rules.
  std::vector<std::pair<Pos, int>> distances_within(const Room& room, Pos from) const {
    const Rect in = room.interior();
    Grid<int> dist(floor_.width(), floor_.height(), -1);
    auto open = [&](Pos p) {
      return in.contains(p) && is_walkable_kind(floor_.grid[p].kind);
    };
    std::deque<Pos> queue{from};
    dist[from] = 0;
    std::vector<std::pair<Pos, int>> out;
    while (!queue.empty()) {
      const Pos p = queue.front();
      queue.pop_front();
      out.emplace_back(p, dist[p]);
      for (Pos d : kNeighbors8) {
        const Pos q = p + d;
        if (!open(q) || dist[q] >= 0) continue;
        if (d.x != 0 && d.y != 0 && (!open({p.x + d.x, p.y}) || !open({p.x, p.y + d.y}))) continue;
        dist[q] = dist[p] + 1;
        queue.push_back(q);
      }
    }
    return out;
  }

  void place_spawn_and_stairs() {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < floor_.rooms.size(); ++i) {
      if (floor_.rooms[i].kind != RoomKind::Gone) live.push_back(i);
    }
    const std::size_t spawn_room =
        live[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1))];
    floor_.spawn = pick(walkable_interior(floor_.rooms[spawn_room]));

    Pos stairs{};
    if (live.size() >= 2) {
      std::erase(live, spawn_room);
      const std::size_t r =
          live[static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1))];
      stairs = pick(walkable_interior(floor_.rooms[r]));
    } else {
      std::vector<Pos> far;
      std::vector<Pos> farthest;
      int best = 0;
      for (const auto& [p, d] : distances_within(floor_.rooms[spawn_room], floor_.spawn)) {
        if (d >= 4) far.push_back(p);
        if (d > best) {
          best = d;
          farthest.clear();
        }
        if (d == best && d > 0) farthest.push_back(p);
      }
      if (far.empty() && farthest.empty()) throw GenerationError("room too small for stairs");
      stairs = pick(far.empty() ? farthest : far);
    }
    at(stairs).kind = CellKind::Stairs;
  }

  void place_gold() {
    if (!config_.gold.enabled) return;
    const int max_value = 50 + 10 * depth_;
    for (const Room& room : floor_.rooms) {
      if (room.kind == RoomKind::Gone) continue;
      if (!rng_.bernoulli(config_.gold.per_room_prob)) continue;
      std::vector<Pos> cells = walkable_interior(room);
      std::erase(cells, floor_.spawn);
      if (cells.empty()) continue;
      const Pos p = pick(cells);
      at(p).gold = static_cast<int>(rng_.uniform_int(2, max_value));
    }
  }

  const GameConfig& config_;
  int depth_;
  RngStream rng_;
  Floor floor_;
  std::vector<Slot> slots_;
};

}  // namespace

Floor generate_floor(const GameConfig& config, std::uint64_t seed, int depth) {
  if (depth < 1) throw GenerationError("depth must be >= 1");
  return FloorBuilder(config, seed, depth).build();
}

// ---------------------------------------------------------------------------
// Validation oracle. Deliberately knows nothing about how floors are built.

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const Check& c : checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    if (c.witness) out << " at (" << c.witness->x << "," << c.witness->y << ")";
    out << "\n";
  }
  return out.str();
}

namespace {

std::string describe(Pos p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

Check failed(std::string name, std::string detail, std::optional<Pos> witness = std::nullopt) {
  return {std::move(name), false, std::move(detail), witness, {}};
}

bool oracle_traversable(CellKind k) {
  return k == CellKind::Floor || k == CellKind::Passage || k == CellKind::Door || k == CellKind::Stairs;
}

}  // namespace

ValidationReport validate_floor(const Floor& floor) {
  ValidationReport report;
  const auto& grid = floor.grid;

  Check cells{"cell_invariants", true, {}, {}, {}};
  for (int y = 0; y < grid.height() && cells.passed; ++y) {
    for (int x = 0; x < grid.width() && cells.passed; ++x) {
      const Cell& c = grid[{x, y}];
      if (c.hidden && c.kind != CellKind::Door && c.kind != CellKind::Passage) {
        cells = failed("cell_invariants", "hidden flag on a non door/passage cell", Pos{x, y});
      } else if (c.gold < 0 || (c.gold > 0 && c.kind != CellKind::Floor && c.kind != CellKind::Passage)) {
        cells = failed("cell_invariants", "gold on a non floor/passage cell", Pos{x, y});
      }
    }
  }
  report.checks.push_back(cells);

  std::vector<Pos> stairs;
  std::vector<Pos> gold;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid[{x, y}].kind == CellKind::Stairs) stairs.push_back({x, y});
      if (grid[{x, y}].gold > 0) gold.push_back({x, y});
    }
  }
  Check unique{"single_stairs", true, {}, {}, {}};
  if (stairs.size() != 1) {
    unique.passed = false;
    unique.detail = std::to_string(stairs.size()) + " stairs cells";
    if (stairs.size() > 1) unique.witness = stairs[1];
  }
  report.checks.push_back(unique);

  Check rooms{"rooms_disjoint", true, {}, {}, {}};
  for (std::size_t i = 0; i < floor.rooms.size() && rooms.passed; ++i) {
    const Room& a = floor.rooms[i];
    if (a.kind == RoomKind::Gone) continue;
    for (std::size_t j = i + 1; j < floor.rooms.size(); ++j) {
      const Room& b = floor.rooms[j];
      if (b.kind != RoomKind::Gone && a.bounds.overlaps(b.bounds)) {
        rooms = failed("rooms_disjoint", "rooms " + std::to_string(i) + " and " + std::to_string(j) + " overlap",
                 Pos{b.bounds.x, b.bounds.y});
        break;
      }
    }
  }
  report.checks.push_back(rooms);

  Check doors{"room_doors", true, {}, {}, {}};
  for (const Room& room : floor.rooms) {
    if (room.kind == RoomKind::Gone) continue;
    bool has_door = false;
    const Rect& b = room.bounds;
    for (int y = b.y; y <= b.bottom(); ++y) {
      for (int x = b.x; x <= b.right(); ++x) {
        if (b.on_border({x, y}) && grid.in_bounds({x, y}) && grid[{x, y}].kind == CellKind::Door) has_door = true;
      }
    }
    if (!has_door) {
      doors = failed("room_doors", "room without a door", Pos{b.x, b.y});
      break;
    }
  }
  report.checks.push_back(doors);

  Check spawn{"spawn_in_room", true, {}, {}, {}};
  bool in_room = false;
  for (const Room& room : floor.rooms) {
    if (room.kind != RoomKind::Gone && room.interior().contains(floor.spawn)) in_room = true;
  }
  if (!grid.in_bounds(floor.spawn) || !oracle_traversable(grid[floor.spawn].kind) || grid[floor.spawn].hidden ||
      !in_room) {
    spawn = failed("spawn_in_room", "spawn is not a walkable cell inside a room", floor.spawn);
  }
  report.checks.push_back(spawn);

  // Plain BFS from spawn.
  Grid<int> parent(grid.width(), grid.height(), -2);
  if (grid.in_bounds(floor.spawn) && oracle_traversable(grid[floor.spawn].kind)) {
    std::deque<Pos> queue{floor.spawn};
    parent[floor.spawn] = -1;
    while (!queue.empty()) {
      const Pos p = queue.front();
      queue.pop_front();
      for (Pos d : kNeighbors4) {
        const Pos q = p + d;
        if (!grid.in_bounds(q) || parent[q] != -2 || !oracle_traversable(grid[q].kind)) continue;
        parent[q] = p.y * grid.width() + p.x;
        queue.push_back(q);
      }
    }
  }
  auto path_to = [&](Pos target) {
    std::vector<Pos> path;
    for (int idx = target.y * grid.width() + target.x; idx >= 0;) {
      const Pos p{idx % grid.width(), idx / grid.width()};
      path.push_back(p);
      idx = parent[p];
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  Check reach{"stairs_reachable", true, {}, {}, {}};
  if (stairs.empty()) {
    reach = failed("stairs_reachable", "no stairs");
  } else if (parent[stairs[0]] == -2) {
    reach = failed("stairs_reachable", "stairs unreachable from spawn " + describe(floor.spawn), stairs[0]);
  } else {
    reach.path = path_to(stairs[0]);
    reach.detail = std::to_string(reach.path.size() - 1) + " steps";
  }
  report.checks.push_back(reach);

  Check loot{"gold_reachable", true, {}, {}, {}};
  for (Pos g : gold) {
    if (parent[g] == -2) {
      loot = failed("gold_reachable", "gold pile unreachable", g);
      break;
    }
  }
  report.checks.push_back(loot);
  return report;
}

char glyph_at(const Floor& floor, Pos p, bool reveal_hidden) {
  const Cell& c = floor.grid[p];
  switch (c.kind) {
    case CellKind::Void:
      return ' ';
    case CellKind::Floor:
      return c.gold > 0 ? '*' : '.';
    case CellKind::Passage:
      if (c.hidden && !reveal_hidden) return ' ';
      return c.gold > 0 ? '*' : '#';
    case CellKind::WallH:
      return '-';
    case CellKind::WallV:
      return '|';
    case CellKind::Door: {
      if (!c.hidden || reveal_hidden) return '+';
      auto is_wall_h = [&](Pos q) {
        return floor.grid.in_bounds(q) && floor.grid[q].kind == CellKind::WallH;
      };
      return is_wall_h({p.x - 1, p.y}) || is_wall_h({p.x + 1, p.y}) ? '-' : '|';
    }
    case CellKind::Stairs:
      return '%';
  }
  return ' ';
}

CharGrid render_map(const Floor& floor, bool reveal_hidden) {
  CharGrid out(floor.width(), floor.height());
  for (int y = 0; y < floor.height(); ++y) {
    for (int x = 0; x < floor.width(); ++x) out[{x, y}] = glyph_at(floor, {x, y}, reveal_hidden);
  }
  return out;
}

}  // namespace roguegym
