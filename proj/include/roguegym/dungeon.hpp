#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "roguegym/config.hpp"
#include "roguegym/grid.hpp"

namespace roguegym {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CellKind : std::uint8_t { Void, Floor, Passage, WallH, WallV, Door, Stairs };

struct Cell {
  CellKind kind = CellKind::Void;
  bool hidden = false;
  int gold = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Walkable once discovered. Hidden cells still count.
bool is_walkable_kind(CellKind kind);

enum class RoomKind : std::uint8_t { Normal, Dark, Maze, Gone };

// A non-Gone room's bounds include its walls. A Gone room is the 1x1 passage
// junction left in its slot.
struct Room {
  Rect bounds;
  RoomKind kind = RoomKind::Normal;
  std::vector<Pos> doors;

  Rect interior() const {
    return {bounds.x + 1, bounds.y + 1, bounds.w - 2, bounds.h - 2};
  }
  friend bool operator==(const Room&, const Room&) = default;
};

struct Floor {
  Grid<Cell> grid;
  std::vector<Room> rooms;
  int depth = 1;
  Pos spawn;

  int width() const { return grid.width(); }
  int height() const { return grid.height(); }

  /// Index of the non-Gone room whose interior contains `p`.
  std::optional<std::size_t> room_at(Pos p) const;
  std::optional<Pos> find_stairs() const;
  std::int64_t total_gold() const;

  friend bool operator==(const Floor&, const Floor&) = default;
};

/// Deterministic in (config, seed, depth); draws only from "worldgen/<depth>".
Floor generate_floor(const GameConfig& config, std::uint64_t seed, int depth);

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
  std::optional<Pos> witness;
  std::vector<Pos> path;  // spawn -> target when a reachability check passes
};

struct ValidationReport {
  std::vector<Check> checks;
  bool all_passed() const;
  const Check* find(const std::string& name) const;
  std::string summary() const;
};

/// Independent oracle for the Floor invariants: 4-connected BFS from spawn
/// over Floor/Passage/Door/Stairs, hidden cells counted as traversable.
ValidationReport validate_floor(const Floor& floor);

/// Full map in base glyphs. Hidden doors draw as the wall they sit in,
/// hidden passages as void, unless `reveal_hidden`.
CharGrid render_map(const Floor& floor, bool reveal_hidden);
char glyph_at(const Floor& floor, Pos p, bool reveal_hidden);

}  // namespace roguegym
