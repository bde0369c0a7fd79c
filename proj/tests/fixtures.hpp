#pragma once

#include <string>
#include <vector>

#include "roguegym/dungeon.hpp"
#include "roguegym/runtime.hpp"

namespace roguegym::testing {

// Floors from ASCII art. Legend: the usual map glyphs, plus
//   '@' spawn (floor), '*' floor with `gold` coins, 'D' hidden door,
//   'P' hidden passage, '$' passage with `gold` coins.
// Rooms are passed explicitly since art alone does not say dark vs normal.
inline Floor floor_from_art(const std::vector<std::string>& art, std::vector<Room> rooms, int gold = 10,
                            int depth = 1) {
  Floor f;
  f.depth = depth;
  f.grid = Grid<Cell>(static_cast<int>(art.front().size()), static_cast<int>(art.size()));
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      Cell& c = f.grid[{x, y}];
      switch (art[static_cast<std::size_t>(y)].at(static_cast<std::size_t>(x))) {
        case '.': c.kind = CellKind::Floor; break;
        case '@': c.kind = CellKind::Floor; f.spawn = {x, y}; break;
        case '*': c.kind = CellKind::Floor; c.gold = gold; break;
        case '#': c.kind = CellKind::Passage; break;
        case '$': c.kind = CellKind::Passage; c.gold = gold; break;
        case 'P': c.kind = CellKind::Passage; c.hidden = true; break;
        case '-': c.kind = CellKind::WallH; break;
        case '|': c.kind = CellKind::WallV; break;
        case '+': c.kind = CellKind::Door; break;
        case 'D': c.kind = CellKind::Door; c.hidden = true; break;
        case '%': c.kind = CellKind::Stairs; break;
        default: c.kind = CellKind::Void; break;
      }
    }
  }
  f.rooms = std::move(rooms);
  return f;
}

/// Config sized to an art fixture (validation requires >= 8x8).
inline GameConfig fixture_config(int width, int height) {
  GameConfig c = default_config();
  c.width = width;
  c.height = height;
  c.dungeon.room_num_x = 1;
  c.dungeon.room_num_y = 1;
  return c;
}

}  // namespace roguegym::testing
