#include "roguegym/observe.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace roguegym {

namespace {

std::array<int, 256> index_table(const std::vector<char>& symbol_table) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t c = 0; c < symbol_table.size(); ++c) {
    lookup[static_cast<unsigned char>(symbol_table[c])] = static_cast<int>(c);
  }
  return lookup;
}

void overlay_actors(const GameState& state, CharGrid& out) {
  if (!state.enemies.empty()) {
    const std::vector<Pos> fov = field_of_view(state);
    for (const Enemy& e : state.enemies) {
      if (std::find(fov.begin(), fov.end(), e.pos) != fov.end()) out[e.pos] = e.symbol;
    }
  }
  out[state.player] = '@';
}

}  // namespace

ChannelTensor encode(const CharGrid& view, const std::vector<char>& symbol_table) {
  const auto lookup = index_table(symbol_table);
  ChannelTensor t{static_cast<int>(symbol_table.size()), view.height(), view.width(), {}};
  t.data.assign(static_cast<std::size_t>(t.channels * t.height * t.width), 0);
  const std::size_t plane = static_cast<std::size_t>(t.height * t.width);
  for (int y = 0; y < view.height(); ++y) {
    for (int x = 0; x < view.width(); ++x) {
      const char ch = view[{x, y}];
      const int c = lookup[static_cast<unsigned char>(ch)];
      if (c < 0) {
        throw EncodingError("character '" + std::string(1, ch) + "' at (" + std::to_string(x) + "," +
                                std::to_string(y) + ") is not in the symbol table",
                            {x, y});
      }
      t.data[static_cast<std::size_t>(c) * plane + static_cast<std::size_t>(y * t.width + x)] = 1;
    }
  }
  return t;
}

CharGrid decode(const ChannelTensor& tensor, const std::vector<char>& symbol_table) {
  if (tensor.channels != static_cast<int>(symbol_table.size())) {
    throw EncodingError("channel count does not match the symbol table", {0, 0});
  }
  CharGrid view(tensor.width, tensor.height);
  for (int y = 0; y < tensor.height; ++y) {
    for (int x = 0; x < tensor.width; ++x) {
      int hot = -1;
      for (int c = 0; c < tensor.channels; ++c) {
        if (tensor.at(c, y, x) == 0) continue;
        if (tensor.at(c, y, x) != 1 || hot >= 0) {
          throw EncodingError("cell (" + std::to_string(x) + "," + std::to_string(y) + ") is not one-hot", {x, y});
        }
        hot = c;
      }
      if (hot < 0) {
        throw EncodingError("cell (" + std::to_string(x) + "," + std::to_string(y) + ") has no active channel", {x, y});
      }
      view[{x, y}] = symbol_table[static_cast<std::size_t>(hot)];
    }
  }
  return view;
}

CharGrid render_view(const GameState& state) {
  const Floor& floor = state.floor;
  CharGrid out(floor.width(), floor.height());
  for (int y = 0; y < floor.height(); ++y) {
    for (int x = 0; x < floor.width(); ++x) {
      if (state.seen[{x, y}]) out[{x, y}] = glyph_at(floor, {x, y}, false);
    }
  }
  overlay_actors(state, out);
  return out;
}

CharGrid render_revealed(const GameState& state) {
  CharGrid out = render_map(state.floor, true);
  for (const Enemy& e : state.enemies) out[e.pos] = e.symbol;
  out[state.player] = '@';
  return out;
}

Observation observe(const GameState& state) {
  Observation obs;
  obs.chars = render_view(state);
  obs.status.depth = state.depth;
  obs.status.gold_collected = state.gold_collected;
  obs.status.step_count = state.step_count;
  if (state.config.enemies.enabled) obs.status.hp = state.hp;
  obs.status.under_player = glyph_at(state.floor, state.player, false);
  obs.symbol_table = state.config.symbol_table;
  return obs;
}

}  // namespace roguegym
