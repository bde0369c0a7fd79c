#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "roguegym/grid.hpp"
#include "roguegym/runtime.hpp"

namespace roguegym {

class EncodingError : public std::runtime_error {
 public:
  EncodingError(const std::string& what, Pos where) : std::runtime_error(what), where_(where) {}
  Pos where() const { return where_; }

 private:
  Pos where_;
};

/// Binary planes, layout (channel, y, x), one byte per entry.
struct ChannelTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(int c, int y, int x) const {
    return data[static_cast<std::size_t>((c * height + y) * width + x)];
  }
  friend bool operator==(const ChannelTensor&, const ChannelTensor&) = default;
};

ChannelTensor encode(const CharGrid& view, const std::vector<char>& symbol_table);
/// Inverse of encode; throws EncodingError if a cell is not one-hot.
CharGrid decode(const ChannelTensor& tensor, const std::vector<char>& symbol_table);

struct Status {
  int depth = 1;
  double gold_collected = 0.0;
  int step_count = 0;
  std::optional<int> hp;
  char under_player = '.';  // what '@' is standing on
  friend bool operator==(const Status&, const Status&) = default;
};

struct Observation {
  CharGrid chars;
  Status status;
  std::vector<char> symbol_table;

  /// One-hot view of `chars`, computed on request.
  ChannelTensor channels() const { return encode(chars, symbol_table); }
};

/// Agent view: seen cells via render_map, enemies in the field of view, '@'.
CharGrid render_view(const GameState& state);
/// Everything, hidden features included. Debugging only.
CharGrid render_revealed(const GameState& state);

Observation observe(const GameState& state);

}  // namespace roguegym
