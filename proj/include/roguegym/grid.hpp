#pragma once

#include <cassert>
#include <string>
#include <string_view>
#include <vector>

namespace roguegym {

struct Pos {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pos&, const Pos&) = default;
  friend auto operator<=>(const Pos&, const Pos&) = default;
  Pos operator+(Pos o) const { return {x + o.x, y + o.y}; }
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  int right() const { return x + w - 1; }
  int bottom() const { return y + h - 1; }
  bool contains(Pos p) const { return p.x >= x && p.x <= right() && p.y >= y && p.y <= bottom(); }
  bool on_border(Pos p) const {
    return contains(p) && (p.x == x || p.x == right() || p.y == y || p.y == bottom());
  }
  bool overlaps(const Rect& o) const {
    return x <= o.right() && o.x <= right() && y <= o.bottom() && o.y <= bottom();
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major fixed-size 2D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height), cells_(static_cast<std::size_t>(width * height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_; }

  T& operator[](Pos p) {
    assert(in_bounds(p));
    return cells_[static_cast<std::size_t>(p.y * width_ + p.x)];
  }
  const T& operator[](Pos p) const {
    assert(in_bounds(p));
    return cells_[static_cast<std::size_t>(p.y * width_ + p.x)];
  }

  const std::vector<T>& data() const { return cells_; }
  std::vector<T>& data() { return cells_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> cells_;
};

/// A rendered screen: one character per cell.
class CharGrid {
 public:
  CharGrid() = default;
  CharGrid(int width, int height, char fill = ' ') : grid_(width, height, fill) {}

  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  char& operator[](Pos p) { return grid_[p]; }
  char operator[](Pos p) const { return grid_[p]; }

  std::string_view row(int y) const {
    return {grid_.data().data() + static_cast<std::size_t>(y * width()),
            static_cast<std::size_t>(width())};
  }
  std::vector<std::string> rows() const {
    std::vector<std::string> out;
    for (int y = 0; y < height(); ++y) out.emplace_back(row(y));
    return out;
  }
  /// LF line endings, one trailing newline.
  std::string to_string() const {
    std::string out;
    out.reserve(static_cast<std::size_t>((width() + 1) * height()));
    for (int y = 0; y < height(); ++y) {
      out.append(row(y));
      out.push_back('\n');
    }
    return out;
  }
  static CharGrid from_rows(const std::vector<std::string>& rows) {
    CharGrid g(rows.empty() ? 0 : static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) g[{x, y}] = rows[static_cast<std::size_t>(y)].at(x);
    }
    return g;
  }

  friend bool operator==(const CharGrid&, const CharGrid&) = default;

 private:
  Grid<char> grid_;
};

inline constexpr Pos kNeighbors8[8] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                       {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
inline constexpr Pos kNeighbors4[4] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};

}  // namespace roguegym
