#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace roguegym {

/// Malformed JSON. The message carries the parser's byte position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed document that violates a config invariant. `field()` is the
/// dotted path of the offending key, e.g. "dungeon.room_num_x".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class DungeonStyle { Rogue };

struct DungeonConfig {
  DungeonStyle style = DungeonStyle::Rogue;
  int room_num_x = 2;
  int room_num_y = 2;
  // Unset: min(0.12 * depth, 0.5). Set: fixed per-room probability at every depth.
  std::optional<double> dark_room_prob;
  double maze_room_prob = 0.05;
  double hidden_door_prob = 0.15;
  double gone_room_prob = 0.2;

  double dark_prob_at(int depth) const;

  friend bool operator==(const DungeonConfig&, const DungeonConfig&) = default;
};

struct GoldConfig {
  bool enabled = true;
  double per_room_prob = 0.5;
  friend bool operator==(const GoldConfig&, const GoldConfig&) = default;
};

struct EnemyConfig {
  bool enabled = false;
  int count = 3;
  int hp = 3;
  int damage = 1;
  int player_hp = 12;
  std::string symbols = "BEHKS";
  friend bool operator==(const EnemyConfig&, const EnemyConfig&) = default;
};

struct AmuletConfig {
  bool enabled = false;
  int depth = 26;
  double bonus = 1000.0;
  friend bool operator==(const AmuletConfig&, const AmuletConfig&) = default;
};

/// Complete environment description; the unit of experiment reproducibility.
/// Defaults are the experiment profile: 32x16, 500 steps, no enemies, 50-gold
/// descend bonus.
struct GameConfig {
  int width = 32;
  int height = 16;
  int max_steps = 500;
  DungeonConfig dungeon;
  double search_success_prob = 0.2;
  GoldConfig gold;
  double pseudo_reward_descend = 50.0;
  EnemyConfig enemies;
  AmuletConfig amulet;
  std::vector<char> symbol_table;

  int slot_width() const { return width / dungeon.room_num_x; }
  int slot_height() const { return height / dungeon.room_num_y; }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// Characters every floor can produce, in channel order.
inline constexpr std::string_view kBaseSymbols = " @.#|-%+*";

std::vector<char> default_symbol_table(const EnemyConfig& enemies);

/// The documented default configuration (already validated).
GameConfig default_config();

/// Throws ConfigError naming the first offending field.
void validate(const GameConfig& config);

/// Strict parse: unknown keys are rejected. Empty or whitespace-only text
/// yields the default configuration.
GameConfig parse_config(std::string_view text);
GameConfig config_from_json(const nlohmann::json& doc);
GameConfig load_config_file(const std::string& path);

nlohmann::json to_json(const GameConfig& config);
std::string serialize(const GameConfig& config);

}  // namespace roguegym
