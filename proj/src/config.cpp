#include "roguegym/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace roguegym {

using nlohmann::json;

double DungeonConfig::dark_prob_at(int depth) const {
  if (dark_room_prob) return *dark_room_prob;
  return std::min(0.12 * depth, 0.5);
}

std::vector<char> default_symbol_table(const EnemyConfig& enemies) {
  std::vector<char> table(kBaseSymbols.begin(), kBaseSymbols.end());
  if (enemies.enabled) {
    for (char c : enemies.symbols) {
      if (std::find(table.begin(), table.end(), c) == table.end()) table.push_back(c);
    }
  }
  return table;
}

GameConfig default_config() {
  GameConfig config;
  config.symbol_table = default_symbol_table(config.enemies);
  return config;
}

namespace {

void require_probability(double p, const std::string& field) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw ConfigError(field, "probability must lie in [0, 1]");
  }
}

bool contains(const std::vector<char>& table, char c) {
  return std::find(table.begin(), table.end(), c) != table.end();
}

// Reads an object member by member, rejecting keys nobody asked for.
class StrictObject {
 public:
  StrictObject(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    return &*it;
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      const auto wide = v->get<std::int64_t>();
      if (wide < INT32_MIN || wide > INT32_MAX) throw ConfigError(field(key), "integer out of range");
      out = static_cast<int>(wide);
    }
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      out = v->get<double>();
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key), "expected a boolean");
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

void validate(const GameConfig& c) {
  if (c.width < 8) throw ConfigError("width", "must be >= 8");
  if (c.height < 8) throw ConfigError("height", "must be >= 8");
  if (c.max_steps < 1) throw ConfigError("max_steps", "must be >= 1");
  if (c.dungeon.room_num_x < 1) throw ConfigError("dungeon.room_num_x", "must be >= 1");
  if (c.dungeon.room_num_y < 1) throw ConfigError("dungeon.room_num_y", "must be >= 1");
  // 3x3 interior + 2 walls + 1-cell margin on each side.
  if (c.slot_width() < 7) {
    throw ConfigError("dungeon.room_num_x", "room slots narrower than 7 cells cannot hold a 3x3 room");
  }
  if (c.slot_height() < 7) {
    throw ConfigError("dungeon.room_num_y", "room slots shorter than 7 cells cannot hold a 3x3 room");
  }
  if (c.dungeon.dark_room_prob) require_probability(*c.dungeon.dark_room_prob, "dungeon.dark_room_prob");
  require_probability(c.dungeon.maze_room_prob, "dungeon.maze_room_prob");
  require_probability(c.dungeon.hidden_door_prob, "dungeon.hidden_door_prob");
  require_probability(c.dungeon.gone_room_prob, "dungeon.gone_room_prob");
  require_probability(c.search_success_prob, "search_success_prob");
  require_probability(c.gold.per_room_prob, "gold.per_room_prob");
  if (!std::isfinite(c.pseudo_reward_descend) || c.pseudo_reward_descend < 0.0) {
    throw ConfigError("pseudo_reward_descend", "must be a finite non-negative number");
  }
  if (c.enemies.enabled) {
    if (c.enemies.count < 0) throw ConfigError("enemies.count", "must be >= 0");
    if (c.enemies.hp < 1) throw ConfigError("enemies.hp", "must be >= 1");
    if (c.enemies.damage < 0) throw ConfigError("enemies.damage", "must be >= 0");
    if (c.enemies.player_hp < 1) throw ConfigError("enemies.player_hp", "must be >= 1");
    if (c.enemies.symbols.empty()) throw ConfigError("enemies.symbols", "must not be empty");
    for (char s : c.enemies.symbols) {
      if (s < 'A' || s > 'Z') throw ConfigError("enemies.symbols", "enemy symbols must be in A-Z");
    }
  }
  if (c.amulet.enabled) {
    if (c.amulet.depth < 2) throw ConfigError("amulet.depth", "must be >= 2");
    if (!std::isfinite(c.amulet.bonus) || c.amulet.bonus < 0.0) {
      throw ConfigError("amulet.bonus", "must be a finite non-negative number");
    }
  }

  const auto& table = c.symbol_table;
  std::set<char> distinct(table.begin(), table.end());
  if (distinct.size() != table.size()) throw ConfigError("symbol_table", "duplicate characters");
  for (char s : kBaseSymbols) {
    if (!contains(table, s)) {
      throw ConfigError("symbol_table", std::string("missing required character '") + s + "'");
    }
  }
  if (c.enemies.enabled) {
    for (char s : c.enemies.symbols) {
      if (!contains(table, s)) {
        throw ConfigError("symbol_table", std::string("missing enemy character '") + s + "'");
      }
    }
  }
}

GameConfig config_from_json(const json& doc) {
  GameConfig c;
  StrictObject root(doc, "");
  root.read("width", c.width);
  root.read("height", c.height);
  root.read("max_steps", c.max_steps);
  root.read("search_success_prob", c.search_success_prob);
  root.read("pseudo_reward_descend", c.pseudo_reward_descend);

  if (const json* d = root.find("dungeon")) {
    StrictObject obj(*d, "dungeon");
    std::string style = "rogue";
    obj.read("style", style);
    if (style != "rogue") throw ConfigError("dungeon.style", "unsupported style '" + style + "'");
    obj.read("room_num_x", c.dungeon.room_num_x);
    obj.read("room_num_y", c.dungeon.room_num_y);
    if (const json* v = obj.find("dark_room_prob"); v && !v->is_null()) {
      if (!v->is_number()) throw ConfigError("dungeon.dark_room_prob", "expected a number or null");
      c.dungeon.dark_room_prob = v->get<double>();
    }
    obj.read("maze_room_prob", c.dungeon.maze_room_prob);
    obj.read("hidden_door_prob", c.dungeon.hidden_door_prob);
    obj.read("gone_room_prob", c.dungeon.gone_room_prob);
    obj.finish();
  }
  if (const json* g = root.find("gold")) {
    StrictObject obj(*g, "gold");
    obj.read("enabled", c.gold.enabled);
    obj.read("per_room_prob", c.gold.per_room_prob);
    obj.finish();
  }
  if (const json* e = root.find("enemies")) {
    StrictObject obj(*e, "enemies");
    obj.read("enabled", c.enemies.enabled);
    obj.read("count", c.enemies.count);
    obj.read("hp", c.enemies.hp);
    obj.read("damage", c.enemies.damage);
    obj.read("player_hp", c.enemies.player_hp);
    obj.read("symbols", c.enemies.symbols);
    obj.finish();
  }
  if (const json* a = root.find("amulet")) {
    StrictObject obj(*a, "amulet");
    obj.read("enabled", c.amulet.enabled);
    obj.read("depth", c.amulet.depth);
    obj.read("bonus", c.amulet.bonus);
    obj.finish();
  }
  if (const json* t = root.find("symbol_table")) {
    if (!t->is_array()) throw ConfigError("symbol_table", "expected an array of 1-character strings");
    for (const auto& entry : *t) {
      if (!entry.is_string() || entry.get_ref<const std::string&>().size() != 1) {
        throw ConfigError("symbol_table", "expected an array of 1-character strings");
      }
      c.symbol_table.push_back(entry.get_ref<const std::string&>()[0]);
    }
  } else {
    c.symbol_table = default_symbol_table(c.enemies);
  }
  root.finish();
  validate(c);
  return c;
}

GameConfig parse_config(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); })) {
    return default_config();
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return config_from_json(doc);
}

GameConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json to_json(const GameConfig& c) {
  json dungeon = {
      {"style", "rogue"},
      {"room_num_x", c.dungeon.room_num_x},
      {"room_num_y", c.dungeon.room_num_y},
      {"dark_room_prob", c.dungeon.dark_room_prob ? json(*c.dungeon.dark_room_prob) : json(nullptr)},
      {"maze_room_prob", c.dungeon.maze_room_prob},
      {"hidden_door_prob", c.dungeon.hidden_door_prob},
      {"gone_room_prob", c.dungeon.gone_room_prob},
  };
  json symbols = json::array();
  for (char s : c.symbol_table) symbols.push_back(std::string(1, s));
  return json{
      {"width", c.width},
      {"height", c.height},
      {"max_steps", c.max_steps},
      {"dungeon", std::move(dungeon)},
      {"search_success_prob", c.search_success_prob},
      {"gold", {{"enabled", c.gold.enabled}, {"per_room_prob", c.gold.per_room_prob}}},
      {"pseudo_reward_descend", c.pseudo_reward_descend},
      {"enemies",
       {{"enabled", c.enemies.enabled},
        {"count", c.enemies.count},
        {"hp", c.enemies.hp},
        {"damage", c.enemies.damage},
        {"player_hp", c.enemies.player_hp},
        {"symbols", c.enemies.symbols}}},
      {"amulet", {{"enabled", c.amulet.enabled}, {"depth", c.amulet.depth}, {"bonus", c.amulet.bonus}}},
      {"symbol_table", std::move(symbols)},
  };
}

std::string serialize(const GameConfig& config) { return to_json(config).dump(2) + "\n"; }

}  // namespace roguegym
