// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "roguegym/harness.hpp"
#include "roguegym/observe.hpp"
#include "roguegym/replay.hpp"

namespace rg = roguegym;
using rg::Pos;

namespace {

// Pinned budgets and tolerances.
constexpr double kDeterminismBudgetS = 10.0;
constexpr double kSolvabilityBudgetS = 60.0;
constexpr double kProtocolBudgetS = 600.0;
constexpr double kEntropyTol = 1e-9;
constexpr long long kFuzzSteps = 100000;
constexpr std::uint64_t kProtocolEvalSeed = 2024;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) { return rg::format_number(v); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ROGUEGYM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 14x8: normal room with gold and stairs next to spawn.
const std::vector<std::string> kRewardArt = {
    "              ", " ----------   ", " |..@*....|   ", " |...%....|   ", " |........|   ",
    " ----------   ", "              ", "              "};

rg::Floor reward_floor(int gold) {
  return rg::testing::floor_from_art(kRewardArt, {rg::Room{{1, 1, 10, 5}, rg::RoomKind::Normal, {}}}, gold);
}

// Normal room left, hidden door, dark room right.
const std::vector<std::string> kHiddenArt = {
    "              ", " -----  ----- ", " |.@.+##D...| ", " |...|  |...| ", " |...|  |.%.| ",
    " -----  ----- ", "              ", "              "};

rg::Floor hidden_floor() {
  return rg::testing::floor_from_art(
      kHiddenArt,
      {rg::Room{{1, 1, 5, 5}, rg::RoomKind::Normal, {{5, 2}}}, rg::Room{{8, 1, 5, 5}, rg::RoomKind::Dark, {{8, 2}}}});
}

Outcome determinism() {
  const rg::GameConfig c = rg::default_config();
  Stopwatch sw;
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (int depth = 1; depth <= 3; ++depth) {
      const std::string a = rg::render_map(rg::generate_floor(c, seed, depth), true).to_string();
      const std::string b = rg::render_map(rg::generate_floor(c, seed, depth), true).to_string();
      if (a != b) ++mismatches;
    }
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < kDeterminismBudgetS,
          "600 floors, " + std::to_string(mismatches) + " mismatches, " + fmt(t) + " s (budget " +
              fmt(kDeterminismBudgetS) + " s)"};
}

Outcome solvability() {
  const rg::GameConfig c = rg::default_config();
  Stopwatch sw;
  int failures = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (int depth = 1; depth <= 5; ++depth) {
      const rg::ValidationReport r = rg::validate_floor(rg::generate_floor(c, seed, depth));
      if (!r.all_passed()) {
        if (failures++ == 0) first = " first: seed " + std::to_string(seed) + " depth " + std::to_string(depth);
      }
    }
  }
  const double t = sw.seconds();
  return {failures == 0 && t < kSolvabilityBudgetS,
          "5000 floors, " + std::to_string(failures) + " invalid, " + fmt(t) + " s (budget " +
              fmt(kSolvabilityBudgetS) + " s)" + first};
}

Outcome reward_semantics() {
  const rg::GameConfig c = rg::testing::fixture_config(14, 8);
  std::ostringstream d;
  bool ok = true;
  for (int gold : {2, 17, 80}) {
    rg::GameState s = rg::new_game_on_floor(c, reward_floor(gold));
    const rg::Transition t = rg::apply(s, rg::Action::Right);
    ok = ok && t.reward == static_cast<double>(gold);
    d << "pile " << gold << "->" << fmt(t.reward) << "; ";
  }
  {
    rg::GameState s = rg::new_game_on_floor(c, reward_floor(5));
    rg::apply(s, rg::Action::DownRight);
    const rg::Transition t = rg::apply(s, rg::Action::Descend);
    ok = ok && t.reward == 50.0 && s.depth == 2 && rg::default_config().pseudo_reward_descend == 50.0;
    d << "descend->" << fmt(t.reward) << " depth " << s.depth << "; ";
  }
  int bad_lengths = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    rg::Env env(rg::default_config());
    env.reset(seed);
    int steps = 0;
    bool done = false;
    while (!done) {
      done = env.step(static_cast<int>((seed + static_cast<std::uint64_t>(steps)) % 11)).done;
      ++steps;
    }
    if (steps != 500) ++bad_lengths;
  }
  ok = ok && bad_lengths == 0;
  d << "20 episodes, " << bad_lengths << " not ending at step 500";
  return {ok, d.str()};
}

Outcome action_space() {
  const std::string table = ".hjklnbuy>s";
  bool ok = rg::kNumActions == 11;
  std::set<char> keys;
  rg::Env env(rg::default_config());
  env.reset(0);
  for (int i = 0; i < rg::kNumActions; ++i) {
    const auto a = rg::action_from_index(i);
    ok = ok && a && rg::action_key(*a) == table[static_cast<std::size_t>(i)];
    keys.insert(rg::kActionKeys[static_cast<std::size_t>(i)]);
    env.step(i);
  }
  bool rejects = false;
  try {
    env.step(11);
  } catch (const std::invalid_argument&) {
    rejects = true;
  }
  ok = ok && keys.size() == 11 && rejects;
  return {ok, std::to_string(rg::kNumActions) + " actions, keys " + std::string(rg::kActionKeys.begin(), rg::kActionKeys.end()) +
                  (rejects ? ", index 11 rejected" : ", index 11 accepted")};
}

// A cell may be shown only if some earlier player position on this floor had
// it in its 3x3 neighborhood, or stood in the interior of the normal room
// whose bounds contain it. Tracked here independently of GameState::seen.
struct ExposureOracle {
  rg::Grid<std::uint8_t> allowed;
  int depth = -1;

  void observe_position(const rg::GameState& s) {
    if (s.depth != depth) {
      allowed = rg::Grid<std::uint8_t>(s.floor.width(), s.floor.height(), 0);
      depth = s.depth;
    }
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Pos p{s.player.x + dx, s.player.y + dy};
        if (allowed.in_bounds(p)) allowed[p] = 1;
      }
    for (const rg::Room& r : s.floor.rooms) {
      if (r.kind != rg::RoomKind::Normal || !r.interior().contains(s.player)) continue;
      for (int y = r.bounds.y; y <= r.bounds.bottom(); ++y)
        for (int x = r.bounds.x; x <= r.bounds.right(); ++x) allowed[Pos{x, y}] = 1;
    }
  }

  // Returns the number of leaked cells in `obs`.
  int leaks(const rg::GameState& s, const rg::Observation& obs) const {
    int n = 0;
    for (int y = 0; y < s.floor.height(); ++y)
      for (int x = 0; x < s.floor.width(); ++x) {
        const Pos p{x, y};
        const char ch = obs.chars[p];
        const rg::Cell& cell = s.floor.grid[p];
        if (ch != ' ' && !allowed[p]) ++n;
        if (cell.hidden && cell.kind == rg::CellKind::Door && ch == '+') ++n;
        if (cell.hidden && cell.kind == rg::CellKind::Passage && ch == '#') ++n;
      }
    return n;
  }
};

Outcome observation_contract() {
  const rg::GameConfig c = rg::default_config();
  rg::Env env(c);
  rg::RngStream actions = rg::derive_stream(7, "acceptance/fuzz");
  long long steps = 0;
  int leaks = 0;
  int shape_errors = 0;
  int onehot_errors = 0;
  std::uint64_t seed = 0;
  auto check = [&](const rg::Observation& obs, const ExposureOracle& oracle) {
    leaks += oracle.leaks(*env.state(), obs);
    const rg::ChannelTensor t = obs.channels();
    if (t.channels != 9 || t.height != 16 || t.width != 32) ++shape_errors;
    for (int y = 0; y < t.height; ++y)
      for (int x = 0; x < t.width; ++x) {
        int sum = 0;
        for (int ch = 0; ch < t.channels; ++ch) sum += t.at(ch, y, x);
        if (sum != 1) ++onehot_errors;
      }
  };
  while (steps < kFuzzSteps) {
    ExposureOracle oracle;
    rg::Observation obs = env.reset(seed++);
    oracle.observe_position(*env.state());
    check(obs, oracle);
    bool done = false;
    while (!done && steps < kFuzzSteps) {
      const rg::StepResult r = env.step(static_cast<int>(actions.uniform_int(0, 10)));
      ++steps;
      done = r.done;
      oracle.observe_position(*env.state());
      check(r.observation, oracle);
    }
  }
  return {leaks == 0 && shape_errors == 0 && onehot_errors == 0,
          "shape (9,16,32), " + std::to_string(steps) + " steps over " + std::to_string(seed) + " episodes, " +
              std::to_string(leaks) + " leaks, " + std::to_string(shape_errors) + " shape errors, " +
              std::to_string(onehot_errors) + " non-one-hot cells"};
}

int count_seen(const rg::GameState& s) {
  int n = 0;
  for (std::uint8_t v : s.seen.data()) n += v != 0;
  return n;
}

Outcome partial_observability() {
  std::ostringstream d;
  bool ok = true;

  // Dark rooms everywhere: each turn adds at most the 3x3 neighborhood.
  rg::GameConfig dark = rg::default_config();
  dark.dungeon.dark_room_prob = 1.0;
  dark.dungeon.maze_room_prob = 0.0;
  int max_added = 0;
  int shrinks = 0;
  rg::RngStream actions = rg::derive_stream(11, "acceptance/dark");
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    rg::GameState s = rg::new_game(dark, seed);
    while (!s.done) {
      const std::vector<std::uint8_t> before = s.seen.data();
      const int depth = s.depth;
      rg::apply(s, static_cast<rg::Action>(actions.uniform_int(0, 10)));
      if (s.depth != depth) continue;
      int added = 0;
      for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i] && !s.seen.data()[i]) ++shrinks;
        if (!before[i] && s.seen.data()[i]) ++added;
      }
      max_added = std::max(max_added, added);
    }
  }
  ok = ok && max_added <= 9 && shrinks == 0;
  d << "dark max +" << max_added << " cells/turn, " << shrinks << " seen-cell losses; ";

  // Monotone memory under the default profile too.
  int default_shrinks = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    rg::GameState s = rg::new_game(rg::default_config(), seed);
    while (!s.done) {
      const std::vector<std::uint8_t> before = s.seen.data();
      const int depth = s.depth;
      rg::apply(s, static_cast<rg::Action>(actions.uniform_int(0, 10)));
      if (s.depth != depth) continue;
      for (std::size_t i = 0; i < before.size(); ++i) default_shrinks += before[i] && !s.seen.data()[i];
    }
  }
  ok = ok && default_shrinks == 0;
  d << "default " << default_shrinks << " losses; ";

  // Hidden door: invisible while hidden, one adjacent Search reveals it at p = 1.
  rg::GameConfig c = rg::testing::fixture_config(14, 8);
  c.search_success_prob = 1.0;
  rg::GameState s = rg::new_game_on_floor(c, hidden_floor());
  rg::apply(s, rg::Action::Right);
  rg::apply(s, rg::Action::Right);  // on the visible door
  rg::apply(s, rg::Action::Right);
  rg::apply(s, rg::Action::Right);  // corridor end, next to the hidden door
  const Pos door{8, 2};
  const bool hidden_before = rg::render_view(s)[door] != '+' && s.floor.grid[door].hidden;
  rg::apply(s, rg::Action::Right);
  const bool blocked = s.player == Pos{7, 2};
  rg::apply(s, rg::Action::Search);
  const bool revealed = !s.floor.grid[door].hidden && rg::render_view(s)[door] == '+';
  ok = ok && hidden_before && blocked && revealed;
  d << "hidden door " << (hidden_before ? "invisible" : "VISIBLE") << " before search, "
    << (revealed ? "revealed" : "NOT revealed") << " by one search";

  // p = 0 never reveals.
  c.search_success_prob = 0.0;
  rg::GameState z = rg::new_game_on_floor(c, hidden_floor());
  z.player = {7, 2};
  for (int i = 0; i < 200; ++i) rg::apply(z, rg::Action::Search);
  ok = ok && z.floor.grid[door].hidden;
  return {ok, d.str()};
}

struct CsvRows {
  std::map<std::uint64_t, std::vector<double>> by_seed;
  std::size_t rows = 0;
  bool well_formed = true;
};

CsvRows read_csv(const std::string& path) {
  CsvRows out;
  std::istringstream in(rg::read_text_file(path));
  std::string line;
  std::getline(in, line);
  out.well_formed = line == "seed,episode,reward";
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string seed, episode, reward;
    std::getline(row, seed, ',');
    std::getline(row, episode, ',');
    std::getline(row, reward, ',');
    auto& v = out.by_seed[std::stoull(seed)];
    if (std::stoul(episode) != v.size()) out.well_formed = false;
    v.push_back(std::stod(reward));
    ++out.rows;
  }
  return out;
}

struct ProtocolRun {
  Outcome outcome;
  std::string csv_path;
  std::string json_path;
};

ProtocolRun protocol(const std::filesystem::path& dir) {
  const std::string serial = (dir / "serial").string();
  const std::string sharded = (dir / "sharded").string();
  const std::string common = "eval --agent random --seeds 1000..2000 --episodes 10 --eval-seed " +
                             std::to_string(kProtocolEvalSeed);
  Stopwatch sw1;
  const int rc1 = run_cli(common + " --out " + serial);
  const double t1 = sw1.seconds();
  Stopwatch sw2;
  const int rc2 = run_cli(common + " --workers 8 --out " + sharded);
  const double t2 = sw2.seconds();
  ProtocolRun p{{}, serial + ".csv", serial + ".json"};
  if (rc1 != 0 || rc2 != 0) {
    p.outcome = {false, "eval exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2)};
    return p;
  }
  const CsvRows rows = read_csv(p.csv_path);
  const bool identical = rg::read_text_file(serial + ".csv") == rg::read_text_file(sharded + ".csv") &&
                         rg::read_text_file(serial + ".json") == rg::read_text_file(sharded + ".json");
  const auto summary = nlohmann::json::parse(rg::read_text_file(p.json_path));
  p.outcome = {rows.rows == 10000 && rows.by_seed.size() == 1000 && rows.well_formed && identical &&
                   t1 < kProtocolBudgetS && t2 < kProtocolBudgetS,
               std::to_string(rows.rows) + " rows over " + std::to_string(rows.by_seed.size()) + " seeds, serial " +
                   fmt(t1) + " s, --workers 8 " + fmt(t2) + " s (budget " + fmt(kProtocolBudgetS) + " s), outputs " +
                   (identical ? "identical" : "DIFFER") + ", aggregate_mean " +
                   fmt(summary["aggregate_mean"].get<double>())};
  return p;
}

class AlternatingAgent final : public rg::AgentPolicy {
 public:
  std::string name() const override { return "alternating"; }
  std::unique_ptr<rg::AgentPolicy> clone() const override { return std::make_unique<AlternatingAgent>(); }
  void begin_episode(std::uint64_t, int episode) override { episode_ = episode; }
  rg::Decision act(const rg::Observation&, rg::RngStream&) override {
    return {episode_ == 0 ? rg::action_index(rg::Action::Right) : 0, std::nullopt};
  }

 private:
  int episode_ = 0;
};

Outcome metric_oracle(const ProtocolRun& run) {
  std::ostringstream d;
  bool ok = true;
  if (!run.outcome.pass && run.outcome.detail.rfind("eval exit", 0) == 0) return {false, "no protocol output"};
  const CsvRows rows = read_csv(run.csv_path);
  double sum_of_means = 0.0;
  for (const auto& [seed, rewards] : rows.by_seed) {
    double s = 0.0;
    for (double r : rewards) s += r;
    sum_of_means += s / static_cast<double>(rewards.size());
  }
  const double recomputed = sum_of_means / static_cast<double>(rows.by_seed.size());
  const double reported = nlohmann::json::parse(rg::read_text_file(run.json_path))["aggregate_mean"].get<double>();
  ok = ok && recomputed == reported;
  d << "csv recomputation " << fmt(recomputed) << " vs reported " << fmt(reported) << "; ";

  // Seed 1 pile 10, seed 2 pile 30, reward only in episode 0:
  // per-seed means 5 and 15, aggregate 10.
  rg::EvalOptions opts;
  opts.floor_source = [](const rg::GameConfig&, std::uint64_t seed) { return reward_floor(seed == 1 ? 10 : 30); };
  const rg::EvalReport r =
      rg::evaluate(AlternatingAgent(), {1, 2}, 2, rg::testing::fixture_config(14, 8), 0, opts);
  const bool fixture_ok = r.per_seed.at(1).mean == 5.0 && r.per_seed.at(2).mean == 15.0 && r.aggregate_mean == 10.0;
  ok = ok && fixture_ok;
  d << "2x2 fixture means " << fmt(r.per_seed.at(1).mean) << ", " << fmt(r.per_seed.at(2).mean) << ", aggregate "
    << fmt(r.aggregate_mean) << " (expected 5, 15, 10)";
  return {ok, d.str()};
}

Outcome replay_integrity() {
  const rg::GameConfig c = rg::default_config();
  int diverged = 0;
  int undetected = 0;
  long long tampers = 0;
  rg::RngStream pick = rg::derive_stream(5, "acceptance/tamper");
  for (std::uint64_t i = 0; i < 100; ++i) {
    rg::RandomAgent agent;
    const std::string log = rg::record_episode(c, 5000 + i, agent, i);
    rg::RandomAgent again;
    try {
      const rg::Trajectory tr = rg::replay_text(log);
      if (rg::record_episode(c, 5000 + i, again, i) != log || tr.steps.size() != 500) ++diverged;
    } catch (const rg::ReplayError&) {
      ++diverged;
    }
    for (int k = 0; k < 20; ++k) {
      std::string bad = log;
      const auto pos = static_cast<std::size_t>(pick.uniform_int(0, static_cast<std::int64_t>(bad.size()) - 1));
      bad[pos] = static_cast<char>(static_cast<unsigned char>(bad[pos]) ^ pick.uniform_int(1, 255));
      ++tampers;
      try {
        rg::replay_text(bad);
        ++undetected;
      } catch (const rg::ReplayError&) {
      }
    }
  }
  // Exhaustive single-bit flips over one short log.
  rg::GameConfig shortc = c;
  shortc.max_steps = 8;
  rg::RandomAgent agent;
  const std::string log = rg::record_episode(shortc, 77, agent, 3);
  for (std::size_t pos = 0; pos < log.size(); ++pos) {
    for (int bit = 0; bit < 8; ++bit) {
      std::string bad = log;
      bad[pos] = static_cast<char>(static_cast<unsigned char>(bad[pos]) ^ (1u << bit));
      ++tampers;
      try {
        rg::replay_text(bad);
        ++undetected;
      } catch (const rg::ReplayError&) {
      }
    }
  }
  return {diverged == 0 && undetected == 0, "100 episodes, " + std::to_string(diverged) + " not bit-exact; " +
                                                std::to_string(tampers) + " single-byte tampers, " +
                                                std::to_string(undetected) + " undetected"};
}

Outcome entropy_hook() {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  const rg::EvalReport r = rg::evaluate(rg::RandomAgent(), seeds, 2, rg::default_config(), 0);
  if (!r.mean_policy_entropy) return {false, "no entropy reported"};
  const double err = std::abs(*r.mean_policy_entropy - std::log(11.0));
  std::ostringstream d;
  d.precision(17);
  d << "mean entropy " << *r.mean_policy_entropy << ", |H - ln 11| = " << err << " (tol " << kEntropyTol << ")";
  return {err <= kEntropyTol, d.str()};
}

}  // namespace

int main() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "roguegym_acceptance";
  std::filesystem::create_directories(dir);
  int failed = 0;
  auto report = [&](const std::string& name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  };
  report("determinism", determinism);
  report("solvability", solvability);
  report("reward_semantics", reward_semantics);
  report("action_space", action_space);
  report("observation_contract", observation_contract);
  report("partial_observability", partial_observability);
  ProtocolRun proto;
  report("protocol_reproduction", [&] {
    proto = protocol(dir);
    return proto.outcome;
  });
  report("metric_oracle", [&] { return metric_oracle(proto); });
  report("replay_integrity", replay_integrity);
  report("entropy_hook", entropy_hook);
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
