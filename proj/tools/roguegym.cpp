// roguegym: batch front door (gen, eval, replay) and interactive play.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <termios.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "roguegym/config.hpp"
#include "roguegym/dungeon.hpp"
#include "roguegym/external_agent.hpp"
#include "roguegym/harness.hpp"
#include "roguegym/replay.hpp"
#include "roguegym/tui.hpp"
#include "roguegym/version.hpp"

namespace {

using namespace roguegym;

enum ExitCode { kOk = 0, kUsage = 1, kInvalid = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SeedRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 1;  // exclusive
};

// "S" or half-open "A..B" with A < B.
SeedRange parse_seed_range(const std::string& text) {
  auto parse_u64 = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("bad seed '" + text + "' (expected N or A..B)");
    }
    return std::stoull(s);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto s = parse_u64(text);
    return {s, s + 1};
  }
  SeedRange r{parse_u64(text.substr(0, dots)), parse_u64(text.substr(dots + 2))};
  if (r.begin >= r.end) throw UsageError("empty seed range '" + text + "' (need A < B)");
  return r;
}

GameConfig load(const std::string& path) { return path.empty() ? default_config() : load_config_file(path); }

// Restores the terminal on scope exit.
class RawTerminal {
 public:
  RawTerminal() {
    tcgetattr(STDIN_FILENO, &saved_);
    termios raw = saved_;
    raw.c_lflag &= static_cast<tcflag_t>(~(ICANON | ECHO));
    raw.c_cc[VMIN] = 1;
    raw.c_cc[VTIME] = 0;
    tcsetattr(STDIN_FILENO, TCSANOW, &raw);
  }
  ~RawTerminal() { tcsetattr(STDIN_FILENO, TCSANOW, &saved_); }
  RawTerminal(const RawTerminal&) = delete;
  RawTerminal& operator=(const RawTerminal&) = delete;

 private:
  termios saved_{};
};

struct GenArgs {
  std::string config;
  std::string seed = "0";
  int depth = 1;
  bool reveal = false;
  bool validate = false;
};

int run_gen(const GenArgs& a) {
  const GameConfig config = load(a.config);
  const SeedRange range = parse_seed_range(a.seed);
  if (a.depth < 1) throw UsageError("--depth must be >= 1");
  bool all_ok = true;
  const bool single = range.end - range.begin == 1;
  for (std::uint64_t seed = range.begin; seed < range.end; ++seed) {
    const Floor floor = generate_floor(config, seed, a.depth);
    if (a.validate) {
      const ValidationReport report = validate_floor(floor);
      std::cout << "seed " << seed << " depth " << a.depth << ": " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
      if (!report.all_passed()) {
        all_ok = false;
        std::cerr << report.summary();
      }
      continue;
    }
    if (!single) std::cout << "# seed " << seed << " depth " << a.depth << "\n";
    std::cout << render_map(floor, a.reveal).to_string();
  }
  return all_ok ? kOk : kInvalid;
}

struct EvalArgs {
  std::string config;
  std::string agent = "random";
  std::string agent_cmd;
  bool agent_channels = false;
  std::string seeds;
  int episodes = 10;
  std::uint64_t eval_seed = 0;
  int workers = 1;
  std::string out = "eval";
};

int run_eval(const EvalArgs& a) {
  const GameConfig config = load(a.config);
  const SeedRange range = parse_seed_range(a.seeds);
  if (a.episodes < 1) throw UsageError("--episodes must be >= 1");
  if (a.workers < 1) throw UsageError("--workers must be >= 1");
  std::unique_ptr<AgentPolicy> agent;
  if (a.agent == "external") {
    if (a.agent_cmd.empty()) throw UsageError("--agent external needs --agent-cmd");
    agent = std::make_unique<ExternalAgent>(a.agent_cmd, a.agent_channels);
  } else {
    agent = make_builtin_agent(a.agent);
    if (!agent) throw UsageError("unknown agent '" + a.agent + "' (random, greedy, external)");
  }
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = range.begin; s < range.end; ++s) seeds.push_back(s);

  const EvalReport report = evaluate(*agent, seeds, a.episodes, config, a.eval_seed, {a.workers, {}});

  std::ostringstream csv;
  write_csv(report, csv);
  write_text_file(a.out + ".csv", csv.str());
  write_text_file(a.out + ".json", summary_json(report).dump(2) + "\n");
  std::cout << "aggregate_mean: " << format_number(report.aggregate_mean) << "\n";
  return kOk;
}

int run_replay(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  const Trajectory traj = replay_text(text);
  double total = 0.0;
  for (const auto& s : traj.steps) total += s.reward;
  std::cout << "OK: " << traj.steps.size() << " steps replayed bit-exactly, total reward " << format_number(total)
            << "\n";
  return kOk;
}

struct PlayArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool reveal = false;
  std::string record = "play.jsonl";
  std::optional<std::string> keys;
};

int run_play(const PlayArgs& a) {
  const GameConfig config = load(a.config);
  if (!a.keys && !isatty(STDIN_FILENO)) {
    std::cerr << "error: play needs an interactive terminal (use --keys for scripted input, or gen/eval for batch work)\n";
    return kUsage;
  }
  Session session(config, a.seed, {a.reveal, !a.keys.has_value()});
  if (a.keys) {
    std::istringstream in(*a.keys);
    run_session(session, in, std::cout);
  } else {
    RawTerminal raw;
    run_session(session, std::cin, std::cout);
  }
  write_text_file(a.record, session.transcript());
  std::cerr << "transcript (" << session.actions_taken() << " actions) written to " << a.record << "\n";
  return kOk;
}

int run_defaults(bool channels) {
  const GameConfig config = default_config();
  if (!channels) {
    std::cout << serialize(config);
    return kOk;
  }
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t i = 0; i < config.symbol_table.size(); ++i) {
    table.push_back({{"index", i}, {"char", std::string(1, config.symbol_table[i])}});
  }
  std::cout << table.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-deterministic roguelike environment for RL generalization studies"};
  app.set_version_flag("--version", std::string(roguegym::kVersion));
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a floor and print its ASCII map");
  gen_cmd->add_option("--config", gen.config, "Config JSON file (defaults if omitted)");
  gen_cmd->add_option("--seed", gen.seed, "Seed N or half-open range A..B");
  gen_cmd->add_option("--depth", gen.depth, "Floor depth (>= 1)");
  gen_cmd->add_flag("--reveal-hidden", gen.reveal, "Draw hidden doors and passages");
  gen_cmd->add_flag("--validate", gen.validate, "Run the floor validator and print PASS/FAIL per seed");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an agent over a seed range");
  eval_cmd->add_option("--config", ev.config, "Config JSON file");
  eval_cmd->add_option("--agent", ev.agent, "random, greedy or external");
  eval_cmd->add_option("--agent-cmd", ev.agent_cmd, "Shell command for --agent external");
  eval_cmd->add_flag("--agent-channels", ev.agent_channels, "Send one-hot channels to the external agent");
  eval_cmd->add_option("--seeds", ev.seeds, "Seed N or half-open range A..B")->required();
  eval_cmd->add_option("--episodes", ev.episodes, "Episodes per seed");
  eval_cmd->add_option("--eval-seed", ev.eval_seed, "Root seed for agent randomness");
  eval_cmd->add_option("--workers", ev.workers, "Worker threads");
  eval_cmd->add_option("--out", ev.out, "Output prefix; writes PREFIX.csv and PREFIX.json");

  std::string log_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a replay log and verify it bit-exactly");
  replay_cmd->add_option("log", log_path, "Replay log (JSON lines)")->required();

  PlayArgs play;
  auto* play_cmd = app.add_subcommand("play", "Play interactively in the terminal");
  play_cmd->add_option("--config", play.config, "Config JSON file");
  play_cmd->add_option("--seed", play.seed, "Dungeon seed");
  play_cmd->add_flag("--reveal", play.reveal, "Show the whole floor (debugging)");
  play_cmd->add_option("--record", play.record, "Where to write the transcript");
  play_cmd->add_option("--keys", play.keys, "Scripted key sequence instead of the terminal");

  bool channels = false;
  auto* defaults_cmd = app.add_subcommand("defaults", "Print the default config (or the channel table)");
  defaults_cmd->add_flag("--channels", channels, "Print the observation channel table instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*eval_cmd) return run_eval(ev);
    if (*replay_cmd) return run_replay(log_path);
    if (*play_cmd) return run_play(play);
    if (*defaults_cmd) return run_defaults(channels);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ReplayError& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
