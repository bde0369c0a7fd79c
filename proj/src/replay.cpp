#include "roguegym/replay.hpp"

#include <fstream>
#include <sstream>

#include <zlib.h>

namespace roguegym {

using nlohmann::json;

namespace {

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

json header_json(const GameConfig& config, std::uint64_t seed, std::uint64_t reset_index) {
  return {{"format", kReplayFormat},  {"version", kReplayVersion}, {"rng", kRngAlgorithm},
          {"config", to_json(config)}, {"seed", seed},             {"reset_index", reset_index}};
}

template <typename T>
T require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ReplayParseError(line, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ReplayParseError(line, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

ReplayRecorder::ReplayRecorder(const GameConfig& config, std::uint64_t seed, std::uint64_t reset_index)
    : body_(header_json(config, seed, reset_index).dump() + "\n") {}

void ReplayRecorder::record(Action action, const Transition& tr) {
  ++steps_;
  const json line = {{"t", tr.info.step_count},
                     {"action_key", std::string(1, action_key(action))},
                     {"reward", tr.reward},
                     {"done", tr.done}};
  body_ += line.dump();
  body_ += '\n';
}

std::string ReplayRecorder::finish() const {
  const json trailer = {{"end", true}, {"steps", steps_}, {"crc32", crc32_of(body_)}};
  return body_ + trailer.dump() + "\n";
}

Trajectory replay_text(std::string_view text) {
  Trajectory out;
  std::optional<GameState> state;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool finished = false;

  while (pos < text.size()) {
    const std::size_t line_start = pos;
    const std::size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string_view::npos) throw ReplayParseError(line_no, "truncated line (no newline)");
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (finished) throw ReplayParseError(line_no, "content after the trailer");

    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ReplayParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ReplayParseError(line_no, "expected a JSON object");
    if (doc.dump() != line) throw ReplayParseError(line_no, "line is not in canonical form");

    if (line_no == 1) {
      if (require<std::string>(doc, "format", line_no) != kReplayFormat) {
        throw ReplayParseError(line_no, "not a replay log");
      }
      const int version = require<int>(doc, "version", line_no);
      if (version != kReplayVersion) {
        throw ReplayVersionError("replay log version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kReplayVersion) + ")");
      }
      const std::string rng = require<std::string>(doc, "rng", line_no);
      if (rng != kRngAlgorithm) {
        throw ReplayVersionError("replay log was recorded with RNG '" + rng + "', this build uses '" +
                                 std::string(kRngAlgorithm) + "'");
      }
      if (!doc.contains("config")) throw ReplayParseError(line_no, "missing field 'config'");
      try {
        out.config = config_from_json(doc["config"]);
      } catch (const ConfigError& e) {
        throw ReplayParseError(line_no, std::string("bad config: ") + e.what());
      }
      out.seed = require<std::uint64_t>(doc, "seed", line_no);
      out.reset_index = require<std::uint64_t>(doc, "reset_index", line_no);
      state = new_game(out.config, out.seed, out.reset_index);
      continue;
    }

    if (doc.contains("end")) {
      if (!require<bool>(doc, "end", line_no)) throw ReplayParseError(line_no, "bad trailer");
      const auto steps = require<std::int64_t>(doc, "steps", line_no);
      if (steps != static_cast<std::int64_t>(out.steps.size())) {
        throw ReplayIntegrityError("trailer claims " + std::to_string(steps) + " steps, log has " +
                                   std::to_string(out.steps.size()));
      }
      const auto crc = require<std::int64_t>(doc, "crc32", line_no);
      if (crc != static_cast<std::int64_t>(crc32_of(text.substr(0, line_start)))) throw ReplayIntegrityError("checksum mismatch");
      finished = true;
      continue;
    }

    ReplayStep step;
    step.t = require<int>(doc, "t", line_no);
    const auto key = require<std::string>(doc, "action_key", line_no);
    step.reward = require<double>(doc, "reward", line_no);
    step.done = require<bool>(doc, "done", line_no);
    if (key.size() != 1 || !action_from_key(key[0])) {
      throw ReplayParseError(line_no, "unknown action key '" + key + "'");
    }
    step.action_key = key[0];
    const int expected_t = static_cast<int>(out.steps.size()) + 1;
    if (step.t != expected_t) {
      throw ReplayDivergence(expected_t, "log has t=" + std::to_string(step.t));
    }
    if (state->done) throw ReplayDivergence(step.t, "episode already finished before this step");
    const Transition tr = apply(*state, *action_from_key(step.action_key));
    if (tr.reward != step.reward) {
      throw ReplayDivergence(step.t, "reward " + format_number(step.reward) + " logged, " +
                                         format_number(tr.reward) + " replayed");
    }
    if (tr.done != step.done) {
      throw ReplayDivergence(step.t, std::string("done=") + (step.done ? "true" : "false") + " logged, " +
                                         (tr.done ? "true" : "false") + " replayed");
    }
    out.steps.push_back(step);
  }
  if (line_no == 0) throw ReplayParseError(1, "empty log");
  if (!finished) throw ReplayParseError(line_no + 1, "truncated log: missing trailer");
  out.final_state = std::move(*state);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

Trajectory replay_file(const std::string& path) { return replay_text(read_text_file(path)); }

std::string record_episode(const GameConfig& config, std::uint64_t seed, AgentPolicy& agent,
                           std::uint64_t agent_seed, std::uint64_t reset_index) {
  ReplayRecorder recorder(config, seed, reset_index);
  GameState state = new_game(config, seed, reset_index);
  RngStream rng = derive_stream(agent_seed, agent_label(seed, static_cast<int>(reset_index)));
  agent.begin_episode(seed, static_cast<int>(reset_index));
  while (!state.done) {
    const Decision d = agent.act(observe(state), rng);
    const auto action = action_from_index(d.action);
    if (!action) throw std::invalid_argument("agent returned an invalid action");
    recorder.record(*action, apply(state, *action));
  }
  return recorder.finish();
}

}  // namespace roguegym
