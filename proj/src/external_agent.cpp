#include "roguegym/external_agent.hpp"

#include <csignal>
#include <stdexcept>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace roguegym {

using nlohmann::json;

ExternalAgent::ExternalAgent(std::string command, bool send_channels)
    : command_(std::move(command)), send_channels_(send_channels) {
  std::signal(SIGPIPE, SIG_IGN);
  int down[2];
  int up[2];
  if (pipe2(down, O_CLOEXEC) != 0 || pipe2(up, O_CLOEXEC) != 0) throw std::runtime_error("external agent: pipe() failed");
  pid_ = fork();
  if (pid_ < 0) throw std::runtime_error("external agent: fork() failed");
  if (pid_ == 0) {
    dup2(down[0], STDIN_FILENO);
    dup2(up[1], STDOUT_FILENO);
    close(down[0]);
    close(down[1]);
    close(up[0]);
    close(up[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(down[0]);
  close(up[1]);
  to_child_ = fdopen(down[1], "w");
  from_child_ = fdopen(up[0], "r");
  if (!to_child_ || !from_child_) throw std::runtime_error("external agent: fdopen() failed");
}

ExternalAgent::~ExternalAgent() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::unique_ptr<AgentPolicy> ExternalAgent::clone() const {
  return std::make_unique<ExternalAgent>(command_, send_channels_);
}

void ExternalAgent::begin_episode(std::uint64_t seed, int episode) {
  seed_ = seed;
  episode_ = episode;
}

Decision ExternalAgent::act(const Observation& obs, RngStream&) {
  json status = {{"depth", obs.status.depth},
                 {"gold", obs.status.gold_collected},
                 {"step", obs.status.step_count},
                 {"under_player", std::string(1, obs.status.under_player)}};
  if (obs.status.hp) status["hp"] = *obs.status.hp;
  json request = {{"seed", seed_},
                  {"episode", episode_},
                  {"t", obs.status.step_count},
                  {"chars", obs.chars.rows()},
                  {"status", std::move(status)}};
  if (send_channels_) {
    const ChannelTensor t = obs.channels();
    json planes = json::array();
    for (int c = 0; c < t.channels; ++c) {
      json rows = json::array();
      for (int y = 0; y < t.height; ++y) {
        json row = json::array();
        for (int x = 0; x < t.width; ++x) row.push_back(t.at(c, y, x));
        rows.push_back(std::move(row));
      }
      planes.push_back(std::move(rows));
    }
    request["channels"] = std::move(planes);
  }
  const std::string line = request.dump() + "\n";
  if (std::fputs(line.c_str(), to_child_) < 0 || std::fflush(to_child_) != 0) {
    throw std::runtime_error("external agent: child closed its input");
  }

  std::string reply;
  for (int ch = std::fgetc(from_child_); ch != EOF && ch != '\n'; ch = std::fgetc(from_child_)) {
    reply.push_back(static_cast<char>(ch));
  }
  if (reply.empty()) throw std::runtime_error("external agent: no response from child");
  json doc;
  try {
    doc = json::parse(reply);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("external agent: bad response: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("action") || !doc["action"].is_number_integer()) {
    throw std::runtime_error("external agent: response needs an integer 'action'");
  }
  Decision d{doc["action"].get<int>(), std::nullopt};
  if (doc.contains("probs")) {
    const json& p = doc["probs"];
    if (!p.is_array() || p.size() != kNumActions) {
      throw std::runtime_error("external agent: 'probs' must have 11 entries");
    }
    ActionProbs probs{};
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = p[i].get<double>();
    d.probs = probs;
  }
  return d;
}

}  // namespace roguegym
