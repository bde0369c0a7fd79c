#pragma once

#include <cstdio>
#include <string>

#include "roguegym/harness.hpp"

namespace roguegym {

/// Policy living in a child process, spoken to over line-delimited JSON.
///
/// Request (one line on the child's stdin):
///   {"seed":S,"episode":E,"t":T,"chars":["row0",...],"status":{...}}
/// plus "channels": [[[0,1,...],...],...] when constructed with
/// send_channels. Response (one line on its stdout):
///   {"action":I} or {"action":I,"probs":[p0,...,p10]}
///
/// POSIX only. Each clone() starts its own child.
class ExternalAgent final : public AgentPolicy {
 public:
  ExternalAgent(std::string command, bool send_channels);
  ~ExternalAgent() override;
  ExternalAgent(const ExternalAgent&) = delete;
  ExternalAgent& operator=(const ExternalAgent&) = delete;

  std::string name() const override { return "external"; }
  std::unique_ptr<AgentPolicy> clone() const override;
  void begin_episode(std::uint64_t seed, int episode) override;
  Decision act(const Observation& obs, RngStream& rng) override;

 private:
  std::string command_;
  bool send_channels_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
  std::uint64_t seed_ = 0;
  int episode_ = 0;
};

}  // namespace roguegym
