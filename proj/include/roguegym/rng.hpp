#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace roguegym {

// Tag written into replay headers. Bump whenever the draw sequence changes.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-ctr/1";

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view bytes);

// Counter-mode SplitMix64. The i-th draw is mix64(key + (counter + 1) * gamma)
// where key = mix64(mix64(root_seed) ^ fnv1a64(label)); the counter advances
// by one per draw, so (root_seed, label, counter) fixes every future value.
class RngStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  RngStream(std::uint64_t root_seed, std::string label, std::uint64_t counter = 0);

  std::uint64_t next();

  // Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform01();
  // Consumes exactly one draw regardless of p.
  bool bernoulli(double p);

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.root_seed_ == b.root_seed_ && a.counter_ == b.counter_ && a.label_ == b.label_;
  }

 private:
  std::uint64_t root_seed_;
  std::string label_;
  std::uint64_t counter_;
  std::uint64_t key_;
};

RngStream derive_stream(std::uint64_t root_seed, std::string_view label, std::uint64_t counter = 0);

std::string worldgen_label(int depth);
std::string runtime_label(std::uint64_t reset_index);

}  // namespace roguegym
