#include "roguegym/rng.hpp"

#include <stdexcept>

namespace roguegym {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t root_seed, std::string label, std::uint64_t counter)
    : root_seed_(root_seed),
      label_(std::move(label)),
      counter_(counter),
      key_(mix64(mix64(root_seed) ^ fnv1a64(label_))) {}

std::uint64_t RngStream::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<std::int64_t>(next());
  const std::uint64_t range = span + 1;
  // Lemire's multiply-shift with rejection of the biased low region.
  u128 m = static_cast<u128>(next()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<u128>(next()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) +
                                   static_cast<std::uint64_t>(m >> 64));
}

double RngStream::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

bool RngStream::bernoulli(double p) { return uniform01() < p; }

RngStream derive_stream(std::uint64_t root_seed, std::string_view label, std::uint64_t counter) {
  return RngStream(root_seed, std::string(label), counter);
}

std::string worldgen_label(int depth) { return "worldgen/" + std::to_string(depth); }

std::string runtime_label(std::uint64_t reset_index) {
  return "runtime/" + std::to_string(reset_index);
}

}  // namespace roguegym
