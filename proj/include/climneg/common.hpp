#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace climneg {

inline constexpr int kNumRegions = 27;
inline constexpr int kNumGroups = 9;
inline constexpr int kGroupSize = 3;
inline constexpr int kMaxLevel = 10;

// Bad input files, unknown config keys, unwritable paths. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Broken precondition or internal invariant. CLI exit code 2.
class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void check(bool cond, const std::string& what) {
  if (!cond) throw InvariantError(what);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for substream `stream` of a base seed. Every consumer of randomness
// (one per region per episode) gets its own stream so draw counts in one
// place never shift values drawn elsewhere.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

// Shortest round-trip decimal form; locale-independent, so reports are
// byte-stable across runs.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace climneg
