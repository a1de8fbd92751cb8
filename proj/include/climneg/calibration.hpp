#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "climneg/common.hpp"
#include "climneg/engine.hpp"

namespace climneg {

// Region archetypes for the synthetic calibration. The id lists follow the
// column structure of the built-in seed partition, so every seeded group
// holds one region of each archetype.
inline constexpr std::array<int, 9> kHighCapitalIds = {26, 3, 5, 19, 20, 14, 8, 11, 24};
inline constexpr std::array<int, 9> kHighPopulationIds = {1, 4, 7, 10, 13, 16, 9, 17, 25};
inline constexpr std::array<int, 9> kSmallIds = {2, 6, 18, 12, 15, 22, 21, 23, 0};

namespace detail {

struct Archetype {
  double A0, gA, L0, gL, K0, sigma0, gSigma, theta1;
};

inline constexpr Archetype kHighCapital = {0.0687, 0.015, 80.0, 0.004, 8.06, 0.149, 0.010, 0.04};
inline constexpr Archetype kHighPopulation = {0.0221, 0.020, 400.0, 0.010, 1.34, 0.179, 0.008,
                                              0.07};
inline constexpr Archetype kSmall = {0.0589, 0.018, 30.0, 0.008, 0.537, 0.164, 0.008, 0.12};

inline RegionParams jittered_region(int id, const Archetype& base, std::uint64_t seed) {
  std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(id)));
  std::uniform_real_distribution<double> jitter(0.92, 1.08);
  RegionParams p;
  p.id = id;
  p.A0 = base.A0 * jitter(rng);
  p.gA = base.gA;
  p.L0 = base.L0 * jitter(rng);
  p.gL = base.gL;
  p.K0 = base.K0 * jitter(rng);
  p.sigma0 = base.sigma0 * jitter(rng);
  p.gSigma = base.gSigma;
  p.theta1 = base.theta1 * jitter(rng);
  return p;
}

}  // namespace detail

inline void validate_calibration(const std::vector<RegionParams>& regions) {
  if (regions.size() != static_cast<size_t>(kNumRegions))
    throw ConfigError("calibration must contain exactly 27 regions, got " +
                      std::to_string(regions.size()));
  std::array<bool, kNumRegions> seen{};
  for (const auto& r : regions) {
    if (r.id < 0 || r.id >= kNumRegions)
      throw ConfigError("calibration region id out of range: " + std::to_string(r.id));
    if (seen[r.id])
      throw ConfigError("duplicate calibration region id: " + std::to_string(r.id));
    seen[r.id] = true;
    r.validate();
  }
}

// Seeded synthetic calibration: 9 high-capital, 9 high-population and 9
// small regions with an ~8% multiplicative jitter per region.
inline std::vector<RegionParams> synthetic_calibration(std::uint64_t seed) {
  std::vector<RegionParams> out(kNumRegions);
  for (int id : kHighCapitalIds) out[id] = detail::jittered_region(id, detail::kHighCapital, seed);
  for (int id : kHighPopulationIds) out[id] = detail::jittered_region(id, detail::kHighPopulation, seed);
  for (int id : kSmallIds) out[id] = detail::jittered_region(id, detail::kSmall, seed);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  validate_calibration(out);
  return out;
}

inline constexpr const char* kCalibrationHeader =
    "id,A0,gA,L0,gL,K0,sigma0,gSigma,theta1,gamma,delta";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' in " + what);
  }
}

inline int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + s + "' in " + what);
  }
}

inline std::uint64_t parse_uint64(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse unsigned integer '" + s + "' in " + what);
  }
}

}  // namespace detail

// One CSV record per region, fields exactly matching RegionParams.
inline std::vector<RegionParams> load_calibration_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open calibration file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty calibration file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCalibrationHeader)
    throw ConfigError("calibration header must be '" + std::string(kCalibrationHeader) +
                      "', got '" + line + "'");
  std::vector<RegionParams> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 11)
      throw ConfigError("calibration row needs 11 fields, got " + std::to_string(f.size()));
    RegionParams p;
    p.id = detail::parse_int(f[0], path);
    p.A0 = detail::parse_double(f[1], path);
    p.gA = detail::parse_double(f[2], path);
    p.L0 = detail::parse_double(f[3], path);
    p.gL = detail::parse_double(f[4], path);
    p.K0 = detail::parse_double(f[5], path);
    p.sigma0 = detail::parse_double(f[6], path);
    p.gSigma = detail::parse_double(f[7], path);
    p.theta1 = detail::parse_double(f[8], path);
    p.gamma = detail::parse_double(f[9], path);
    p.delta = detail::parse_double(f[10], path);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  validate_calibration(out);
  return out;
}

inline void save_calibration_csv(const std::vector<RegionParams>& regions,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write calibration file: " + path);
  out << kCalibrationHeader << "\n";
  for (const auto& p : regions) {
    out << p.id << ',' << format_double(p.A0) << ',' << format_double(p.gA) << ','
        << format_double(p.L0) << ',' << format_double(p.gL) << ',' << format_double(p.K0)
        << ',' << format_double(p.sigma0) << ',' << format_double(p.gSigma) << ','
        << format_double(p.theta1) << ',' << format_double(p.gamma) << ','
        << format_double(p.delta) << "\n";
  }
}

}  // namespace climneg
