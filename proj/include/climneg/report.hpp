#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "climneg/common.hpp"
#include "climneg/episode.hpp"
#include "climneg/metrics.hpp"
#include "climneg/scenario.hpp"

namespace climneg {

struct RunSummary {
  Scenario scenario = Scenario::None;
  std::uint64_t seed = 0;
  EpisodeMetrics metrics;
};

struct ComparisonRow {
  Scenario scenario = Scenario::None;
  EpisodeMetrics mean;  // averaged across seeds; hv re-derived from the averaged indices
};

struct ComparisonResult {
  std::vector<RunSummary> runs;
  std::vector<ComparisonRow> rows;
  double set_hypervolume = 0;
};

inline ComparisonResult run_comparison(const ScenarioConfig& base,
                                       const std::vector<Scenario>& scenarios,
                                       const std::vector<std::uint64_t>& seeds,
                                       OutputBasis basis = OutputBasis::Net) {
  if (scenarios.empty()) throw ConfigError("comparison needs at least one scenario");
  if (seeds.empty()) throw ConfigError("comparison needs at least one seed");
  ComparisonResult out;
  std::vector<std::pair<double, double>> points;
  for (Scenario s : scenarios) {
    EpisodeMetrics sum;
    for (std::uint64_t seed : seeds) {
      ScenarioConfig cfg = base;
      cfg.scenario = s;
      cfg.seed = seed;
      RunRecord rec = run_episode(cfg, basis);
      out.runs.push_back({s, seed, rec.metrics});
      sum.temp_rise += rec.metrics.temp_rise;
      sum.gross_output += rec.metrics.gross_output;
      sum.climate_index += rec.metrics.climate_index;
      sum.econ_index += rec.metrics.econ_index;
    }
    ComparisonRow row;
    row.scenario = s;
    const auto n = static_cast<double>(seeds.size());
    row.mean.temp_rise = sum.temp_rise / n;
    row.mean.gross_output = sum.gross_output / n;
    row.mean.climate_index = sum.climate_index / n;
    row.mean.econ_index = sum.econ_index / n;
    row.mean.hv_contribution =
        hypervolume_contribution(row.mean.climate_index, row.mean.econ_index);
    points.emplace_back(row.mean.climate_index, row.mean.econ_index);
    out.rows.push_back(row);
  }
  out.set_hypervolume = hypervolume_set(points);
  return out;
}

namespace detail {

inline std::ofstream open_report_file(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write report file: " + path.string());
  return out;
}

}  // namespace detail

inline constexpr const char* kMetricsHeader =
    "scenario,seed,temp_rise,gross_output,climate_index,econ_index,hv_contribution";

inline void write_metrics_csv(const std::vector<RunSummary>& runs,
                              const std::filesystem::path& path) {
  auto out = detail::open_report_file(path);
  out << kMetricsHeader << "\n";
  for (const auto& r : runs)
    out << scenario_name(r.scenario) << ',' << r.seed << ',' << format_double(r.metrics.temp_rise)
        << ',' << format_double(r.metrics.gross_output) << ','
        << format_double(r.metrics.climate_index) << ',' << format_double(r.metrics.econ_index)
        << ',' << format_double(r.metrics.hv_contribution) << "\n";
}

// Row 0 is the initial state; row k the world after step k, with that step's
// summed region output and the partition generation reached.
inline void write_trajectories_csv(const RunRecord& rec, const std::filesystem::path& path) {
  auto out = detail::open_report_file(path);
  out << "step,temperature,carbon_stock,total_output,generation\n";
  out << "0," << format_double(rec.start_world.climate.temperature) << ','
      << format_double(rec.start_world.climate.carbon_stock) << ",0,"
      << rec.initial_partition.generation << "\n";
  for (const auto& sr : rec.steps) {
    double total = 0;
    for (const auto& rs : sr.world.regions)
      total += rec.output_basis == OutputBasis::Net ? rs.last_net_output : rs.last_gross_output;
    out << (sr.step + 1) << ',' << format_double(sr.world.climate.temperature) << ','
        << format_double(sr.world.climate.carbon_stock) << ',' << format_double(total) << ','
        << sr.partition.generation << "\n";
  }
}

// One row per applied swap, stamped with the step it happened in (1-based,
// matching the trajectory rows) and the generation after that step.
inline void write_partition_history_csv(const RunRecord& rec,
                                        const std::filesystem::path& path) {
  auto out = detail::open_report_file(path);
  out << "step,region_a,region_b,group_a,group_b,generation\n";
  for (const auto& sr : rec.steps)
    for (const auto& sw : sr.swaps)
      out << (sr.step + 1) << ',' << sw.region_a << ',' << sw.region_b << ',' << sw.group_a
          << ',' << sw.group_b << ',' << sr.partition.generation << "\n";
}

inline void emit_report(const RunRecord& rec, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_metrics_csv({{rec.config.scenario, rec.config.seed, rec.metrics}},
                    out_dir / "metrics.csv");
  write_trajectories_csv(rec, out_dir / "trajectories.csv");
  write_partition_history_csv(rec, out_dir / "partition_history.csv");
}

inline void write_comparison_csv(const ComparisonResult& res, size_t seed_count,
                                 const std::filesystem::path& path) {
  auto out = detail::open_report_file(path);
  out << "scenario,seeds,temp_rise,gross_output,climate_index,econ_index,hv_contribution\n";
  for (const auto& row : res.rows)
    out << scenario_name(row.scenario) << ',' << seed_count << ','
        << format_double(row.mean.temp_rise) << ',' << format_double(row.mean.gross_output)
        << ',' << format_double(row.mean.climate_index) << ','
        << format_double(row.mean.econ_index) << ','
        << format_double(row.mean.hv_contribution) << "\n";
}

inline void emit_comparison_report(const ComparisonResult& res, size_t seed_count,
                                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_metrics_csv(res.runs, out_dir / "metrics.csv");
  write_comparison_csv(res, seed_count, out_dir / "comparison.csv");
  auto out = detail::open_report_file(out_dir / "hypervolume.txt");
  out << format_double(res.set_hypervolume) << "\n";
}

}  // namespace climneg
