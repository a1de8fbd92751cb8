// Command line front end: run one scenario, compare several, or replay a
// transcript. Exit codes: 0 success, 1 bad configuration or input file,
// 2 broken invariant (including replay mismatches).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "climneg/episode.hpp"
#include "climneg/report.hpp"
#include "climneg/scenario.hpp"

namespace {

using namespace climneg;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad seed '" + s + "'");
  }
}

// Seed lists accept single values, ranges and mixtures: "0..9", "1,4,7",
// "0..3,8".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& token : split_list(text)) {
    auto dots = token.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_seed(token));
      continue;
    }
    std::uint64_t lo = parse_seed(token.substr(0, dots));
    std::uint64_t hi = parse_seed(token.substr(dots + 2));
    if (hi < lo) throw ConfigError("bad seed range '" + token + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  std::vector<Scenario> out;
  for (const auto& token : split_list(text)) out.push_back(scenario_from_name(token));
  if (out.empty()) throw ConfigError("no scenarios given");
  return out;
}

void print_metrics(const std::string& label, const EpisodeMetrics& m) {
  std::cout << label << ": temp_rise=" << format_double(m.temp_rise)
            << " gross_output=" << format_double(m.gross_output)
            << " climate_index=" << format_double(m.climate_index)
            << " econ_index=" << format_double(m.econ_index)
            << " hv=" << format_double(m.hv_contribution) << "\n";
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string output_basis = "net";
  int horizon = 0;  // 0 keeps the config value
};

ScenarioConfig load_base_config(const CommonOpts& opts) {
  ScenarioConfig cfg = opts.config_path.empty() ? ScenarioConfig{} : load_config(opts.config_path);
  if (opts.horizon > 0) cfg.horizon = opts.horizon;
  cfg.validate();
  return cfg;
}

int run_simulate(const CommonOpts& opts, const std::string& scenario_text,
                 std::optional<std::uint64_t> seed, const std::string& partition_path) {
  ScenarioConfig cfg = load_base_config(opts);
  if (!scenario_text.empty()) cfg.scenario = scenario_from_name(scenario_text);
  if (seed) cfg.seed = *seed;
  std::optional<Partition> partition;
  if (!partition_path.empty()) partition = load_partition(partition_path);

  RunRecord rec = run_episode(cfg, output_basis_from_name(opts.output_basis), partition);
  std::filesystem::path out_dir(opts.out_dir);
  emit_report(rec, out_dir);
  save_transcript(rec, (out_dir / "transcript.json").string());
  print_metrics(scenario_name(rec.config.scenario), rec.metrics);
  std::cout << "report written to " << out_dir.string() << "\n";
  return 0;
}

int run_compare(const CommonOpts& opts, const std::string& scenarios_text,
                const std::string& seeds_text) {
  ScenarioConfig base = load_base_config(opts);
  auto scenarios = parse_scenarios(scenarios_text);
  auto seeds = parse_seeds(seeds_text);
  auto result = run_comparison(base, scenarios, seeds, output_basis_from_name(opts.output_basis));
  std::filesystem::path out_dir(opts.out_dir);
  emit_comparison_report(result, seeds.size(), out_dir);
  for (const auto& row : result.rows) print_metrics(scenario_name(row.scenario), row.mean);
  std::cout << "set hypervolume: " << format_double(result.set_hypervolume) << "\n";
  std::cout << "report written to " << out_dir.string() << "\n";
  return 0;
}

int run_replay(const std::string& transcript_path) {
  RunRecord rec = load_transcript(transcript_path);
  EpisodeMetrics m = replay_transcript(rec);
  std::cout << "replay ok: every recorded vote, commitment, world step and group update "
               "re-derives exactly\n";
  print_metrics(scenario_name(rec.config.scenario), m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"climate negotiation scenarios: simulate, compare, replay"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string scenario_text, scenarios_text, seeds_text = "0";
  std::string partition_path, transcript_path;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd, bool need_out) {
    cmd->add_option("--config", opts.config_path, "config file (JSON); defaults apply if omitted");
    cmd->add_option("--horizon", opts.horizon, "override the config horizon (steps)");
    cmd->add_option("--output-basis", opts.output_basis,
                    "output metric basis: net (default) or gross");
    auto* out = cmd->add_option("--out", opts.out_dir, "directory for the report files");
    if (need_out) out->required();
  };

  auto* simulate = app.add_subcommand("simulate", "run one scenario and write its report");
  add_common(simulate, true);
  simulate->add_option("--scenario", scenario_text,
                       "none, bilateral, static-mitigation, static-mitigation-saving or dynamic");
  simulate->add_option("--seed", seed, "episode seed (overrides the config)");
  simulate->add_option("--partition", partition_path,
                       "initial partition file (9 lines of 3 region ids)");

  auto* compare = app.add_subcommand("compare", "run several scenarios over a seed list");
  add_common(compare, true);
  compare->add_option("--scenarios", scenarios_text, "comma-separated scenario names")
      ->required();
  compare->add_option("--seeds", seeds_text, "seed list, e.g. 0..9 or 1,4,7");

  auto* replay = app.add_subcommand("replay", "verify a transcript re-derives exactly");
  replay->add_option("--transcript", transcript_path, "transcript JSON written by simulate")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(opts, scenario_text, seed, partition_path);
    if (compare->parsed()) return run_compare(opts, scenarios_text, seeds_text);
    return run_replay(transcript_path);
  } catch (const climneg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const climneg::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
