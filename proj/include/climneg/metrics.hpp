#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "climneg/common.hpp"
#include "climneg/engine.hpp"

namespace climneg {

struct IndexAnchors {
  double temp_zero = 0.0;       // degC scoring climate index 1.0
  double temp_one = 8.0;        // degC scoring climate index 0.0
  double output_scale = 10000;  // output units scoring econ index 1.0

  void validate() const {
    if (!(temp_one > temp_zero)) throw ConfigError("anchors need temp_one > temp_zero");
    if (!(output_scale > 0)) throw ConfigError("anchors need positive output_scale");
  }
};

struct EpisodeMetrics {
  double temp_rise = 0;
  double gross_output = 0;
  double climate_index = 0;
  double econ_index = 0;
  double hv_contribution = 0;
};

inline double temperature_rise(const std::vector<ClimateState>& trajectory) {
  check(!trajectory.empty(), "temperature rise needs a non-empty trajectory");
  return trajectory.back().temperature;
}

inline double gross_output_total(const std::vector<std::vector<double>>& per_step_per_region) {
  double total = 0;
  size_t width = per_step_per_region.empty() ? 0 : per_step_per_region.front().size();
  for (const auto& row : per_step_per_region) {
    check(row.size() == width, "output trajectory must be rectangular");
    for (double q : row) total += q;
  }
  return total;
}

inline double climate_index(double temp_rise, const IndexAnchors& anchors) {
  anchors.validate();
  double v = 1.0 - (temp_rise - anchors.temp_zero) / (anchors.temp_one - anchors.temp_zero);
  return std::clamp(v, 0.0, 1.0);
}

inline double econ_index(double gross_output, const IndexAnchors& anchors) {
  anchors.validate();
  return std::clamp(gross_output / anchors.output_scale, 0.0, 1.0);
}

inline double hypervolume_contribution(double climate_idx, double econ_idx) {
  check(climate_idx >= 0 && climate_idx <= 1, "climate index must lie in [0,1]");
  check(econ_idx >= 0 && econ_idx <= 1, "econ index must lie in [0,1]");
  return climate_idx * econ_idx;
}

// Area of the union of origin-anchored rectangles, by descending-x sweep.
inline double hypervolume_set(std::vector<std::pair<double, double>> points) {
  for (const auto& [c, e] : points) {
    check(c >= 0 && c <= 1, "hypervolume point x must lie in [0,1]");
    check(e >= 0 && e <= 1, "hypervolume point y must lie in [0,1]");
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  });
  double area = 0, best_e = 0;
  for (const auto& [c, e] : points) {
    if (e > best_e) {
      area += c * (e - best_e);
      best_e = e;
    }
  }
  return area;
}

enum class OutputBasis { Net, Gross };

inline EpisodeMetrics compute_metrics(const std::vector<ClimateState>& climate_trajectory,
                                      const std::vector<std::vector<double>>& outputs,
                                      const IndexAnchors& anchors) {
  EpisodeMetrics m;
  m.temp_rise = temperature_rise(climate_trajectory);
  m.gross_output = gross_output_total(outputs);
  m.climate_index = climate_index(m.temp_rise, anchors);
  m.econ_index = econ_index(m.gross_output, anchors);
  m.hv_contribution = hypervolume_contribution(m.climate_index, m.econ_index);
  return m;
}

}  // namespace climneg
