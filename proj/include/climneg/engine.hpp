#pragma once

#include <cmath>
#include <vector>

#include "climneg/common.hpp"

namespace climneg {

// Per-region economic parameters. Capital and output are in model output
// units, population in millions, emissions in GtC.
struct RegionParams {
  int id = 0;
  double A0 = 1.0;      // initial total factor productivity
  double gA = 0.0;      // productivity growth, fraction per year
  double L0 = 1.0;      // initial population, millions
  double gL = 0.0;      // population growth, fraction per year
  double K0 = 0.0;      // initial capital
  double sigma0 = 0.0;  // emission intensity, GtC per output unit
  double gSigma = 0.0;  // intensity decline, fraction per year
  double theta1 = 0.0;  // abatement cost coefficient
  double gamma = 0.3;   // capital elasticity
  double delta = 0.1;   // capital depreciation, fraction per year

  void validate() const {
    check(id >= 0 && id < kNumRegions, "region id out of range");
    check(A0 > 0.0, "A0 must be positive");
    check(L0 > 0.0, "L0 must be positive");
    check(K0 >= 0.0, "K0 must be non-negative");
    check(sigma0 >= 0.0, "sigma0 must be non-negative");
    check(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0,1)");
    check(delta >= 0.0 && delta <= 1.0, "delta must lie in [0,1]");
    check(theta1 >= 0.0, "theta1 must be non-negative");
  }
};

struct RegionState {
  double capital = 0.0;
  double productivity = 1.0;
  double population = 1.0;
  double intensity = 0.0;
  double mitigation_rate = 0.0;   // mu chosen at the last step
  double savings_rate = 0.0;      // s chosen at the last step
  double last_gross_output = 0.0;
  double last_net_output = 0.0;
  double last_emissions = 0.0;
};

// Carbon stock is measured as GtC above the pre-industrial reference,
// temperature as degrees C above pre-industrial.
struct ClimateState {
  double carbon_stock = 0.0;
  double temperature = 0.0;
};

struct ClimateParams {
  double M0 = 588.0;                  // pre-industrial carbon reference, GtC
  double carbon_decay = 0.012;        // excess carbon absorbed per step
  double forcing_per_doubling = 3.68; // W/m^2
  double climate_sensitivity = 3.1;   // degC at doubled carbon
  double thermal_inertia = 0.11;      // degC per (W/m^2) per step
  double damage_coeff = 0.00236;      // fraction per degC^2
  double abatement_exponent = 2.6;
  double step_years = 5.0;
  int horizon = 20;                   // steps per episode
  double initial_carbon = 100.0;      // stock above reference at step 0
  double initial_temperature = 1.0;   // degC above pre-industrial at step 0

  void validate() const {
    check(M0 > 0.0 && carbon_decay > 0.0 && forcing_per_doubling > 0.0 &&
              climate_sensitivity > 0.0 && thermal_inertia > 0.0 &&
              damage_coeff > 0.0 && abatement_exponent > 0.0 && step_years > 0.0,
          "climate params must be positive");
    check(horizon >= 1, "horizon must be at least 1");
    check(initial_carbon >= 0.0 && std::isfinite(initial_temperature),
          "initial climate state invalid");
  }
};

struct Action {
  double mitigation = 0.0;  // mu in [0,1]
  double savings = 0.0;     // s in [0,1]
};

struct World {
  std::vector<RegionState> regions;
  ClimateState climate;
};

struct SimParams {
  std::vector<RegionParams> regions;
  ClimateParams climate;
};

// Cobb-Douglas gross output Y = A * K^gamma * L^(1-gamma).
inline double production(const RegionParams& params, const RegionState& state) {
  check(state.capital >= 0.0 && state.population >= 0.0 && state.productivity >= 0.0,
        "production: state fields must be non-negative");
  return state.productivity * std::pow(state.capital, params.gamma) *
         std::pow(state.population, 1.0 - params.gamma);
}

// Q = Y / (1 + psi2*T^2) * (1 - theta1*mu^theta2): quadratic climate damages
// and a power-law abatement cost.
inline double net_output(double gross, double mitigation, double temperature,
                         const RegionParams& params, const ClimateParams& climate) {
  check(mitigation >= 0.0 && mitigation <= 1.0, "net_output: mu must lie in [0,1]");
  const double damage = 1.0 + climate.damage_coeff * temperature * temperature;
  const double abatement = params.theta1 * std::pow(mitigation, climate.abatement_exponent);
  return gross / damage * (1.0 - abatement);
}

// What a region consumed last step: net output minus reinvestment. Logged
// for inspection; no policy reads it.
inline double consumption(const RegionState& state) {
  return (1.0 - state.savings_rate) * state.last_net_output;
}

inline World initial_world(const SimParams& params) {
  check(params.regions.size() == static_cast<size_t>(kNumRegions),
        "expected one RegionParams per region");
  params.climate.validate();
  World world;
  world.regions.reserve(params.regions.size());
  for (const auto& rp : params.regions) {
    rp.validate();
    RegionState s;
    s.capital = rp.K0;
    s.productivity = rp.A0;
    s.population = rp.L0;
    s.intensity = rp.sigma0;
    world.regions.push_back(s);
  }
  world.climate.carbon_stock = params.climate.initial_carbon;
  world.climate.temperature = params.climate.initial_temperature;
  return world;
}

// Advance the world one step. Pure: the input world is left untouched.
// Per region:  E = sigma*(1-mu)*Y*dt,  K' = (1-delta)^dt*K + dt*s*Q,
// exogenous growth on A, L, sigma. Globally: one-box carbon stock with
// linear decay, log2 forcing, single-equation temperature relaxation.
inline World step_world(const World& world, const std::vector<Action>& actions,
                        const SimParams& params) {
  const ClimateParams& cp = params.climate;
  check(world.regions.size() == params.regions.size(),
        "world/params region count mismatch");
  check(actions.size() == world.regions.size(),
        "one action pair required per region");
  check(std::isfinite(world.climate.carbon_stock) && std::isfinite(world.climate.temperature),
        "non-finite climate state");

  const double dt = cp.step_years;
  World next = world;
  double total_emissions = 0.0;

  for (size_t i = 0; i < world.regions.size(); ++i) {
    const RegionParams& rp = params.regions[i];
    const RegionState& s = world.regions[i];
    const Action& a = actions[i];
    check(std::isfinite(s.capital) && std::isfinite(s.productivity) &&
              std::isfinite(s.population) && std::isfinite(s.intensity),
          "non-finite region state");
    check(a.mitigation >= 0.0 && a.mitigation <= 1.0, "action mu must lie in [0,1]");
    check(a.savings >= 0.0 && a.savings <= 1.0, "action s must lie in [0,1]");

    const double gross = production(rp, s);
    const double net = net_output(gross, a.mitigation, world.climate.temperature, rp, cp);
    const double emissions = s.intensity * (1.0 - a.mitigation) * gross * dt;

    RegionState& n = next.regions[i];
    n.capital = std::pow(1.0 - rp.delta, dt) * s.capital + dt * a.savings * net;
    n.productivity = s.productivity * std::pow(1.0 + rp.gA, dt);
    n.population = s.population * std::pow(1.0 + rp.gL, dt);
    n.intensity = s.intensity * std::pow(1.0 - rp.gSigma, dt);
    n.mitigation_rate = a.mitigation;
    n.savings_rate = a.savings;
    n.last_gross_output = gross;
    n.last_net_output = net;
    n.last_emissions = emissions;
    total_emissions += emissions;
  }

  ClimateState& cl = next.climate;
  cl.carbon_stock = (1.0 - cp.carbon_decay) * world.climate.carbon_stock + total_emissions;
  const double forcing =
      cp.forcing_per_doubling * std::log2((cl.carbon_stock + cp.M0) / cp.M0);
  const double feedback = cp.forcing_per_doubling / cp.climate_sensitivity;
  cl.temperature = world.climate.temperature +
                   cp.thermal_inertia * (forcing - feedback * world.climate.temperature);
  return next;
}

}  // namespace climneg
