#pragma once

#include <cstdint>
#include <vector>

#include "pvint/unitcommit.hpp"

namespace pvint::uc {

/// Representative thermal fleet: coal, combined-cycle LNG, steam LNG and oil
/// units with typical relative limits. Capacities and costs are jittered by the
/// seed; identical specs give identical fleets.
struct FleetSpec {
  int n_plants = 10;
  double total_capacity_mw = 3000.0;
  std::uint64_t seed = 1;
  double step_hours = 0.5;  ///< converts hourly ramp rates and durations to per-step values
};

[[nodiscard]] std::vector<ThermalPlant> synthetic_fleet(const FleetSpec& spec);

/// Demand, renewables, hydro and tariff shapes for a synthetic day.
struct ScenarioSpec {
  int horizon = 48;
  double step_hours = 0.5;
  double start_hour = 0.0;        ///< clock hour of the first step
  double peak_demand_mw = 4400.0;
  double night_demand_ratio = 0.65;  ///< minimum over peak demand
  double baseload_mw = 2300.0;
  double pv_peak_mw = 600.0;
  double wind_mean_mw = 100.0;
  double sigma_d_fraction = 0.05;  ///< of the load, per step
  double sigma_w_fraction = 0.10;  ///< of the wind output, per step
  double sigma_p_mw = 0.0;         ///< PV error in MW during hours with PV output
  double alpha_quantile = 1.2815515655446004;
  double hydro_cmax_mw = 1300.0;
  double hydro_rmax_mwh = 13000.0;
  double hydro_efficiency = 0.7;
  double hydro_initial_fraction = 0.5;  ///< initial storage as a fraction of r_max
  int ladder_levels = 20;          ///< evenly spaced from price_low to price_high; 0 disables
  double price_low = 20.0;
  double price_high = 40.0;
  double mean_price = 30.0;
  double elasticity = 0.0;
};

[[nodiscard]] Instance synthetic_instance(const ScenarioSpec& spec, std::vector<ThermalPlant> fleet);

/// Parameter set with the full-size shape: 91 plants, 48 half-hour steps, 20
/// price levels, 11800 MW / 118000 MWh pumped hydro at 0.7 efficiency and a
/// 21000 MW baseload.
[[nodiscard]] Instance full_size_instance(double sigma_p_mw, double elasticity, std::uint64_t seed);

/// Ten-plant, 48-step instance with the same per-unit shapes scaled down and a
/// 2000 MW PV peak, large enough that the PV reserve changes the commitment.
[[nodiscard]] Instance reduced_instance(double sigma_p_mw, double elasticity, std::uint64_t seed);

}  // namespace pvint::uc
