#include "pvint/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pvint/error.hpp"

namespace pvint::uc {

namespace {

struct TypeProfile {
  const char* name;
  double share;          ///< fraction of plants
  double unit_mw;        ///< nominal capacity weight
  double pmin_ratio;
  double ramp_ratio;     ///< per hour, as a fraction of p_max
  double min_up_hours;
  double min_down_hours;
  double fuel_cost;      ///< JPY/MWh
  double start_per_mw;   ///< JPY per MW of capacity
};

constexpr TypeProfile kTypes[] = {
    {"Coal", 0.3, 1.0, 0.40, 0.30, 8.0, 6.0, 5500.0, 2500.0},
    {"LNGCC", 0.3, 0.9, 0.30, 0.60, 3.0, 3.0, 9000.0, 900.0},
    {"LNG", 0.25, 0.7, 0.30, 0.40, 5.0, 4.0, 11500.0, 1300.0},
    {"Oil", 0.15, 0.4, 0.20, 1.00, 1.0, 1.0, 17000.0, 500.0},
};

}  // namespace

std::vector<ThermalPlant> synthetic_fleet(const FleetSpec& spec) {
  if (spec.n_plants < 1) throw InputError("fleet needs at least one plant");
  if (!(spec.step_hours > 0.0)) throw InputError("fleet step length must be positive");
  if (!(spec.total_capacity_mw > 0.0)) throw InputError("fleet capacity must be positive");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(0.85, 1.15);
  // Largest-remainder assignment of plant counts to types.
  std::vector<int> counts;
  int assigned = 0;
  for (const auto& t : kTypes) {
    counts.push_back(static_cast<int>(std::floor(t.share * spec.n_plants)));
    assigned += counts.back();
  }
  for (std::size_t k = 0; assigned < spec.n_plants; k = (k + 1) % counts.size(), ++assigned) ++counts[k];

  std::vector<ThermalPlant> fleet;
  std::vector<double> weight;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (int j = 0; j < counts[k]; ++j) {
      const auto& tp = kTypes[k];
      ThermalPlant p;
      p.type = tp.name;
      p.id = std::string(tp.name) + "-" + std::to_string(j + 1);
      weight.push_back(tp.unit_mw * jitter(rng));
      p.fuel_cost = std::round(tp.fuel_cost * jitter(rng));
      fleet.push_back(p);
    }
  }
  double wsum = 0.0;
  for (double w : weight) wsum += w;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const auto& tp = kTypes[k];
    for (int j = 0; j < counts[k]; ++j, ++idx) {
      auto& p = fleet[idx];
      p.p_max = std::round(spec.total_capacity_mw * weight[idx] / wsum);
      p.p_min = std::round(p.p_max * tp.pmin_ratio);
      p.start_cost = std::round(p.p_max * tp.start_per_mw);
      p.ramp_up = std::round(tp.ramp_ratio * p.p_max * spec.step_hours);
      p.ramp_down = p.ramp_up;
      p.min_up = static_cast<int>(std::lround(tp.min_up_hours / spec.step_hours));
      p.min_down = static_cast<int>(std::lround(tp.min_down_hours / spec.step_hours));
    }
  }
  return fleet;
}

Instance synthetic_instance(const ScenarioSpec& spec, std::vector<ThermalPlant> fleet) {
  if (spec.horizon < 1 || !(spec.step_hours > 0.0)) throw InputError("scenario needs a positive horizon and step");
  Instance in;
  const int nt = spec.horizon;
  const double dt = spec.step_hours;
  in.plants = std::move(fleet);
  in.hydro.c_min = 0.0;
  in.hydro.c_max = spec.hydro_cmax_mw;
  in.hydro.r_min = 0.0;
  in.hydro.r_max = spec.hydro_rmax_mwh;
  in.hydro.efficiency = spec.hydro_efficiency;
  in.hydro.initial_storage = spec.hydro_initial_fraction * spec.hydro_rmax_mwh;
  in.ladder.mean_price = spec.mean_price;
  in.ladder.elasticity = spec.elasticity;
  for (int l = 0; l < spec.ladder_levels; ++l) {
    const double f = spec.ladder_levels == 1 ? 0.5 : static_cast<double>(l) / (spec.ladder_levels - 1);
    in.ladder.levels.push_back(spec.ladder_levels == 1 ? spec.mean_price
                                                       : spec.price_low + f * (spec.price_high - spec.price_low));
  }
  auto& sc = in.scenario;
  sc.horizon = nt;
  sc.step_hours = dt;
  sc.alpha_quantile = spec.alpha_quantile;
  sc.baseload = spec.baseload_mw;
  sc.demand.resize(nt);
  sc.wind.resize(nt);
  sc.pv.resize(nt);
  sc.sigma_d.resize(nt);
  sc.sigma_w.resize(nt);
  sc.sigma_p.resize(nt);
  constexpr double pi = std::numbers::pi;
  for (int t = 0; t < nt; ++t) {
    const double hour = std::fmod(spec.start_hour + (t + 0.5) * dt, 24.0);
    // Load: trough before dawn, broad daytime plateau, evening shoulder.
    const double shape = 0.5 * (1.0 - std::cos(2.0 * pi * (hour - 4.0) / 24.0)) +
                         0.12 * std::sin(2.0 * pi * (hour - 7.0) / 12.0);
    const double lo = spec.night_demand_ratio;
    sc.demand(t) = std::round(spec.peak_demand_mw * (lo + (1.0 - lo) * std::clamp(shape, 0.0, 1.0)));
    sc.pv(t) = (hour > 6.0 && hour < 18.0) ? std::round(spec.pv_peak_mw * std::sin(pi * (hour - 6.0) / 12.0)) : 0.0;
    sc.wind(t) = std::round(spec.wind_mean_mw * (1.0 + 0.3 * std::sin(2.0 * pi * hour / 24.0)));
    sc.sigma_d(t) = spec.sigma_d_fraction * sc.demand(t);
    sc.sigma_w(t) = spec.sigma_w_fraction * sc.wind(t);
    sc.sigma_p(t) = sc.pv(t) > 0.0 ? spec.sigma_p_mw : 0.0;
  }
  in.validate();
  return in;
}

Instance full_size_instance(double sigma_p_mw, double elasticity, std::uint64_t seed) {
  ScenarioSpec s;
  s.peak_demand_mw = 40000.0;
  s.baseload_mw = 21000.0;
  s.pv_peak_mw = 5000.0;
  s.wind_mean_mw = 300.0;
  s.hydro_cmax_mw = 11800.0;
  s.hydro_rmax_mwh = 118000.0;
  s.sigma_p_mw = sigma_p_mw;
  s.elasticity = elasticity;
  return synthetic_instance(s, synthetic_fleet({91, 30000.0, seed, s.step_hours}));
}

Instance reduced_instance(double sigma_p_mw, double elasticity, std::uint64_t seed) {
  ScenarioSpec s;
  s.pv_peak_mw = 2000.0;
  s.sigma_p_mw = sigma_p_mw;
  s.elasticity = elasticity;
  return synthetic_instance(s, synthetic_fleet({10, 3300.0, seed, s.step_hours}));
}

}  // namespace pvint::uc
