#pragma once

// Seeded tiny unit-commitment instances with integer data (3 plants, T = 6,
// pumped hydro, three-level price ladder) for exhaustive cross-checks.

#include <cstdint>
#include <random>
#include <string>

#include "pvint/unitcommit.hpp"

namespace oracle {

inline pvint::uc::Instance tiny_instance(std::uint64_t seed, int n_plants = 3, int horizon = 6) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  pvint::uc::Instance in;
  for (int i = 0; i < n_plants; ++i) {
    pvint::uc::ThermalPlant p;
    p.id = "G" + std::to_string(i + 1);
    p.type = "Coal";
    p.p_min = pick(1, 2);
    p.p_max = p.p_min + pick(1, 2);
    p.ramp_up = pick(1, 3);
    p.ramp_down = pick(1, 3);
    p.min_up = pick(0, 2);
    p.min_down = pick(0, 2);
    p.start_cost = 1000.0 * pick(1, 20);
    p.fuel_cost = 1000.0 * pick(5, 35);
    in.plants.push_back(p);
  }
  in.hydro.c_min = 0.0;
  in.hydro.c_max = pick(1, 2);
  in.hydro.r_min = 0.0;
  in.hydro.r_max = pick(2, 3);
  in.hydro.efficiency = 1.0;
  in.hydro.initial_storage = pick(0, 1);
  in.ladder.levels = {20.0, 30.0, 40.0};
  in.ladder.mean_price = 30.0;
  in.ladder.elasticity = seed % 2 == 0 ? 0.0 : -0.1;
  auto& sc = in.scenario;
  sc.horizon = horizon;
  sc.step_hours = 1.0;
  sc.alpha_quantile = 1.0;
  sc.baseload = pick(0, 1);
  sc.demand.resize(horizon);
  sc.wind.resize(horizon);
  sc.pv.resize(horizon);
  sc.sigma_d.resize(horizon);
  sc.sigma_w.resize(horizon);
  sc.sigma_p.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    sc.demand(t) = pick(2, 6);
    sc.wind(t) = pick(0, 1);
    sc.pv(t) = (t >= 1 && t <= 4) ? pick(0, 2) : 0.0;
    // Integer reserves: 0, 1, 2, or the 3-4-5 triangle.
    switch (pick(0, 5)) {
      case 0: case 1: sc.sigma_d(t) = 0; sc.sigma_w(t) = 0; break;
      case 2: case 3: sc.sigma_d(t) = 1; sc.sigma_w(t) = 0; break;
      case 4: sc.sigma_d(t) = 2; sc.sigma_w(t) = 0; break;
      default: sc.sigma_d(t) = 3; sc.sigma_w(t) = 4; break;
    }
    sc.sigma_p(t) = 0.0;
  }
  return in;
}

}  // namespace oracle
