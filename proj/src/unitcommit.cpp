#include "pvint/unitcommit.hpp"

#include <cmath>
#include <string>

#include "pvint/error.hpp"

namespace pvint::uc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

bool finite_nonneg(const Eigen::VectorXd& v) {
  return v.allFinite() && (v.size() == 0 || v.minCoeff() >= 0.0);
}

double level_price(const DemandResponseLadder& ladder, Eigen::Index l) {
  return ladder.present() ? ladder.levels[static_cast<std::size_t>(l)] : ladder.mean_price;
}

double level_multiplier(const DemandResponseLadder& ladder, Eigen::Index l) {
  return ladder.present() ? ladder.multiplier(static_cast<std::size_t>(l)) : 1.0;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::failed: return "failed";
  }
  return "unknown";
}

void ThermalPlant::validate() const {
  const std::string at = "plant '" + id + "': ";
  require(std::isfinite(p_min) && std::isfinite(p_max) && 0.0 <= p_min && p_min <= p_max,
          at + "need 0 <= p_min <= p_max");
  require(std::isfinite(ramp_up) && std::isfinite(ramp_down) && ramp_up >= 0.0 && ramp_down >= 0.0,
          at + "ramp limits must be non-negative");
  require(min_up >= 0 && min_down >= 0, at + "minimum up/down times must be non-negative");
  require(std::isfinite(start_cost) && std::isfinite(fuel_cost) && start_cost >= 0.0 && fuel_cost >= 0.0,
          at + "costs must be non-negative");
  require(std::isfinite(initial_output) && initial_output >= 0.0 &&
              (initial_on || initial_output == 0.0) && initial_output <= p_max,
          at + "initial output must lie in [0, p_max] and be zero when initially off");
}

void PumpedHydro::validate() const {
  require(std::isfinite(c_min) && std::isfinite(c_max) && 0.0 <= c_min && c_min <= c_max,
          "pumped hydro: need 0 <= c_min <= c_max");
  require(std::isfinite(r_min) && std::isfinite(r_max) && r_min <= r_max,
          "pumped hydro: need r_min <= r_max");
  require(efficiency > 0.0 && efficiency <= 1.0, "pumped hydro: efficiency must lie in (0, 1]");
  require(r_min <= initial_storage && initial_storage <= r_max,
          "pumped hydro: initial storage must lie in [r_min, r_max]");
}

double DemandResponseLadder::multiplier(std::size_t l) const {
  return std::pow(levels.at(l) / mean_price, elasticity);
}

void DemandResponseLadder::validate() const {
  require(std::isfinite(mean_price) && mean_price > 0.0, "ladder: mean price must be positive");
  require(std::isfinite(elasticity) && elasticity <= 0.0, "ladder: elasticity must be <= 0");
  for (std::size_t l = 0; l < levels.size(); ++l) {
    require(std::isfinite(levels[l]) && levels[l] > 0.0, "ladder: price levels must be positive");
    if (l > 0) require(levels[l] > levels[l - 1], "ladder: price levels must be strictly increasing");
  }
  if (present()) {
    require(levels.front() <= mean_price && mean_price <= levels.back(),
            "ladder: mean price must lie between the lowest and highest level");
  }
}

void Scenario::validate() const {
  require(horizon >= 1, "scenario: horizon must be at least 1");
  require(std::isfinite(step_hours) && step_hours > 0.0, "scenario: step_hours must be positive");
  const auto n = static_cast<Eigen::Index>(horizon);
  for (const auto* v : {&demand, &wind, &pv, &sigma_d, &sigma_w, &sigma_p}) {
    require(v->size() == n, "scenario: every series must have horizon entries");
    require(finite_nonneg(*v), "scenario: series values must be finite and non-negative");
  }
  require(std::isfinite(alpha_quantile), "scenario: alpha_quantile must be finite");
  require(std::isfinite(baseload) && baseload >= 0.0, "scenario: baseload must be non-negative");
  require(conservation_tol >= 0.0, "scenario: conservation_tol must be non-negative");
}

void Instance::validate() const {
  scenario.validate();
  hydro.validate();
  ladder.validate();
  for (const auto& p : plants) p.validate();
}

Schedule Schedule::zeros(const Instance& instance) {
  const Eigen::Index n = instance.n_plants(), t = instance.horizon();
  const Eigen::Index l = instance.ladder.present() ? static_cast<Eigen::Index>(instance.ladder.size()) : 1;
  Schedule s;
  s.u = Eigen::MatrixXd::Zero(n, t);
  s.z = Eigen::MatrixXd::Zero(n, t);
  s.p = Eigen::MatrixXd::Zero(n, t);
  s.w = Eigen::MatrixXd::Zero(l, t);
  if (!instance.ladder.present()) s.w.setOnes();
  s.v = Eigen::VectorXd::Zero(t);
  s.g = Eigen::VectorXd::Zero(t);
  s.h = Eigen::VectorXd::Zero(t);
  s.reserve_slack = Eigen::VectorXd::Zero(t);
  return s;
}

Eigen::VectorXd effective_demand(const Scenario& scenario, const DemandResponseLadder& ladder,
                                 const Eigen::MatrixXd& w) {
  Eigen::VectorXd m(w.rows());
  for (Eigen::Index l = 0; l < w.rows(); ++l) m(l) = level_multiplier(ladder, l);
  return scenario.demand.cwiseProduct(w.transpose() * m);
}

double revenue(const Scenario& scenario, const DemandResponseLadder& ladder, const Eigen::MatrixXd& w) {
  Eigen::VectorXd unit(w.rows());
  for (Eigen::Index l = 0; l < w.rows(); ++l) unit(l) = level_price(ladder, l) * level_multiplier(ladder, l);
  return scenario.demand.dot(w.transpose() * unit) * scenario.step_hours * kKwhPerMwh;
}

Eigen::VectorXd required_reserve(const Scenario& scenario) {
  const Eigen::VectorXd var = scenario.sigma_d.cwiseAbs2() + scenario.sigma_w.cwiseAbs2() +
                              scenario.sigma_p.cwiseAbs2();
  return scenario.alpha_quantile * var.cwiseSqrt();
}

double operation_cost(const Schedule& schedule, const Instance& instance) {
  double cost = 0.0;
  for (int i = 0; i < instance.n_plants(); ++i) {
    const auto& plant = instance.plants[static_cast<std::size_t>(i)];
    cost += plant.fuel_cost * schedule.p.row(i).sum() * instance.scenario.step_hours;
    cost += plant.start_cost * schedule.z.row(i).sum();
  }
  return cost;
}

double objective_value(const Schedule& schedule, const Instance& instance) {
  return revenue(instance.scenario, instance.ladder, schedule.w) - operation_cost(schedule, instance);
}

}  // namespace pvint::uc
