#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pvint/milp.hpp"

namespace pvint::uc {

/// Conversion between MWh and kWh; prices are quoted per kWh, energy is kept in MWh.
inline constexpr double kKwhPerMwh = 1000.0;

struct ThermalPlant {
  std::string id;
  std::string type;        ///< fuel/technology label used for stacked output
  double p_min = 0.0;      ///< MW
  double p_max = 0.0;      ///< MW
  double ramp_up = 0.0;    ///< MW per step
  double ramp_down = 0.0;  ///< MW per step
  int min_up = 0;          ///< steps
  int min_down = 0;        ///< steps
  double start_cost = 0.0; ///< JPY per start
  double fuel_cost = 0.0;  ///< JPY/MWh
  bool initial_on = false;
  double initial_output = 0.0;  ///< MW, used only when initial ramps are enforced

  void validate() const;
};

struct PumpedHydro {
  double c_min = 0.0;  ///< MW
  double c_max = 0.0;  ///< MW; zero disables the unit
  double r_min = 0.0;  ///< MWh
  double r_max = 0.0;  ///< MWh
  double efficiency = 1.0;
  double initial_storage = 0.0;  ///< MWh

  [[nodiscard]] bool present() const { return c_max > 0.0; }
  void validate() const;
};

struct DemandResponseLadder {
  std::vector<double> levels;  ///< JPY/kWh, strictly increasing; empty means a flat tariff at mean_price
  double mean_price = 30.0;    ///< JPY/kWh
  double elasticity = 0.0;     ///< <= 0

  [[nodiscard]] bool present() const { return !levels.empty(); }
  [[nodiscard]] std::size_t size() const { return levels.size(); }
  /// Demand multiplier (r_l / r_mean)^elasticity.
  [[nodiscard]] double multiplier(std::size_t l) const;
  void validate() const;
};

struct Scenario {
  int horizon = 0;
  double step_hours = 0.5;
  Eigen::VectorXd demand;  ///< MW, length horizon
  Eigen::VectorXd wind;
  Eigen::VectorXd pv;
  Eigen::VectorXd sigma_d;
  Eigen::VectorXd sigma_w;
  Eigen::VectorXd sigma_p;
  double alpha_quantile = 1.2815515655446004;  ///< the quantile value itself, not a probability
  double baseload = 0.0;                       ///< MW of must-run supply
  double conservation_tol = 1e-6;              ///< relative tolerance on total demand conservation
  bool enforce_end_storage = false;            ///< final storage must equal the initial storage
  bool enforce_initial_ramp = false;           ///< apply ramp limits at t = 1 from the initial state

  void validate() const;
};

/// Everything needed to build one unit-commitment problem.
struct Instance {
  std::vector<ThermalPlant> plants;
  PumpedHydro hydro;
  DemandResponseLadder ladder;
  Scenario scenario;

  [[nodiscard]] int n_plants() const { return static_cast<int>(plants.size()); }
  [[nodiscard]] int horizon() const { return scenario.horizon; }
  void validate() const;
};

enum class SolveStatus { optimal, feasible, infeasible, failed };

[[nodiscard]] const char* to_string(SolveStatus s);

struct Schedule {
  Eigen::MatrixXd u;  ///< N x T commitment
  Eigen::MatrixXd z;  ///< N x T start-up
  Eigen::MatrixXd p;  ///< N x T dispatch, MW
  Eigen::MatrixXd w;  ///< L x T price-level selection (1 x T at mean price without a ladder)
  Eigen::VectorXd v;  ///< hydro state, 1 = discharge
  Eigen::VectorXd g;  ///< hydro discharge, MW
  Eigen::VectorXd h;  ///< hydro charge, MW
  double objective = 0.0;          ///< JPY
  Eigen::VectorXd reserve_slack;   ///< balance surplus over the required reserve, MW
  SolveStatus status = SolveStatus::failed;
  double bound = 0.0;  ///< proven upper bound on the profit
  long nodes = 0;

  /// All-zero schedule with the right shapes.
  [[nodiscard]] static Schedule zeros(const Instance& instance);
};

/// d~_t = d_t * sum_l w_lt (r_l / r_mean)^elasticity.
[[nodiscard]] Eigen::VectorXd effective_demand(const Scenario& scenario,
                                               const DemandResponseLadder& ladder,
                                               const Eigen::MatrixXd& w);

/// Sales revenue in JPY.
[[nodiscard]] double revenue(const Scenario& scenario, const DemandResponseLadder& ladder,
                             const Eigen::MatrixXd& w);

/// alpha_quantile * sqrt(sigma_d^2 + sigma_w^2 + sigma_p^2) per step, MW.
[[nodiscard]] Eigen::VectorXd required_reserve(const Scenario& scenario);

/// Fuel plus start-up cost in JPY.
[[nodiscard]] double operation_cost(const Schedule& schedule, const Instance& instance);

/// Revenue minus operation cost, JPY.
[[nodiscard]] double objective_value(const Schedule& schedule, const Instance& instance);

// ---- model ----------------------------------------------------------------

struct Entry {
  std::string family;
  int i = -1;  ///< plant or price-level index, -1 when not applicable
  int t = -1;  ///< step index (0-based), -1 for horizon-wide rows
};

/// Mixed-integer model of one instance. The MILP minimizes the negated profit;
/// profit = objective_offset - cost' x.
struct Model {
  Instance instance;
  milp::Problem problem;
  double objective_offset = 0.0;
  std::vector<Entry> columns;
  std::vector<Entry> rows;
  std::vector<std::string> warnings;
  // Column index maps, -1 where the variable does not exist.
  std::vector<int> u, z, p;  ///< i * T + t
  std::vector<int> w;        ///< l * T + t
  std::vector<int> v, g, h;  ///< t

  [[nodiscard]] int n_binary() const;
  [[nodiscard]] int n_continuous() const;
  [[nodiscard]] int n_rows() const { return static_cast<int>(rows.size()); }

  [[nodiscard]] Schedule decode(const Eigen::VectorXd& x) const;
  [[nodiscard]] Eigen::VectorXd encode(const Schedule& schedule) const;
};

[[nodiscard]] Model build_model(const Instance& instance);

// ---- solve ----------------------------------------------------------------

enum class SolveMode { exact, heuristic };

struct SolveOptions {
  SolveMode mode = SolveMode::exact;
  double gap_tol = 1e-6;
  double time_limit_seconds = 600.0;
  bool verbose = false;
};

/// Solves the model. Infeasible instances come back with status infeasible;
/// a time limit returns the incumbent with status feasible.
[[nodiscard]] Schedule solve(const Model& model, const SolveOptions& options = {});

/// Priority-list commitment: returns a commitment matrix (N x T) after min up/down repair.
[[nodiscard]] Eigen::MatrixXd priority_commitment(const Instance& instance, double margin);

// ---- validation -----------------------------------------------------------

struct Violation {
  std::string family;
  int i = -1;
  int t = -1;
  double residual = 0.0;  ///< negative amount by which the constraint is violated
};

/// Checks every constraint of the instance against the schedule; empty iff feasible
/// at `tolerance` MW (relative tolerance for the demand-conservation row).
[[nodiscard]] std::vector<Violation> validate_schedule(const Schedule& schedule,
                                                       const Instance& instance,
                                                       double tolerance = 1e-6);

void write_violations(std::ostream& out, const std::vector<Violation>& violations);

// ---- files ----------------------------------------------------------------

/// Reads the sectioned instance format:
///
///     [scenario]   key = value  (horizon, step_hours, alpha_quantile, baseload,
///                               conservation_tol, enforce_end_storage, enforce_initial_ramp)
///     [series]     CSV t,demand,wind,pv,sigma_d,sigma_w,sigma_p
///     [plants]     CSV id,type,p_min,p_max,ramp_up,ramp_down,min_up,min_down,
///                      start_cost,fuel_cost,initial_on,initial_output
///     [hydro]      key = value  (c_min, c_max, r_min, r_max, efficiency, initial_storage)
///     [ladder]     key = value  (mean_price, elasticity, levels = r1,r2,...)
///
/// '#' starts a comment line. [hydro] and [ladder] are optional. Throws
/// InputError with the offending line number.
[[nodiscard]] Instance read_instance(std::istream& in);
[[nodiscard]] Instance read_instance(const std::filesystem::path& path);

/// Writes an instance that read_instance reproduces exactly.
void write_instance(std::ostream& out, const Instance& instance);

/// One row per (entity, t): thermal plants, then `hydro`, then `demand`.
/// Columns entity,kind,t,u,z,p_mw,h_mw,price. For hydro u is the discharge
/// state, p_mw the discharge and h_mw the charge; for demand u is the 1-based
/// price level (0 without a ladder), p_mw the effective demand and price the
/// selected tariff.
void write_schedule(std::ostream& out, const Schedule& schedule, const Instance& instance);

/// Supply stacked by source per step: baseload, one column per plant type in
/// order of first appearance, wind, pv, hydro_discharge, then hydro_charge,
/// demand and required reserve for reference. MW.
void write_stacked_generation(std::ostream& out, const Schedule& schedule, const Instance& instance);

}  // namespace pvint::uc
