#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>

#include "pvint/error.hpp"
#include "pvint/unitcommit.hpp"

namespace pvint::uc {

namespace {

using Clock = std::chrono::steady_clock;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Extends on-periods until every start and shutdown respects the minimum up and down times.
void repair_min_times(Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> u, const ThermalPlant& pl) {
  const int nt = static_cast<int>(u.size());
  const double u0 = pl.initial_on ? 1.0 : 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < nt; ++s) {
      const double prev = s == 0 ? u0 : u(s - 1);
      if (u(s) == 1.0 && prev == 0.0) {
        for (int t = s + 1; t <= std::min(nt - 1, s + pl.min_up); ++t) {
          if (u(t) == 0.0) {
            u(t) = 1.0;
            changed = true;
          }
        }
      } else if (u(s) == 0.0 && prev == 1.0) {
        int last_on = -1;
        for (int t = s + 1; t <= std::min(nt - 1, s + pl.min_down); ++t)
          if (u(t) == 1.0) last_on = t;
        if (last_on >= 0) {
          for (int t = s; t < last_on; ++t) u(t) = 1.0;
          changed = true;
        }
      }
    }
  }
}

milp::Options milp_options(const SolveOptions& o, double time_left) {
  milp::Options m;
  m.gap_tol = o.gap_tol;
  m.absolute_gap = 1e-6;
  m.time_limit_seconds = std::max(0.0, time_left);
  m.lp.primal_tolerance = 1e-9;
  m.lp.dual_tolerance = 1e-9;
  m.verbose = o.verbose;
  return m;
}

/// Solves the model with every commitment fixed to `u`; the remaining binaries
/// (price levels, hydro state) stay free.
std::optional<VectorXd> solve_fixed_commitment(const Model& model, const milp::Problem& base, const MatrixXd& u,
                                               const SolveOptions& o, double time_left) {
  milp::Problem fixed = base;
  const int n = model.instance.n_plants();
  const int nt = model.instance.horizon();
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < nt; ++t) {
      const int c = model.u[static_cast<std::size_t>(i * nt + t)];
      fixed.lp.col_lower(c) = u(i, t);
      fixed.lp.col_upper(c) = u(i, t);
    }
  const milp::Result r = milp::solve(fixed, milp_options(o, time_left));
  if (!r.has_solution) return std::nullopt;
  return r.x;
}

/// Solver formulation: the model with the minimum up/down rows of every plant
/// that has start-up variables replaced by turn-on and turn-off inequalities.
/// For cost-minimal start-up indicators (z = max(0, u_t - u_{t-1})) these
/// describe the same commitments, so the optimum is unchanged while the
/// relaxation is much tighter.
milp::Problem strengthened(const Model& model) {
  const Instance& inst = model.instance;
  const int nt = inst.horizon();
  const auto& src = model.problem.lp;
  std::vector<bool> has_z(static_cast<std::size_t>(inst.n_plants()), false);
  for (int i = 0; i < inst.n_plants(); ++i) has_z[static_cast<std::size_t>(i)] = model.z[static_cast<std::size_t>(i * nt)] >= 0;

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> lo, hi;
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = src.a;
  for (int r = 0; r < model.n_rows(); ++r) {
    const Entry& e = model.rows[static_cast<std::size_t>(r)];
    if ((e.family == "MIN_UP" || e.family == "MIN_DOWN") && has_z[static_cast<std::size_t>(e.i)]) continue;
    const int k = static_cast<int>(lo.size());
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it)
      trip.emplace_back(k, static_cast<int>(it.col()), it.value());
    lo.push_back(src.row_lower(r));
    hi.push_back(src.row_upper(r));
  }
  for (int i = 0; i < inst.n_plants(); ++i) {
    if (!has_z[static_cast<std::size_t>(i)]) continue;
    const auto& pl = inst.plants[static_cast<std::size_t>(i)];
    const double u0 = pl.initial_on ? 1.0 : 0.0;
    auto U = [&](int t) { return model.u[static_cast<std::size_t>(i * nt + t)]; };
    auto Z = [&](int t) { return model.z[static_cast<std::size_t>(i * nt + t)]; };
    for (int t = 0; t < nt; ++t) {
      // At most one start in [t - min_up, t], and the unit is on at t after any of them.
      int k = static_cast<int>(lo.size());
      for (int s = std::max(0, t - pl.min_up); s <= t; ++s) trip.emplace_back(k, Z(s), 1.0);
      trip.emplace_back(k, U(t), -1.0);
      lo.push_back(-lp::kInf);
      hi.push_back(0.0);
      // A unit on just before the window [t - min_down, t] cannot also start inside it.
      k = static_cast<int>(lo.size());
      const int a = std::max(0, t - pl.min_down);
      for (int s = a; s <= t; ++s) trip.emplace_back(k, Z(s), 1.0);
      double rhs = 1.0;
      if (a == 0) {
        rhs -= u0;
      } else {
        trip.emplace_back(k, U(a - 1), 1.0);
      }
      lo.push_back(-lp::kInf);
      hi.push_back(rhs);
    }
  }
  milp::Problem out;
  out.integer = model.problem.integer;
  out.lp.cost = src.cost;
  out.lp.col_lower = src.col_lower;
  out.lp.col_upper = src.col_upper;
  out.lp.a.resize(static_cast<Eigen::Index>(lo.size()), src.cols());
  out.lp.a.setFromTriplets(trip.begin(), trip.end());
  out.lp.a.makeCompressed();
  out.lp.row_lower = Eigen::Map<VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  out.lp.row_upper = Eigen::Map<VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
  return out;
}

void finalize(Schedule& s, const Instance& inst) {
  for (int i = 0; i < inst.n_plants(); ++i) {
    double prev = inst.plants[static_cast<std::size_t>(i)].initial_on ? 1.0 : 0.0;
    for (int t = 0; t < inst.horizon(); ++t) {
      s.z(i, t) = std::max(0.0, s.u(i, t) - prev);
      prev = s.u(i, t);
    }
  }
  s.objective = objective_value(s, inst);
}

}  // namespace

MatrixXd priority_commitment(const Instance& inst, double margin) {
  const auto& sc = inst.scenario;
  const int n = inst.n_plants();
  const int nt = sc.horizon;
  double max_mult = 1.0;
  for (std::size_t l = 0; l < inst.ladder.size(); ++l) max_mult = std::max(max_mult, inst.ladder.multiplier(l));
  const VectorXd need = sc.demand * max_mult + required_reserve(sc) - sc.wind - sc.pv -
                        VectorXd::Constant(nt, sc.baseload - margin);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.plants[static_cast<std::size_t>(a)].fuel_cost < inst.plants[static_cast<std::size_t>(b)].fuel_cost;
  });
  MatrixXd u = MatrixXd::Zero(n, nt);
  for (int t = 0; t < nt; ++t) {
    double cap = 0.0;
    for (int i : order) {
      if (cap >= need(t)) break;
      u(i, t) = 1.0;
      cap += inst.plants[static_cast<std::size_t>(i)].p_max;
    }
  }
  // A unit starting from cold only reaches p_min in its first step, so start one step early.
  for (int i = 0; i < n; ++i)
    for (int t = nt - 1; t > 0; --t)
      if (u(i, t) == 1.0 && u(i, t - 1) == 0.0) u(i, t - 1) = 1.0;
  for (int i = 0; i < n; ++i) repair_min_times(u.row(i), inst.plants[static_cast<std::size_t>(i)]);
  return u;
}

Schedule solve(const Model& model, const SolveOptions& options) {
  const auto t0 = Clock::now();
  const Instance& inst = model.instance;
  const int nt = inst.horizon();
  const milp::Problem problem = strengthened(model);

  // Heuristic: priority list with escalating margins, then all units on.
  double pmax_total = 0.0;
  for (const auto& pl : inst.plants) pmax_total += pl.p_max;
  std::vector<double> margins{0.0};
  for (double f : {0.05, 0.1, 0.2, 0.4, 0.8}) margins.push_back(f * pmax_total);
  margins.push_back(lp::kInf);
  const double heuristic_budget =
      options.mode == SolveMode::heuristic ? options.time_limit_seconds : 0.25 * options.time_limit_seconds;
  std::optional<VectorXd> incumbent;
  MatrixXd last_u;
  for (double margin : margins) {
    const double left = heuristic_budget - seconds_since(t0);
    if (left <= 0.0) break;
    const MatrixXd u = std::isfinite(margin) ? priority_commitment(inst, margin)
                                             : MatrixXd::Ones(inst.n_plants(), nt);
    if (last_u.size() == u.size() && last_u == u) continue;
    last_u = u;
    incumbent = solve_fixed_commitment(model, problem, u, options, left);
    if (incumbent) break;
  }

  // Relaxation rounding: commit every unit whose relaxed commitment exceeds a threshold.
  const lp::Solution relaxed = lp::solve(problem.lp, milp_options(options, 0.0).lp);
  if (relaxed.status == lp::Status::optimal) {
    double best = incumbent ? problem.lp.cost.dot(*incumbent) : lp::kInf;
    for (double threshold : {0.5, 0.25, 0.1, 0.01}) {
      const double left = heuristic_budget - seconds_since(t0);
      if (left <= 0.0) break;
      MatrixXd u(inst.n_plants(), nt);
      for (int i = 0; i < inst.n_plants(); ++i) {
        for (int t = 0; t < nt; ++t)
          u(i, t) = relaxed.x(model.u[static_cast<std::size_t>(i * nt + t)]) > threshold ? 1.0 : 0.0;
        repair_min_times(u.row(i), inst.plants[static_cast<std::size_t>(i)]);
      }
      if (last_u.size() == u.size() && last_u == u) continue;
      last_u = u;
      const auto candidate = solve_fixed_commitment(model, problem, u, options, left);
      if (candidate && problem.lp.cost.dot(*candidate) < best) {
        best = problem.lp.cost.dot(*candidate);
        incumbent = candidate;
      }
    }
  }

  Schedule out;
  if (options.mode == SolveMode::heuristic) {
    if (!incumbent) {
      out = Schedule::zeros(inst);
      out.status = SolveStatus::infeasible;
      return out;
    }
    out = model.decode(*incumbent);
    finalize(out, inst);
    out.status = SolveStatus::feasible;
    out.bound = lp::kInf;
    return out;
  }

  milp::Options mo = milp_options(options, options.time_limit_seconds - seconds_since(t0));
  if (incumbent) mo.initial_solution = *incumbent;
  const milp::Result r = milp::solve(problem, mo);
  if (!r.has_solution) {
    out = Schedule::zeros(inst);
    out.status = r.status == milp::Status::infeasible ? SolveStatus::infeasible : SolveStatus::failed;
    out.nodes = r.nodes;
    return out;
  }
  out = model.decode(r.x);
  finalize(out, inst);
  out.status = r.status == milp::Status::optimal ? SolveStatus::optimal : SolveStatus::feasible;
  out.bound = model.objective_offset - r.bound;
  out.nodes = r.nodes;
  return out;
}

}  // namespace pvint::uc
