#include "pvint/lp.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pvint/error.hpp"

namespace pvint::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::cutoff: return "cutoff";
    case Status::iteration_limit: return "iteration_limit";
    case Status::time_limit: return "time_limit";
    case Status::numerical: return "numerical";
  }
  return "unknown";
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::Index;
using Eigen::VectorXd;

double pow2_round(double v) { return std::exp2(std::round(std::log2(v))); }

struct Eta {
  Index row = 0;
  double pivot = 1.0;
  std::vector<Index> idx;
  std::vector<double> val;
};

}  // namespace

struct DualSimplex::Impl {
  // Problem data in scaled space. Logical variable of row i is n + i with column -e_i.
  Index m = 0, n = 0, nt = 0;
  SpMat a;
  Eigen::SparseMatrix<double, Eigen::RowMajor> a_rows;
  VectorXd row_scale, col_scale;
  double obj_scale = 1.0;
  VectorXd cost;                 // nt
  VectorXd row_lo, row_hi;       // scaled row bounds (logical variable bounds)
  const Problem* original = nullptr;
  std::vector<bool> col_lo_inf, col_hi_inf;

  // Working state.
  VectorXd lo, hi, x, d, dse;
  std::vector<Index> head, pos;
  std::vector<VarStatus> status;
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  std::vector<Eta> etas;
  bool factored = false;  ///< lu and etas represent the current head
  Options opt;

  explicit Impl(const Problem& p) : original(&p) {
    m = p.rows();
    n = p.cols();
    nt = n + m;
    if (p.cost.size() != n || p.col_lower.size() != n || p.col_upper.size() != n ||
        p.row_lower.size() != m || p.row_upper.size() != m) {
      throw InputError("LP dimensions are inconsistent");
    }
    a = p.a;
    a.makeCompressed();
    scale();
    a_rows = a;
  }

  void scale() {
    row_scale = VectorXd::Ones(m);
    col_scale = VectorXd::Ones(n);
    // Geometric-mean scaling passes, rounded to powers of two so scaling is exact.
    for (int pass = 0; pass < 6; ++pass) {
      VectorXd rmax = VectorXd::Zero(m), rmin = VectorXd::Constant(m, kInf);
      for (Index j = 0; j < n; ++j)
        for (SpMat::InnerIterator it(a, j); it; ++it) {
          const double v = std::abs(it.value());
          if (v == 0.0) continue;
          rmax(it.row()) = std::max(rmax(it.row()), v);
          rmin(it.row()) = std::min(rmin(it.row()), v);
        }
      for (Index i = 0; i < m; ++i) {
        if (rmax(i) == 0.0) continue;
        const double s = pow2_round(1.0 / std::sqrt(rmax(i) * rmin(i)));
        row_scale(i) *= s;
        a.row(i) *= s;
      }
      for (Index j = 0; j < n; ++j) {
        double cmax = 0.0, cmin = kInf;
        for (SpMat::InnerIterator it(a, j); it; ++it) {
          const double v = std::abs(it.value());
          if (v == 0.0) continue;
          cmax = std::max(cmax, v);
          cmin = std::min(cmin, v);
        }
        if (cmax == 0.0) continue;
        const double s = pow2_round(1.0 / std::sqrt(cmax * cmin));
        col_scale(j) *= s;
        a.col(j) *= s;
      }
    }
    cost = VectorXd::Zero(nt);
    for (Index j = 0; j < n; ++j) cost(j) = original->cost(j) * col_scale(j);
    const double cmax = cost.head(n).cwiseAbs().maxCoeff();
    obj_scale = cmax > 0.0 ? pow2_round(1.0 / cmax) : 1.0;
    cost *= obj_scale;
    row_lo = original->row_lower.cwiseProduct(row_scale);
    row_hi = original->row_upper.cwiseProduct(row_scale);
  }

  // ---- column access -------------------------------------------------------
  template <typename F>
  void for_column(Index j, F&& f) const {
    if (j < n) {
      for (SpMat::InnerIterator it(a, j); it; ++it) f(it.row(), it.value());
    } else {
      f(j - n, -1.0);
    }
  }
  double column_dot(Index j, const VectorXd& v) const {
    if (j >= n) return -v(j - n);
    double s = 0.0;
    for (SpMat::InnerIterator it(a, j); it; ++it) s += it.value() * v(it.row());
    return s;
  }

  // ---- factorization -------------------------------------------------------
  bool factor() {
    etas.clear();
    etas.reserve(static_cast<std::size_t>(std::max(opt.refactor_interval, 1)));
    factored = false;
    if (m == 0) return factored = true;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 3);
    for (Index r = 0; r < m; ++r)
      for_column(head[static_cast<std::size_t>(r)],
                 [&](Index i, double v) { trip.emplace_back(static_cast<int>(i), static_cast<int>(r), v); });
    SpMat b(m, m);
    b.setFromTriplets(trip.begin(), trip.end());
    b.makeCompressed();
    lu.analyzePattern(b);
    lu.factorize(b);
    factored = lu.info() == Eigen::Success;
    return factored;
  }

  void ftran(VectorXd& v) const {
    if (m == 0) return;
    v = lu.solve(v).eval();
    for (const auto& e : etas) {
      const double xr = v(e.row) / e.pivot;
      if (xr != 0.0)
        for (std::size_t k = 0; k < e.idx.size(); ++k) v(e.idx[k]) -= e.val[k] * xr;
      v(e.row) = xr;
    }
  }

  void btran(VectorXd& v) const {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v(it->row);
      for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * v(it->idx[k]);
      v(it->row) = s / it->pivot;
    }
    v = lu.transpose().solve(v).eval();
  }

  void slack_basis() {
    head.resize(static_cast<std::size_t>(m));
    pos.assign(static_cast<std::size_t>(nt), -1);
    status.assign(static_cast<std::size_t>(nt), VarStatus::at_lower);
    for (Index i = 0; i < m; ++i) {
      head[static_cast<std::size_t>(i)] = n + i;
      pos[static_cast<std::size_t>(n + i)] = i;
      status[static_cast<std::size_t>(n + i)] = VarStatus::basic;
    }
    for (Index j = 0; j < n; ++j)
      status[static_cast<std::size_t>(j)] = cost(j) >= 0.0 ? VarStatus::at_lower : VarStatus::at_upper;
  }

  bool load_basis(const Basis& warm) {
    if (static_cast<Index>(warm.status.size()) != nt) return false;
    const auto basics = std::count(warm.status.begin(), warm.status.end(), VarStatus::basic);
    if (basics != m) return false;
    status = warm.status;
    head.clear();
    pos.assign(static_cast<std::size_t>(nt), -1);
    for (Index j = 0; j < nt; ++j) {
      if (status[static_cast<std::size_t>(j)] == VarStatus::basic) {
        pos[static_cast<std::size_t>(j)] = static_cast<Index>(head.size());
        head.push_back(j);
      }
    }
    return true;
  }

  void place_nonbasic(Index j) {
    auto& st = status[static_cast<std::size_t>(j)];
    if (st == VarStatus::basic) return;
    const bool lo_fin = std::isfinite(lo(j)), hi_fin = std::isfinite(hi(j));
    if (st == VarStatus::at_upper && !hi_fin) st = lo_fin ? VarStatus::at_lower : VarStatus::at_zero;
    if (st == VarStatus::at_lower && !lo_fin) st = hi_fin ? VarStatus::at_upper : VarStatus::at_zero;
    if (st == VarStatus::at_zero && (lo_fin || hi_fin)) st = lo_fin ? VarStatus::at_lower : VarStatus::at_upper;
    x(j) = st == VarStatus::at_lower ? lo(j) : st == VarStatus::at_upper ? hi(j) : 0.0;
  }

  void compute_primal() {
    VectorXd rhs = VectorXd::Zero(m);
    for (Index j = 0; j < nt; ++j) {
      if (status[static_cast<std::size_t>(j)] == VarStatus::basic) continue;
      const double xj = x(j);
      if (xj != 0.0) for_column(j, [&](Index i, double v) { rhs(i) += v * xj; });
    }
    ftran(rhs);
    for (Index r = 0; r < m; ++r) x(head[static_cast<std::size_t>(r)]) = -rhs(r);
  }

  void compute_dual() {
    VectorXd y(m);
    for (Index r = 0; r < m; ++r) y(r) = cost(head[static_cast<std::size_t>(r)]);
    btran(y);
    for (Index j = 0; j < nt; ++j) {
      d(j) = status[static_cast<std::size_t>(j)] == VarStatus::basic ? 0.0 : cost(j) - column_dot(j, y);
    }
  }

  /// Moves boxed nonbasics whose reduced cost has the wrong sign to the other
  /// bound. Returns false when an unboxed variable is dual infeasible.
  bool restore_dual_feasibility() {
    bool moved = false;
    for (Index j = 0; j < nt; ++j) {
      auto& st = status[static_cast<std::size_t>(j)];
      if (st == VarStatus::basic || lo(j) == hi(j)) continue;
      if (st == VarStatus::at_lower && d(j) < -opt.dual_tolerance) {
        if (!std::isfinite(hi(j))) return false;
        st = VarStatus::at_upper;
        x(j) = hi(j);
        moved = true;
      } else if (st == VarStatus::at_upper && d(j) > opt.dual_tolerance) {
        if (!std::isfinite(lo(j))) return false;
        st = VarStatus::at_lower;
        x(j) = lo(j);
        moved = true;
      } else if (st == VarStatus::at_zero && std::abs(d(j)) > opt.dual_tolerance) {
        return false;
      }
    }
    if (moved) compute_primal();
    return true;
  }

  bool refactor() {
    if (!factor()) return false;
    compute_primal();
    compute_dual();
    return true;
  }

  double objective() const {
    double s = 0.0;
    for (Index j = 0; j < n; ++j) s += cost(j) * x(j);
    return s;
  }

  Solution finish(Status st, long iterations) const {
    Solution sol;
    sol.status = st;
    sol.iterations = iterations;
    sol.x.resize(n);
    for (Index j = 0; j < n; ++j) sol.x(j) = x(j) * col_scale(j);
    sol.row_activity = original->a * sol.x;
    sol.objective = original->cost.dot(sol.x);
    sol.reduced_costs.resize(n);
    for (Index j = 0; j < n; ++j) sol.reduced_costs(j) = d(j) / (col_scale(j) * obj_scale);
    sol.basis.status = status;
    return sol;
  }

  Solution run(const VectorXd& col_lower, const VectorXd& col_upper, const Basis& warm,
               const Options& options) {
    opt = options;
    const auto start = std::chrono::steady_clock::now();
    lo.resize(nt);
    hi.resize(nt);
    col_lo_inf.assign(static_cast<std::size_t>(n), false);
    col_hi_inf.assign(static_cast<std::size_t>(n), false);
    for (Index j = 0; j < n; ++j) {
      double l = col_lower(j), h = col_upper(j);
      if (l > h) return finish_trivial_infeasible();
      if (!std::isfinite(l)) {
        col_lo_inf[static_cast<std::size_t>(j)] = true;
        l = -opt.infinite_bound_box;
      }
      if (!std::isfinite(h)) {
        col_hi_inf[static_cast<std::size_t>(j)] = true;
        h = opt.infinite_bound_box;
      }
      lo(j) = l / col_scale(j);
      hi(j) = h / col_scale(j);
    }
    lo.tail(m) = row_lo;
    hi.tail(m) = row_hi;
    for (Index i = 0; i < m; ++i)
      if (row_lo(i) > row_hi(i)) return finish_trivial_infeasible();
    x = VectorXd::Zero(nt);
    d = VectorXd::Zero(nt);

    // A warm basis with the same basic set as the last solve keeps its factorization.
    bool reuse = factored && static_cast<Index>(warm.status.size()) == nt &&
                 static_cast<Index>(status.size()) == nt && dse.size() == m;
    for (Index j = 0; reuse && j < nt; ++j) {
      reuse = (warm.status[static_cast<std::size_t>(j)] == VarStatus::basic) ==
              (status[static_cast<std::size_t>(j)] == VarStatus::basic);
    }
    if (reuse) {
      for (Index j = 0; j < nt; ++j)
        if (status[static_cast<std::size_t>(j)] != VarStatus::basic) status[static_cast<std::size_t>(j)] = warm.status[static_cast<std::size_t>(j)];
    } else {
      if (!load_basis(warm)) slack_basis();
    }
    for (Index j = 0; j < nt; ++j) place_nonbasic(j);
    if (!reuse) {
      if (!factor()) {
        slack_basis();
        for (Index j = 0; j < nt; ++j) place_nonbasic(j);
        factor();
      }
      dse = VectorXd::Ones(m);
    }
    compute_primal();
    compute_dual();
    if (!restore_dual_feasibility()) return finish(Status::numerical, 0);

    long iter = 0;
    int trouble = 0;
    VectorXd rho(m), col(m), tau(m), row_alpha = VectorXd::Zero(nt), flip_rhs(m);
    std::vector<Index> cand;
    std::vector<double> ratio;

    while (true) {
      if (iter >= opt.max_iterations) return finish(Status::iteration_limit, iter);
      if ((iter & 31) == 0 && std::isfinite(opt.time_limit_seconds)) {
        const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (el > opt.time_limit_seconds) return finish(Status::time_limit, iter);
      }
      if (static_cast<int>(etas.size()) >= opt.refactor_interval) {
        if (!refactor() || !restore_dual_feasibility()) return finish(Status::numerical, iter);
      }
      if (std::isfinite(opt.objective_cutoff) &&
          objective() / obj_scale > opt.objective_cutoff + 1e-9 * std::max(1.0, std::abs(opt.objective_cutoff))) {
        return finish(Status::cutoff, iter);
      }

      // Pricing: dual steepest edge over primal infeasibilities.
      Index r = -1;
      double best = 0.0;
      for (Index k = 0; k < m; ++k) {
        const Index j = head[static_cast<std::size_t>(k)];
        const double tol = opt.primal_tolerance;
        double inf = 0.0;
        if (x(j) < lo(j) - tol) inf = lo(j) - x(j);
        else if (x(j) > hi(j) + tol) inf = x(j) - hi(j);
        if (inf > 0.0) {
          const double score = inf * inf / dse(k);
          if (score > best) {
            best = score;
            r = k;
          }
        }
      }
      if (r < 0) {
        if (!etas.empty()) {
          // Confirm optimality with values recomputed from the factorization.
          compute_primal();
          compute_dual();
          if (!restore_dual_feasibility()) return finish(Status::numerical, iter);
          bool infeasible = false;
          for (Index k = 0; k < m && !infeasible; ++k) {
            const Index j = head[static_cast<std::size_t>(k)];
            infeasible = x(j) < lo(j) - opt.primal_tolerance || x(j) > hi(j) + opt.primal_tolerance;
          }
          if (infeasible) continue;
        }
        for (Index j = 0; j < n; ++j) {
          const double v = std::abs(x(j) * col_scale(j));
          if ((col_lo_inf[static_cast<std::size_t>(j)] || col_hi_inf[static_cast<std::size_t>(j)]) &&
              v >= 0.5 * opt.infinite_bound_box) {
            return finish(Status::unbounded, iter);
          }
        }
        return finish(Status::optimal, iter);
      }

      const Index leave = head[static_cast<std::size_t>(r)];
      const bool below = x(leave) < lo(leave);
      const double target = below ? lo(leave) : hi(leave);
      double slope = std::abs(x(leave) - target);

      rho.setZero();
      rho(r) = 1.0;
      btran(rho);

      cand.clear();
      row_alpha.setZero();
      for (Index i = 0; i < m; ++i) {
        const double ri = rho(i);
        if (ri == 0.0) continue;
        for (decltype(a_rows)::InnerIterator it(a_rows, i); it; ++it) row_alpha(it.col()) += ri * it.value();
        row_alpha(n + i) = -ri;
      }
      for (Index j = 0; j < nt; ++j) {
        const auto st = status[static_cast<std::size_t>(j)];
        if (st == VarStatus::basic) {
          row_alpha(j) = 0.0;
          continue;
        }
        const double alpha = row_alpha(j);
        if (lo(j) == hi(j)) continue;
        const double at = below ? -alpha : alpha;
        if ((st == VarStatus::at_lower && at > opt.pivot_tolerance) ||
            (st == VarStatus::at_upper && at < -opt.pivot_tolerance) ||
            (st == VarStatus::at_zero && std::abs(at) > opt.pivot_tolerance)) {
          cand.push_back(j);
        }
      }
      if (cand.empty()) return finish(Status::infeasible, iter);

      auto tilde = [&](Index j) { return below ? -row_alpha(j) : row_alpha(j); };
      auto ratio_of = [&](Index j) {
        const double at = tilde(j);
        const auto st = status[static_cast<std::size_t>(j)];
        if (st == VarStatus::at_zero) return 0.0;
        return std::max(0.0, d(j) / at);
      };
      std::sort(cand.begin(), cand.end(), [&](Index p, Index q) {
        const double rp = ratio_of(p), rq = ratio_of(q);
        return rp != rq ? rp < rq : p < q;
      });

      // Bound-flipping pass: boxed breakpoints are passed while the dual slope stays positive.
      std::size_t k = 0;
      std::vector<Index> flips;
      for (; k < cand.size(); ++k) {
        const Index j = cand[k];
        const double range = hi(j) - lo(j);
        const double drop = std::abs(tilde(j)) * range;
        if (std::isfinite(range) && slope - drop > 0.0 && status[static_cast<std::size_t>(j)] != VarStatus::at_zero) {
          slope -= drop;
          flips.push_back(j);
        } else {
          break;
        }
      }
      if (k == cand.size()) {
        // Every breakpoint was passed; a remaining positive slope is a dual ray.
        if (slope > opt.primal_tolerance) return finish(Status::infeasible, iter);
        flips.pop_back();
        --k;
      }

      // Harris selection among the remaining breakpoints.
      double bound_t = kInf;
      for (std::size_t i = k; i < cand.size(); ++i) {
        const Index j = cand[i];
        bound_t = std::min(bound_t, ratio_of(j) + opt.dual_tolerance / std::abs(tilde(j)));
      }
      Index enter = -1;
      double best_alpha = 0.0;
      for (std::size_t i = k; i < cand.size(); ++i) {
        const Index j = cand[i];
        if (ratio_of(j) > bound_t) break;
        if (std::abs(tilde(j)) > best_alpha) {
          best_alpha = std::abs(tilde(j));
          enter = j;
        }
      }
      if (enter < 0) enter = cand[k];

      col.setZero();
      for_column(enter, [&](Index i, double v) { col(i) = v; });
      ftran(col);
      const double alpha_r = col(r);
      if (std::abs(alpha_r) < opt.pivot_tolerance ||
          std::abs(alpha_r - row_alpha(enter)) > 1e-7 * (1.0 + std::abs(alpha_r))) {
        if (++trouble > 5) return finish(Status::numerical, iter);
        if (!refactor() || !restore_dual_feasibility()) return finish(Status::numerical, iter);
        continue;
      }
      trouble = 0;

      // Apply bound flips to the primal values.
      if (!flips.empty()) {
        flip_rhs.setZero();
        for (Index j : flips) {
          auto& st = status[static_cast<std::size_t>(j)];
          const double delta = st == VarStatus::at_lower ? hi(j) - lo(j) : lo(j) - hi(j);
          st = st == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
          x(j) += delta;
          for_column(j, [&](Index i, double v) { flip_rhs(i) += v * delta; });
        }
        ftran(flip_rhs);
        for (Index q = 0; q < m; ++q) x(head[static_cast<std::size_t>(q)]) -= flip_rhs(q);
      }

      // Dual update.
      const double theta_d = d(enter) / row_alpha(enter);
      for (Index j = 0; j < nt; ++j) {
        if (status[static_cast<std::size_t>(j)] != VarStatus::basic && row_alpha(j) != 0.0) {
          d(j) -= theta_d * row_alpha(j);
        }
      }
      d(enter) = 0.0;
      d(leave) = -theta_d;

      // Primal step.
      const double step = (x(leave) - target) / alpha_r;
      for (Index q = 0; q < m; ++q) {
        if (col(q) != 0.0) x(head[static_cast<std::size_t>(q)]) -= col(q) * step;
      }
      x(enter) += step;
      x(leave) = target;

      // Dual steepest-edge weights.
      const double w_r = rho.squaredNorm();
      tau = rho;
      ftran(tau);
      for (Index q = 0; q < m; ++q) {
        if (q == r || col(q) == 0.0) continue;
        const double ratio_q = col(q) / alpha_r;
        dse(q) = std::max(dse(q) - 2.0 * ratio_q * tau(q) + ratio_q * ratio_q * w_r, 1e-8);
      }
      dse(r) = std::max(w_r / (alpha_r * alpha_r), 1e-8);

      // Basis change.
      Eta eta;
      eta.row = r;
      eta.pivot = alpha_r;
      for (Index q = 0; q < m; ++q) {
        if (q != r && col(q) != 0.0) {
          eta.idx.push_back(q);
          eta.val.push_back(col(q));
        }
      }
      etas.push_back(std::move(eta));
      head[static_cast<std::size_t>(r)] = enter;
      pos[static_cast<std::size_t>(enter)] = r;
      pos[static_cast<std::size_t>(leave)] = -1;
      status[static_cast<std::size_t>(enter)] = VarStatus::basic;
      status[static_cast<std::size_t>(leave)] = below ? VarStatus::at_lower : VarStatus::at_upper;
      if (lo(leave) == hi(leave)) status[static_cast<std::size_t>(leave)] = VarStatus::at_lower;
      ++iter;
    }
  }

  Solution finish_trivial_infeasible() const {
    Solution sol;
    sol.status = Status::infeasible;
    sol.x = VectorXd::Zero(n);
    sol.row_activity = VectorXd::Zero(m);
    sol.reduced_costs = VectorXd::Zero(n);
    return sol;
  }
};

DualSimplex::DualSimplex(const Problem& problem) : impl_(std::make_unique<Impl>(problem)) {}
DualSimplex::~DualSimplex() = default;

Solution DualSimplex::solve(const Eigen::VectorXd& col_lower, const Eigen::VectorXd& col_upper,
                            const Basis& warm, const Options& options) {
  if (col_lower.size() != impl_->n || col_upper.size() != impl_->n) {
    throw InputError("bound vectors do not match LP column count");
  }
  return impl_->run(col_lower, col_upper, warm, options);
}

Solution DualSimplex::solve(const Options& options) {
  return solve(impl_->original->col_lower, impl_->original->col_upper, Basis{}, options);
}

Solution solve(const Problem& problem, const Options& options) {
  DualSimplex s(problem);
  return s.solve(options);
}

}  // namespace pvint::lp
