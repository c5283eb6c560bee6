#include <Eigen/SparseCore>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "pvint/lp.hpp"
#include "pvint/milp.hpp"

using pvint::lp::kInf;

namespace {

pvint::lp::Problem make(const Eigen::MatrixXd& a, std::vector<double> c, std::vector<double> cl,
                        std::vector<double> cu, std::vector<double> rl, std::vector<double> ru) {
  pvint::lp::Problem p;
  p.a = a.sparseView();
  p.cost = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  p.col_lower = Eigen::Map<Eigen::VectorXd>(cl.data(), static_cast<Eigen::Index>(cl.size()));
  p.col_upper = Eigen::Map<Eigen::VectorXd>(cu.data(), static_cast<Eigen::Index>(cu.size()));
  p.row_lower = Eigen::Map<Eigen::VectorXd>(rl.data(), static_cast<Eigen::Index>(rl.size()));
  p.row_upper = Eigen::Map<Eigen::VectorXd>(ru.data(), static_cast<Eigen::Index>(ru.size()));
  return p;
}

// Exhaustive vertex enumeration for tiny LPs in inequality form: every
// combination of n active constraints among rows and bounds.
double brute_lp(const pvint::lp::Problem& p, bool& feasible) {
  const Eigen::Index n = p.cols(), m = p.rows();
  Eigen::MatrixXd a = Eigen::MatrixXd(p.a);
  std::vector<Eigen::RowVectorXd> g;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::isfinite(p.row_lower(i))) { g.push_back(a.row(i)); rhs.push_back(p.row_lower(i)); }
    if (std::isfinite(p.row_upper(i))) { g.push_back(a.row(i)); rhs.push_back(p.row_upper(i)); }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1.0;
    if (std::isfinite(p.col_lower(j))) { g.push_back(e); rhs.push_back(p.col_lower(j)); }
    if (std::isfinite(p.col_upper(j))) { g.push_back(e); rhs.push_back(p.col_upper(j)); }
  }
  const std::size_t k = g.size();
  double best = kInf;
  feasible = false;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == static_cast<std::size_t>(n)) {
      Eigen::MatrixXd s(n, n);
      Eigen::VectorXd b(n);
      for (Eigen::Index r = 0; r < n; ++r) {
        s.row(r) = g[pick[static_cast<std::size_t>(r)]];
        b(r) = rhs[pick[static_cast<std::size_t>(r)]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      const Eigen::VectorXd ax = a * x;
      for (Eigen::Index i = 0; i < m; ++i)
        if (ax(i) < p.row_lower(i) - 1e-9 || ax(i) > p.row_upper(i) + 1e-9) return;
      for (Eigen::Index j = 0; j < n; ++j)
        if (x(j) < p.col_lower(j) - 1e-9 || x(j) > p.col_upper(j) + 1e-9) return;
      feasible = true;
      best = std::min(best, p.cost.dot(x));
      return;
    }
    for (std::size_t i = start; i < k; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("small LP with known optimum") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 3;
  auto p = make(a, {-3, -2}, {0, 0}, {3, kInf}, {-kInf, -kInf}, {4, 6});
  auto s = pvint::lp::solve(p);
  REQUIRE(s.status == pvint::lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(-11.0));
  CHECK(s.x(0) == doctest::Approx(3.0));
  CHECK(s.x(1) == doctest::Approx(1.0));
}

TEST_CASE("equality rows and free columns") {
  Eigen::MatrixXd a(2, 3);
  a << 1, 1, 1, 1, -1, 0;
  auto p = make(a, {1, 2, 3}, {-kInf, 0, 0}, {kInf, kInf, kInf}, {10, 2}, {10, 2});
  auto s = pvint::lp::solve(p);
  REQUIRE(s.status == pvint::lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(14.0));
}

TEST_CASE("infeasible and unbounded LPs are reported") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  auto inf = make(a, {1}, {0}, {kInf}, {5, -kInf}, {kInf, 3});
  CHECK(pvint::lp::solve(inf).status == pvint::lp::Status::infeasible);
  Eigen::MatrixXd b(1, 2);
  b << 1, -1;
  auto unb = make(b, {-1, 0}, {0, 0}, {kInf, kInf}, {-kInf}, {1});
  CHECK(pvint::lp::solve(unb).status == pvint::lp::Status::unbounded);
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const int n = 2 + trial % 3, m = 3;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = std::round(u(rng) * 2) / 2;
    std::vector<double> c(n), cl(n), cu(n), rl(m), ru(m);
    for (int j = 0; j < n; ++j) {
      c[j] = std::round(u(rng));
      cl[j] = std::round(u(rng)) - 1;
      cu[j] = cl[j] + 1 + std::abs(std::round(u(rng)));
    }
    for (int i = 0; i < m; ++i) {
      rl[i] = std::round(u(rng)) - 4;
      ru[i] = (trial % 3 == 0) ? rl[i] : rl[i] + 2 + std::abs(std::round(u(rng)));
    }
    auto p = make(a, c, cl, cu, rl, ru);
    bool feasible = false;
    const double ref = brute_lp(p, feasible);
    auto s = pvint::lp::solve(p);
    if (!feasible) {
      CHECK(s.status == pvint::lp::Status::infeasible);
    } else {
      REQUIRE(s.status == pvint::lp::Status::optimal);
      CHECK(s.objective == doctest::Approx(ref).epsilon(1e-7));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("warm start after bound change reproduces a cold solve") {
  Eigen::MatrixXd a(3, 4);
  a << 1, 2, 0, 1, 0, 1, 1, 1, 2, 0, 1, 0;
  auto p = make(a, {-1, -2, -1, -3}, {0, 0, 0, 0}, {4, 4, 4, 4}, {-kInf, -kInf, -kInf}, {8, 6, 5});
  pvint::lp::DualSimplex solver(p);
  auto first = solver.solve();
  REQUIRE(first.status == pvint::lp::Status::optimal);
  Eigen::VectorXd hi = p.col_upper;
  hi(3) = 1.0;
  auto warm = solver.solve(p.col_lower, hi, first.basis);
  auto p2 = p;
  p2.col_upper = hi;
  auto cold = pvint::lp::solve(p2);
  REQUIRE(warm.status == pvint::lp::Status::optimal);
  CHECK(warm.objective == doctest::Approx(cold.objective));
}

TEST_CASE("knapsack MILP matches enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> w(1, 20);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10;
    Eigen::MatrixXd a(1, n);
    std::vector<double> c(n), lo(n, 0.0), hi(n, 1.0);
    for (int j = 0; j < n; ++j) {
      a(0, j) = w(rng);
      c[j] = -w(rng);
    }
    const double cap = a.sum() / 2.0;
    pvint::milp::Problem mp{make(a, c, lo, hi, {-kInf}, {cap}), std::vector<bool>(n, true)};
    auto r = pvint::milp::solve(mp);
    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double wt = 0.0, val = 0.0;
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1) { wt += a(0, j); val += c[j]; }
      if (wt <= cap) best = std::min(best, val);
    }
    REQUIRE(r.status == pvint::milp::Status::optimal);
    CHECK(r.objective == doctest::Approx(best));
    CHECK(pvint::milp::max_violation(mp, r.x) < 1e-6);
  }
}
