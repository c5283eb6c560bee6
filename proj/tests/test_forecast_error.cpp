#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles/monte_carlo.hpp"
#include "pvint/error.hpp"
#include "pvint/forecast_error.hpp"

using namespace pvint;

namespace {

CapacityAllocation alloc_of(const Eigen::VectorXd& c) {
  return allocate_capacity(c.sum(), c / c.sum());
}

/// Random correlation matrix from a few positive and negative factor loadings.
Eigen::MatrixXd random_rho(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.7, 0.9);
  Eigen::MatrixXd f(n, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k) f(i, k) = u(rng);
  Eigen::MatrixXd cov = f * f.transpose();
  for (int i = 0; i < n; ++i) cov(i, i) += 0.3;
  const Eigen::VectorXd d = cov.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd rho = d.asDiagonal() * cov * d.asDiagonal();
  rho.diagonal().setOnes();
  return rho;
}

}  // namespace

TEST_CASE("capacity allocation") {
  const auto eq = allocate_capacity(100000.0, Eigen::VectorXd::Constant(47, 1.0 / 47.0));
  CHECK(eq.capacities(0) == doctest::Approx(100000.0 / 47.0));
  CHECK(eq.capacities.sum() == doctest::Approx(100000.0).epsilon(1e-12));
  Eigen::VectorXd one = Eigen::VectorXd::Zero(4);
  one(2) = 1.0;
  const auto single = allocate_capacity(33000.0, one);
  CHECK(single.capacities(2) == 33000.0);
  CHECK(single.capacities.sum() == 33000.0);
  Eigen::VectorXd bad(2);
  bad << 1.2, -0.2;
  CHECK_THROWS_AS((void)allocate_capacity(1.0, bad), InputError);
  CHECK_THROWS_AS((void)allocate_capacity(1.0, Eigen::VectorXd::Zero(3)), InputError);
  CHECK_THROWS_AS((void)allocate_capacity(1.0, Eigen::VectorXd::Constant(3, 0.3)), InputError);
}

TEST_CASE("uncorrelated system error") {
  CHECK(sigma_uncorrelated(alloc_of(Eigen::VectorXd::Constant(1, 10.0)), Eigen::VectorXd::Constant(1, 0.1)) ==
        doctest::Approx(1.0));
  Eigen::VectorXd c(2);
  c << 3, 4;
  CHECK(sigma_uncorrelated(alloc_of(c), Eigen::VectorXd::Ones(2)) == doctest::Approx(5.0));
  for (int n : {4, 16, 64}) {
    const auto a = alloc_of(Eigen::VectorXd::Constant(n, 2.0));
    CHECK(sigma_uncorrelated(a, Eigen::VectorXd::Constant(n, 0.3)) == doctest::Approx(std::sqrt(n) * 0.6));
  }
  CHECK_THROWS_AS((void)sigma_uncorrelated(alloc_of(c), Eigen::VectorXd::Ones(3)), InputError);
}

TEST_CASE("correlated system error closed forms") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd c(5), s(5);
    for (int i = 0; i < 5; ++i) {
      c(i) = u(rng) * 100.0;
      s(i) = u(rng) * 0.05;
    }
    const auto a = alloc_of(c);
    const double ind = sigma_correlated(a, s, Eigen::MatrixXd::Identity(5, 5));
    CHECK(std::abs(ind - sigma_uncorrelated(a, s)) <= 1e-12 * ind);
    const double full = sigma_correlated(a, s, Eigen::MatrixXd::Ones(5, 5));
    const double linear = a.capacities.dot(s);
    CHECK(std::abs(full - linear) <= 1e-12 * linear);
  }
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS((void)sigma_correlated(alloc_of(Eigen::VectorXd::Ones(2)), Eigen::VectorXd::Ones(2), asym),
                  InputError);
}

TEST_CASE("correlated system error matches Monte Carlo sampling") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd c(5), s(5);
    for (int i = 0; i < 5; ++i) {
      c(i) = u(rng) * 100.0;
      s(i) = u(rng) * 0.05;
    }
    const Eigen::MatrixXd rho = random_rho(5, rng);
    const auto a = alloc_of(c);
    const double exact = sigma_correlated(a, s, rho);
    const double sampled = oracle::weighted_sum_std(a.capacities, s, rho, 200000, 100U + trial);
    CHECK(sampled == doctest::Approx(exact).epsilon(0.01));
    const double lib_mc = sigma_monte_carlo(a, s, rho, 200000, 7);
    CHECK(lib_mc == doctest::Approx(exact).epsilon(0.01));
  }
}

TEST_CASE("monotone in every correlation and scale equivariant") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd c(4), s(4);
    for (int i = 0; i < 4; ++i) {
      c(i) = u(rng);
      s(i) = u(rng);
    }
    Eigen::MatrixXd rho = random_rho(4, rng);
    const auto a = alloc_of(c);
    const double base = sigma_correlated(a, s, rho);
    rho(2, 1) += 0.05;
    rho(1, 2) += 0.05;
    CHECK(sigma_correlated(a, s, rho) >= base);

    const auto scaled = allocate_capacity(3.0 * a.total_capacity, a.demand_shares);
    CHECK(sigma_correlated(scaled, s, rho) == doctest::Approx(3.0 * sigma_correlated(a, s, rho)));
    CHECK(sigma_uncorrelated(scaled, s) == doctest::Approx(3.0 * sigma_uncorrelated(a, s)));
  }
}

TEST_CASE("non-negative correlation never lowers the system error") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(6, 1.0) + Eigen::VectorXd::Random(6).cwiseAbs();
    Eigen::VectorXd s = Eigen::VectorXd::Constant(6, 0.1);
    Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < i; ++j) rho(i, j) = rho(j, i) = 0.5 * u(rng);
    const auto a = alloc_of(c);
    CHECK(sigma_correlated(a, s, rho) >= sigma_uncorrelated(a, s));
  }
}

TEST_CASE("estimate from a panel") {
  SynthConfig cfg;
  cfg.n_sites = 8;
  cfg.n_samples = 420;
  cfg.common_factor_loading = 0.6;
  cfg.seed = 3;
  const auto series = as_fluctuation(synth_panel(cfg));
  const auto decomp = eigen_decompose(correlation_matrix(series), series.length());
  const auto split = split_correlation(decomp, count_genuine(decomp));
  const auto alloc = allocate_capacity(8000.0, Eigen::VectorXd::Constant(8, 0.125));
  const auto est = estimate(series, split, alloc, 2000.0);
  CHECK(est.cv_correlated == est.sigma_system_correlated / 2000.0);
  CHECK(est.cv_uncorrelated == est.sigma_system_uncorrelated / 2000.0);
  CHECK(est.cv_correlated > est.cv_uncorrelated);
  CHECK(est.rho.diagonal().isOnes());

  const auto none = split_correlation(decomp, 0);
  const auto flat = estimate(series, none, alloc, 2000.0);
  CHECK(flat.sigma_system_correlated == doctest::Approx(flat.sigma_system_uncorrelated));

  DetrendedSeries zero = series;
  zero.values.setZero();
  const auto z = estimate(zero, split, alloc, 2000.0);
  CHECK(z.sigma_system_correlated == 0.0);
  CHECK(z.sigma_system_uncorrelated == 0.0);
  CHECK(estimate(series, split, alloc, 0.0).cv_correlated == 0.0);

  const auto wrong = allocate_capacity(1.0, Eigen::VectorXd::Constant(4, 0.25));
  CHECK_THROWS_AS((void)estimate(series, split, wrong, 1.0), InputError);
}

TEST_CASE("monthly table format") {
  std::ostringstream out;
  write_monthly_table(out, {{1, 101.26, 0.0168, 181.36, 0.0302}});
  CHECK(out.str() == "month,error_wo,cv_wo,error_w,cv_w\n1,101.26,0.0168,181.36,0.0302\n");
}
