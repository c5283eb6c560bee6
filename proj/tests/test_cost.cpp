#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles/uc_instances.hpp"
#include "pvint/cost.hpp"
#include "pvint/error.hpp"

using namespace pvint;

namespace {

uc::Instance tiny_with_pv(std::uint64_t seed) {
  uc::Instance in = oracle::tiny_instance(seed);
  for (int t = 1; t <= 4; ++t) in.scenario.pv(t) = std::max(in.scenario.pv(t), 1.0);
  in.ladder.elasticity = 0.0;
  return in;
}

}  // namespace

TEST_CASE("integration cost arithmetic") {
  const Eigen::VectorXd pv = Eigen::VectorXd::Constant(20, 1000.0);
  const auto r = cost::integration_cost(5e6 + 1e6, 5e6, pv, 0.5, 30.0);
  CHECK(r.pv_energy == doctest::Approx(1e4));
  CHECK(r.epsilon == doctest::Approx(0.1));
  CHECK(r.cv == doctest::Approx(0.03));
  CHECK(cost::integration_cost(7.0, 7.0, pv, 0.5).epsilon == 0.0);
  CHECK_THROWS_AS((void)cost::integration_cost(1.0, 0.0, Eigen::VectorXd::Zero(4), 0.5), InputError);
}

TEST_CASE("sigma_p profile follows PV hours") {
  const uc::Instance in = tiny_with_pv(3);
  const uc::Instance s = cost::with_sigma_p(in, 2.5);
  for (int t = 0; t < in.horizon(); ++t) CHECK(s.scenario.sigma_p(t) == (in.scenario.pv(t) > 0 ? 2.5 : 0.0));
  CHECK_THROWS_AS((void)cost::with_sigma_p(in, -1.0), InputError);
}

TEST_CASE("paired runs reject mismatched scenarios") {
  const uc::Instance base = tiny_with_pv(3);
  const uc::Instance with = cost::with_sigma_p(base, 1.0);
  const uc::Schedule s0 = uc::solve(uc::build_model(base));
  const uc::Schedule s1 = uc::solve(uc::build_model(with));
  REQUIRE(s0.status == uc::SolveStatus::optimal);
  REQUIRE(s1.status == uc::SolveStatus::optimal);
  const auto r = cost::integration_cost(s1, with, s0, base);
  CHECK(r.epsilon >= 0.0);
  CHECK(cost::integration_cost(s0, base, s0, base).epsilon == 0.0);

  uc::Instance other = base;
  other.scenario.demand(0) += 1.0;
  CHECK_THROWS_AS((void)cost::integration_cost(s1, with, s0, other), InputError);
  CHECK_THROWS_AS((void)cost::integration_cost(s0, base, s1, with), InputError);
}

TEST_CASE("sweep grid validation") {
  const uc::Instance in = tiny_with_pv(3);
  CHECK_THROWS_AS((void)cost::sweep(in, {}), InputError);
  CHECK_THROWS_AS((void)cost::sweep(in, {0.5, 1.0}), InputError);
  CHECK_THROWS_AS((void)cost::sweep(in, {0.0, 1.0, 1.0}), InputError);
  uc::Instance dark = in;
  dark.scenario.pv.setZero();
  CHECK_THROWS_AS((void)cost::sweep(dark, {0.0}), InputError);

  const auto single = cost::sweep(in, {0.0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].epsilon == 0.0);
}

TEST_CASE("sweep is monotone and starts at zero") {
  for (std::uint64_t seed : {1, 3, 5, 6}) {
    const uc::Instance in = tiny_with_pv(seed);
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
    const auto res = cost::sweep(in, grid);
    REQUIRE(res.size() == grid.size());
    if (!res[0].feasible) continue;
    CHECK(res[0].epsilon == 0.0);
    double last = 0.0;
    for (std::size_t k = 0; k < res.size(); ++k) {
      CHECK(res[k].sigma_p == grid[k]);
      if (!res[k].feasible) {
        CHECK(std::isnan(res[k].epsilon));
        continue;
      }
      CHECK(res[k].epsilon >= last - 1e-9);
      last = res[k].epsilon;
    }
    cost::SweepOptions threaded;
    threaded.threads = 3;
    const auto again = cost::sweep(in, grid, threaded);
    for (std::size_t k = 0; k < res.size(); ++k)
      if (res[k].feasible) CHECK(again[k].epsilon == doctest::Approx(res[k].epsilon).epsilon(1e-9));
  }
}

TEST_CASE("uniform price shift leaves epsilon unchanged") {
  const uc::Instance in = tiny_with_pv(5);
  uc::Instance shifted = in;
  for (auto& r : shifted.ladder.levels) r += 7.0;
  shifted.ladder.mean_price += 7.0;
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const auto a = cost::sweep(in, grid);
  const auto b = cost::sweep(shifted, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    REQUIRE(a[k].feasible == b[k].feasible);
    if (a[k].feasible) CHECK(a[k].epsilon == doctest::Approx(b[k].epsilon).epsilon(1e-9));
  }
}

TEST_CASE("sweep csv marks skipped points") {
  cost::IntegrationCostResult ok;
  ok.sigma_p = 0;
  ok.cost_with_error = ok.cost_without_error = 10;
  cost::IntegrationCostResult bad;
  bad.sigma_p = 5;
  bad.cv = 0.5;
  bad.cost_with_error = bad.epsilon = std::nan("");
  bad.cost_without_error = 10;
  bad.feasible = false;
  bad.status = uc::SolveStatus::infeasible;
  std::ostringstream out;
  cost::write_sweep(out, {ok, bad});
  CHECK(out.str() ==
        "sigma_p,cv,cost_with,cost_without,epsilon,status\n0,0,10,10,0,optimal\n5,0.5,,10,,infeasible\n");
}
