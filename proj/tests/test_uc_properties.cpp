#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles/uc_instances.hpp"
#include "pvint/error.hpp"
#include "pvint/fleet.hpp"
#include "pvint/timeseries.hpp"
#include "pvint/unitcommit.hpp"

using namespace pvint;
using namespace pvint::uc;

namespace {

Instance single_plant(int horizon, double demand) {
  Instance in;
  ThermalPlant p;
  p.id = "G1";
  p.type = "Coal";
  p.p_min = 10;
  p.p_max = 100;
  p.ramp_up = 100;
  p.ramp_down = 100;
  p.start_cost = 5000;
  p.fuel_cost = 10;
  in.plants.push_back(p);
  auto& sc = in.scenario;
  sc.horizon = horizon;
  sc.step_hours = 0.5;
  sc.demand = Eigen::VectorXd::Constant(horizon, demand);
  sc.wind = sc.pv = sc.sigma_d = sc.sigma_w = sc.sigma_p = Eigen::VectorXd::Zero(horizon);
  return in;
}

bool has_family(const std::vector<Violation>& v, const std::string& family, int i, int t) {
  for (const auto& x : v)
    if (x.family == family && x.i == i && x.t == t) return true;
  return false;
}

}  // namespace

TEST_CASE("demand response pricing") {
  Scenario sc;
  sc.horizon = 48;
  sc.step_hours = 0.5;
  sc.demand = Eigen::VectorXd::Constant(48, 1000.0);
  DemandResponseLadder flat;
  CHECK(revenue(sc, flat, Eigen::MatrixXd::Ones(1, 48)) == doctest::Approx(720e6));
  Scenario zero = sc;
  zero.demand.setZero();
  CHECK(revenue(zero, flat, Eigen::MatrixXd::Ones(1, 48)) == 0.0);

  DemandResponseLadder dr;
  dr.levels = {20.0, 30.0, 40.0};
  dr.elasticity = -0.1;
  CHECK(dr.multiplier(2) == doctest::Approx(0.97164).epsilon(1e-5));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 48);
  w.row(1).setOnes();
  CHECK((effective_demand(sc, dr, w) - sc.demand).cwiseAbs().maxCoeff() < 1e-12);
  dr.elasticity = 0.0;
  w.setZero();
  w.row(2).setOnes();
  CHECK(effective_demand(sc, dr, w) == sc.demand);

  Scenario one = sc;
  one.horizon = 1;
  one.demand = Eigen::VectorXd::Constant(1, 10.0);
  Eigen::MatrixXd lo = Eigen::MatrixXd::Zero(3, 1), hi = lo;
  lo(0, 0) = 1;
  hi(2, 0) = 1;
  CHECK(revenue(one, dr, hi) == 2.0 * revenue(one, dr, lo));
}

TEST_CASE("required reserve") {
  Scenario sc;
  sc.horizon = 2;
  sc.sigma_d = Eigen::Vector2d(0, 3);
  sc.sigma_w = Eigen::Vector2d(0, 4);
  sc.sigma_p = Eigen::Vector2d(0, 0);
  sc.alpha_quantile = 1.0;
  const auto r = required_reserve(sc);
  CHECK(r(0) == 0.0);
  CHECK(r(1) == doctest::Approx(5.0));
  CHECK(normal_quantile(0.9) == doctest::Approx(1.2816).epsilon(1e-3 / 1.2816));
  CHECK(Scenario{}.alpha_quantile == doctest::Approx(normal_quantile(0.9)).epsilon(1e-14));
}

TEST_CASE("model shapes") {
  Instance one = single_plant(1, 50);
  one.plants[0].start_cost = 0;
  const Model minimal = build_model(one);
  CHECK(minimal.n_binary() == 1);
  CHECK(minimal.n_continuous() == 1);

  const Instance full = full_size_instance(0.0, 0.0, 1);
  const Model m = build_model(full);
  CHECK(full.n_plants() == 91);
  CHECK(full.ladder.size() == 20);
  int z_count = 0;
  for (const auto& p : full.plants) z_count += p.start_cost > 0 ? 48 : 0;
  CHECK(m.n_binary() == 91 * 48 + z_count + 20 * 48 + 48);
}

TEST_CASE("single plant closed form") {
  const Instance in = single_plant(4, 50);
  const Schedule s = solve(build_model(in));
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.u.isOnes());
  CHECK((s.p.array() - 50.0).abs().maxCoeff() < 1e-7);
  const double expected = 50.0 * 30.0 * 0.5 * 4 * 1000.0 - 10.0 * 50.0 * 0.5 * 4 - 5000.0;
  CHECK(s.objective == doctest::Approx(expected).epsilon(1e-9));
  CHECK(objective_value(s, in) == doctest::Approx(expected).epsilon(1e-9));

  Schedule off = Schedule::zeros(in);
  Instance empty = in;
  empty.scenario.demand.setZero();
  off.w.setOnes();
  CHECK(objective_value(off, empty) == 0.0);
}

TEST_CASE("cycling a unit costs at least its start-up") {
  const Instance in = single_plant(4, 50);
  Schedule s = solve(build_model(in));
  REQUIRE(s.status == SolveStatus::optimal);
  Instance slack = in;
  slack.plants[0].p_min = 0;
  Schedule cyc = s;
  cyc.u(0, 2) = 0;
  cyc.p(0, 2) = 0;
  cyc.z(0, 3) = 1;
  const double before = objective_value(s, slack);
  CHECK(before - objective_value(cyc, slack) >= in.plants[0].start_cost - 10.0 * 50.0 * 0.5);
  CHECK(operation_cost(cyc, slack) - operation_cost(s, slack) ==
        doctest::Approx(in.plants[0].start_cost - 10.0 * 50.0 * 0.5));
}

TEST_CASE("infeasible instance is reported") {
  Instance in = single_plant(3, 500);
  const Model m = build_model(in);
  CHECK_FALSE(m.warnings.empty());
  CHECK(solve(m).status == SolveStatus::infeasible);
  SolveOptions h;
  h.mode = SolveMode::heuristic;
  CHECK(solve(m, h).status == SolveStatus::infeasible);
}

TEST_CASE("validator flags hand-built counterexamples") {
  Instance in = single_plant(6, 50);
  in.plants[0].min_up = 3;
  Schedule s = solve(build_model(in));
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(validate_schedule(s, in).empty());

  Schedule over = s;
  over.p(0, 2) = 120;
  const auto v = validate_schedule(over, in);
  CHECK(has_family(v, "CAPACITY", 0, 2));

  Instance zero_demand = in;
  zero_demand.scenario.demand.setZero();
  Schedule brief = Schedule::zeros(in);
  brief.w.setOnes();
  brief.u(0, 1) = 1;
  brief.z(0, 1) = 1;
  brief.p(0, 1) = 10;
  const auto mu = validate_schedule(brief, zero_demand);
  CHECK(has_family(mu, "MIN_UP", 0, 2));
  CHECK(has_family(mu, "MIN_UP", 0, 3));
  // The window s in [t - min_up, t - 1] keeps the unit on through t = 1 + min_up.
  CHECK(has_family(mu, "MIN_UP", 0, 4));
  CHECK_FALSE(has_family(mu, "MIN_UP", 0, 5));
}

TEST_CASE("solver output satisfies the structural invariants") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance in = oracle::tiny_instance(seed);
    const Model m = build_model(in);
    const Schedule exact = solve(m);
    if (exact.status == SolveStatus::infeasible) continue;
    REQUIRE(exact.status == SolveStatus::optimal);
    CHECK(validate_schedule(exact, in).empty());
    const int nt = in.horizon();
    for (int t = 0; t < nt; ++t) CHECK(exact.w.col(t).sum() == 1.0);
    for (int i = 0; i < in.n_plants(); ++i)
      for (int t = 0; t < nt; ++t) {
        const double prev = t > 0 ? exact.u(i, t - 1) : (in.plants[i].initial_on ? 1.0 : 0.0);
        CHECK(exact.z(i, t) == std::max(0.0, exact.u(i, t) - prev));
        if (exact.u(i, t) == 0.0) CHECK(exact.p(i, t) == 0.0);
      }
    const auto d = effective_demand(in.scenario, in.ladder, exact.w);
    CHECK(std::abs(d.sum() - in.scenario.demand.sum()) <= 1e-6 * in.scenario.demand.sum());

    SolveOptions h;
    h.mode = SolveMode::heuristic;
    const Schedule heur = solve(m, h);
    if (heur.status == SolveStatus::optimal || heur.status == SolveStatus::feasible) {
      CHECK(validate_schedule(heur, in).empty());
      CHECK(exact.objective >= heur.objective - 1e-6 * std::abs(exact.objective));
    }
  }
}

TEST_CASE("objective is non-increasing in sigma_p") {
  Instance in = oracle::tiny_instance(4);
  double last = INFINITY;
  for (double sp : {0.0, 0.5, 1.0, 2.0}) {
    for (int t = 0; t < in.horizon(); ++t) in.scenario.sigma_p(t) = in.scenario.pv(t) > 0 ? sp : 0.0;
    const Schedule s = solve(build_model(in));
    if (s.status == SolveStatus::infeasible) {
      last = -INFINITY;
      continue;
    }
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective <= last + 1e-6 * std::abs(s.objective));
    last = s.objective;
  }
}

TEST_CASE("instance file round trip") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Instance in = oracle::tiny_instance(seed);
    std::stringstream a;
    write_instance(a, in);
    const Instance back = read_instance(a);
    std::stringstream b;
    write_instance(b, back);
    CHECK(a.str() == b.str());
    CHECK(back.scenario.demand == in.scenario.demand);
    CHECK(back.ladder.levels == in.ladder.levels);
    CHECK(back.plants[1].fuel_cost == in.plants[1].fuel_cost);
  }
  const Instance red = reduced_instance(40.0, -0.1, 3);
  std::stringstream r;
  write_instance(r, red);
  const Instance rb = read_instance(r);
  CHECK(rb.scenario.pv == red.scenario.pv);
  CHECK(rb.scenario.sigma_p == red.scenario.sigma_p);
  CHECK(rb.hydro.efficiency == red.hydro.efficiency);
}

TEST_CASE("instance file errors") {
  std::stringstream ok;
  write_instance(ok, single_plant(2, 50));
  const std::string text = ok.str();
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_instance(in);
  };
  CHECK_NOTHROW((void)parse(text));
  CHECK_THROWS_AS((void)parse(text + "[bogus]\n"), InputError);
  CHECK_THROWS_AS((void)parse("[scenario]\nhorizon = 2\nhorizon = 3\n"), InputError);
  CHECK_THROWS_AS((void)parse("[scenario]\nwhatever = 1\n"), InputError);
  CHECK_THROWS_AS((void)parse(""), InputError);
  std::string bad_step = text;
  const auto pos = bad_step.find("\n1,");
  REQUIRE(pos != std::string::npos);
  bad_step.replace(pos, 3, "\n7,");
  CHECK_THROWS_AS((void)parse(bad_step), InputError);
}

TEST_CASE("schedule csv layout") {
  const Instance in = single_plant(2, 50);
  const Schedule s = solve(build_model(in));
  std::ostringstream out;
  write_schedule(out, s, in);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "entity,kind,t,u,z,p_mw,h_mw,price");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  // Thermal and demand rows; no hydro unit, so no hydro rows.
  CHECK(rows == 2 * 2);

  std::ostringstream gen;
  write_stacked_generation(gen, s, in);
  CHECK(gen.str().rfind("t,baseload,Coal,wind,pv,hydro_discharge,hydro_charge,demand,reserve_required\n", 0) == 0);
}
