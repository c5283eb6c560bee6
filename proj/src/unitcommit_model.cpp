#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <string>

#include "pvint/error.hpp"
#include "pvint/unitcommit.hpp"

namespace pvint::uc {

namespace {

using Eigen::VectorXd;

class Builder {
 public:
  explicit Builder(Model& m) : m_(m) {}

  int column(const std::string& family, int i, int t, double lo, double hi, double cost, bool integer) {
    m_.columns.push_back({family, i, t});
    lo_.push_back(lo);
    hi_.push_back(hi);
    cost_.push_back(cost);
    integer_.push_back(integer);
    return static_cast<int>(m_.columns.size()) - 1;
  }

  /// Adds lo <= sum coef * x <= hi; terms on column -1 are skipped.
  void row(const std::string& family, int i, int t, std::initializer_list<std::pair<int, double>> terms,
           double lo, double hi) {
    const int r = begin_row(family, i, t, lo, hi);
    for (const auto& [c, v] : terms) add(r, c, v);
  }

  int begin_row(const std::string& family, int i, int t, double lo, double hi) {
    m_.rows.push_back({family, i, t});
    row_lo_.push_back(lo);
    row_hi_.push_back(hi);
    return static_cast<int>(m_.rows.size()) - 1;
  }

  void add(int r, int c, double v) {
    if (c >= 0 && v != 0.0) trip_.emplace_back(r, c, v);
  }

  void finish() {
    auto& lp = m_.problem.lp;
    const auto nc = static_cast<Eigen::Index>(lo_.size());
    const auto nr = static_cast<Eigen::Index>(row_lo_.size());
    lp.a.resize(nr, nc);
    lp.a.setFromTriplets(trip_.begin(), trip_.end());
    lp.a.makeCompressed();
    lp.cost = Eigen::Map<VectorXd>(cost_.data(), nc);
    lp.col_lower = Eigen::Map<VectorXd>(lo_.data(), nc);
    lp.col_upper = Eigen::Map<VectorXd>(hi_.data(), nc);
    lp.row_lower = Eigen::Map<VectorXd>(row_lo_.data(), nr);
    lp.row_upper = Eigen::Map<VectorXd>(row_hi_.data(), nr);
    m_.problem.integer = integer_;
  }

 private:
  Model& m_;
  std::vector<double> lo_, hi_, cost_, row_lo_, row_hi_;
  std::vector<bool> integer_;
  std::vector<Eigen::Triplet<double>> trip_;
};

}  // namespace

int Model::n_binary() const {
  return static_cast<int>(std::count(problem.integer.begin(), problem.integer.end(), true));
}

int Model::n_continuous() const {
  return static_cast<int>(problem.integer.size()) - n_binary();
}

Model build_model(const Instance& instance) {
  instance.validate();
  Model m;
  m.instance = instance;
  const auto& sc = instance.scenario;
  const auto& ladder = instance.ladder;
  const auto& hydro = instance.hydro;
  const int n = instance.n_plants();
  const int nt = sc.horizon;
  const int nl = static_cast<int>(ladder.size());
  const double dt = sc.step_hours;
  constexpr double inf = lp::kInf;
  Builder b(m);

  m.u.assign(static_cast<std::size_t>(n * nt), -1);
  m.z = m.u;
  m.p = m.u;
  for (int i = 0; i < n; ++i) {
    const auto& pl = instance.plants[static_cast<std::size_t>(i)];
    for (int t = 0; t < nt; ++t) m.u[i * nt + t] = b.column("u", i, t, 0.0, 1.0, 0.0, true);
    // Start-up indicators only matter when they carry a cost.
    if (pl.start_cost > 0.0)
      for (int t = 0; t < nt; ++t) m.z[i * nt + t] = b.column("z", i, t, 0.0, 1.0, pl.start_cost, true);
    for (int t = 0; t < nt; ++t)
      m.p[i * nt + t] = b.column("p", i, t, 0.0, pl.p_max, pl.fuel_cost * dt, false);
  }
  m.w.assign(static_cast<std::size_t>(nl * nt), -1);
  for (int l = 0; l < nl; ++l) {
    const double unit = ladder.levels[static_cast<std::size_t>(l)] * ladder.multiplier(static_cast<std::size_t>(l));
    for (int t = 0; t < nt; ++t)
      m.w[l * nt + t] = b.column("w", l, t, 0.0, 1.0, -sc.demand(t) * unit * dt * kKwhPerMwh, true);
  }
  if (!ladder.present()) {
    m.objective_offset = sc.demand.sum() * ladder.mean_price * dt * kKwhPerMwh;
  }
  m.v.assign(static_cast<std::size_t>(nt), -1);
  m.g = m.v;
  m.h = m.v;
  if (hydro.present()) {
    for (int t = 0; t < nt; ++t) m.v[t] = b.column("v", -1, t, 0.0, 1.0, 0.0, true);
    for (int t = 0; t < nt; ++t) m.g[t] = b.column("g", -1, t, 0.0, hydro.c_max, 0.0, false);
    for (int t = 0; t < nt; ++t) m.h[t] = b.column("h", -1, t, 0.0, hydro.c_max, 0.0, false);
  }

  // Price selection, mean price and demand conservation.
  if (ladder.present()) {
    for (int t = 0; t < nt; ++t) {
      const int r = b.begin_row("W_ONE", -1, t, 1.0, 1.0);
      for (int l = 0; l < nl; ++l) b.add(r, m.w[l * nt + t], 1.0);
    }
    const int rp = b.begin_row("MEAN_PRICE", -1, -1, -inf, ladder.mean_price);
    for (int l = 0; l < nl; ++l)
      for (int t = 0; t < nt; ++t) b.add(rp, m.w[l * nt + t], ladder.levels[static_cast<std::size_t>(l)] / nt);
    if (ladder.elasticity != 0.0) {
      const double total = sc.demand.sum();
      const double slack = sc.conservation_tol * total;
      const int rc = b.begin_row("DR_CONSERVE", -1, -1, total - slack, total + slack);
      for (int l = 0; l < nl; ++l)
        for (int t = 0; t < nt; ++t)
          b.add(rc, m.w[l * nt + t], sc.demand(t) * ladder.multiplier(static_cast<std::size_t>(l)));
    }
  }

  // Chance-constrained balance: supply - effective demand >= quantile * combined sigma.
  const VectorXd reserve = required_reserve(sc);
  // With zero elasticity every level leaves demand unchanged, so d~ = d is a constant.
  const bool demand_fixed = !ladder.present() || ladder.elasticity == 0.0;
  for (int t = 0; t < nt; ++t) {
    double rhs = reserve(t) - sc.wind(t) - sc.pv(t) - sc.baseload;
    if (demand_fixed) rhs += sc.demand(t);
    const int r = b.begin_row("BALANCE", -1, t, rhs, inf);
    for (int i = 0; i < n; ++i) b.add(r, m.p[i * nt + t], 1.0);
    for (int l = 0; l < nl && !demand_fixed; ++l)
      b.add(r, m.w[l * nt + t], -sc.demand(t) * ladder.multiplier(static_cast<std::size_t>(l)));
    b.add(r, m.g[t], 1.0);
    b.add(r, m.h[t], -1.0);
  }

  if (hydro.present()) {
    for (int t = 0; t < nt; ++t) {
      b.row("HYDRO_G_MIN", -1, t, {{m.g[t], 1.0}, {m.v[t], -hydro.c_min}}, 0.0, inf);
      b.row("HYDRO_G_MAX", -1, t, {{m.g[t], 1.0}, {m.v[t], -hydro.c_max}}, -inf, 0.0);
      b.row("HYDRO_H_MIN", -1, t, {{m.h[t], 1.0}, {m.v[t], hydro.c_min}}, hydro.c_min, inf);
      b.row("HYDRO_H_MAX", -1, t, {{m.h[t], 1.0}, {m.v[t], hydro.c_max}}, -inf, hydro.c_max);
    }
    for (int t = 0; t < nt; ++t) {
      const int r = b.begin_row("STORAGE", -1, t, hydro.r_min - hydro.initial_storage,
                                hydro.r_max - hydro.initial_storage);
      for (int s = 0; s <= t; ++s) {
        b.add(r, m.h[s], hydro.efficiency * dt);
        b.add(r, m.g[s], -dt);
      }
    }
    if (sc.enforce_end_storage) {
      const int r = b.begin_row("END_STORAGE", -1, -1, 0.0, 0.0);
      for (int s = 0; s < nt; ++s) {
        b.add(r, m.h[s], hydro.efficiency * dt);
        b.add(r, m.g[s], -dt);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto& pl = instance.plants[static_cast<std::size_t>(i)];
    const double u0 = pl.initial_on ? 1.0 : 0.0;
    auto U = [&](int t) { return m.u[i * nt + t]; };
    auto P = [&](int t) { return m.p[i * nt + t]; };
    for (int t = 0; t < nt; ++t) {
      b.row("CAPACITY_MIN", i, t, {{P(t), 1.0}, {U(t), -pl.p_min}}, 0.0, inf);
      b.row("CAPACITY_MAX", i, t, {{P(t), 1.0}, {U(t), -pl.p_max}}, -inf, 0.0);
    }
    // Ramp rows that the capacity bounds already imply are left out.
    const bool up_binds = std::min(pl.ramp_up, pl.p_min) < pl.p_max;
    const bool down_binds = pl.ramp_down < pl.p_max;
    if (sc.enforce_initial_ramp && nt > 0) {
      const double cap = pl.initial_output + (pl.initial_on ? pl.ramp_up : pl.p_min);
      if (cap < pl.p_max) b.row("RAMP_UP", i, 0, {{P(0), 1.0}}, -inf, cap);
      if (pl.initial_output - std::min(pl.ramp_down, pl.p_max) > 0.0)
        b.row("RAMP_DOWN", i, 0, {{P(0), 1.0}, {U(0), -(pl.p_max - pl.ramp_down)}}, pl.initial_output - pl.p_max,
              inf);
    }
    for (int t = 1; t < nt; ++t) {
      if (up_binds)
        b.row("RAMP_UP", i, t, {{P(t), 1.0}, {P(t - 1), -1.0}, {U(t - 1), pl.p_min - pl.ramp_up}}, -inf, pl.p_min);
      if (down_binds)
        b.row("RAMP_DOWN", i, t, {{P(t), 1.0}, {P(t - 1), -1.0}, {U(t), -(pl.p_max - pl.ramp_down)}}, -pl.p_max,
              inf);
    }
    for (int t = 0; t < nt; ++t) {
      for (int s = std::max(0, t - pl.min_up); s <= t - 1; ++s) {
        if (s == 0) {
          if (u0 == 0.0) b.row("MIN_UP", i, t, {{U(t), 1.0}, {U(0), -1.0}}, 0.0, inf);
        } else {
          b.row("MIN_UP", i, t, {{U(t), 1.0}, {U(s), -1.0}, {U(s - 1), 1.0}}, 0.0, inf);
        }
      }
      for (int s = std::max(0, t - pl.min_down); s <= t - 1; ++s) {
        if (s == 0) {
          if (u0 == 1.0) b.row("MIN_DOWN", i, t, {{U(t), 1.0}, {U(0), -1.0}}, -inf, 0.0);
        } else {
          b.row("MIN_DOWN", i, t, {{U(t), 1.0}, {U(s), -1.0}, {U(s - 1), 1.0}}, -inf, 1.0);
        }
      }
    }
    if (pl.start_cost > 0.0) {
      b.row("STARTUP", i, 0, {{m.z[i * nt], 1.0}, {U(0), -1.0}}, -u0, inf);
      for (int t = 1; t < nt; ++t)
        b.row("STARTUP", i, t, {{m.z[i * nt + t], 1.0}, {U(t), -1.0}, {U(t - 1), 1.0}}, 0.0, inf);
    }
  }
  b.finish();

  // Static screening: most supply that could exist versus least demand that must be met.
  double min_mult = 1.0;
  for (int l = 0; l < nl; ++l) min_mult = std::min(min_mult, ladder.multiplier(static_cast<std::size_t>(l)));
  if (!ladder.present()) min_mult = 1.0;
  double pmax_total = 0.0;
  for (const auto& pl : instance.plants) pmax_total += pl.p_max;
  for (int t = 0; t < nt; ++t) {
    const double supply = pmax_total + sc.wind(t) + sc.pv(t) + sc.baseload + (hydro.present() ? hydro.c_max : 0.0);
    const double need = sc.demand(t) * min_mult + reserve(t);
    if (supply < need) {
      m.warnings.push_back("step " + std::to_string(t) + ": maximum supply " + std::to_string(supply) +
                           " MW is below the minimum requirement " + std::to_string(need) + " MW");
    }
  }
  return m;
}

Schedule Model::decode(const Eigen::VectorXd& x) const {
  Schedule s = Schedule::zeros(instance);
  const int n = instance.n_plants();
  const int nt = instance.horizon();
  auto bin = [&](int c) { return c >= 0 && x(c) > 0.5 ? 1.0 : 0.0; };
  for (int i = 0; i < n; ++i) {
    const auto& pl = instance.plants[static_cast<std::size_t>(i)];
    double prev = pl.initial_on ? 1.0 : 0.0;
    for (int t = 0; t < nt; ++t) {
      const double on = bin(u[i * nt + t]);
      s.u(i, t) = on;
      const int zc = z[i * nt + t];
      s.z(i, t) = zc >= 0 ? bin(zc) : std::max(0.0, on - prev);
      s.p(i, t) = on > 0.0 ? std::clamp(x(p[i * nt + t]), 0.0, pl.p_max) : 0.0;
      prev = on;
    }
  }
  if (instance.ladder.present()) {
    for (int l = 0; l < static_cast<int>(instance.ladder.size()); ++l)
      for (int t = 0; t < nt; ++t) s.w(l, t) = bin(w[l * nt + t]);
  }
  if (instance.hydro.present()) {
    for (int t = 0; t < nt; ++t) {
      s.v(t) = bin(v[t]);
      s.g(t) = s.v(t) > 0.0 ? std::clamp(x(g[t]), 0.0, instance.hydro.c_max) : 0.0;
      s.h(t) = s.v(t) > 0.0 ? 0.0 : std::clamp(x(h[t]), 0.0, instance.hydro.c_max);
    }
  }
  const auto& sc = instance.scenario;
  const VectorXd supply = s.p.colwise().sum().transpose() + sc.wind + sc.pv + s.g - s.h +
                          VectorXd::Constant(nt, sc.baseload);
  s.reserve_slack = supply - effective_demand(sc, instance.ladder, s.w) - required_reserve(sc);
  s.objective = objective_value(s, instance);
  return s;
}

Eigen::VectorXd Model::encode(const Schedule& s) const {
  VectorXd x = VectorXd::Zero(problem.lp.cols());
  const int n = instance.n_plants();
  const int nt = instance.horizon();
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < nt; ++t) {
      x(u[i * nt + t]) = s.u(i, t);
      if (z[i * nt + t] >= 0) x(z[i * nt + t]) = s.z(i, t);
      x(p[i * nt + t]) = s.p(i, t);
    }
  for (int l = 0; l < static_cast<int>(instance.ladder.size()); ++l)
    for (int t = 0; t < nt; ++t) x(w[l * nt + t]) = s.w(l, t);
  if (instance.hydro.present())
    for (int t = 0; t < nt; ++t) {
      x(v[t]) = s.v(t);
      x(g[t]) = s.g(t);
      x(h[t]) = s.h(t);
    }
  return x;
}

}  // namespace pvint::uc
