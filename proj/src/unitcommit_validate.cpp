#include <algorithm>
#include <cmath>
#include <ostream>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"
#include "pvint/unitcommit.hpp"

namespace pvint::uc {

namespace {

class Checker {
 public:
  Checker(std::vector<Violation>& out, double tol) : out_(out), tol_(tol) {}

  /// Records a violation when `slack` (>= 0 means satisfied) is below -tol.
  void ge(const char* family, int i, int t, double slack) {
    if (!(slack >= -tol_)) out_.push_back({family, i, t, slack});
  }

 private:
  std::vector<Violation>& out_;
  double tol_;
};

bool is_binary(double x) { return x == 0.0 || x == 1.0; }

}  // namespace

std::vector<Violation> validate_schedule(const Schedule& s, const Instance& inst, double tolerance) {
  const auto& sc = inst.scenario;
  const auto& ladder = inst.ladder;
  const auto& hy = inst.hydro;
  const int n = inst.n_plants();
  const int nt = sc.horizon;
  const int nl = ladder.present() ? static_cast<int>(ladder.size()) : 1;
  if (s.u.rows() != n || s.u.cols() != nt || s.z.rows() != n || s.z.cols() != nt || s.p.rows() != n ||
      s.p.cols() != nt || s.w.rows() != nl || s.w.cols() != nt || s.v.size() != nt || s.g.size() != nt ||
      s.h.size() != nt) {
    throw InputError("schedule dimensions do not match the instance");
  }
  std::vector<Violation> out;
  Checker c(out, tolerance);
  const double dt = sc.step_hours;

  // Integrality of every binary decision.
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < nt; ++t) {
      if (!is_binary(s.u(i, t))) c.ge("BINARY_U", i, t, -std::abs(s.u(i, t) - std::round(s.u(i, t))) - 1.0);
      if (!is_binary(s.z(i, t))) c.ge("BINARY_Z", i, t, -std::abs(s.z(i, t) - std::round(s.z(i, t))) - 1.0);
    }
  for (int l = 0; l < nl; ++l)
    for (int t = 0; t < nt; ++t)
      if (!is_binary(s.w(l, t))) c.ge("BINARY_W", l, t, -1.0);
  for (int t = 0; t < nt; ++t) {
    if (!is_binary(s.v(t))) c.ge("BINARY_V", -1, t, -1.0);
  }

  // Price selection: one level per step, mean price cap, conserved total demand.
  double price_sum = 0.0, dr_total = 0.0;
  for (int t = 0; t < nt; ++t) {
    double count = 0.0, mult = 0.0;
    for (int l = 0; l < nl; ++l) {
      const double price = ladder.present() ? ladder.levels[static_cast<std::size_t>(l)] : ladder.mean_price;
      const double m = ladder.present() ? std::pow(price / ladder.mean_price, ladder.elasticity) : 1.0;
      count += s.w(l, t);
      price_sum += s.w(l, t) * price;
      mult += s.w(l, t) * m;
    }
    c.ge("ONE_HOT", -1, t, -std::abs(count - 1.0));
    dr_total += sc.demand(t) * mult;
  }
  c.ge("MEAN_PRICE", -1, -1, ladder.mean_price - price_sum / nt);
  const double demand_total = sc.demand.sum();
  c.ge("DR_CONSERVE", -1, -1, sc.conservation_tol * demand_total - std::abs(dr_total - demand_total));

  // Chance-constrained balance with the must-run baseload.
  for (int t = 0; t < nt; ++t) {
    double mult = 0.0;
    for (int l = 0; l < nl; ++l) {
      const double m = ladder.present()
                           ? std::pow(ladder.levels[static_cast<std::size_t>(l)] / ladder.mean_price, ladder.elasticity)
                           : 1.0;
      mult += s.w(l, t) * m;
    }
    const double supply = s.p.col(t).sum() + sc.wind(t) + sc.pv(t) + s.g(t) - s.h(t) + sc.baseload;
    const double sigma = std::sqrt(sc.sigma_d(t) * sc.sigma_d(t) + sc.sigma_w(t) * sc.sigma_w(t) +
                                   sc.sigma_p(t) * sc.sigma_p(t));
    c.ge("BALANCE", -1, t, supply - sc.demand(t) * mult - sc.alpha_quantile * sigma);
  }

  // Pumped hydro; a missing unit must stay idle.
  const double cmin = hy.present() ? hy.c_min : 0.0;
  const double cmax = hy.present() ? hy.c_max : 0.0;
  double stored = 0.0;
  for (int t = 0; t < nt; ++t) {
    c.ge("HYDRO_DISCHARGE", -1, t, s.g(t) - s.v(t) * cmin);
    c.ge("HYDRO_DISCHARGE", -1, t, s.v(t) * cmax - s.g(t));
    c.ge("HYDRO_CHARGE", -1, t, s.h(t) - (1.0 - s.v(t)) * cmin);
    c.ge("HYDRO_CHARGE", -1, t, (1.0 - s.v(t)) * cmax - s.h(t));
    if (hy.present()) {
      stored += (s.h(t) * hy.efficiency - s.g(t)) * dt;
      c.ge("STORAGE", -1, t, hy.initial_storage + stored - hy.r_min);
      c.ge("STORAGE", -1, t, hy.r_max - hy.initial_storage - stored);
    }
  }
  if (hy.present() && sc.enforce_end_storage) c.ge("END_STORAGE", -1, -1, -std::abs(stored));

  for (int i = 0; i < n; ++i) {
    const auto& pl = inst.plants[static_cast<std::size_t>(i)];
    const double u_init = pl.initial_on ? 1.0 : 0.0;
    // u at step t, with the pre-horizon state held constant before t = 0.
    auto u_at = [&](int t) { return t < 0 ? u_init : s.u(i, t); };
    for (int t = 0; t < nt; ++t) {
      const double u = s.u(i, t), p = s.p(i, t);
      c.ge("CAPACITY", i, t, p - pl.p_min * u);
      c.ge("CAPACITY", i, t, pl.p_max * u - p);
      if (t > 0 || sc.enforce_initial_ramp) {
        const double prev_p = t > 0 ? s.p(i, t - 1) : pl.initial_output;
        const double prev_u = u_at(t - 1);
        const double inc = p - prev_p;
        c.ge("RAMP_UP", i, t, prev_u * pl.ramp_up + (1.0 - prev_u) * pl.p_min - inc);
        c.ge("RAMP_DOWN", i, t, inc + u * pl.ramp_down + (1.0 - u) * pl.p_max);
      }
      for (int st = t - pl.min_up; st <= t - 1; ++st) {
        if (st < 0) continue;
        c.ge("MIN_UP", i, t, u - (u_at(st) - u_at(st - 1)));
      }
      for (int st = t - pl.min_down; st <= t - 1; ++st) {
        if (st < 0) continue;
        c.ge("MIN_DOWN", i, t, 1.0 + u_at(st) - u_at(st - 1) - u);
      }
      c.ge("STARTUP", i, t, s.z(i, t) - (u - u_at(t - 1)));
    }
  }
  return out;
}

void write_violations(std::ostream& out, const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    out << v.family << ' ' << v.i << ' ' << v.t << ' ' << csv::format(v.residual) << '\n';
  }
}

}  // namespace pvint::uc
