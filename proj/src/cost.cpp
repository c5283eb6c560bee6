#include "pvint/cost.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"

namespace pvint::cost {

namespace {

bool same_vector(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.size() == b.size() && a == b; }

bool same_except_sigma_p(const uc::Instance& a, const uc::Instance& b) {
  const auto& x = a.scenario;
  const auto& y = b.scenario;
  if (x.horizon != y.horizon || x.step_hours != y.step_hours || x.alpha_quantile != y.alpha_quantile ||
      x.baseload != y.baseload || !same_vector(x.demand, y.demand) || !same_vector(x.wind, y.wind) ||
      !same_vector(x.pv, y.pv) || !same_vector(x.sigma_d, y.sigma_d) || !same_vector(x.sigma_w, y.sigma_w)) {
    return false;
  }
  if (a.plants.size() != b.plants.size()) return false;
  for (std::size_t i = 0; i < a.plants.size(); ++i) {
    const auto& p = a.plants[i];
    const auto& q = b.plants[i];
    if (p.p_min != q.p_min || p.p_max != q.p_max || p.ramp_up != q.ramp_up || p.ramp_down != q.ramp_down ||
        p.min_up != q.min_up || p.min_down != q.min_down || p.start_cost != q.start_cost ||
        p.fuel_cost != q.fuel_cost || p.initial_on != q.initial_on) {
      return false;
    }
  }
  const auto& h = a.hydro;
  const auto& g = b.hydro;
  if (h.c_min != g.c_min || h.c_max != g.c_max || h.r_min != g.r_min || h.r_max != g.r_max ||
      h.efficiency != g.efficiency || h.initial_storage != g.initial_storage) {
    return false;
  }
  return a.ladder.levels == b.ladder.levels && a.ladder.mean_price == b.ladder.mean_price &&
         a.ladder.elasticity == b.ladder.elasticity;
}

}  // namespace

double pv_energy(const Eigen::VectorXd& pv, double step_hours) { return pv.sum() * step_hours; }

double mean_daytime_pv(const Eigen::VectorXd& pv) {
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index t = 0; t < pv.size(); ++t) {
    if (pv(t) > 0.0) {
      sum += pv(t);
      ++count;
    }
  }
  return count ? sum / count : 0.0;
}

IntegrationCostResult integration_cost(double cost_with, double cost_without, const Eigen::VectorXd& pv,
                                       double step_hours, double sigma_p) {
  IntegrationCostResult r;
  r.sigma_p = sigma_p;
  r.pv_energy = pv_energy(pv, step_hours);
  if (!(r.pv_energy > 0.0)) throw InputError("integration cost needs positive PV energy");
  const double mean = mean_daytime_pv(pv);
  r.cv = mean > 0.0 ? sigma_p / mean : 0.0;
  r.cost_with_error = cost_with;
  r.cost_without_error = cost_without;
  r.epsilon = (cost_with - cost_without) / (r.pv_energy * uc::kKwhPerMwh);
  return r;
}

IntegrationCostResult integration_cost(const uc::Schedule& with, const uc::Instance& instance_with,
                                       const uc::Schedule& without, const uc::Instance& instance_without) {
  if (!same_except_sigma_p(instance_with, instance_without)) {
    throw InputError("integration cost runs differ in more than sigma_p");
  }
  if (instance_without.scenario.sigma_p.size() && instance_without.scenario.sigma_p.cwiseAbs().maxCoeff() != 0.0) {
    throw InputError("the reference run must have sigma_p = 0");
  }
  const auto& sc = instance_with.scenario;
  const double sigma = sc.sigma_p.size() ? sc.sigma_p.maxCoeff() : 0.0;
  return integration_cost(uc::operation_cost(with, instance_with), uc::operation_cost(without, instance_without),
                          sc.pv, sc.step_hours, sigma);
}

uc::Instance with_sigma_p(const uc::Instance& instance, double sigma_p) {
  if (!(sigma_p >= 0.0) || !std::isfinite(sigma_p)) throw InputError("sigma_p must be finite and non-negative");
  uc::Instance out = instance;
  auto& sc = out.scenario;
  sc.sigma_p.resize(sc.horizon);
  for (int t = 0; t < sc.horizon; ++t) sc.sigma_p(t) = sc.pv(t) > 0.0 ? sigma_p : 0.0;
  return out;
}

std::vector<IntegrationCostResult> sweep(const uc::Instance& base, const std::vector<double>& grid,
                                         const SweepOptions& options) {
  if (grid.empty() || grid.front() != 0.0) throw InputError("sweep grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw InputError("sweep grid must be strictly ascending");
  const auto& sc = base.scenario;
  if (!(pv_energy(sc.pv, sc.step_hours) > 0.0)) throw InputError("integration cost needs positive PV energy");

  struct Run {
    uc::SolveStatus status = uc::SolveStatus::failed;
    double cost = 0.0;
  };
  std::vector<Run> runs(grid.size());
  auto solve_point = [&](std::size_t k) {
    const uc::Instance inst = with_sigma_p(base, grid[k]);
    const uc::Model model = uc::build_model(inst);
    const uc::Schedule s = uc::solve(model, options.solve);
    runs[k].status = s.status;
    if (s.status == uc::SolveStatus::optimal || s.status == uc::SolveStatus::feasible) {
      runs[k].cost = uc::operation_cost(s, inst);
    }
  };

  const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) solve_point(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
          try {
            solve_point(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  auto solved = [](const Run& r) {
    return r.status == uc::SolveStatus::optimal || r.status == uc::SolveStatus::feasible;
  };
  std::vector<IntegrationCostResult> out;
  out.reserve(grid.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    IntegrationCostResult r;
    if (solved(runs[k]) && solved(runs[0])) {
      // The first point is its own reference, so epsilon(0) is exactly 0.
      r = integration_cost(runs[k].cost, runs[0].cost, sc.pv, sc.step_hours, grid[k]);
    } else {
      r.sigma_p = grid[k];
      r.pv_energy = pv_energy(sc.pv, sc.step_hours);
      const double mean = mean_daytime_pv(sc.pv);
      r.cv = mean > 0.0 ? grid[k] / mean : 0.0;
      r.cost_with_error = solved(runs[k]) ? runs[k].cost : nan;
      r.cost_without_error = solved(runs[0]) ? runs[0].cost : nan;
      r.epsilon = nan;
      r.feasible = false;
    }
    r.status = runs[k].status;
    out.push_back(r);
  }
  return out;
}

void write_sweep(std::ostream& out, const std::vector<IntegrationCostResult>& results) {
  auto num = [](double v) { return std::isfinite(v) ? csv::format(v) : std::string(); };
  out << "sigma_p,cv,cost_with,cost_without,epsilon,status\n";
  for (const auto& r : results) {
    out << csv::format(r.sigma_p) << ',' << csv::format(r.cv) << ',' << num(r.cost_with_error) << ','
        << num(r.cost_without_error) << ',' << num(r.epsilon) << ','
        << (r.feasible ? uc::to_string(r.status) : (r.status == uc::SolveStatus::infeasible ? "infeasible" : "skipped"))
        << '\n';
  }
}

}  // namespace pvint::cost
