#include "pvint/milp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>

#include "pvint/error.hpp"

namespace pvint::milp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::time_limit: return "time_limit";
    case Status::node_limit: return "node_limit";
    case Status::numerical: return "numerical";
  }
  return "unknown";
}

namespace {

using Eigen::Index;
using Eigen::VectorXd;
using Clock = std::chrono::steady_clock;

struct Node {
  double bound = -lp::kInf;  ///< parent relaxation value
  long id = 0;
  VectorXd lo, hi;
  lp::Basis basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class Search {
 public:
  Search(const Problem& p, const Options& o) : problem_(p), opt_(o), lp_(p.lp) {
    start_ = Clock::now();
  }

  Result run() {
    const Index n = problem_.lp.cols();
    if (static_cast<Index>(problem_.integer.size()) != n) {
      throw InputError("integrality vector size does not match column count");
    }
    if (opt_.initial_solution) {
      const VectorXd& x0 = *opt_.initial_solution;
      const double viol = x0.size() == n ? max_violation(problem_, x0) : -1.0;
      if (opt_.verbose) std::fprintf(stderr, "initial solution violation %g\n", viol);
      if (x0.size() == n && viol <= 1e-6) {
        update_incumbent(x0, problem_.lp.cost.dot(x0));
      }
    }
    Node root;
    root.lo = problem_.lp.col_lower;
    root.hi = problem_.lp.col_upper;
    for (Index j = 0; j < n; ++j) {
      if (!problem_.integer[static_cast<std::size_t>(j)]) continue;
      root.lo(j) = std::ceil(root.lo(j) - opt_.integrality_tol);
      root.hi(j) = std::floor(root.hi(j) + opt_.integrality_tol);
    }
    root.id = next_id_++;
    bool root_done = false;
    Status root_status = Status::optimal;
    std::optional<Node> dive = std::move(root);

    while (dive || !open_.empty()) {
      if (elapsed() > opt_.time_limit_seconds) {
        out_.status = Status::time_limit;
        return finish(false);
      }
      if (out_.nodes >= opt_.node_limit) {
        out_.status = Status::node_limit;
        return finish(false);
      }
      Node node;
      if (dive) {
        node = std::move(*dive);
        dive.reset();
      } else {
        node = open_.top();
        open_.pop();
        if (pruned(node.bound)) continue;
      }
      ++out_.nodes;
      const lp::Solution sol = solve_node(node);
      if (!root_done) {
        root_done = true;
        if (sol.status == lp::Status::infeasible) root_status = Status::infeasible;
        if (sol.status == lp::Status::unbounded) root_status = Status::unbounded;
        if (sol.status == lp::Status::numerical || sol.status == lp::Status::iteration_limit) {
          root_status = Status::numerical;
        }
        if (root_status != Status::optimal) {
          out_.status = root_status;
          return finish(false);
        }
      }
      if (sol.status == lp::Status::time_limit) {
        open_.push(std::move(node));
        out_.status = Status::time_limit;
        return finish(false);
      }
      if (sol.status != lp::Status::optimal) {
        if (sol.status == lp::Status::numerical || sol.status == lp::Status::iteration_limit) {
          ++out_.lp_failures;
        }
        continue;
      }
      if (pruned(sol.objective)) continue;

      const Index branch = pick_branch(sol.x);
      if (branch < 0) {
        VectorXd x = sol.x;
        for (Index j = 0; j < n; ++j)
          if (problem_.integer[static_cast<std::size_t>(j)]) x(j) = std::round(x(j));
        update_incumbent(x, problem_.lp.cost.dot(x));
        continue;
      }
      reduced_cost_fixing(node, sol);

      const double v = sol.x(branch);
      Node down{sol.objective, next_id_++, node.lo, node.hi, sol.basis};
      down.hi(branch) = std::floor(v);
      Node up{sol.objective, next_id_++, std::move(node.lo), std::move(node.hi), sol.basis};
      up.lo(branch) = std::ceil(v);
      const bool go_up = v - std::floor(v) >= 0.5;
      if (go_up) {
        open_.push(std::move(down));
        dive = std::move(up);
      } else {
        open_.push(std::move(up));
        dive = std::move(down);
      }
    }
    out_.status = out_.has_solution ? Status::optimal : Status::infeasible;
    return finish(true);
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

  double allowed_gap() const {
    return std::max(opt_.absolute_gap, opt_.gap_tol * std::abs(out_.objective));
  }

  bool pruned(double bound) const {
    return out_.has_solution && bound >= out_.objective - allowed_gap();
  }

  lp::Solution solve_node(const Node& node) {
    lp::Options o = opt_.lp;
    o.time_limit_seconds = std::max(0.0, opt_.time_limit_seconds - elapsed());
    if (out_.has_solution) o.objective_cutoff = out_.objective - allowed_gap();
    lp::Solution sol = lp_.solve(node.lo, node.hi, node.basis, o);
    out_.lp_iterations += sol.iterations;
    if ((sol.status == lp::Status::numerical || sol.status == lp::Status::iteration_limit) &&
        !node.basis.empty()) {
      sol = lp_.solve(node.lo, node.hi, lp::Basis{}, o);
      out_.lp_iterations += sol.iterations;
    }
    if (opt_.verbose) {
      std::fprintf(stderr, "node %ld status %s obj %.10g inc %.10g open %zu\n", out_.nodes,
                   lp::to_string(sol.status), sol.objective, out_.objective, open_.size());
    }
    return sol;
  }

  Index pick_branch(const VectorXd& x) const {
    Index best = -1;
    double best_dist = 1.0;
    for (Index j = 0; j < x.size(); ++j) {
      if (!problem_.integer[static_cast<std::size_t>(j)]) continue;
      const double f = x(j) - std::floor(x(j));
      if (f <= opt_.integrality_tol || f >= 1.0 - opt_.integrality_tol) continue;
      const double dist = std::abs(f - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    return best;
  }

  void reduced_cost_fixing(Node& node, const lp::Solution& sol) const {
    if (!out_.has_solution) return;
    const double limit = out_.objective - allowed_gap();
    for (Index j = 0; j < sol.x.size(); ++j) {
      if (!problem_.integer[static_cast<std::size_t>(j)]) continue;
      const double range = node.hi(j) - node.lo(j);
      if (range <= 0.0 || !std::isfinite(range)) continue;
      const double d = sol.reduced_costs(j);
      if (d > 0.0 && sol.x(j) <= node.lo(j) + opt_.integrality_tol) {
        const double steps = std::floor((limit - sol.objective) / d + opt_.integrality_tol);
        if (steps < range) node.hi(j) = node.lo(j) + std::max(0.0, steps);
      } else if (d < 0.0 && sol.x(j) >= node.hi(j) - opt_.integrality_tol) {
        const double steps = std::floor((limit - sol.objective) / -d + opt_.integrality_tol);
        if (steps < range) node.lo(j) = node.hi(j) - std::max(0.0, steps);
      }
    }
  }

  void update_incumbent(const VectorXd& x, double value) {
    if (out_.has_solution && value >= out_.objective) return;
    out_.has_solution = true;
    out_.objective = value;
    out_.x = x;
  }

  Result finish(bool exhausted) {
    if (exhausted) {
      out_.bound = out_.has_solution ? out_.objective : lp::kInf;
    } else {
      double b = lp::kInf;
      if (!open_.empty()) b = open_.top().bound;
      out_.bound = std::min(b, out_.objective);
    }
    return out_;
  }

  const Problem& problem_;
  Options opt_;
  lp::DualSimplex lp_;
  Clock::time_point start_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  long next_id_ = 0;
  Result out_;
};

}  // namespace

namespace {

/// Groups columns linked through shared rows; returns a component id per column.
std::vector<int> column_components(const lp::Problem& p, int& count) {
  const Index n = p.cols();
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) parent[static_cast<std::size_t>(j)] = static_cast<int>(j);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<int> first(static_cast<std::size_t>(p.rows()), -1);
  for (Index j = 0; j < n; ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(p.a, j); it; ++it) {
      auto& f = first[static_cast<std::size_t>(it.row())];
      if (f < 0) {
        f = static_cast<int>(j);
      } else {
        const int a = find(f), b = find(static_cast<int>(j));
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<int> id(static_cast<std::size_t>(n), -1), label(static_cast<std::size_t>(n), -1);
  count = 0;
  for (Index j = 0; j < n; ++j) {
    const int r = find(static_cast<int>(j));
    if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = count++;
    id[static_cast<std::size_t>(j)] = label[static_cast<std::size_t>(r)];
  }
  return id;
}

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  int count = 0;
  const std::vector<int> comp = column_components(problem.lp, count);
  if (count <= 1) return Search(problem, options).run();

  // Independent blocks are solved one after another and the results summed.
  const auto start = Clock::now();
  const Index n = problem.lp.cols();
  Result total;
  total.status = Status::optimal;
  total.has_solution = true;
  total.objective = 0.0;
  total.bound = 0.0;
  total.x = VectorXd::Zero(n);
  std::vector<std::vector<Index>> cols(static_cast<std::size_t>(count));
  for (Index j = 0; j < n; ++j) cols[static_cast<std::size_t>(comp[static_cast<std::size_t>(j)])].push_back(j);
  std::vector<std::vector<Index>> rows(static_cast<std::size_t>(count));
  {
    std::vector<int> row_comp(static_cast<std::size_t>(problem.lp.rows()), -1);
    for (Index j = 0; j < n; ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(problem.lp.a, j); it; ++it)
        row_comp[static_cast<std::size_t>(it.row())] = comp[static_cast<std::size_t>(j)];
    for (Index i = 0; i < problem.lp.rows(); ++i) {
      const int c = row_comp[static_cast<std::size_t>(i)];
      if (c >= 0) {
        rows[static_cast<std::size_t>(c)].push_back(i);
      } else if (problem.lp.row_lower(i) > 1e-9 || problem.lp.row_upper(i) < -1e-9) {
        total.status = Status::infeasible;  // empty row with a bound excluding zero
      }
    }
  }
  if (total.status == Status::infeasible) {
    total.has_solution = false;
    return total;
  }
  for (int c = 0; c < count; ++c) {
    const auto& cc = cols[static_cast<std::size_t>(c)];
    const auto& rr = rows[static_cast<std::size_t>(c)];
    std::vector<Index> row_pos(static_cast<std::size_t>(problem.lp.rows()), -1);
    for (std::size_t k = 0; k < rr.size(); ++k) row_pos[static_cast<std::size_t>(rr[k])] = static_cast<Index>(k);
    Problem sub;
    const auto nc = static_cast<Index>(cc.size()), nr = static_cast<Index>(rr.size());
    std::vector<Eigen::Triplet<double>> trip;
    sub.lp.cost.resize(nc);
    sub.lp.col_lower.resize(nc);
    sub.lp.col_upper.resize(nc);
    for (Index k = 0; k < nc; ++k) {
      const Index j = cc[static_cast<std::size_t>(k)];
      for (Eigen::SparseMatrix<double>::InnerIterator it(problem.lp.a, j); it; ++it)
        trip.emplace_back(row_pos[static_cast<std::size_t>(it.row())], k, it.value());
      sub.lp.cost(k) = problem.lp.cost(j);
      sub.lp.col_lower(k) = problem.lp.col_lower(j);
      sub.lp.col_upper(k) = problem.lp.col_upper(j);
      sub.integer.push_back(problem.integer[static_cast<std::size_t>(j)]);
    }
    sub.lp.a.resize(nr, nc);
    sub.lp.a.setFromTriplets(trip.begin(), trip.end());
    sub.lp.row_lower.resize(nr);
    sub.lp.row_upper.resize(nr);
    for (Index k = 0; k < nr; ++k) {
      sub.lp.row_lower(k) = problem.lp.row_lower(rr[static_cast<std::size_t>(k)]);
      sub.lp.row_upper(k) = problem.lp.row_upper(rr[static_cast<std::size_t>(k)]);
    }
    Options o = options;
    o.time_limit_seconds = options.time_limit_seconds - std::chrono::duration<double>(Clock::now() - start).count();
    o.absolute_gap = options.absolute_gap / count;
    if (options.initial_solution) {
      VectorXd x0(nc);
      for (Index k = 0; k < nc; ++k) x0(k) = (*options.initial_solution)(cc[static_cast<std::size_t>(k)]);
      o.initial_solution = x0;
    }
    const Result r = Search(sub, o).run();
    total.nodes += r.nodes;
    total.lp_iterations += r.lp_iterations;
    total.lp_failures += r.lp_failures;
    if (!r.has_solution) {
      total.has_solution = false;
      total.status = r.status;
      total.objective = lp::kInf;
      total.bound = r.status == Status::infeasible ? lp::kInf : -lp::kInf;
      return total;
    }
    if (r.status != Status::optimal) total.status = r.status;
    total.objective += r.objective;
    total.bound += r.bound;
    for (Index k = 0; k < nc; ++k) total.x(cc[static_cast<std::size_t>(k)]) = r.x(k);
  }
  return total;
}

double max_violation(const Problem& problem, const VectorXd& x) {
  const auto& p = problem.lp;
  double v = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    v = std::max({v, p.col_lower(j) - x(j), x(j) - p.col_upper(j)});
    if (problem.integer[static_cast<std::size_t>(j)]) v = std::max(v, std::abs(x(j) - std::round(x(j))));
  }
  const VectorXd ax = p.a * x;
  for (Index i = 0; i < ax.size(); ++i) {
    v = std::max({v, p.row_lower(i) - ax(i), ax(i) - p.row_upper(i)});
  }
  return v;
}

}  // namespace pvint::milp
