#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pvint/cost.hpp"
#include "pvint/csv.hpp"
#include "pvint/error.hpp"
#include "pvint/fleet.hpp"
#include "pvint/forecast_error.hpp"
#include "pvint/panel_io.hpp"
#include "pvint/rmt.hpp"
#include "pvint/timeseries.hpp"
#include "pvint/unitcommit.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kInvariant = 4 };

/// Solver outcome that is neither bad input nor a broken invariant.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pvint::InputError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& f : pvint::csv::split(text)) out.push_back(pvint::csv::parse_double(pvint::csv::trim(f), what));
  return out;
}

void write_matrix(const fs::path& path, const std::vector<std::string>& sites, const Eigen::MatrixXd& m) {
  auto out = open_output(path);
  out << "site";
  for (const auto& s : sites) out << ',' << s;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << sites[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << pvint::csv::format(m(i, j));
    out << '\n';
  }
}

// ---- synth --------------------------------------------------------------------

struct SynthArgs {
  pvint::SynthConfig config;
  std::optional<std::uint64_t> seed;
  fs::path out = "panel.csv";
};

int run_synth(SynthArgs& a) {
  if (!a.seed) throw pvint::InputError("synth needs --seed");
  a.config.seed = *a.seed;
  const auto panel = pvint::synth_panel(a.config);
  auto out = open_output(fs::absolute(a.out));
  pvint::write_panel(out, panel);
  return kOk;
}

// ---- instance -----------------------------------------------------------------

struct InstanceArgs {
  std::string size = "reduced";
  double sigma_p = 0.0;
  double elasticity = 0.0;
  std::optional<std::uint64_t> seed;
  fs::path out = "instance.txt";
};

int run_instance(const InstanceArgs& a) {
  if (!a.seed) throw pvint::InputError("instance needs --seed");
  pvint::uc::Instance inst;
  if (a.size == "reduced") {
    inst = pvint::uc::reduced_instance(a.sigma_p, a.elasticity, *a.seed);
  } else if (a.size == "full") {
    inst = pvint::uc::full_size_instance(a.sigma_p, a.elasticity, *a.seed);
  } else {
    throw pvint::InputError("--size must be reduced or full");
  }
  auto out = open_output(fs::absolute(a.out));
  pvint::uc::write_instance(out, inst);
  return kOk;
}

// ---- analyze ------------------------------------------------------------------

struct AnalyzeArgs {
  fs::path panel;
  fs::path out = "analysis";
  double cutoff_hours = 6.0;
  double day_start = 6.0;
  double day_end = 18.0;
  bool keep_night = false;
  double bin_width = 0.1;
};

int run_analyze(const AnalyzeArgs& a) {
  const fs::path dir = fs::absolute(a.out);
  fs::create_directories(dir);
  const auto file = pvint::read_panel_file(fs::absolute(a.panel));
  pvint::DetrendedSeries series;
  bool night_removed = false;
  if (file.detrended_cutoff) {
    series = pvint::as_fluctuation(file.panel);
    series.cutoff_hours = *file.detrended_cutoff;
  } else if (file.panel.basis == pvint::CapacityBasis::fluctuation) {
    series = pvint::as_fluctuation(file.panel);
  } else {
    pvint::PanelSeries day = file.panel;
    if (!a.keep_night) {
      day = pvint::remove_night(file.panel, a.day_start, a.day_end);
      night_removed = true;
    }
    {
      auto out = open_output(dir / "daytime.csv");
      pvint::write_panel(out, day);
    }
    series = pvint::detrend_fourier(day, a.cutoff_hours);
  }
  {
    auto out = open_output(dir / "detrended.csv");
    pvint::write_detrended(out, series);
  }

  const auto corr = pvint::correlation_matrix(series);
  const auto decomp = pvint::eigen_decompose(corr, series.length());
  const auto n_genuine = pvint::count_genuine(decomp);
  const auto split = pvint::split_correlation(decomp, n_genuine);
  const auto modes = pvint::project_modes(series, decomp, n_genuine);

  write_matrix(dir / "correlation.csv", corr.sites, corr.entries);
  write_matrix(dir / "correlation_genuine.csv", corr.sites, split.genuine);
  write_matrix(dir / "correlation_random.csv", corr.sites, split.random);

  {
    auto out = open_output(dir / "spectrum.csv");
    out << "k,eigenvalue,genuine\n";
    for (Eigen::Index k = 0; k < decomp.dim(); ++k) {
      out << k + 1 << ',' << pvint::csv::format(decomp.eigenvalues(k)) << ',' << (k < n_genuine ? 1 : 0) << '\n';
    }
  }
  {
    const auto hist = pvint::eigen_histogram(decomp.eigenvalues, a.bin_width);
    auto out = open_output(dir / "histogram.csv");
    out << "bin_left,bin_right,density,mp_density\n";
    for (std::size_t b = 0; b < hist.bin_left.size(); ++b) {
      const double lo = hist.bin_left[b];
      const double hi = lo + hist.bin_width;
      const double mp = decomp.q_ratio > 1.0 ? pvint::mp_mass(lo, hi, decomp.q_ratio) / hist.bin_width : 0.0;
      out << pvint::csv::format(lo) << ',' << pvint::csv::format(hi) << ',' << pvint::csv::format(hist.density[b])
          << ',' << pvint::csv::format(mp) << '\n';
    }
  }
  {
    auto out = open_output(dir / "eigenvectors.csv");
    out << "site";
    for (Eigen::Index k = 0; k < decomp.dim(); ++k) out << ",mode_" << k + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < decomp.dim(); ++i) {
      out << corr.sites[static_cast<std::size_t>(i)];
      for (Eigen::Index k = 0; k < decomp.dim(); ++k) out << ',' << pvint::csv::format(decomp.eigenvectors(i, k));
      out << '\n';
    }
  }
  {
    auto out = open_output(dir / "modes.csv");
    out << "timestamp";
    for (Eigen::Index k = 0; k < n_genuine; ++k) out << ",mode_" << k + 1;
    out << '\n';
    for (Eigen::Index t = 0; t < series.length(); ++t) {
      out << pvint::timefmt::format_iso8601(series.timestamps[static_cast<std::size_t>(t)]);
      for (Eigen::Index k = 0; k < n_genuine; ++k) out << ',' << pvint::csv::format(modes.coefficients(k, t));
      out << '\n';
    }
  }

  json kurt = json::object();
  for (Eigen::Index i = 0; i < series.n_sites(); ++i) {
    const Eigen::VectorXd row = series.values.row(i).transpose();
    const auto fit = pvint::fit_fluctuation(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                                            pvint::DistributionFamily::normal);
    kurt[series.sites[static_cast<std::size_t>(i)]] = number(fit.kurtosis_sample);
  }
  bool single_signed = true;
  if (n_genuine > 0) {
    const Eigen::VectorXd top = decomp.eigenvectors.col(0);
    single_signed = (top.array() >= 0.0).all() || (top.array() <= 0.0).all();
  }
  json summary;
  summary["N"] = series.n_sites();
  summary["L"] = series.length();
  summary["Q"] = number(decomp.q_ratio);
  summary["lambda_min"] = number(decomp.lambda_min);
  summary["lambda_max"] = number(decomp.lambda_max);
  summary["n_genuine"] = n_genuine;
  summary["largest_eigenvalue"] = number(decomp.eigenvalues(0));
  summary["top_eigenvector_single_signed"] = n_genuine > 0 ? json(single_signed) : json(nullptr);
  summary["cutoff_hours"] = number(series.cutoff_hours);
  summary["night_removed"] = night_removed;
  summary["jacobi_sweeps"] = decomp.sweeps;
  summary["kurtosis"] = kurt;
  write_json(dir / "summary.json", summary);
  return kOk;
}

// ---- error --------------------------------------------------------------------

struct ErrorArgs {
  fs::path analysis = "analysis";
  std::optional<fs::path> allocation;
  double total_mw = 100000.0;
  std::optional<double> mean_output;
  bool mc_verify = false;
  long mc_samples = 1000000;
  std::uint64_t seed = 1;
  fs::path out = "error";
};

pvint::CapacityAllocation read_allocation(const fs::path& path, const std::vector<std::string>& sites,
                                          double total_mw) {
  std::ifstream in(path);
  if (!in) throw pvint::InputError("cannot open allocation file " + path.string());
  const auto doc = pvint::csv::read(in);
  std::map<std::string, double> share;
  bool header = true;
  for (const auto& rec : doc.records) {
    if (header) {
      header = false;
      if (rec.fields.size() == 2 && pvint::csv::trim(rec.fields[0]) == "site") continue;
    }
    if (rec.fields.size() != 2) {
      throw pvint::InputError("allocation line " + std::to_string(rec.line) + ": expected site,share");
    }
    const std::string site(pvint::csv::trim(rec.fields[0]));
    if (share.count(site)) throw pvint::InputError("allocation lists site " + site + " twice");
    share[site] = pvint::csv::parse_double(pvint::csv::trim(rec.fields[1]), "allocation line " + std::to_string(rec.line));
  }
  if (share.size() != sites.size()) {
    throw pvint::InputError("allocation has " + std::to_string(share.size()) + " sites, panel has " +
                            std::to_string(sites.size()));
  }
  Eigen::VectorXd shares(static_cast<Eigen::Index>(sites.size()));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    auto it = share.find(sites[i]);
    if (it == share.end()) throw pvint::InputError("allocation lacks site " + sites[i]);
    shares(static_cast<Eigen::Index>(i)) = it->second;
  }
  return pvint::allocate_capacity(total_mw, shares, sites);
}

/// Columns of `series` (and of `day`, when present) that fall in `month`; 0 selects all.
std::vector<Eigen::Index> month_columns(const std::vector<std::int64_t>& stamps, int month) {
  std::vector<Eigen::Index> cols;
  for (std::size_t t = 0; t < stamps.size(); ++t)
    if (month == 0 || pvint::timefmt::month_of(stamps[t]) == month) cols.push_back(static_cast<Eigen::Index>(t));
  return cols;
}

int run_error(const ErrorArgs& a) {
  const fs::path src = fs::absolute(a.analysis);
  const fs::path dir = fs::absolute(a.out);
  const auto series = pvint::load_detrended(src / "detrended.csv");
  std::optional<pvint::PanelSeries> day;
  if (fs::exists(src / "daytime.csv")) day = pvint::load_panel(src / "daytime.csv");
  if (day && day->timestamps != series.timestamps) throw pvint::InputError("daytime and detrended panels disagree");

  const auto alloc = a.allocation
                         ? read_allocation(fs::absolute(*a.allocation), series.sites, a.total_mw)
                         : pvint::allocate_capacity(a.total_mw,
                                                    Eigen::VectorXd::Constant(series.n_sites(),
                                                                              1.0 / static_cast<double>(series.n_sites())),
                                                    series.sites);

  std::vector<int> months;
  for (auto t : series.timestamps) months.push_back(pvint::timefmt::month_of(t));
  std::sort(months.begin(), months.end());
  months.erase(std::unique(months.begin(), months.end()), months.end());
  months.insert(months.begin(), 0);

  std::vector<pvint::MonthlyErrorRow> rows;
  json details = json::array();
  json mc = json::array();
  bool mc_failed = false;
  for (int month : months) {
    const auto cols = month_columns(series.timestamps, month);
    json d;
    d["month"] = month;
    d["samples"] = cols.size();
    if (static_cast<Eigen::Index>(cols.size()) <= series.n_sites()) {
      d["skipped"] = "fewer samples than sites";
      details.push_back(d);
      continue;
    }
    pvint::DetrendedSeries sub;
    sub.sites = series.sites;
    sub.sample_hours = series.sample_hours;
    sub.cutoff_hours = series.cutoff_hours;
    sub.values.resize(series.n_sites(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      sub.values.col(static_cast<Eigen::Index>(k)) = series.values.col(cols[k]);
      sub.timestamps.push_back(series.timestamps[static_cast<std::size_t>(cols[k])]);
    }
    double mean_output = 0.0;
    if (a.mean_output) {
      mean_output = *a.mean_output;
    } else if (day && day->basis == pvint::CapacityBasis::per_capacity) {
      pvint::PanelSeries part;
      part.sites = day->sites;
      part.sample_hours = day->sample_hours;
      part.basis = day->basis;
      part.values.resize(day->n_sites(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        part.values.col(static_cast<Eigen::Index>(k)) = day->values.col(cols[k]);
        part.timestamps.push_back(day->timestamps[static_cast<std::size_t>(cols[k])]);
      }
      mean_output = pvint::mean_system_output(part, alloc);
    }
    const auto corr = pvint::correlation_matrix(sub);
    const auto decomp = pvint::eigen_decompose(corr, sub.length());
    const auto n_genuine = pvint::count_genuine(decomp);
    const auto split = pvint::split_correlation(decomp, n_genuine);
    const auto est = pvint::estimate(sub, split, alloc, mean_output);
    rows.push_back({month, est.sigma_system_uncorrelated, est.cv_uncorrelated, est.sigma_system_correlated,
                    est.cv_correlated});
    d["n_genuine"] = n_genuine;
    d["mean_output"] = number(est.mean_output);
    d["error_wo"] = number(est.sigma_system_uncorrelated);
    d["error_w"] = number(est.sigma_system_correlated);
    details.push_back(d);

    if (a.mc_verify) {
      const double sampled = pvint::sigma_monte_carlo(alloc, est.sigma_sites, est.rho, a.mc_samples,
                                                      a.seed + static_cast<std::uint64_t>(month));
      const double ref = est.sigma_system_correlated;
      const double rel = ref > 0.0 ? std::abs(sampled - ref) / ref : std::abs(sampled);
      const bool ok = rel <= 0.005;
      mc_failed = mc_failed || !ok;
      mc.push_back({{"month", month}, {"analytic", number(ref)}, {"monte_carlo", number(sampled)},
                    {"relative_difference", number(rel)}, {"pass", ok}});
    }
  }
  fs::create_directories(dir);
  {
    auto out = open_output(dir / "error_table.csv");
    pvint::write_monthly_table(out, rows);
  }
  json summary;
  summary["sites"] = series.n_sites();
  summary["total_capacity_mw"] = number(alloc.total_capacity);
  summary["months"] = details;
  if (a.mc_verify) {
    summary["mc_samples"] = a.mc_samples;
    summary["mc_verify"] = mc;
  }
  write_json(dir / "error_summary.json", summary);
  if (mc_failed) {
    std::cerr << "error: Monte Carlo check disagrees with the analytic system error by more than 0.5%\n";
    return kInvariant;
  }
  return kOk;
}

// ---- schedule -----------------------------------------------------------------

struct SolveArgs {
  std::string mode = "exact";
  double gap = 1e-6;
  double time_limit = 600.0;
  bool verbose = false;

  [[nodiscard]] pvint::uc::SolveOptions options() const {
    pvint::uc::SolveOptions o;
    if (mode == "exact") {
      o.mode = pvint::uc::SolveMode::exact;
    } else if (mode == "heuristic") {
      o.mode = pvint::uc::SolveMode::heuristic;
    } else {
      throw pvint::InputError("--mode must be exact or heuristic");
    }
    if (!(gap >= 0.0)) throw pvint::InputError("--gap must be non-negative");
    if (!(time_limit > 0.0)) throw pvint::InputError("--time-limit must be positive");
    o.gap_tol = gap;
    o.time_limit_seconds = time_limit;
    o.verbose = verbose;
    return o;
  }
};

struct ScheduleArgs {
  SolveArgs solve;
  std::optional<double> sigma_p;
  fs::path out = "schedule";
};

int run_schedule(const ScheduleArgs& a, const std::optional<fs::path>& config) {
  if (!config) throw pvint::InputError("schedule needs --config <instance file>");
  pvint::uc::Instance inst = pvint::uc::read_instance(fs::absolute(*config));
  if (a.sigma_p) inst = pvint::cost::with_sigma_p(inst, *a.sigma_p);
  const auto options = a.solve.options();
  const fs::path dir = fs::absolute(a.out);
  fs::create_directories(dir);

  const auto model = pvint::uc::build_model(inst);
  for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
  const auto s = pvint::uc::solve(model, options);

  json j;
  j["status"] = pvint::uc::to_string(s.status);
  j["mode"] = a.solve.mode;
  j["binaries"] = model.n_binary();
  j["continuous"] = model.n_continuous();
  j["rows"] = model.n_rows();
  j["warnings"] = model.warnings;
  const bool solved = s.status == pvint::uc::SolveStatus::optimal || s.status == pvint::uc::SolveStatus::feasible;
  if (solved) {
    j["objective"] = number(s.objective);
    j["revenue"] = number(pvint::uc::revenue(inst.scenario, inst.ladder, s.w));
    j["operation_cost"] = number(pvint::uc::operation_cost(s, inst));
    j["bound"] = number(s.bound);
    j["min_reserve_slack"] = number(s.reserve_slack.size() ? s.reserve_slack.minCoeff() : 0.0);
  }
  j["nodes"] = s.nodes;
  write_json(dir / "objective.json", j);
  if (!solved) {
    throw SolverFailure(std::string("unit commitment ") + pvint::uc::to_string(s.status));
  }

  {
    auto out = open_output(dir / "schedule.csv");
    pvint::uc::write_schedule(out, s, inst);
  }
  {
    auto out = open_output(dir / "generation.csv");
    pvint::uc::write_stacked_generation(out, s, inst);
  }
  const auto violations = pvint::uc::validate_schedule(s, inst);
  {
    auto out = open_output(dir / "violations.txt");
    pvint::uc::write_violations(out, violations);
  }
  if (!violations.empty()) {
    throw pvint::InvariantError("validator found " + std::to_string(violations.size()) +
                                " violations in the solver output");
  }
  return kOk;
}

// ---- cost ---------------------------------------------------------------------

struct CostArgs {
  SolveArgs solve;
  std::string grid;
  std::string peak_percent;
  std::string cv_grid;
  fs::path out = "cost";
};

int run_cost(const CostArgs& a, const std::optional<fs::path>& config, int threads) {
  if (!config) throw pvint::InputError("cost needs --config <instance file>");
  const int given = !a.grid.empty() + !a.peak_percent.empty() + !a.cv_grid.empty();
  if (given != 1) throw pvint::InputError("cost needs exactly one of --grid, --peak-percent, --cv-grid");
  const auto inst = pvint::uc::read_instance(fs::absolute(*config));
  std::vector<double> grid;
  if (!a.grid.empty()) {
    grid = parse_list(a.grid, "--grid");
  } else if (!a.peak_percent.empty()) {
    const double peak = inst.scenario.pv.maxCoeff();
    for (double p : parse_list(a.peak_percent, "--peak-percent")) grid.push_back(p / 100.0 * peak);
  } else {
    const double mean = pvint::cost::mean_daytime_pv(inst.scenario.pv);
    for (double cv : parse_list(a.cv_grid, "--cv-grid")) grid.push_back(cv * mean);
  }
  pvint::cost::SweepOptions opt;
  opt.solve = a.solve.options();
  opt.threads = threads;
  const auto results = pvint::cost::sweep(inst, grid, opt);
  auto out = open_output(fs::absolute(a.out) / "sweep.csv");
  pvint::cost::write_sweep(out, results);
  for (const auto& r : results)
    if (!r.feasible) std::cerr << "warning: sigma_p " << r.sigma_p << " skipped (" << pvint::uc::to_string(r.status) << ")\n";
  return kOk;
}

void add_solve_flags(CLI::App* cmd, SolveArgs& s) {
  cmd->add_option("--mode", s.mode, "exact or heuristic")->capture_default_str();
  cmd->add_option("--gap", s.gap, "relative optimality gap")->capture_default_str();
  cmd->add_option("--time-limit", s.time_limit, "seconds per solve")->capture_default_str();
  cmd->add_flag("--verbose", s.verbose, "print branch-and-bound progress");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PV forecast-error analysis and integration-cost toolkit"};
  app.require_subcommand(1);
  int threads = 1;
  std::optional<fs::path> config;
  app.add_option("--threads", threads, "worker threads (1 keeps runs reproducible)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--config", config, "unit-commitment instance file");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic factor-model panel");
  c_synth->add_option("--sites", synth.config.n_sites, "number of sites")->capture_default_str();
  c_synth->add_option("--samples", synth.config.n_samples, "number of (daytime) samples")->capture_default_str();
  c_synth->add_option("--loading", synth.config.common_factor_loading, "common factor loading")->capture_default_str();
  c_synth->add_option("--regional-blocks", synth.config.regional_blocks, "regional factor blocks")->capture_default_str();
  c_synth->add_option("--regional-loading", synth.config.regional_loading, "regional factor loading")
      ->capture_default_str();
  c_synth->add_option("--noise", synth.config.noise_sigma, "idiosyncratic noise scale")->capture_default_str();
  c_synth->add_flag("--diurnal", synth.config.diurnal, "emit a raw load-factor panel with nights");
  c_synth->add_option("--seed", synth.seed, "random seed (required)");
  c_synth->add_option("--out", synth.out, "output CSV")->capture_default_str();

  InstanceArgs instance;
  auto* c_inst = app.add_subcommand("instance", "write a synthetic unit-commitment instance file");
  c_inst->add_option("--size", instance.size, "reduced (10 plants) or full (91 plants)")->capture_default_str();
  c_inst->add_option("--sigma-p", instance.sigma_p, "PV forecast error in MW during PV hours")->capture_default_str();
  c_inst->add_option("--elasticity", instance.elasticity, "demand elasticity (<= 0)")->capture_default_str();
  c_inst->add_option("--seed", instance.seed, "fleet seed (required)");
  c_inst->add_option("--out", instance.out, "output file")->capture_default_str();

  AnalyzeArgs analyze;
  auto* c_an = app.add_subcommand("analyze", "detrend a panel and split its correlation matrix");
  c_an->add_option("--panel", analyze.panel, "panel CSV")->required();
  c_an->add_option("--out", analyze.out, "output directory")->capture_default_str();
  c_an->add_option("--cutoff", analyze.cutoff_hours, "high-pass cutoff period in hours")->capture_default_str();
  c_an->add_option("--day-start", analyze.day_start, "first daytime hour")->capture_default_str();
  c_an->add_option("--day-end", analyze.day_end, "end of daytime (exclusive)")->capture_default_str();
  c_an->add_flag("--keep-night", analyze.keep_night, "skip night removal for raw panels");
  c_an->add_option("--bin-width", analyze.bin_width, "eigenvalue histogram bin width")->capture_default_str();

  ErrorArgs err;
  auto* c_err = app.add_subcommand("error", "estimate the system-wide forecast error per month");
  c_err->add_option("--analysis", err.analysis, "directory written by analyze")->capture_default_str();
  c_err->add_option("--allocation", err.allocation, "CSV site,share (equal shares when omitted)");
  c_err->add_option("--total-mw", err.total_mw, "installed PV capacity in MW")->capture_default_str();
  c_err->add_option("--mean-output", err.mean_output, "CV denominator in MW (default: from the daytime panel)");
  c_err->add_flag("--mc-verify", err.mc_verify, "cross-check the correlated error by Monte Carlo");
  c_err->add_option("--mc-samples", err.mc_samples, "Monte Carlo sample count")->capture_default_str();
  c_err->add_option("--seed", err.seed, "Monte Carlo seed")->capture_default_str();
  c_err->add_option("--out", err.out, "output directory")->capture_default_str();

  ScheduleArgs sched;
  auto* c_sched = app.add_subcommand("schedule", "solve and validate one unit-commitment instance");
  add_solve_flags(c_sched, sched.solve);
  c_sched->add_option("--sigma-p", sched.sigma_p, "override the PV error in MW during PV hours");
  c_sched->add_option("--out", sched.out, "output directory")->capture_default_str();
  c_sched->add_option("--config", config, "unit-commitment instance file");

  CostArgs cost;
  auto* c_cost = app.add_subcommand("cost", "sweep the PV integration cost over sigma_p");
  add_solve_flags(c_cost, cost.solve);
  c_cost->add_option("--grid", cost.grid, "sigma_p values in MW, comma separated, starting at 0");
  c_cost->add_option("--peak-percent", cost.peak_percent, "sigma_p as percent of peak PV, comma separated");
  c_cost->add_option("--cv-grid", cost.cv_grid, "sigma_p as a multiple of mean daytime PV, comma separated");
  c_cost->add_option("--out", cost.out, "output directory")->capture_default_str();
  c_cost->add_option("--config", config, "unit-commitment instance file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kConfig;
  }

  try {
    if (*c_synth) return run_synth(synth);
    if (*c_inst) return run_instance(instance);
    if (*c_an) return run_analyze(analyze);
    if (*c_err) return run_error(err);
    if (*c_sched) return run_schedule(sched, config);
    if (*c_cost) return run_cost(cost, config, threads);
  } catch (const pvint::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const pvint::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  } catch (const pvint::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kConfig;
}
