#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"
#include "pvint/unitcommit.hpp"

namespace pvint::uc {

namespace {

using csv::format;

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

bool parse_bool(std::string_view s, const std::string& where) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw InputError(where + ": expected true or false, got '" + std::string(s) + "'");
}

struct KeyValues {
  std::map<std::string, std::pair<std::string, std::size_t>> entries;

  void add(std::string_view key, std::string_view value, std::size_t line) {
    const std::string k(key);
    if (entries.count(k)) throw InputError(at_line(line) + ": duplicate key '" + k + "'");
    entries[k] = {std::string(value), line};
  }

  template <typename F>
  void take(const std::string& key, F&& apply) {
    auto it = entries.find(key);
    if (it == entries.end()) return;
    apply(it->second.first, at_line(it->second.second) + " (" + key + ")");
    entries.erase(it);
  }

  void reject_unknown(const std::string& section) const {
    if (entries.empty()) return;
    const auto& [key, v] = *entries.begin();
    throw InputError(at_line(v.second) + ": unknown key '" + key + "' in [" + section + "]");
  }
};

struct Sections {
  std::map<std::string, KeyValues> kv;
  std::map<std::string, std::vector<csv::Record>> rows;
  std::map<std::string, std::size_t> header_line;
};

const std::vector<std::string> kSeriesColumns{"t", "demand", "wind", "pv", "sigma_d", "sigma_w", "sigma_p"};
const std::vector<std::string> kPlantColumns{"id",        "type",      "p_min",      "p_max",
                                             "ramp_up",   "ramp_down", "min_up",     "min_down",
                                             "start_cost", "fuel_cost", "initial_on", "initial_output"};

Sections split_sections(std::istream& in) {
  Sections out;
  std::string current;
  std::string raw;
  std::size_t line = 0;
  bool header_pending = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = csv::trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw InputError(at_line(line) + ": malformed section header");
      current = std::string(csv::trim(text.substr(1, text.size() - 2)));
      if (current != "scenario" && current != "series" && current != "plants" && current != "hydro" &&
          current != "ladder") {
        throw InputError(at_line(line) + ": unknown section [" + current + "]");
      }
      if (out.header_line.count(current)) throw InputError(at_line(line) + ": duplicate section [" + current + "]");
      out.header_line[current] = line;
      header_pending = current == "series" || current == "plants";
      continue;
    }
    if (current.empty()) throw InputError(at_line(line) + ": content before the first section");
    if (current == "series" || current == "plants") {
      const auto fields = csv::split(text);
      if (header_pending) {
        const auto& expect = current == "series" ? kSeriesColumns : kPlantColumns;
        std::vector<std::string> got;
        for (const auto& f : fields) got.emplace_back(csv::trim(f));
        if (got != expect) throw InputError(at_line(line) + ": unexpected [" + current + "] header");
        header_pending = false;
        continue;
      }
      csv::Record rec;
      rec.line = line;
      for (const auto& f : fields) rec.fields.emplace_back(csv::trim(f));
      out.rows[current].push_back(std::move(rec));
    } else {
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) throw InputError(at_line(line) + ": expected key = value");
      out.kv[current].add(csv::trim(text.substr(0, eq)), csv::trim(text.substr(eq + 1)), line);
    }
  }
  for (const char* required : {"scenario", "series", "plants"}) {
    if (!out.header_line.count(required)) throw InputError(std::string("missing section [") + required + "]");
  }
  return out;
}

}  // namespace

Instance read_instance(std::istream& in) {
  Sections sec = split_sections(in);
  Instance inst;
  Scenario& sc = inst.scenario;

  KeyValues& s = sec.kv["scenario"];
  bool have_horizon = false;
  s.take("horizon", [&](const std::string& v, const std::string& w) {
    sc.horizon = static_cast<int>(csv::parse_int(v, w));
    have_horizon = true;
  });
  s.take("step_hours", [&](const std::string& v, const std::string& w) { sc.step_hours = csv::parse_double(v, w); });
  s.take("alpha_quantile",
         [&](const std::string& v, const std::string& w) { sc.alpha_quantile = csv::parse_double(v, w); });
  s.take("baseload", [&](const std::string& v, const std::string& w) { sc.baseload = csv::parse_double(v, w); });
  s.take("conservation_tol",
         [&](const std::string& v, const std::string& w) { sc.conservation_tol = csv::parse_double(v, w); });
  s.take("enforce_end_storage",
         [&](const std::string& v, const std::string& w) { sc.enforce_end_storage = parse_bool(v, w); });
  s.take("enforce_initial_ramp",
         [&](const std::string& v, const std::string& w) { sc.enforce_initial_ramp = parse_bool(v, w); });
  s.reject_unknown("scenario");
  if (!have_horizon) throw InputError("[scenario] is missing horizon");
  if (sc.horizon < 1) throw InputError("[scenario] horizon must be at least 1");

  const auto& series = sec.rows["series"];
  if (static_cast<int>(series.size()) != sc.horizon) {
    throw InputError("[series] has " + std::to_string(series.size()) + " rows, horizon is " +
                     std::to_string(sc.horizon));
  }
  for (Eigen::VectorXd* v : {&sc.demand, &sc.wind, &sc.pv, &sc.sigma_d, &sc.sigma_w, &sc.sigma_p})
    v->resize(sc.horizon);
  for (int t = 0; t < sc.horizon; ++t) {
    const auto& rec = series[static_cast<std::size_t>(t)];
    const std::string w = at_line(rec.line);
    if (rec.fields.size() != kSeriesColumns.size()) throw InputError(w + ": expected 7 fields");
    if (csv::parse_int(rec.fields[0], w) != t) throw InputError(w + ": steps must be numbered 0..T-1 in order");
    sc.demand(t) = csv::parse_double(rec.fields[1], w);
    sc.wind(t) = csv::parse_double(rec.fields[2], w);
    sc.pv(t) = csv::parse_double(rec.fields[3], w);
    sc.sigma_d(t) = csv::parse_double(rec.fields[4], w);
    sc.sigma_w(t) = csv::parse_double(rec.fields[5], w);
    sc.sigma_p(t) = csv::parse_double(rec.fields[6], w);
  }

  for (const auto& rec : sec.rows["plants"]) {
    const std::string w = at_line(rec.line);
    if (rec.fields.size() != kPlantColumns.size()) throw InputError(w + ": expected 12 fields");
    ThermalPlant pl;
    pl.id = rec.fields[0];
    pl.type = rec.fields[1];
    pl.p_min = csv::parse_double(rec.fields[2], w);
    pl.p_max = csv::parse_double(rec.fields[3], w);
    pl.ramp_up = csv::parse_double(rec.fields[4], w);
    pl.ramp_down = csv::parse_double(rec.fields[5], w);
    pl.min_up = static_cast<int>(csv::parse_int(rec.fields[6], w));
    pl.min_down = static_cast<int>(csv::parse_int(rec.fields[7], w));
    pl.start_cost = csv::parse_double(rec.fields[8], w);
    pl.fuel_cost = csv::parse_double(rec.fields[9], w);
    pl.initial_on = parse_bool(rec.fields[10], w);
    pl.initial_output = csv::parse_double(rec.fields[11], w);
    inst.plants.push_back(std::move(pl));
  }

  if (sec.kv.count("hydro")) {
    KeyValues& h = sec.kv["hydro"];
    PumpedHydro& hy = inst.hydro;
    h.take("c_min", [&](const std::string& v, const std::string& w) { hy.c_min = csv::parse_double(v, w); });
    h.take("c_max", [&](const std::string& v, const std::string& w) { hy.c_max = csv::parse_double(v, w); });
    h.take("r_min", [&](const std::string& v, const std::string& w) { hy.r_min = csv::parse_double(v, w); });
    h.take("r_max", [&](const std::string& v, const std::string& w) { hy.r_max = csv::parse_double(v, w); });
    h.take("efficiency", [&](const std::string& v, const std::string& w) { hy.efficiency = csv::parse_double(v, w); });
    h.take("initial_storage",
           [&](const std::string& v, const std::string& w) { hy.initial_storage = csv::parse_double(v, w); });
    h.reject_unknown("hydro");
  }

  if (sec.kv.count("ladder")) {
    KeyValues& l = sec.kv["ladder"];
    DemandResponseLadder& lad = inst.ladder;
    l.take("mean_price", [&](const std::string& v, const std::string& w) { lad.mean_price = csv::parse_double(v, w); });
    l.take("elasticity", [&](const std::string& v, const std::string& w) { lad.elasticity = csv::parse_double(v, w); });
    l.take("levels", [&](const std::string& v, const std::string& w) {
      if (csv::trim(v).empty()) return;
      for (const auto& f : csv::split(v)) lad.levels.push_back(csv::parse_double(csv::trim(f), w));
    });
    l.reject_unknown("ladder");
  }

  inst.validate();
  return inst;
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst) {
  const Scenario& sc = inst.scenario;
  out << "[scenario]\n"
      << "horizon = " << sc.horizon << '\n'
      << "step_hours = " << format(sc.step_hours) << '\n'
      << "alpha_quantile = " << format(sc.alpha_quantile) << '\n'
      << "baseload = " << format(sc.baseload) << '\n'
      << "conservation_tol = " << format(sc.conservation_tol) << '\n'
      << "enforce_end_storage = " << (sc.enforce_end_storage ? "true" : "false") << '\n'
      << "enforce_initial_ramp = " << (sc.enforce_initial_ramp ? "true" : "false") << "\n\n";

  out << "[series]\n";
  for (std::size_t k = 0; k < kSeriesColumns.size(); ++k) out << (k ? "," : "") << kSeriesColumns[k];
  out << '\n';
  for (int t = 0; t < sc.horizon; ++t) {
    out << t << ',' << format(sc.demand(t)) << ',' << format(sc.wind(t)) << ',' << format(sc.pv(t)) << ','
        << format(sc.sigma_d(t)) << ',' << format(sc.sigma_w(t)) << ',' << format(sc.sigma_p(t)) << '\n';
  }

  out << "\n[plants]\n";
  for (std::size_t k = 0; k < kPlantColumns.size(); ++k) out << (k ? "," : "") << kPlantColumns[k];
  out << '\n';
  for (const auto& pl : inst.plants) {
    out << pl.id << ',' << pl.type << ',' << format(pl.p_min) << ',' << format(pl.p_max) << ','
        << format(pl.ramp_up) << ',' << format(pl.ramp_down) << ',' << pl.min_up << ',' << pl.min_down << ','
        << format(pl.start_cost) << ',' << format(pl.fuel_cost) << ',' << (pl.initial_on ? "true" : "false")
        << ',' << format(pl.initial_output) << '\n';
  }

  const PumpedHydro& hy = inst.hydro;
  out << "\n[hydro]\n"
      << "c_min = " << format(hy.c_min) << '\n'
      << "c_max = " << format(hy.c_max) << '\n'
      << "r_min = " << format(hy.r_min) << '\n'
      << "r_max = " << format(hy.r_max) << '\n'
      << "efficiency = " << format(hy.efficiency) << '\n'
      << "initial_storage = " << format(hy.initial_storage) << '\n';

  const DemandResponseLadder& lad = inst.ladder;
  out << "\n[ladder]\n"
      << "mean_price = " << format(lad.mean_price) << '\n'
      << "elasticity = " << format(lad.elasticity) << '\n'
      << "levels = ";
  for (std::size_t l = 0; l < lad.levels.size(); ++l) out << (l ? "," : "") << format(lad.levels[l]);
  out << '\n';
}

void write_schedule(std::ostream& out, const Schedule& s, const Instance& inst) {
  const int nt = inst.horizon();
  out << "entity,kind,t,u,z,p_mw,h_mw,price\n";
  for (int i = 0; i < inst.n_plants(); ++i) {
    const auto& pl = inst.plants[static_cast<std::size_t>(i)];
    for (int t = 0; t < nt; ++t) {
      out << pl.id << ',' << pl.type << ',' << t << ',' << format(s.u(i, t)) << ',' << format(s.z(i, t)) << ','
          << format(s.p(i, t)) << ",0,\n";
    }
  }
  if (inst.hydro.present()) {
    for (int t = 0; t < nt; ++t) {
      out << "hydro,PSH," << t << ',' << format(s.v(t)) << ",0," << format(s.g(t)) << ',' << format(s.h(t))
          << ",\n";
    }
  }
  const Eigen::VectorXd demand = effective_demand(inst.scenario, inst.ladder, s.w);
  for (int t = 0; t < nt; ++t) {
    int level = 0;
    double price = inst.ladder.mean_price;
    if (inst.ladder.present()) {
      Eigen::Index l = 0;
      s.w.col(t).maxCoeff(&l);
      level = static_cast<int>(l) + 1;
      price = inst.ladder.levels[static_cast<std::size_t>(l)];
    }
    out << "demand,DR," << t << ',' << level << ",0," << format(demand(t)) << ",0," << format(price) << '\n';
  }
}

void write_stacked_generation(std::ostream& out, const Schedule& s, const Instance& inst) {
  std::vector<std::string> types;
  for (const auto& pl : inst.plants)
    if (std::find(types.begin(), types.end(), pl.type) == types.end()) types.push_back(pl.type);
  const Scenario& sc = inst.scenario;
  const Eigen::VectorXd demand = effective_demand(sc, inst.ladder, s.w);
  const Eigen::VectorXd reserve = required_reserve(sc);
  out << "t,baseload";
  for (const auto& ty : types) out << ',' << ty;
  out << ",wind,pv,hydro_discharge,hydro_charge,demand,reserve_required\n";
  for (int t = 0; t < sc.horizon; ++t) {
    out << t << ',' << format(sc.baseload);
    for (const auto& ty : types) {
      double sum = 0.0;
      for (int i = 0; i < inst.n_plants(); ++i)
        if (inst.plants[static_cast<std::size_t>(i)].type == ty) sum += s.p(i, t);
      out << ',' << format(sum);
    }
    const double g = inst.hydro.present() ? s.g(t) : 0.0;
    const double h = inst.hydro.present() ? s.h(t) : 0.0;
    out << ',' << format(sc.wind(t)) << ',' << format(sc.pv(t)) << ',' << format(g) << ',' << format(h) << ','
        << format(demand(t)) << ',' << format(reserve(t)) << '\n';
  }
}

}  // namespace pvint::uc
