#include "pvint/panel_io.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "pvint/csv.hpp"
#include "pvint/error.hpp"

namespace pvint {

namespace {

void write_rows(std::ostream& out, const std::vector<std::string>& sites,
                const std::vector<std::int64_t>& stamps, const Eigen::MatrixXd& values) {
  out << "timestamp";
  for (const auto& s : sites) out << ',' << s;
  out << '\n';
  for (Eigen::Index t = 0; t < values.cols(); ++t) {
    out << timefmt::format_iso8601(stamps[static_cast<std::size_t>(t)]);
    for (Eigen::Index i = 0; i < values.rows(); ++i) out << ',' << csv::format(values(i, t));
    out << '\n';
  }
}

}  // namespace

PanelFile read_panel_file(std::istream& in) {
  const auto doc = csv::read(in);
  PanelFile file;
  auto& panel = file.panel;
  for (const auto& c : doc.comments) {
    if (c.rfind("detrended", 0) == 0) {
      const auto pos = c.find("cutoff=");
      if (pos == std::string::npos) throw InputError("detrended header lacks cutoff=<hours>");
      file.detrended_cutoff = csv::parse_double(c.substr(pos + 7), "detrended header");
    } else if (c == "basis=absolute-mw") {
      panel.basis = CapacityBasis::absolute_mw;
    } else if (c == "basis=fluctuation") {
      panel.basis = CapacityBasis::fluctuation;
    }
  }
  if (file.detrended_cutoff) panel.basis = CapacityBasis::fluctuation;
  if (doc.records.empty()) throw InputError("panel file is empty");

  const auto& header = doc.records.front();
  if (header.fields.size() < 2) throw InputError("panel header must list at least one site");
  panel.sites.assign(header.fields.begin() + 1, header.fields.end());
  const auto n = panel.sites.size();
  const auto len = doc.records.size() - 1;
  panel.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(len));
  panel.timestamps.reserve(len);

  for (std::size_t r = 1; r < doc.records.size(); ++r) {
    const auto& rec = doc.records[r];
    const std::string where = "row " + std::to_string(r) + " (line " + std::to_string(rec.line) + ")";
    if (rec.fields.size() != n + 1) {
      throw InputError(where + ": expected " + std::to_string(n + 1) + " fields, found " +
                       std::to_string(rec.fields.size()));
    }
    panel.timestamps.push_back(timefmt::parse_iso8601(rec.fields[0]));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& cell = rec.fields[i + 1];
      const std::string loc = where + ", column " + std::to_string(i + 2);
      if (cell.empty()) throw InputError(loc + ": missing value");
      panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r - 1)) =
          csv::parse_double(cell, loc);
    }
  }
  for (std::size_t t = 1; t < panel.timestamps.size(); ++t) {
    if (panel.timestamps[t] <= panel.timestamps[t - 1]) {
      throw InputError("row " + std::to_string(t + 1) + ": timestamps not strictly increasing");
    }
  }
  std::int64_t step = std::numeric_limits<std::int64_t>::max();
  for (std::size_t t = 1; t < panel.timestamps.size(); ++t)
    step = std::min(step, panel.timestamps[t] - panel.timestamps[t - 1]);
  panel.sample_hours = panel.timestamps.size() > 1 ? static_cast<double>(step) / 3600.0 : 1.0;
  panel.validate();
  return file;
}

PanelFile read_panel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_panel_file(in);
}

PanelSeries load_panel(const std::filesystem::path& path) {
  auto file = read_panel_file(path);
  if (file.detrended_cutoff) throw InputError(path.string() + " holds a detrended panel");
  return std::move(file.panel);
}

DetrendedSeries load_detrended(const std::filesystem::path& path) {
  auto file = read_panel_file(path);
  if (!file.detrended_cutoff) throw InputError(path.string() + " lacks a detrended header");
  auto series = as_fluctuation(file.panel);
  series.cutoff_hours = *file.detrended_cutoff;
  return series;
}

void write_panel(std::ostream& out, const PanelSeries& panel) {
  if (panel.basis == CapacityBasis::absolute_mw) out << "# basis=absolute-mw\n";
  if (panel.basis == CapacityBasis::fluctuation) out << "# basis=fluctuation\n";
  write_rows(out, panel.sites, panel.timestamps, panel.values);
}

void write_detrended(std::ostream& out, const DetrendedSeries& series) {
  out << "# detrended cutoff=" << csv::format(series.cutoff_hours) << '\n';
  write_rows(out, series.sites, series.timestamps, series.values);
}

}  // namespace pvint
