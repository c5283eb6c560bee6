#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pvint/timeseries.hpp"

namespace pvint {

/// Panel CSV: header `timestamp,<site>,<site>,...`, one row per ISO-8601 timestamp.
/// Optional leading comments: `# basis=absolute-mw` and, for de-trended panels,
/// `# detrended cutoff=<hours>`.
struct PanelFile {
  PanelSeries panel;
  std::optional<double> detrended_cutoff;
};

[[nodiscard]] PanelFile read_panel_file(std::istream& in);
[[nodiscard]] PanelFile read_panel_file(const std::filesystem::path& path);

/// Loads a raw panel and validates it; rejects files carrying a detrended header.
[[nodiscard]] PanelSeries load_panel(const std::filesystem::path& path);

/// Loads a detrended (or fluctuation) panel written by write_detrended.
[[nodiscard]] DetrendedSeries load_detrended(const std::filesystem::path& path);

void write_panel(std::ostream& out, const PanelSeries& panel);
void write_detrended(std::ostream& out, const DetrendedSeries& series);

}  // namespace pvint
