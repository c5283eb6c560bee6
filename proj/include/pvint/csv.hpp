#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pvint::csv {

/// One parsed record plus the 1-based line it came from.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Comma-separated, no quoting, UTF-8. Lines starting with '#' are comments;
/// blank lines are skipped. Comments are collected so callers can read headers.
struct Document {
  std::vector<std::string> comments;
  std::vector<Record> records;
};

[[nodiscard]] Document read(std::istream& in);
[[nodiscard]] std::vector<std::string> split(std::string_view line, char sep = ',');
[[nodiscard]] std::string_view trim(std::string_view s);

/// Strict number parse; throws InputError naming `where` on failure or NaN.
[[nodiscard]] double parse_double(std::string_view s, std::string_view where);
[[nodiscard]] long long parse_int(std::string_view s, std::string_view where);

/// Shortest round-trip representation of a double ("%.17g" trimmed by std::to_chars).
[[nodiscard]] std::string format(double v);

}  // namespace pvint::csv

namespace pvint::timefmt {

/// Parses "YYYY-MM-DDTHH:MM[:SS][Z]" (a space may replace 'T') into seconds
/// since 1970-01-01 treating the wall clock as UTC.
[[nodiscard]] std::int64_t parse_iso8601(std::string_view s);
[[nodiscard]] std::string format_iso8601(std::int64_t epoch_seconds);
[[nodiscard]] double hour_of_day(std::int64_t epoch_seconds);
/// 1..12
[[nodiscard]] int month_of(std::int64_t epoch_seconds);

}  // namespace pvint::timefmt
