#include "pvint/csv.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>

#include "pvint/error.hpp"

namespace pvint::csv {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Document read(std::istream& in) {
  Document doc;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      doc.comments.emplace_back(trim(t.substr(1)));
      continue;
    }
    doc.records.push_back({lineno, split(t)});
  }
  return doc;
}

double parse_double(std::string_view s, std::string_view where) {
  s = trim(s);
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(std::string(where) + ": cannot parse number '" + std::string(s) + "'");
  }
  if (std::isnan(v)) throw InputError(std::string(where) + ": NaN value");
  return v;
}

long long parse_int(std::string_view s, std::string_view where) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(std::string(where) + ": cannot parse integer '" + std::string(s) + "'");
  }
  return v;
}

std::string format(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace pvint::csv

namespace pvint::timefmt {

namespace {

int parse_fixed(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
  int v = 0;
  if (pos + len > s.size()) throw InputError("bad timestamp '" + std::string(whole) + "'");
  const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (ec != std::errc{} || ptr != s.data() + pos + len) {
    throw InputError("bad timestamp '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view s) {
  s = csv::trim(s);
  const std::string_view whole = s;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  if (s.size() != 16 && s.size() != 19) throw InputError("bad timestamp '" + std::string(whole) + "'");
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      (s.size() == 19 && s[16] != ':')) {
    throw InputError("bad timestamp '" + std::string(whole) + "'");
  }
  const int year = parse_fixed(s, 0, 4, whole);
  const int month = parse_fixed(s, 5, 2, whole);
  const int day = parse_fixed(s, 8, 2, whole);
  const int hour = parse_fixed(s, 11, 2, whole);
  const int minute = parse_fixed(s, 14, 2, whole);
  const int second = s.size() == 19 ? parse_fixed(s, 17, 2, whole) : 0;
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) {
    throw InputError("bad timestamp '" + std::string(whole) + "'");
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(std::int64_t t) {
  using namespace std::chrono;
  const auto days = static_cast<int>(std::floor(static_cast<double>(t) / 86400.0));
  std::int64_t rem = t - static_cast<std::int64_t>(days) * 86400;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

double hour_of_day(std::int64_t t) {
  std::int64_t rem = t % 86400;
  if (rem < 0) rem += 86400;
  return static_cast<double>(rem) / 3600.0;
}

int month_of(std::int64_t t) {
  using namespace std::chrono;
  const auto days = static_cast<int>(std::floor(static_cast<double>(t) / 86400.0));
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return static_cast<int>(static_cast<unsigned>(ymd.month()));
}

}  // namespace pvint::timefmt
