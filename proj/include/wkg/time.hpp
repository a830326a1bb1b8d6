#pragma once
// ISO-8601 rendering of simulation timestamps (seconds since a run epoch).

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "wkg/error.hpp"

namespace wkg {

inline constexpr std::string_view kDefaultEpoch = "2024-01-01T08:00:00Z";

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t y;
  unsigned m;
  unsigned d;
};

constexpr Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

}  // namespace detail

// Parses "YYYY-MM-DDTHH:MM:SS[.fff...]Z" into Unix seconds.
inline double parse_iso8601(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  char tail = 0;
  const std::string buf(text);
  if (std::sscanf(buf.c_str(), "%d-%d-%dT%d:%d:%lf%c", &y, &mo, &d, &h, &mi, &s, &tail) < 6 ||
      (tail != 0 && tail != 'Z') || mo < 1 || mo > 12 || d < 1 || d > 31)
    throw Error(ErrorCode::ParseFailure, "not an ISO-8601 UTC timestamp: '" + buf + "'");
  const auto days = detail::days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return static_cast<double>(days * 86400 + h * 3600 + mi * 60) + s;
}

// Renders Unix seconds as "YYYY-MM-DDTHH:MM:SS.ffffffZ".
inline std::string format_iso8601(double unix_seconds) {
  const double whole = std::floor(unix_seconds);
  auto micros = static_cast<std::int64_t>(std::llround((unix_seconds - whole) * 1e6));
  auto secs = static_cast<std::int64_t>(whole);
  if (micros >= 1000000) {
    micros -= 1000000;
    ++secs;
  }
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const auto c = detail::civil_from_days(days);
  char out[64];
  std::snprintf(out, sizeof out, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                static_cast<long long>(c.y), c.m, c.d, static_cast<long long>(rem / 3600),
                static_cast<long long>(rem % 3600 / 60), static_cast<long long>(rem % 60),
                static_cast<long long>(micros));
  return out;
}

// Timestamp renderer anchored at a run epoch.
class Clock {
 public:
  explicit Clock(std::string_view epoch = kDefaultEpoch) : epoch_(parse_iso8601(epoch)) {}
  std::string iso(double sim_seconds) const { return format_iso8601(epoch_ + sim_seconds); }
  double seconds(std::string_view iso_text) const { return parse_iso8601(iso_text) - epoch_; }

 private:
  double epoch_;
};

// Shortest representation that round-trips.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace wkg
