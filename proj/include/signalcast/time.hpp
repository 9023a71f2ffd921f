#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace signalcast {

/// A UTC instant with second resolution (seconds since the Unix epoch).
struct Instant {
  std::int64_t seconds = 0;

  auto operator<=>(const Instant&) const = default;
};

/// A positive span of time made of a calendar part (months) and a fixed part
/// (seconds). Months are applied first, with day-of-month clamping.
struct Duration {
  std::int32_t months = 0;
  std::int64_t seconds = 0;

  bool operator==(const Duration&) const = default;

  bool positive() const { return months >= 0 && seconds >= 0 && (months > 0 || seconds > 0); }
  bool is_fixed() const { return months == 0; }

  static Duration from_seconds(std::int64_t s) { return Duration{0, s}; }
  static Duration from_hours(std::int64_t h) { return Duration{0, h * 3600}; }
  static Duration from_days(std::int64_t d) { return Duration{0, d * 86400}; }
  static Duration from_months(std::int32_t m) { return Duration{m, 0}; }
};

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Parses "2016-04-01T00:00:00Z", "2016-04-01T02:00:00+02:00" or "2016-04-01".
/// Fractional seconds are truncated. Throws Error(kInput) on malformed text.
Instant parse_instant(std::string_view text);

/// RFC 3339 in UTC, e.g. "2016-04-01T00:00:00Z".
std::string format_instant(Instant t);

/// Parses "6h", "12hr", "3d", "1w", "1m" (calendar month), "90min", "30s",
/// "1y". Throws Error(kConfig) for unknown units or non-positive values.
Duration parse_duration(std::string_view text);

/// Canonical short label: "6h", "48h", "3d", "1w", "1m", ...
std::string format_duration(const Duration& d);

/// t + n calendar months; the day of month is clamped to the target month.
Instant add_months(Instant t, std::int32_t n);

Instant operator+(Instant t, const Duration& d);
Instant operator-(Instant t, const Duration& d);

/// Total ordering helper for durations sharing an anchor (used to find the
/// longest lookback). Compares the spans measured back from `anchor`.
std::int64_t span_seconds_before(Instant anchor, const Duration& d);

}  // namespace signalcast
