#include "signalcast/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "signalcast/error.hpp"

namespace signalcast {
namespace {

namespace chr = std::chrono;

int parse_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  if (pos + len > text.size()) throw_input("truncated timestamp '" + std::string(whole) + "'");
  int v = 0;
  const char* b = text.data() + pos;
  auto [ptr, ec] = std::from_chars(b, b + len, v);
  if (ec != std::errc{} || ptr != b + len) {
    throw_input("malformed timestamp '" + std::string(whole) + "'");
  }
  return v;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) {
    throw_input("malformed timestamp '" + std::string(whole) + "'");
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Instant parse_instant(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);

  const int year = parse_int(text, 0, 4, whole);
  expect(text, 4, '-', whole);
  const int month = parse_int(text, 5, 2, whole);
  expect(text, 7, '-', whole);
  const int day = parse_int(text, 8, 2, whole);

  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) throw_input("invalid calendar date in '" + std::string(whole) + "'");
  std::int64_t secs = static_cast<std::int64_t>(chr::sys_days{ymd}.time_since_epoch().count()) * kSecondsPerDay;

  if (text.size() == 10) return Instant{secs};

  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
    throw_input("malformed timestamp '" + std::string(whole) + "'");
  }
  const int hh = parse_int(text, 11, 2, whole);
  expect(text, 13, ':', whole);
  const int mm = parse_int(text, 14, 2, whole);
  expect(text, 16, ':', whole);
  const int ss = parse_int(text, 17, 2, whole);
  if (hh > 23 || mm > 59 || ss > 60) throw_input("time of day out of range in '" + std::string(whole) + "'");
  secs += hh * 3600 + mm * 60 + ss;

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  if (pos == text.size()) throw_input("timestamp without UTC offset '" + std::string(whole) + "'");
  if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) throw_input("trailing characters in timestamp '" + std::string(whole) + "'");
    return Instant{secs};
  }
  if (text[pos] != '+' && text[pos] != '-') throw_input("malformed UTC offset in '" + std::string(whole) + "'");
  const int sign = text[pos] == '+' ? 1 : -1;
  const int oh = parse_int(text, pos + 1, 2, whole);
  expect(text, pos + 3, ':', whole);
  const int om = parse_int(text, pos + 4, 2, whole);
  if (pos + 6 != text.size()) throw_input("trailing characters in timestamp '" + std::string(whole) + "'");
  secs -= sign * (oh * 3600 + om * 60);
  return Instant{secs};
}

std::string format_instant(Instant t) {
  const std::int64_t days = floor_div(t.seconds, kSecondsPerDay);
  const std::int64_t rem = t.seconds - days * kSecondsPerDay;
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  return buf;
}

Duration parse_duration(std::string_view text) {
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  std::int64_t n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr == text.data()) throw_config("malformed duration '" + std::string(text) + "'");
  const std::string_view unit(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr));
  if (n <= 0) throw_config("duration must be positive: '" + std::string(text) + "'");
  if (unit == "s") return Duration::from_seconds(n);
  if (unit == "min") return Duration::from_seconds(n * 60);
  if (unit == "h" || unit == "hr") return Duration::from_hours(n);
  if (unit == "d") return Duration::from_days(n);
  if (unit == "w") return Duration::from_days(7 * n);
  if (unit == "m" || unit == "mo") return Duration::from_months(static_cast<std::int32_t>(n));
  if (unit == "y") return Duration::from_months(static_cast<std::int32_t>(12 * n));
  throw_config("unknown duration unit in '" + std::string(text) + "'");
}

std::string format_duration(const Duration& d) {
  std::string out;
  if (d.months > 0) {
    out = std::to_string(d.months) + "m";
    if (d.seconds == 0) return out;
    out += "+";
  }
  const std::int64_t s = d.seconds;
  if (s % (7 * kSecondsPerDay) == 0) return out + std::to_string(s / (7 * kSecondsPerDay)) + "w";
  if (s % kSecondsPerDay == 0 && s >= 3 * kSecondsPerDay) return out + std::to_string(s / kSecondsPerDay) + "d";
  if (s % 3600 == 0) return out + std::to_string(s / 3600) + "h";
  if (s % 60 == 0) return out + std::to_string(s / 60) + "min";
  return out + std::to_string(s) + "s";
}

Instant add_months(Instant t, std::int32_t n) {
  if (n == 0) return t;
  const std::int64_t days = floor_div(t.seconds, kSecondsPerDay);
  const std::int64_t rem = t.seconds - days * kSecondsPerDay;
  const chr::year_month_day ymd{chr::sys_days{chr::days{days}}};
  const chr::year_month shifted = chr::year_month{ymd.year(), ymd.month()} + chr::months{n};
  const chr::day last = chr::year_month_day_last{shifted.year(), chr::month_day_last{shifted.month()}}.day();
  const chr::day dd = ymd.day() > last ? last : ymd.day();
  const chr::sys_days out{chr::year_month_day{shifted.year(), shifted.month(), dd}};
  return Instant{static_cast<std::int64_t>(out.time_since_epoch().count()) * kSecondsPerDay + rem};
}

Instant operator+(Instant t, const Duration& d) {
  return Instant{add_months(t, d.months).seconds + d.seconds};
}

Instant operator-(Instant t, const Duration& d) {
  return Instant{add_months(t, -d.months).seconds - d.seconds};
}

std::int64_t span_seconds_before(Instant anchor, const Duration& d) {
  return anchor.seconds - (anchor - d).seconds;
}

}  // namespace signalcast
