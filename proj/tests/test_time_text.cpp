#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "signalcast/error.hpp"
#include "signalcast/parallel.hpp"
#include "signalcast/rng.hpp"
#include "signalcast/text.hpp"
#include "signalcast/time.hpp"

using namespace signalcast;

TEST(Time, ParsesDateAndRfc3339) {
  EXPECT_EQ(parse_instant("1970-01-01").seconds, 0);
  EXPECT_EQ(parse_instant("2016-04-01T00:00:00Z").seconds, 1459468800);
  EXPECT_EQ(parse_instant("2016-04-01T02:00:00+02:00").seconds, 1459468800);
  EXPECT_EQ(parse_instant("2016-03-31T19:00:00-05:00").seconds, 1459468800);
  EXPECT_EQ(parse_instant("2016-04-01T00:00:00.750Z").seconds, 1459468800);
}

TEST(Time, RejectsMalformedTimestamps) {
  EXPECT_THROW(parse_instant("2016-13-01"), Error);
  EXPECT_THROW(parse_instant("2016-02-30"), Error);
  EXPECT_THROW(parse_instant("2016-04-01T00:00:00"), Error);
  EXPECT_THROW(parse_instant("yesterday"), Error);
  EXPECT_THROW(parse_instant("2016-04-01T25:00:00Z"), Error);
}

TEST(Time, FormatRoundTrips) {
  for (std::int64_t t : {0LL, 1459468800LL, 1459468800LL + 3723, 951782400LL}) {
    EXPECT_EQ(parse_instant(format_instant(Instant{t})).seconds, t);
  }
  EXPECT_EQ(format_instant(Instant{1459468800 + 3723}), "2016-04-01T01:02:03Z");
}

TEST(Time, DurationsParseAndFormatCanonically) {
  EXPECT_EQ(parse_duration("6h"), Duration::from_hours(6));
  EXPECT_EQ(parse_duration("12hr"), Duration::from_hours(12));
  EXPECT_EQ(parse_duration("3d"), Duration::from_days(3));
  EXPECT_EQ(parse_duration("1w"), Duration::from_days(7));
  EXPECT_EQ(parse_duration("1m"), Duration::from_months(1));
  EXPECT_EQ(parse_duration("1y"), Duration::from_months(12));
  EXPECT_EQ(parse_duration("90min"), Duration::from_seconds(5400));
  for (const char* s : {"6h", "12h", "24h", "48h", "3d", "1w", "1m", "3m", "6m"}) {
    EXPECT_EQ(format_duration(parse_duration(s)), s);
  }
  EXPECT_THROW(parse_duration("0h"), Error);
  EXPECT_THROW(parse_duration("-3d"), Error);
  EXPECT_THROW(parse_duration("3 fortnights"), Error);
  EXPECT_THROW(parse_duration("h"), Error);
}

TEST(Time, CalendarMonthsClampDayOfMonth) {
  EXPECT_EQ(format_instant(parse_instant("2016-03-31") - Duration::from_months(1)), "2016-02-29T00:00:00Z");
  EXPECT_EQ(format_instant(parse_instant("2015-03-31") - Duration::from_months(1)), "2015-02-28T00:00:00Z");
  EXPECT_EQ(format_instant(parse_instant("2016-04-01T06:00:00Z") - Duration::from_months(6)),
            "2015-10-01T06:00:00Z");
  EXPECT_EQ(format_instant(add_months(parse_instant("2016-01-31"), 13)), "2017-02-28T00:00:00Z");
  EXPECT_EQ(span_seconds_before(parse_instant("2016-03-01"), Duration::from_months(1)), 29 * kSecondsPerDay);
}

TEST(Text, SplitTrimJoin) {
  const auto parts = text::split("a,,b", ',');
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(text::trim("  x \t"), "x");
  EXPECT_EQ(text::join({"a", "b"}, ";"), "a;b");
}

TEST(Text, DoubleFormattingRoundTrips) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.below(20)) - 10);
    EXPECT_EQ(text::parse_double(text::format_double(v), "test"), v);
  }
  EXPECT_THROW(text::parse_double("1.5x", "ctx"), Error);
  EXPECT_THROW(text::parse_int("", "ctx"), Error);
  EXPECT_TRUE(text::parse_bool("true", "ctx"));
  EXPECT_FALSE(text::parse_bool("0", "ctx"));
}

TEST(Rng, SeedDerivationAndDraws) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 2, 3), derive_seed(5, 2, 3));
  Rng a(11), b(11);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.below(17), b.below(17));
  Rng r(4);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
  double ps = 0;
  for (int i = 0; i < n; ++i) ps += static_cast<double>(r.poisson(3.5));
  EXPECT_NEAR(ps / n, 3.5, 0.1);
  double big = 0;
  for (int i = 0; i < 2000; ++i) big += static_cast<double>(r.poisson(800.0));
  EXPECT_NEAR(big / 2000, 800.0, 3.0);
  EXPECT_EQ(r.poisson(0.0), 0u);
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (unsigned workers : {1u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 7");
  }
}
