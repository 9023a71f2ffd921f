#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "signalcast/error.hpp"
#include "signalcast/kmeans.hpp"
#include "signalcast/resampling.hpp"
#include "test_support.hpp"

using namespace signalcast;
using namespace signalcast::testing;

namespace {

/// Majority rows then minority rows, each drawn from its own blob.
WeightedDataset blobs(std::uint64_t seed, std::size_t maj, std::size_t min, double min_center, double min_sd) {
  Rng rng(seed);
  std::vector<InstanceRow> rows;
  for (std::size_t i = 0; i < maj; ++i) rows.push_back({{rng.normal(), rng.normal()}, 0, 1.0});
  for (std::size_t i = 0; i < min; ++i) {
    rows.push_back({{min_center + min_sd * rng.normal(), min_center + min_sd * rng.normal()}, 1, 1.0});
  }
  return WeightedDataset(names(2), std::move(rows));
}

bool on_some_segment(const std::vector<double>& s, const std::vector<const InstanceRow*>& minority) {
  for (const auto* a : minority) {
    for (const auto* b : minority) {
      if (a == b) continue;
      bool ok = true;
      std::optional<double> t;
      for (std::size_t c = 0; c < s.size() && ok; ++c) {
        const double lo = std::min(a->features[c], b->features[c]), hi = std::max(a->features[c], b->features[c]);
        if (s[c] < lo - 1e-12 || s[c] > hi + 1e-12) ok = false;
        const double d = b->features[c] - a->features[c];
        if (std::abs(d) > 1e-9) {
          const double tc = (s[c] - a->features[c]) / d;
          if (t && std::abs(*t - tc) > 1e-9) ok = false;
          t = tc;
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

TEST(KMeans, RecoversSeparatedBlobs) {
  Rng rng(1);
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({rng.normal() * 0.3, rng.normal() * 0.3});
  for (int i = 0; i < 40; ++i) pts.push_back({10 + rng.normal() * 0.3, 10 + rng.normal() * 0.3});
  const auto res = kmeans(pts, 2, 3, 100);
  for (int i = 1; i < 40; ++i) EXPECT_EQ(res.assignments[i], res.assignments[0]);
  for (int i = 41; i < 80; ++i) EXPECT_EQ(res.assignments[i], res.assignments[40]);
  EXPECT_NE(res.assignments[0], res.assignments[40]);
}

TEST(KMeans, KEqualsNAndDuplicates) {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 5}, {7, 7}};
  const auto res = kmeans(pts, 4, 9, 50);
  std::vector<Point> c = res.centroids;
  std::sort(c.begin(), c.end());
  std::vector<Point> expect = pts;
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(c, expect);

  const std::vector<Point> dup{{2, 2}, {2, 2}, {2, 2}, {9, 9}};
  const auto r2 = kmeans(dup, 2, 1, 50);
  EXPECT_EQ(r2.assignments[0], r2.assignments[1]);
  EXPECT_EQ(r2.assignments[1], r2.assignments[2]);
  EXPECT_EQ(r2.centroids[r2.assignments[0]], (Point{2, 2}));
}

TEST(MinorityCluster, TightFarBlobFoundAtKTwo) {
  const auto ds = blobs(2, 100, 12, 8.0, 0.2);
  SmotePPConfig cfg;
  const auto mc = find_minority_cluster(ds, cfg);
  EXPECT_TRUE(mc.found);
  EXPECT_EQ(mc.k, 2u);
  double mx = 0, my = 0;
  for (std::size_t i = 100; i < 112; ++i) {
    mx += ds.row(i).features[0] / 12;
    my += ds.row(i).features[1] / 12;
  }
  EXPECT_NEAR(mc.centroid[0], mx, 1e-9);
  EXPECT_NEAR(mc.centroid[1], my, 1e-9);
}

TEST(MinorityCluster, ScatteredMinorityFallsBackToMean) {
  Rng rng(3);
  std::vector<InstanceRow> rows;
  for (int i = 0; i < 300; ++i) rows.push_back({{rng.uniform(0, 10), rng.uniform(0, 10)}, 0, 1.0});
  for (int i = 0; i < 6; ++i) rows.push_back({{rng.uniform(0, 10), rng.uniform(0, 10)}, 1, 1.0});
  const WeightedDataset ds(names(2), rows);
  const auto mc = find_minority_cluster(ds, SmotePPConfig{});
  EXPECT_FALSE(mc.found);
  double mx = 0;
  for (int i = 300; i < 306; ++i) mx += ds.row(i).features[0] / 6;
  EXPECT_NEAR(mc.centroid[0], mx, 1e-9);
}

TEST(MinorityCluster, SingleMinorityRowIsTheFallback) {
  const auto ds = blobs(4, 20, 1, 3.0, 0.0);
  const auto mc = find_minority_cluster(ds, SmotePPConfig{});
  EXPECT_FALSE(mc.found);
  EXPECT_EQ(mc.centroid, ds.row(20).features);
  std::vector<InstanceRow> none{{{1.0, 1.0}, 0, 1.0}, {{2.0, 2.0}, 0, 1.0}};
  // All rows in one class: the other label has no rows at all.
  EXPECT_THROW(smote_pp(WeightedDataset(names(2), none), SmotePPConfig{}), Error);
}

TEST(RemoveNearMajority, RemovesTheTwoNearest) {
  std::vector<InstanceRow> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({{static_cast<double>(i), 0.0}, 0, 1.0});
  rows.push_back({{0.0, 0.0}, 1, 1.0});
  rows.push_back({{0.5, 0.0}, 1, 1.0});
  const WeightedDataset ds(names(2), rows);
  const std::vector<double> c{9.2, 0.0};
  const auto out = remove_near_majority(ds, c, 20);
  ASSERT_EQ(out.size(), 10u);
  EXPECT_EQ(out.class_count(0), 8u);
  EXPECT_EQ(out.row(7).features[0], 7.0);  // rows 8 and 9 are gone
  EXPECT_EQ(out.class_count(1), 2u);
  EXPECT_EQ(remove_near_majority(ds, c, 0), ds);
}

TEST(RemoveNearMajority, TiesRemoveLowestIndex) {
  // Every majority row sits at distance 1 from the centroid.
  std::vector<InstanceRow> ring;
  for (int i = 0; i < 10; ++i) ring.push_back({{i % 2 ? 1.0 : -1.0, 0.0}, 0, 1.0});
  ring.push_back({{0.0, 0.0}, 1, 1.0});
  ring.push_back({{0.0, 0.0}, 1, 1.0});
  const WeightedDataset ds(names(2), ring);
  const auto out = remove_near_majority(ds, std::vector<double>{0, 0}, 20);
  ASSERT_EQ(out.class_count(0), 8u);
  // Survivors are original rows 2..9 in order.
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(out.row(i), ds.row(i + 2));
}

TEST(SmotePP, MajorityWeightForPTwenty) {
  const auto ds = blobs(5, 10, 3, 2.0, 0.5);
  SmotePPConfig cfg;
  cfg.p = 20;
  const auto out = smote_pp(ds, cfg);
  EXPECT_EQ(out.report.removed, 2u);
  for (const auto& r : out.data.rows()) {
    if (r.label == 0) EXPECT_DOUBLE_EQ(r.weight, 100.0 / 80.0);
  }
  EXPECT_DOUBLE_EQ(out.data.class_weight(0), 10.0);
}

TEST(SmotePP, NinetyTenArithmetic) {
  const auto ds = blobs(6, 90, 10, 1.5, 0.7);
  SmotePPConfig cfg;
  cfg.p = 20;
  const auto out = smote_pp(ds, cfg);
  EXPECT_EQ(out.report.synthetic, 45u);
  double existing = 0;
  std::size_t synth = 0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const auto& r = out.data.row(i);
    if (r.label != 1) continue;
    if (r.weight == 4.5) {
      existing += r.weight;
    } else {
      EXPECT_EQ(r.weight, 1.0);
      ++synth;
    }
  }
  EXPECT_DOUBLE_EQ(existing, 45.0);
  EXPECT_EQ(synth, 45u);
  EXPECT_NEAR(out.data.class_weight(1), 90.0, 1e-12);
  EXPECT_NEAR(out.data.class_weight(0), 90.0, 1e-9);
}

TEST(SmotePP, FourfoldRepresentationCase) {
  // sMaj / sMin = 4: each positive doubles its weight and gains two synthetics.
  const auto ds = blobs(7, 40, 10, 1.5, 0.7);
  const auto out = smote_pp(ds, SmotePPConfig{});
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const auto& r = out.data.row(i);
    if (r.label == 1 && i < out.data.size() - out.report.synthetic) EXPECT_EQ(r.weight, 2.0);
  }
  EXPECT_EQ(out.report.synthetic, 20u);
}

TEST(SmotePP, BalancedInputWithPZero) {
  const auto ds = blobs(8, 12, 12, 1.0, 1.0);
  SmotePPConfig cfg;
  cfg.p = 0;
  const auto out = smote_pp(ds, cfg);
  EXPECT_EQ(out.report.removed, 0u);
  EXPECT_EQ(out.report.synthetic, 6u);
  EXPECT_DOUBLE_EQ(out.data.class_weight(0), 12.0);
  EXPECT_DOUBLE_EQ(out.data.class_weight(1), 12.0);
}

TEST(SmotePP, SingleMinorityRowWarns) {
  const auto ds = blobs(9, 10, 1, 2.0, 0.0);
  const auto out = smote_pp(ds, SmotePPConfig{});
  EXPECT_FALSE(out.report.warning.empty());
  EXPECT_EQ(out.report.synthetic, 5u);
  EXPECT_DOUBLE_EQ(out.data.class_weight(1), 10.0);
  const auto meta = filter_metadata(FilterSpec{}, out.report);
  EXPECT_TRUE(std::any_of(meta.begin(), meta.end(), [](const auto& kv) { return kv.first == "warning"; }));
}

TEST(SmotePP, RejectsBadConfig) {
  const auto ds = blobs(10, 20, 5, 2.0, 0.5);
  SmotePPConfig cfg;
  cfg.p = 100;
  EXPECT_THROW(smote_pp(ds, cfg), Error);
  cfg.p = -1;
  EXPECT_THROW(smote_pp(ds, cfg), Error);
}

TEST(SmotePP, PropertiesOverRandomDatasets) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto maj = 5 + rng.below(120);
    const auto min = 2 + rng.below(maj - 2);
    const auto ds = blobs(100 + trial, maj, min, rng.uniform(0, 3), rng.uniform(0.2, 1.5));
    SmotePPConfig cfg;
    cfg.p = rng.uniform(0, 90);
    cfg.seed = trial;
    const auto out = smote_pp(ds, cfg);
    const double s_maj = static_cast<double>(maj), min_w = s_maj / static_cast<double>(min) / 2;
    EXPECT_NEAR(out.data.class_weight(0), s_maj, 1e-9);
    EXPECT_LE(std::abs(out.data.class_weight(1) - s_maj), min_w + 1e-9);
    // Every original minority row survives with its features and order.
    std::size_t seen = 0;
    for (const auto& r : out.data.rows()) {
      if (seen < min && r.label == 1 && r.features == ds.row(maj + seen).features) ++seen;
    }
    EXPECT_EQ(seen, min);
    EXPECT_EQ(smote_pp(ds, cfg).data, out.data);
  }
}

TEST(Smote, CountsAndConvexity) {
  const auto ds = blobs(12, 30, 5, 1.0, 1.0);
  const auto out = smote(ds, 100, 3, 7);
  EXPECT_EQ(out.report.synthetic, 5u);
  EXPECT_EQ(out.data.size(), 40u);
  std::vector<const InstanceRow*> minority;
  for (std::size_t i = 30; i < 35; ++i) minority.push_back(&ds.row(i));
  for (std::size_t i = 35; i < 40; ++i) {
    EXPECT_EQ(out.data.row(i).label, 1);
    EXPECT_TRUE(on_some_segment(out.data.row(i).features, minority));
  }
  EXPECT_EQ(smote(ds, 0, 3, 7).data, ds);
  EXPECT_EQ(smote(ds, 100, 3, 7).data, out.data);
  const auto single = blobs(12, 30, 1, 1.0, 1.0);
  EXPECT_THROW(smote(single, 100, 3, 7), Error);
  EXPECT_DOUBLE_EQ(balancing_smote_percent(ds), 500.0);
}

TEST(SpreadSubsample, KeepsRatioTimesMinority) {
  const auto ds = blobs(13, 90, 10, 1.0, 1.0);
  const auto out = spread_subsample(ds, 1.0, 3);
  EXPECT_EQ(out.data.class_count(0), 10u);
  EXPECT_EQ(out.data.class_count(1), 10u);
  EXPECT_EQ(out.report.removed, 80u);
  EXPECT_EQ(spread_subsample(ds, 1.0, 3).data, out.data);
  const auto small = blobs(13, 10, 10, 1.0, 1.0);
  EXPECT_EQ(spread_subsample(small, 1.0, 3).data, small);
  EXPECT_EQ(spread_subsample(ds, 2.0, 3).data.class_count(0), 20u);
}

TEST(ApplyFilter, NoneIsIdentityAndNamesRoundTrip) {
  const auto ds = blobs(14, 40, 8, 1.0, 1.0);
  EXPECT_EQ(apply_filter(ds, FilterSpec{}, 1).data, ds);
  for (auto k : {FilterKind::kNone, FilterKind::kSmote, FilterKind::kSpreadSubsample, FilterKind::kSmotePP}) {
    FilterSpec spec;
    spec.kind = k;
    EXPECT_EQ(parse_filter_kind(spec.name()), k);
  }
  EXPECT_THROW(parse_filter_kind("bogus"), Error);
}
