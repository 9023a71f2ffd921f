#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <fstream>

#include "signalcast/bayes_net.hpp"
#include "signalcast/dataset.hpp"
#include "signalcast/discretizer.hpp"
#include "signalcast/error.hpp"
#include "test_support.hpp"

using namespace signalcast;
using namespace signalcast::testing;

namespace {

WeightedDataset column(std::vector<double> values, std::vector<int> labels) {
  std::vector<InstanceRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({{values[i]}, labels[i], 1.0});
  return WeightedDataset({"x"}, std::move(rows));
}

/// EM -> A <- CM with the hand-set tables of the worked example.
BayesNetModel worked_example() {
  // Row index bit j is the value of parents[i][j]: bit0 = EM, bit1 = CM.
  std::vector<std::vector<CptRow>> cpts{
      {{0.4, 0.6}},                                      // EM
      {{0.7, 0.3}},                                      // CM
      {{0.9, 0.1}, {0.6, 0.4}, {0.8, 0.2}, {0.2, 0.8}},  // A
  };
  return BayesNetModel({"EM", "CM", "A"}, 2, {{}, {}, {0, 1}}, std::move(cpts));
}

/// Brute-force posterior from the joint.
std::array<double, 2> enumerate(const BayesNetModel& m, const Evidence& ev, std::size_t q) {
  const std::size_t n = m.node_count();
  std::array<double, 2> acc{0, 0};
  std::vector<int> a(n);
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>((mask >> i) & 1u);
      if (ev[i] && *ev[i] != a[i]) ok = false;
    }
    if (ok) acc[a[q]] += joint_probability(m, a);
  }
  const double z = acc[0] + acc[1];
  return {acc[0] / z, acc[1] / z};
}

}  // namespace

TEST(Dataset, RejectsBadRows) {
  EXPECT_THROW(WeightedDataset({"a"}, {{{1.0, 2.0}, 0, 1.0}}), Error);
  EXPECT_THROW(WeightedDataset({"a"}, {{{1.0}, 2, 1.0}}), Error);
  EXPECT_THROW(WeightedDataset({"a"}, {{{1.0}, 0, 0.0}}), Error);
  EXPECT_THROW(WeightedDataset({"a"}, {{{NAN}, 0, 1.0}}), Error);
}

TEST(Dataset, CsvRoundTripIsExact) {
  TempDir dir("ds");
  auto ds = gaussian_dataset(3, 50, 4, 0.2);
  std::vector<InstanceRow> rows = ds.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].weight = 0.1 + 1.0 / static_cast<double>(i + 3);
  ds = ds.with_rows(rows);
  write_dataset(ds, dir.file("d.csv"));
  EXPECT_EQ(read_dataset(dir.file("d.csv")), ds);

  const auto disc = Discretizer::fit(ds, DiscretizeStrategy::kMedian).apply(ds);
  write_dataset(disc, dir.file("e.csv"));
  const auto back = read_dataset(dir.file("e.csv"));
  EXPECT_TRUE(back.discrete());
  EXPECT_EQ(back, disc);
}

TEST(Dataset, WeightDefaultsToOne) {
  TempDir dir("ds_w");
  std::ofstream(dir.file("d.csv")) << "a,b,class\n1,2,0\n3,4,1\n";
  const auto ds = read_dataset(dir.file("d.csv"));
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.row(0).weight, 1.0);
  EXPECT_EQ(ds.row(1).label, 1);
  EXPECT_EQ(ds.signal_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(Dataset, NegativeWeightRejectedWithLineNumber) {
  TempDir dir("ds_neg");
  std::ofstream(dir.file("d.csv")) << "a,class,weight\n1,0,1\n2,1,-1\n";
  try {
    read_dataset(dir.file("d.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInput);
    EXPECT_NE(std::string(e.what()).find("d.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Dataset, MalformedRowNamesLine) {
  TempDir dir("ds_bad");
  std::ofstream(dir.file("d.csv")) << "a,class\n1,0\n1,0,7\n";
  try {
    read_dataset(dir.file("d.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("d.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Discretizer, MedianOfOneToFive) {
  const auto ds = column({1, 2, 3, 4, 5}, {0, 0, 1, 1, 1});
  const auto d = Discretizer::fit(ds, DiscretizeStrategy::kMedian);
  EXPECT_EQ(d.thresholds()[0], 3.0);
  const auto out = d.apply(ds);
  std::vector<double> bins;
  for (const auto& r : out.rows()) bins.push_back(r.features[0]);
  EXPECT_EQ(bins, (std::vector<double>{kLow, kLow, kLow, kHigh, kHigh}));
  EXPECT_EQ(d.bin(0, 3.0), kLow);
  EXPECT_EQ(d.bin(0, std::nextafter(3.0, 4.0)), kHigh);
}

TEST(Discretizer, ConstantSignalIsAllLow) {
  const auto ds = column({2, 2, 2, 2}, {0, 1, 0, 1});
  for (auto s : {DiscretizeStrategy::kMedian, DiscretizeStrategy::kEntropy}) {
    const auto d = Discretizer::fit(ds, s);
    EXPECT_EQ(d.thresholds()[0], 2.0);
    const auto out = d.apply(ds);
    for (const auto& r : out.rows()) EXPECT_EQ(r.features[0], kLow);
  }
}

TEST(Discretizer, EntropySplitSeparatesClassBlocks) {
  const std::vector<double> v{1, 2, 3, 4, 10, 11, 12};
  const std::vector<int> y{0, 0, 0, 0, 1, 1, 1};
  const std::vector<double> w(v.size(), 1.0);
  const auto split = best_entropy_split(v, y, w);
  EXPECT_EQ(split.threshold, 7.0);
  const double p = 3.0 / 7.0;
  EXPECT_NEAR(split.gain, -(p * std::log2(p) + (1 - p) * std::log2(1 - p)), 1e-12);

  // Exhaustive oracle: no midpoint cut beats the chosen one on a noisy column.
  Rng rng(4);
  std::vector<double> x;
  std::vector<int> lab;
  std::vector<double> wt;
  for (int i = 0; i < 60; ++i) {
    lab.push_back(rng.uniform() < 0.3 ? 1 : 0);
    x.push_back(std::round(rng.normal() * 4 + lab.back() * 3));
    wt.push_back(rng.uniform(0.5, 2.0));
  }
  const auto best = best_entropy_split(x, lab, wt);
  const auto entropy = [](double a, double b) {
    double h = 0;
    for (double c : {a, b}) {
      if (c > 0) h -= c / (a + b) * std::log2(c / (a + b));
    }
    return h;
  };
  double tot[2] = {0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) tot[lab[i]] += wt[i];
  const double base = entropy(tot[0], tot[1]);
  for (double cut = -20; cut <= 20; cut += 0.5) {
    double lo[2] = {0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] <= cut) lo[lab[i]] += wt[i];
    }
    const double nl = lo[0] + lo[1], nh = tot[0] + tot[1] - nl;
    if (nl == 0 || nh == 0) continue;
    const double gain = base - (nl * entropy(lo[0], lo[1]) + nh * entropy(tot[0] - lo[0], tot[1] - lo[1])) / (nl + nh);
    EXPECT_LE(gain, best.gain + 1e-12);
  }
}

TEST(Discretizer, MdlAcceptsSignalAndRejectsNoise) {
  Rng rng(12);
  std::vector<double> signal, noise, w;
  std::vector<int> y;
  for (int i = 0; i < 300; ++i) {
    y.push_back(rng.uniform() < 0.3 ? 1 : 0);
    signal.push_back(rng.normal() + 2.0 * y.back());
    noise.push_back(rng.normal());
    w.push_back(1.0);
  }
  EXPECT_TRUE(mdl_accepts(signal, y, w, best_entropy_split(signal, y, w)));
  EXPECT_FALSE(mdl_accepts(noise, y, w, best_entropy_split(noise, y, w)));

  std::vector<InstanceRow> rows;
  for (std::size_t i = 0; i < y.size(); ++i) rows.push_back({{signal[i], noise[i]}, y[i], 1.0});
  const WeightedDataset ds(names(2), rows);
  const auto d = Discretizer::fit(ds, DiscretizeStrategy::kMdl);
  EXPECT_EQ(d.thresholds()[1], *std::max_element(noise.begin(), noise.end()));
  const auto out = d.apply(ds);
  for (const auto& r : out.rows()) EXPECT_EQ(r.features[1], kLow);
  EXPECT_EQ(parse_discretize_strategy("mdl"), DiscretizeStrategy::kMdl);
}

TEST(Discretizer, WeightedMedianCountsDuplicates) {
  // Weight 2 on a row equals the row appearing twice.
  const std::vector<double> v{1, 5, 9};
  EXPECT_EQ(weighted_median(v, std::vector<double>{1, 1, 3}), 9.0);
  EXPECT_EQ(weighted_median(std::vector<double>{1, 5, 9, 9, 9}, std::vector<double>(5, 1.0)), 9.0);
  EXPECT_EQ(weighted_median(v, std::vector<double>{1, 1, 1}), 5.0);
}

TEST(Discretizer, IdentityOnDiscreteAndSchemaCheck) {
  const auto ds = gaussian_dataset(5, 30, 3, 0.3);
  const auto d = Discretizer::fit(ds, DiscretizeStrategy::kMedian);
  const auto disc = d.apply(ds);
  EXPECT_EQ(d.apply(disc), disc);
  const auto other = gaussian_dataset(5, 30, 2, 0.3);
  EXPECT_THROW(d.apply(other), Error);
}

TEST(Discretizer, FitSeesOnlyTrainingRows) {
  const auto ds = gaussian_dataset(6, 100, 3, 0.3);
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < ds.size(); ++i) (i % 5 == 0 ? test : train).push_back(i);
  const auto a = Discretizer::fit(ds.subset(train), DiscretizeStrategy::kEntropy);
  auto rows = ds.rows();
  for (auto i : test) {
    for (auto& v : rows[i].features) v = v * 100 + 50;
  }
  const auto b = Discretizer::fit(ds.with_rows(rows).subset(train), DiscretizeStrategy::kEntropy);
  EXPECT_EQ(a, b);
}

TEST(BayesNet, WorkedExamplePosterior) {
  const auto m = worked_example();
  Evidence ev{1, std::nullopt, std::nullopt};
  const auto post = posterior(m, ev, 2);
  EXPECT_NEAR(post[1], 0.8 * 0.3 + 0.4 * 0.7, 1e-15);
  EXPECT_NEAR(post[1], 0.52, 1e-12);
  // Hand multiplication of the joint.
  const std::vector<int> a{1, 0, 1};
  EXPECT_DOUBLE_EQ(joint_probability(m, a), 0.6 * 0.7 * 0.4);
}

TEST(BayesNet, PosteriorMatchesEnumeration) {
  const auto m = worked_example();
  const Evidence none(3);
  const auto marg = posterior(m, none, 2);
  const auto brute = enumerate(m, none, 2);
  EXPECT_NEAR(marg[1], brute[1], 1e-15);
  const auto full = posterior(m, Evidence{1, 0, std::nullopt}, 2);
  EXPECT_NEAR(full[1], 0.4, 1e-15);
  const auto point = posterior(m, Evidence{1, 1, std::nullopt}, 0);
  EXPECT_EQ(point[1], 1.0);
  EXPECT_EQ(point[0], 0.0);
}

TEST(BayesNet, ImpossibleEvidenceAndBadTables) {
  std::vector<std::vector<CptRow>> cpts{{{1.0, 0.0}}, {{1.0, 0.0}, {0.5, 0.5}}};
  const BayesNetModel m({"X", "A"}, 1, {{}, {0}}, cpts);
  EXPECT_THROW(posterior(m, Evidence{1, std::nullopt}, 1), Error);
  EXPECT_THROW(BayesNetModel({"X", "A"}, 1, {{1}, {0}}, {{{0.5, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}, {0.5, 0.5}}}), Error);
  EXPECT_THROW(BayesNetModel({"X", "A"}, 1, {{}, {0}}, {{{0.5, 0.6}}, {{0.5, 0.5}, {0.5, 0.5}}}), Error);
}

TEST(BayesNet, NaiveStructureAndPredictScore) {
  const auto ds = gaussian_dataset(7, 200, 5, 0.3, 2.0, 2);
  const auto d = Discretizer::fit(ds, DiscretizeStrategy::kMedian);
  const auto disc = d.apply(ds);
  const auto parents = learn_structure(disc, 2, StructureStrategy::kNaive);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(parents[i], (std::vector<std::size_t>{5}));
  EXPECT_TRUE(parents[5].empty());
  const auto m = fit_cpts(disc, parents, 0.5, d);
  for (const auto& table : m.cpts()) {
    for (const auto& row : table) EXPECT_NEAR(row[0] + row[1], 1.0, 1e-12);
  }
  // Scores agree with enumeration on fixture rows.
  for (std::size_t r = 0; r < 3; ++r) {
    Evidence ev(6);
    for (std::size_t c = 0; c < 5; ++c) ev[c] = static_cast<int>(disc.row(r).features[c]);
    EXPECT_NEAR(predict_score(m, disc.row(r).features), enumerate(m, ev, 5)[1], 1e-12);
  }
  const std::vector<double> low(5, kLow), high(5, kHigh);
  EXPECT_LT(predict_score(m, low), predict_score(m, high));
  EXPECT_THROW(learn_structure(disc, 0, StructureStrategy::kK2HillClimb), Error);
}

TEST(BayesNet, CptCountsWithoutSmoothing) {
  std::vector<InstanceRow> rows{{{kHigh}, 1, 1.0}, {{kHigh}, 1, 1.0}, {{kHigh}, 1, 1.0},
                                {{kLow}, 1, 1.0},  {{kLow}, 0, 1.0},  {{kHigh}, 0, 1.0}};
  const WeightedDataset ds({"x"}, rows, {}, true);
  const auto m = fit_cpts(ds, {{1}, {}}, 0.0);
  EXPECT_DOUBLE_EQ(m.cpts()[0][1][1], 0.75);
  EXPECT_DOUBLE_EQ(m.cpts()[1][0][1], 4.0 / 6.0);

  // An unseen parent configuration with alpha 0.5 is uniform.
  std::vector<InstanceRow> r2{{{kLow, kLow}, 1, 1.0}, {{kLow, kLow}, 0, 1.0}};
  const WeightedDataset ds2({"x", "y"}, r2, {}, true);
  const auto m2 = fit_cpts(ds2, {{2}, {0, 2}, {}}, 0.5);
  EXPECT_DOUBLE_EQ(m2.cpts()[1][1][0], 0.5);  // x = High never observed
  std::vector<InstanceRow> one{{{kLow}, 1, 1.0}};
  EXPECT_THROW(fit_cpts(WeightedDataset({"x"}, one, {}, true), {{1}, {}}, 0.5), Error);
}

TEST(BayesNet, K2FindsPlantedCopyAndStaysAcyclic) {
  Rng rng(9);
  std::vector<InstanceRow> rows;
  for (int i = 0; i < 400; ++i) {
    const int a = rng.uniform() < 0.4 ? 1 : 0;
    const double x1 = rng.uniform() < (a ? 0.7 : 0.3) ? kHigh : kLow;
    const double x2 = rng.uniform() < 0.9 ? x1 : 1.0 - x1;
    const double x3 = rng.uniform() < 0.5 ? kHigh : kLow;
    rows.push_back({{x1, x2, x3}, a, 1.0});
  }
  const WeightedDataset ds({"x1", "x2", "x3"}, rows, {}, true);
  const auto learned = learn_structure(ds, 2, StructureStrategy::kK2HillClimb);
  EXPECT_TRUE(is_acyclic(learned));
  const bool edge = (learned[1].size() == 2 && learned[1][1] == 0) || (learned[0].size() == 2 && learned[0][1] == 1);
  EXPECT_TRUE(edge);
  // Exhaustive oracle over the naive structure plus one signal edge.
  const auto naive = learn_structure(ds, 2, StructureStrategy::kNaive);
  double best = k2_score(ds, naive);
  for (std::size_t from = 0; from < 3; ++from) {
    for (std::size_t to = 0; to < 3; ++to) {
      if (from == to) continue;
      auto p = naive;
      p[to].push_back(from);
      best = std::max(best, k2_score(ds, p));
    }
  }
  auto first_step = naive;
  if (learned[1].size() == 2) first_step[1].push_back(0);
  else first_step[0].push_back(1);
  EXPECT_NEAR(k2_score(ds, first_step), best, 1e-9);
}

TEST(BayesNet, K2MostlyKeepsNaiveOnIndependentSignals) {
  int naive_count = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::vector<InstanceRow> rows;
    for (int i = 0; i < 300; ++i) {
      std::vector<double> f;
      for (int c = 0; c < 4; ++c) f.push_back(rng.uniform() < 0.5 ? kHigh : kLow);
      rows.push_back({f, rng.uniform() < 0.3 ? 1 : 0, 1.0});
    }
    const WeightedDataset ds(names(4), rows, {}, true);
    const auto learned = learn_structure(ds, 2, StructureStrategy::kK2HillClimb);
    const auto naive = learn_structure(ds, 2, StructureStrategy::kNaive);
    if (learned == naive) {
      ++naive_count;
    } else {
      // Any extra edge must be paid for by the score.
      EXPECT_GT(k2_score(ds, learned), k2_score(ds, naive));
    }
  }
  EXPECT_GE(naive_count, 12);
}

TEST(BayesNet, ImportanceReport) {
  std::vector<std::vector<CptRow>> cpts{{{0.8, 0.2}, {0.1, 0.9}}, {{0.5, 0.5}, {0.5, 0.5}}, {{0.6, 0.4}}};
  const BayesNetModel m({"strong", "flat", "A"}, 2, {{2}, {2}, {}}, cpts);
  const auto report = importance_report(m);
  ASSERT_EQ(report.signals.size(), 2u);
  EXPECT_NEAR(report.signals[0].discriminativeness, 0.7, 1e-12);
  EXPECT_EQ(report.signals[1].discriminativeness, 0.0);
  EXPECT_TRUE(report.signals[0].connected_to_class);
  EXPECT_TRUE(report.signals[1].connected_to_class);
  EXPECT_EQ(report.ranked()[0].signal, "strong");
  EXPECT_DOUBLE_EQ(report.signals[0].p_high_attack, 0.9);
}

TEST(BayesNet, UniformModelScoresHalf) {
  std::vector<std::vector<CptRow>> cpts{{{0.5, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}}};
  const BayesNetModel m({"x", "A"}, 1, {{1}, {}}, cpts);
  EXPECT_DOUBLE_EQ(predict_score(m, std::vector<double>{kHigh}), 0.5);
}

TEST(BayesNet, SerializationRoundTrip) {
  TempDir dir("model");
  const auto ds = gaussian_dataset(11, 150, 4, 0.3);
  const auto d = Discretizer::fit(ds, DiscretizeStrategy::kEntropy);
  const auto disc = d.apply(ds);
  const auto m = fit_cpts(disc, learn_structure(disc, 2, StructureStrategy::kK2HillClimb), 0.5, d);
  write_model(m, dir.file("m.txt"));
  const auto back = read_model(dir.file("m.txt"));
  EXPECT_EQ(back, m);
  EXPECT_EQ(predict_scores(back, ds), predict_scores(m, ds));
  EXPECT_THROW(model_from_string("garbage"), Error);
}
