#include "signalcast/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signalcast/error.hpp"
#include "signalcast/rng.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

void SmotePPConfig::validate() const {
  if (!(p >= 0.0 && p < 100.0)) throw_config("SMOTE++ p must lie in [0, 100)");
  if (k2 < 1) throw_config("SMOTE++ k2 must be at least 1");
  if (kmeans_max_iter < 1) throw_config("SMOTE++ kmeans_max_iter must be at least 1");
}

int minority_label(const WeightedDataset& ds) {
  return ds.class_count(1) <= ds.class_count(0) ? 1 : 0;
}

Standardizer::Standardizer(const WeightedDataset& ds) : mean_(ds.arity(), 0.0), scale_(ds.arity(), 1.0) {
  const double n = static_cast<double>(ds.size());
  if (ds.empty()) return;
  for (const auto& r : ds.rows()) {
    for (std::size_t c = 0; c < ds.arity(); ++c) mean_[c] += r.features[c];
  }
  for (auto& m : mean_) m /= n;
  std::vector<double> var(ds.arity(), 0.0);
  for (const auto& r : ds.rows()) {
    for (std::size_t c = 0; c < ds.arity(); ++c) {
      const double d = r.features[c] - mean_[c];
      var[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < ds.arity(); ++c) {
    const double sd = std::sqrt(var[c] / n);
    scale_[c] = sd > 0 ? sd : 1.0;
  }
}

Point Standardizer::transform(std::span<const double> features) const {
  Point z(features.size());
  for (std::size_t c = 0; c < features.size(); ++c) z[c] = (features[c] - mean_[c]) / scale_[c];
  return z;
}

Point Standardizer::inverse(std::span<const double> z) const {
  Point x(z.size());
  for (std::size_t c = 0; c < z.size(); ++c) x[c] = z[c] * scale_[c] + mean_[c];
  return x;
}

namespace {

std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

void require_numeric(const WeightedDataset& ds, const char* context) {
  if (ds.discrete()) throw_input(std::string(context) + ": filters operate on numeric features");
}

/// Synthetic minority rows by neighbour interpolation.
std::vector<InstanceRow> synthesize(const std::vector<const InstanceRow*>& minority, const Standardizer& z,
                                    std::size_t count, int k, int label, Rng& rng) {
  const std::size_t s = minority.size();
  std::vector<InstanceRow> out;
  if (count == 0) return out;
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), s - 1);

  std::vector<Point> pts;
  pts.reserve(s);
  for (const auto* r : minority) pts.push_back(z.transform(r->features));
  std::vector<std::vector<std::size_t>> neighbours(s);
  std::vector<std::size_t> order(s);
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<double> d(s);
    for (std::size_t j = 0; j < s; ++j) d[j] = squared_distance(pts[i], pts[j]);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    for (auto j : order) {
      if (j == i) continue;
      neighbours[i].push_back(j);
      if (neighbours[i].size() == kk) break;
    }
  }

  std::vector<std::size_t> bases(s);
  std::iota(bases.begin(), bases.end(), std::size_t{0});
  rng.shuffle(bases.begin(), bases.end());
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t b = bases[n % s];
    const std::size_t nb = neighbours[b][rng.below(neighbours[b].size())];
    const double gap = rng.uniform();
    const auto& x = minority[b]->features;
    const auto& y = minority[nb]->features;
    InstanceRow r{std::vector<double>(x.size()), label, 1.0};
    for (std::size_t c = 0; c < x.size(); ++c) r.features[c] = x[c] + gap * (y[c] - x[c]);
    out.push_back(std::move(r));
  }
  return out;
}

void finish_report(FilterReport& rep, const WeightedDataset& out, int min_label) {
  rep.minority_weight = out.class_weight(min_label);
  rep.majority_weight = out.class_weight(1 - min_label);
  rep.residual_imbalance = std::abs(rep.minority_weight - rep.majority_weight);
}

}  // namespace

MinorityCluster find_minority_cluster(const WeightedDataset& ds, const SmotePPConfig& config) {
  config.validate();
  require_numeric(ds, "find_minority_cluster");
  const int min_label = minority_label(ds);
  const std::size_t s_min = ds.class_count(min_label);
  if (s_min == 0 || ds.class_count(1 - min_label) == 0) throw_input("find_minority_cluster: both classes required");

  const Standardizer z(ds);
  std::vector<Point> pts;
  pts.reserve(ds.size());
  for (const auto& r : ds.rows()) pts.push_back(z.transform(r.features));

  MinorityCluster result;
  if (s_min >= 2) {
    std::size_t upper = std::max<std::size_t>(2, s_min - 1);
    upper = std::min(upper, ds.size());
    if (config.max_k >= 2) upper = std::min(upper, config.max_k);
    for (std::size_t k = 2; k <= upper; ++k) {
      const auto cr = kmeans(pts, k, derive_seed(config.seed, k), config.kmeans_max_iter);
      std::vector<std::size_t> members(k, 0), minority(k, 0);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        ++members[cr.assignments[i]];
        if (ds.row(i).label == min_label) ++minority[cr.assignments[i]];
      }
      std::optional<std::size_t> pick;
      for (std::size_t c = 0; c < k; ++c) {
        const bool qualifies = 2 * minority[c] > members[c] && minority[c] >= 2;
        if (qualifies && (!pick || minority[c] > minority[*pick])) pick = c;
      }
      if (pick) {
        result.found = true;
        result.k = k;
        result.centroid = z.inverse(cr.centroids[*pick]);
        return result;
      }
    }
  }
  result.centroid.assign(ds.arity(), 0.0);
  for (const auto& r : ds.rows()) {
    if (r.label != min_label) continue;
    for (std::size_t c = 0; c < ds.arity(); ++c) result.centroid[c] += r.features[c];
  }
  for (auto& v : result.centroid) v /= static_cast<double>(s_min);
  return result;
}

WeightedDataset remove_near_majority(const WeightedDataset& ds, std::span<const double> centroid, double p) {
  if (!(p >= 0.0 && p < 100.0)) throw_config("removal percentage must lie in [0, 100)");
  require_numeric(ds, "remove_near_majority");
  if (centroid.size() != ds.arity()) throw_input("centroid dimension does not match the dataset");
  const int maj_label = 1 - minority_label(ds);
  const Standardizer z(ds);
  const Point c = z.transform(centroid);

  std::vector<std::size_t> majority;
  std::vector<double> dist(ds.size(), 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.row(i).label != maj_label) continue;
    majority.push_back(i);
    dist[i] = squared_distance(z.transform(ds.row(i).features), c);
  }
  std::size_t remove = round_half_up(p * static_cast<double>(majority.size()) / 100.0);
  // Keep at least one majority row so the class survives.
  if (!majority.empty()) remove = std::min(remove, majority.size() - 1);
  std::stable_sort(majority.begin(), majority.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  std::vector<bool> drop(ds.size(), false);
  for (std::size_t i = 0; i < remove; ++i) drop[majority[i]] = true;

  std::vector<InstanceRow> rows;
  rows.reserve(ds.size() - remove);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!drop[i]) rows.push_back(ds.row(i));
  }
  return ds.with_rows(std::move(rows));
}

FilterResult smote_pp(const WeightedDataset& ds, const SmotePPConfig& config) {
  config.validate();
  require_numeric(ds, "smote_pp");
  const int min_label = minority_label(ds);
  const int maj_label = 1 - min_label;
  const std::size_t s_min = ds.class_count(min_label);
  const std::size_t s_maj = ds.class_count(maj_label);
  if (s_min == 0 || s_maj == 0) throw_input("smote_pp: both classes required");

  FilterReport rep;
  const auto cluster = find_minority_cluster(ds, config);
  rep.minority_cluster_found = cluster.found;
  rep.cluster_k = cluster.k;

  const WeightedDataset kept = remove_near_majority(ds, cluster.centroid, config.p);
  const std::size_t survivors = kept.class_count(maj_label);
  rep.removed = s_maj - survivors;

  // Equals 100 / (100 - p) whenever p * sMaj / 100 is a whole number; the
  // ratio form keeps the majority total at exactly sMaj otherwise.
  const double maj_weight = static_cast<double>(s_maj) / static_cast<double>(survivors);
  const double min_w = static_cast<double>(s_maj) / static_cast<double>(s_min) / 2.0;

  std::vector<InstanceRow> rows;
  std::vector<const InstanceRow*> minority;
  rows.reserve(kept.size() + s_maj);
  for (const auto& r : kept.rows()) {
    InstanceRow nr = r;
    nr.weight = r.label == maj_label ? maj_weight : min_w;
    rows.push_back(std::move(nr));
  }
  for (const auto& r : ds.rows()) {
    if (r.label == min_label) minority.push_back(&r);
  }

  const std::size_t synth_count = round_half_up(min_w * static_cast<double>(s_min));
  Rng rng(derive_seed(config.seed, 0x5a5a));
  if (s_min < 2) {
    rep.warning = "single minority row: synthetic rows are unjittered duplicates";
    for (std::size_t i = 0; i < synth_count; ++i) {
      rows.push_back(InstanceRow{minority.front()->features, min_label, 1.0});
    }
  } else {
    const Standardizer z(ds);
    auto synth = synthesize(minority, z, synth_count, config.k2, min_label, rng);
    for (auto& r : synth) rows.push_back(std::move(r));
  }
  rep.synthetic = synth_count;
  FilterResult out{ds.with_rows(std::move(rows)), rep};
  finish_report(out.report, out.data, min_label);
  return out;
}

FilterResult smote(const WeightedDataset& ds, double percent, int k, std::uint64_t seed) {
  require_numeric(ds, "smote");
  if (percent < 0) throw_config("SMOTE percent must be non-negative");
  if (k < 1) throw_config("SMOTE k must be at least 1");
  const int min_label = minority_label(ds);
  const std::size_t s_min = ds.class_count(min_label);
  if (s_min < 2) throw_input("SMOTE needs at least two minority rows");

  std::vector<const InstanceRow*> minority;
  for (const auto& r : ds.rows()) {
    if (r.label == min_label) minority.push_back(&r);
  }
  const std::size_t count = round_half_up(percent / 100.0 * static_cast<double>(s_min));
  Rng rng(seed);
  const Standardizer z(ds);
  auto synth = synthesize(minority, z, count, k, min_label, rng);
  std::vector<InstanceRow> rows = ds.rows();
  for (auto& r : synth) rows.push_back(std::move(r));
  FilterResult out{ds.with_rows(std::move(rows)), {}};
  out.report.synthetic = count;
  finish_report(out.report, out.data, min_label);
  return out;
}

double balancing_smote_percent(const WeightedDataset& ds) {
  const int min_label = minority_label(ds);
  const double s_min = static_cast<double>(ds.class_count(min_label));
  const double s_maj = static_cast<double>(ds.class_count(1 - min_label));
  if (s_min == 0) return 0.0;
  return (s_maj - s_min) / s_min * 100.0;
}

FilterResult spread_subsample(const WeightedDataset& ds, double target_ratio, std::uint64_t seed) {
  if (!(target_ratio >= 1.0)) throw_config("spread subsample ratio must be >= 1");
  const int min_label = minority_label(ds);
  const std::size_t s_min = ds.class_count(min_label);
  std::vector<std::size_t> majority;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.row(i).label != min_label) majority.push_back(i);
  }
  const auto target = static_cast<std::size_t>(std::ceil(target_ratio * static_cast<double>(s_min)));
  FilterResult out{ds, {}};
  if (majority.size() > target) {
    Rng rng(seed);
    rng.shuffle(majority.begin(), majority.end());
    std::vector<bool> keep(ds.size(), true);
    for (std::size_t i = target; i < majority.size(); ++i) keep[majority[i]] = false;
    std::vector<InstanceRow> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (keep[i]) rows.push_back(ds.row(i));
    }
    out.data = ds.with_rows(std::move(rows));
    out.report.removed = majority.size() - target;
  }
  finish_report(out.report, out.data, min_label);
  return out;
}

std::string FilterSpec::name() const {
  switch (kind) {
    case FilterKind::kNone: return "none";
    case FilterKind::kSmote: return "smote";
    case FilterKind::kSpreadSubsample: return "spread_subsample";
    case FilterKind::kSmotePP: return "smote_pp";
  }
  return "?";
}

FilterKind parse_filter_kind(std::string_view text) {
  if (text == "none") return FilterKind::kNone;
  if (text == "smote") return FilterKind::kSmote;
  if (text == "spread_subsample" || text == "spread") return FilterKind::kSpreadSubsample;
  if (text == "smote_pp" || text == "smote++") return FilterKind::kSmotePP;
  throw_config("unknown filter '" + std::string(text) + "'");
}

FilterResult apply_filter(const WeightedDataset& ds, const FilterSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case FilterKind::kNone: {
      FilterResult out{ds, {}};
      finish_report(out.report, ds, minority_label(ds));
      return out;
    }
    case FilterKind::kSmote:
      return smote(ds, spec.smote_percent.value_or(balancing_smote_percent(ds)), spec.smote_k, seed);
    case FilterKind::kSpreadSubsample:
      return spread_subsample(ds, spec.spread_ratio, seed);
    case FilterKind::kSmotePP: {
      SmotePPConfig cfg = spec.smote_pp;
      cfg.seed = seed;
      return smote_pp(ds, cfg);
    }
  }
  throw_internal("unhandled filter kind");
}

Metadata filter_metadata(const FilterSpec& spec, const FilterReport& report) {
  Metadata m{
      {"filter", spec.name()},
      {"removed", std::to_string(report.removed)},
      {"synthetic", std::to_string(report.synthetic)},
      {"majority_weight", text::format_double(report.majority_weight)},
      {"minority_weight", text::format_double(report.minority_weight)},
      {"residual_imbalance", text::format_double(report.residual_imbalance)},
  };
  if (spec.kind == FilterKind::kSmotePP) {
    m.emplace_back("p", text::format_double(spec.smote_pp.p));
    m.emplace_back("k2", std::to_string(spec.smote_pp.k2));
    m.emplace_back("minority_cluster_found", report.minority_cluster_found ? "true" : "false");
    m.emplace_back("cluster_k", std::to_string(report.cluster_k));
  }
  if (!report.warning.empty()) m.emplace_back("warning", report.warning);
  return m;
}

}  // namespace signalcast
