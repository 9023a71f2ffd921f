#include "signalcast/timeline.hpp"

#include <algorithm>

#include "signalcast/error.hpp"
#include "signalcast/parallel.hpp"

namespace signalcast {

SignalDef builtin_signal(const std::string& name) {
  if (name == "TCM") return {name, SignalKind::kMentionCount, "twitter-cyber"};
  if (name == "TEM") return {name, SignalKind::kMentionCount, "twitter-entity"};
  if (name == "GEM") return {name, SignalKind::kNegativeEventMentions, ""};
  if (name == "GEA") return {name, SignalKind::kNegativeEventArticles, ""};
  if (name == "GET") return {name, SignalKind::kNegativeEventTone, ""};
  throw_config("unknown signal '" + name + "'");
}

std::vector<SignalDef> default_signals() {
  std::vector<SignalDef> out;
  for (const char* n : {"TCM", "TEM", "GEM", "GEA", "GET"}) out.push_back(builtin_signal(n));
  return out;
}

Averaging parse_averaging(std::string_view text) {
  if (text == "per_day") return Averaging::kPerDay;
  if (text == "raw_sum") return Averaging::kRawSum;
  throw_config("unknown averaging mode '" + std::string(text) + "'");
}

namespace {

bool matches(const SignalDef& s, const EventRecord& e) {
  if (!s.stream_id.empty() && e.stream_id != s.stream_id) return false;
  if (s.kind == SignalKind::kMentionCount) return e.kind == EventKind::kMention;
  return e.kind == EventKind::kEvent && e.tone && *e.tone < 0.0;
}

double contribution(const SignalDef& s, const EventRecord& e) {
  switch (s.kind) {
    case SignalKind::kMentionCount: return e.value;
    case SignalKind::kNegativeEventMentions: return static_cast<double>(e.mentions.value_or(0));
    case SignalKind::kNegativeEventArticles: return static_cast<double>(e.articles.value_or(0));
    case SignalKind::kNegativeEventTone: return *e.tone;
  }
  return 0.0;
}

double finish(const SignalDef& s, double sum, std::size_t count, Instant start, Instant end, Averaging averaging) {
  if (s.kind == SignalKind::kNegativeEventTone) return count == 0 ? 0.0 : sum / static_cast<double>(count);
  if (averaging == Averaging::kRawSum) return sum;
  const double days = static_cast<double>(end.seconds - start.seconds) / static_cast<double>(kSecondsPerDay);
  return sum / days;
}

void validate_pair(const GranularityPair& p) {
  if (!p.t_x.positive()) throw_config("t_x must be positive");
  if (!p.t_g.positive()) throw_config("t_g must be positive");
  for (const auto& [name, d] : p.per_signal_tx) {
    if (!d.positive()) throw_config("per-signal t_x for " + name + " must be positive");
  }
}

}  // namespace

double aggregate_signal(std::span<const EventRecord> events, const SignalDef& signal, Instant window_start,
                        Instant window_end, Averaging averaging) {
  if (!(window_start < window_end)) throw_input("window start must precede window end");
  require_sorted(events);
  auto first = std::upper_bound(events.begin(), events.end(), window_start,
                                [](Instant t, const EventRecord& e) { return t < e.timestamp; });
  double sum = 0;
  std::size_t count = 0;
  for (auto it = first; it != events.end() && it->timestamp <= window_end; ++it) {
    if (!matches(signal, *it)) continue;
    sum += contribution(signal, *it);
    ++count;
  }
  return finish(signal, sum, count, window_start, window_end, averaging);
}

double aggregate_signal(std::span<const EventRecord> events, const std::string& signal, Instant window_start,
                        Instant window_end, Averaging averaging) {
  return aggregate_signal(events, builtin_signal(signal), window_start, window_end, averaging);
}

int count_ground_truth(std::span<const EventRecord> events, const std::string& attack_type, Instant t,
                       const Duration& t_g) {
  if (!t_g.positive()) throw_config("t_g must be positive");
  const Instant end = t + t_g;
  int gt = 0;
  for (const auto& e : events) {
    if (e.kind == EventKind::kAttack && e.attack_type == attack_type && t < e.timestamp && e.timestamp <= end) ++gt;
  }
  return gt > 1 ? 1 : gt;
}

Duration GranularityPair::tx_for(const std::string& signal) const {
  auto it = per_signal_tx.find(signal);
  return it == per_signal_tx.end() ? t_x : it->second;
}

std::string GranularityPair::tx_label() const {
  std::string out = format_duration(t_x);
  if (per_signal_tx.empty()) return out;
  out += "[";
  bool first = true;
  for (const auto& [name, d] : per_signal_tx) {
    if (!first) out += ";";
    out += name + "=" + format_duration(d);
    first = false;
  }
  return out + "]";
}

std::vector<GranularityPair> default_grid() {
  std::vector<GranularityPair> out;
  for (const char* tx : {"3d", "1w", "1m", "3m", "6m"}) {
    for (const char* tg : {"6h", "12h", "24h", "48h"}) out.push_back({parse_duration(tx), parse_duration(tg), {}});
  }
  return out;
}

EventTimeline::EventTimeline(std::vector<EventRecord> events, std::vector<SignalDef> signals)
    : events_(std::move(events)), signals_(std::move(signals)) {
  require_sorted(events_);
  index_.resize(signals_.size());
  for (const auto& e : events_) {
    validate_event(e);
    if (e.kind == EventKind::kAttack) {
      attacks_[*e.attack_type].push_back(e.timestamp.seconds);
      continue;
    }
    if (!first_signal_time_) first_signal_time_ = e.timestamp;
    for (std::size_t s = 0; s < signals_.size(); ++s) {
      if (!matches(signals_[s], e)) continue;
      index_[s].times.push_back(e.timestamp.seconds);
      index_[s].values.push_back(contribution(signals_[s], e));
    }
  }
}

double EventTimeline::signal_value(std::size_t signal, Instant window_start, Instant window_end,
                                   Averaging averaging) const {
  if (!(window_start < window_end)) throw_input("window start must precede window end");
  const auto& idx = index_.at(signal);
  const auto lo = std::upper_bound(idx.times.begin(), idx.times.end(), window_start.seconds) - idx.times.begin();
  const auto hi = std::upper_bound(idx.times.begin(), idx.times.end(), window_end.seconds) - idx.times.begin();
  double sum = 0;
  for (auto i = lo; i < hi; ++i) sum += idx.values[static_cast<std::size_t>(i)];
  return finish(signals_[signal], sum, static_cast<std::size_t>(hi - lo), window_start, window_end, averaging);
}

int EventTimeline::ground_truth(const std::string& attack_type, Instant t, const Duration& t_g) const {
  auto it = attacks_.find(attack_type);
  if (it == attacks_.end()) return 0;
  const auto& times = it->second;
  const Instant end = t + t_g;
  const auto lo = std::upper_bound(times.begin(), times.end(), t.seconds);
  const auto hi = std::upper_bound(times.begin(), times.end(), end.seconds);
  return hi > lo ? 1 : 0;
}

std::size_t expected_row_count(Instant gt_start, Instant gt_end, const Duration& t_g) {
  if (!t_g.is_fixed()) throw_config("closed-form row count needs a fixed-length t_g");
  const std::int64_t span = gt_end.seconds - gt_start.seconds - t_g.seconds;
  if (span < 0) return 0;
  return static_cast<std::size_t>(span / t_g.seconds) + 1;
}

std::vector<GeneratedDataset> generate_datasets(const EventTimeline& timeline,
                                                std::span<const std::string> attack_types,
                                                std::span<const GranularityPair> grid, Instant gt_start,
                                                Instant gt_end, const TimelineOptions& options) {
  if (!(gt_start < gt_end)) throw_input("ground-truth start must precede ground-truth end");
  if (attack_types.empty()) throw_config("no attack types configured");
  const auto& signals = timeline.signals();
  std::vector<std::string> names;
  for (const auto& s : signals) names.push_back(s.name);

  const auto history = options.history_start ? options.history_start : timeline.first_signal_time();
  if (!history) throw_input("event stream has no signal records");

  for (const auto& pair : grid) {
    validate_pair(pair);
    for (const auto& [name, d] : pair.per_signal_tx) {
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw_config("per-signal t_x override for unknown signal '" + name + "'");
      }
    }
    for (const auto& s : signals) {
      const Duration tx = pair.tx_for(s.name);
      if (gt_start - tx < *history) {
        throw_input("insufficient signal history for t_x=" + format_duration(tx) + " (" + s.name +
                    "): data starts " + format_instant(*history) + ", earliest usable currentTime is " +
                    format_instant(*history + tx));
      }
    }
  }

  std::vector<GeneratedDataset> out(attack_types.size() * grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t g) {
    const auto& pair = grid[g];
    std::vector<Instant> times;
    std::vector<std::vector<double>> features;
    for (Instant t = gt_start; t <= gt_end - pair.t_g; t = t + pair.t_g) {
      std::vector<double> f(signals.size());
      for (std::size_t s = 0; s < signals.size(); ++s) {
        f[s] = timeline.signal_value(s, t - pair.tx_for(signals[s].name), t, options.averaging);
      }
      times.push_back(t);
      features.push_back(std::move(f));
    }
    for (std::size_t a = 0; a < attack_types.size(); ++a) {
      std::vector<InstanceRow> rows;
      rows.reserve(times.size());
      for (std::size_t i = 0; i < times.size(); ++i) {
        rows.push_back(InstanceRow{features[i], timeline.ground_truth(attack_types[a], times[i], pair.t_g), 1.0});
      }
      Provenance prov{attack_types[a], pair.tx_label(), format_duration(pair.t_g)};
      out[a * grid.size() + g] =
          GeneratedDataset{attack_types[a], pair, WeightedDataset(names, std::move(rows), std::move(prov))};
    }
  });
  return out;
}

std::vector<GeneratedDataset> generate_datasets(std::span<const EventRecord> events,
                                                std::span<const std::string> attack_types,
                                                std::span<const GranularityPair> grid, Instant gt_start,
                                                Instant gt_end, const TimelineOptions& options) {
  EventTimeline timeline(std::vector<EventRecord>(events.begin(), events.end()), options.signals);
  return generate_datasets(timeline, attack_types, grid, gt_start, gt_end, options);
}

}  // namespace signalcast
