#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signalcast/dataset.hpp"
#include "signalcast/events.hpp"
#include "signalcast/time.hpp"

namespace signalcast {

/// How a signal turns the records in a window into one number.
enum class SignalKind {
  kMentionCount,           // sum of `value` over mention records
  kNegativeEventMentions,  // sum of `mentions` over events with tone < 0
  kNegativeEventArticles,  // sum of `articles` over events with tone < 0
  kNegativeEventTone,      // mean tone over events with tone < 0 (0 if none)
};

struct SignalDef {
  std::string name;
  SignalKind kind = SignalKind::kMentionCount;
  std::string stream_id;  // empty = any stream carrying the right record kind
};

/// Built-in definitions for TCM, TEM, GEM, GEA and GET. Throws
/// Error(kConfig) for any other name.
SignalDef builtin_signal(const std::string& name);
std::vector<SignalDef> default_signals();

enum class Averaging { kPerDay, kRawSum };
Averaging parse_averaging(std::string_view text);

/// Aggregates `signal` over the half-open window (window_start, window_end].
/// Count signals are divided by the window length in days unless `averaging`
/// is kRawSum. Requires sorted events.
double aggregate_signal(std::span<const EventRecord> events, const SignalDef& signal, Instant window_start,
                        Instant window_end, Averaging averaging = Averaging::kPerDay);
/// Same, resolving a built-in signal by name.
double aggregate_signal(std::span<const EventRecord> events, const std::string& signal, Instant window_start,
                        Instant window_end, Averaging averaging = Averaging::kPerDay);

/// 1 when at least one attack of `attack_type` falls in (t, t + t_g].
int count_ground_truth(std::span<const EventRecord> events, const std::string& attack_type, Instant t,
                       const Duration& t_g);

struct GranularityPair {
  Duration t_x;
  Duration t_g;
  std::map<std::string, Duration> per_signal_tx;

  Duration tx_for(const std::string& signal) const;
  /// "3m" or "3m[GEM=1m]".
  std::string tx_label() const;
  bool operator==(const GranularityPair&) const = default;
};

/// Default grid: t_x in {3d,1w,1m,3m,6m} crossed with t_g in {6h,12h,24h,48h}.
std::vector<GranularityPair> default_grid();

struct TimelineOptions {
  std::vector<SignalDef> signals = default_signals();
  Averaging averaging = Averaging::kPerDay;
  /// Earliest instant with usable signal data. Defaults to the first
  /// non-attack record.
  std::optional<Instant> history_start;
  unsigned workers = 1;
};

/// Pre-indexed, sorted event log; answers window queries for any signal.
class EventTimeline {
 public:
  EventTimeline(std::vector<EventRecord> events, std::vector<SignalDef> signals);

  std::span<const EventRecord> events() const { return events_; }
  const std::vector<SignalDef>& signals() const { return signals_; }
  std::optional<Instant> first_signal_time() const { return first_signal_time_; }

  double signal_value(std::size_t signal, Instant window_start, Instant window_end, Averaging averaging) const;
  int ground_truth(const std::string& attack_type, Instant t, const Duration& t_g) const;

 private:
  struct SignalIndex {
    std::vector<std::int64_t> times;
    std::vector<double> values;
  };

  std::vector<EventRecord> events_;
  std::vector<SignalDef> signals_;
  std::vector<SignalIndex> index_;
  std::map<std::string, std::vector<std::int64_t>> attacks_;
  std::optional<Instant> first_signal_time_;
};

struct GeneratedDataset {
  std::string attack_type;
  GranularityPair granularity;
  WeightedDataset data;
};

/// Closed-form row count of the generation loop for a fixed-length t_g.
std::size_t expected_row_count(Instant gt_start, Instant gt_end, const Duration& t_g);

/// One dataset per (attack type, granularity pair): rows at currentTime =
/// gt_start, gt_start + t_g, ... while currentTime <= gt_end - t_g. Output
/// order is attack-major, then grid order, independent of `workers`.
std::vector<GeneratedDataset> generate_datasets(const EventTimeline& timeline,
                                                std::span<const std::string> attack_types,
                                                std::span<const GranularityPair> grid, Instant gt_start,
                                                Instant gt_end, const TimelineOptions& options);

/// Convenience overload that indexes `events` first.
std::vector<GeneratedDataset> generate_datasets(std::span<const EventRecord> events,
                                                std::span<const std::string> attack_types,
                                                std::span<const GranularityPair> grid, Instant gt_start,
                                                Instant gt_end, const TimelineOptions& options = {});

}  // namespace signalcast
