#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signalcast/time.hpp"

namespace signalcast {

enum class EventKind { kMention, kEvent, kAttack };

const char* event_kind_name(EventKind kind);
EventKind parse_event_kind(std::string_view text);

/// One time-stamped observation from a source stream.
struct EventRecord {
  Instant timestamp;
  std::string stream_id;
  EventKind kind = EventKind::kMention;
  double value = 1.0;  // count carried by a mention record, or a raw value
  std::optional<double> tone;
  std::optional<std::int64_t> mentions;
  std::optional<std::int64_t> articles;
  std::optional<std::string> attack_type;
};

/// Throws Error(kInput) when a record breaks the tone range, count sign, or
/// attack-type rules.
void validate_event(const EventRecord& e);

/// Throws Error(kInput) naming the first out-of-order position.
void require_sorted(std::span<const EventRecord> events);

/// Maps columns of a third-party delimited export onto EventRecord fields.
/// Column indices are zero-based; absent optionals mean "not in this file".
struct ColumnMapping {
  enum class TimeFormat { kRfc3339, kYyyymmdd, kYyyymmddhhmmss };

  char delimiter = '\t';
  bool has_header = false;
  std::size_t timestamp_col = 0;
  TimeFormat time_format = TimeFormat::kYyyymmdd;
  std::string stream_id = "gdelt-events";
  EventKind kind = EventKind::kEvent;
  std::optional<std::size_t> value_col;
  std::optional<std::size_t> tone_col;
  std::optional<std::size_t> mentions_col;
  std::optional<std::size_t> articles_col;
  std::optional<std::size_t> attack_type_col;
};

/// Reads the native event format: optional "# delimiter=tab|comma" directive,
/// a header naming the columns, then one record per line. Records are
/// returned stably sorted by timestamp.
std::vector<EventRecord> read_events(const std::string& path);

/// Reads a third-party export through a column mapping.
std::vector<EventRecord> read_mapped_events(const std::string& path, const ColumnMapping& mapping);

/// Writes the native comma-separated format with a header line.
void write_events(std::span<const EventRecord> events, const std::string& path);

}  // namespace signalcast
