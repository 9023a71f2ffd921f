#include "signalcast/events.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "signalcast/error.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::kMention: return "mention";
    case EventKind::kEvent: return "event";
    case EventKind::kAttack: return "attack";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view text) {
  text = text::trim(text);
  if (text == "mention") return EventKind::kMention;
  if (text == "event") return EventKind::kEvent;
  if (text == "attack") return EventKind::kAttack;
  throw_input("unknown event kind '" + std::string(text) + "'");
}

void validate_event(const EventRecord& e) {
  if (e.tone && (*e.tone < -100.0 || *e.tone > 100.0)) {
    throw_input("tone " + text::format_double(*e.tone) + " outside [-100, 100] at " + format_instant(e.timestamp));
  }
  if (e.mentions && *e.mentions < 0) throw_input("negative mentions at " + format_instant(e.timestamp));
  if (e.articles && *e.articles < 0) throw_input("negative articles at " + format_instant(e.timestamp));
  if (e.kind == EventKind::kAttack && (!e.attack_type || e.attack_type->empty())) {
    throw_input("attack record without attack_type at " + format_instant(e.timestamp));
  }
  if (e.kind != EventKind::kAttack && e.attack_type) {
    throw_input("attack_type set on a non-attack record at " + format_instant(e.timestamp));
  }
}

void require_sorted(std::span<const EventRecord> events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp < events[i - 1].timestamp) {
      throw_input("events not sorted by timestamp at position " + std::to_string(i));
    }
  }
}

namespace {

void sort_events(std::vector<EventRecord>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.timestamp < b.timestamp; });
}

std::string where(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

Instant parse_mapped_time(std::string_view s, ColumnMapping::TimeFormat fmt, const std::string& ctx) {
  s = text::trim(s);
  switch (fmt) {
    case ColumnMapping::TimeFormat::kRfc3339:
      return parse_instant(s);
    case ColumnMapping::TimeFormat::kYyyymmdd:
      if (s.size() != 8) throw_input(ctx + ": expected YYYYMMDD, got '" + std::string(s) + "'");
      return parse_instant(std::string(s.substr(0, 4)) + "-" + std::string(s.substr(4, 2)) + "-" +
                           std::string(s.substr(6, 2)));
    case ColumnMapping::TimeFormat::kYyyymmddhhmmss:
      if (s.size() != 14) throw_input(ctx + ": expected YYYYMMDDhhmmss, got '" + std::string(s) + "'");
      return parse_instant(std::string(s.substr(0, 4)) + "-" + std::string(s.substr(4, 2)) + "-" +
                           std::string(s.substr(6, 2)) + "T" + std::string(s.substr(8, 2)) + ":" +
                           std::string(s.substr(10, 2)) + ":" + std::string(s.substr(12, 2)) + "Z");
  }
  throw_internal("unhandled time format");
}

}  // namespace

std::vector<EventRecord> read_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open events file '" + path + "'");

  char delim = ',';
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> cols;
  std::vector<EventRecord> out;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      const auto pos = trimmed.find("delimiter=");
      if (pos != std::string_view::npos) {
        const auto v = text::trim(trimmed.substr(pos + 10));
        if (v == "tab") {
          delim = '\t';
        } else if (v == "comma") {
          delim = ',';
        } else {
          throw_input(where(path, line_no) + ": unknown delimiter '" + std::string(v) + "'");
        }
      }
      continue;
    }
    const auto fields = text::split(trimmed, delim);
    if (cols.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) cols[std::string(text::trim(fields[i]))] = i;
      for (const char* required : {"timestamp", "stream_id", "kind"}) {
        if (!cols.count(required)) throw_input(where(path, line_no) + ": header lacks column '" + required + "'");
      }
      continue;
    }
    const std::string ctx = where(path, line_no);
    auto field = [&](const char* name) -> std::string_view {
      auto it = cols.find(name);
      if (it == cols.end() || it->second >= fields.size()) return {};
      return text::trim(fields[it->second]);
    };
    if (fields.size() > cols.size()) throw_input(ctx + ": more fields than header columns");

    EventRecord e;
    try {
      e.timestamp = parse_instant(field("timestamp"));
    } catch (const Error& err) {
      throw_input(ctx + ": " + err.what());
    }
    e.stream_id = std::string(field("stream_id"));
    if (e.stream_id.empty()) throw_input(ctx + ": empty stream_id");
    try {
      e.kind = parse_event_kind(field("kind"));
    } catch (const Error& err) {
      throw_input(ctx + ": " + err.what());
    }
    if (auto v = field("value"); !v.empty()) e.value = text::parse_double(v, ctx);
    if (auto v = field("tone"); !v.empty()) e.tone = text::parse_double(v, ctx);
    if (auto v = field("mentions"); !v.empty()) e.mentions = text::parse_int(v, ctx);
    if (auto v = field("articles"); !v.empty()) e.articles = text::parse_int(v, ctx);
    if (auto v = field("attack_type"); !v.empty()) e.attack_type = std::string(v);
    try {
      validate_event(e);
    } catch (const Error& err) {
      throw_input(ctx + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  if (cols.empty()) throw_input(path + ": missing header line");
  sort_events(out);
  return out;
}

std::vector<EventRecord> read_mapped_events(const std::string& path, const ColumnMapping& m) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open events file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<EventRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && m.has_header) continue;
    if (text::trim(line).empty()) continue;
    const std::string ctx = where(path, line_no);
    const auto fields = text::split(line, m.delimiter);
    auto at = [&](std::size_t idx) -> std::string_view {
      if (idx >= fields.size()) {
        throw_input(ctx + ": column " + std::to_string(idx) + " missing (row has " + std::to_string(fields.size()) +
                    " fields)");
      }
      return text::trim(fields[idx]);
    };
    EventRecord e;
    e.timestamp = parse_mapped_time(at(m.timestamp_col), m.time_format, ctx);
    e.stream_id = m.stream_id;
    e.kind = m.kind;
    if (m.value_col) e.value = text::parse_double(at(*m.value_col), ctx);
    if (m.tone_col) e.tone = text::parse_double(at(*m.tone_col), ctx);
    if (m.mentions_col) e.mentions = text::parse_int(at(*m.mentions_col), ctx);
    if (m.articles_col) e.articles = text::parse_int(at(*m.articles_col), ctx);
    if (m.attack_type_col) e.attack_type = std::string(at(*m.attack_type_col));
    try {
      validate_event(e);
    } catch (const Error& err) {
      throw_input(ctx + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  sort_events(out);
  return out;
}

void write_events(std::span<const EventRecord> events, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write events file '" + path + "'");
  out << "# delimiter=comma\n";
  out << "timestamp,stream_id,kind,value,tone,mentions,articles,attack_type\n";
  for (const auto& e : events) {
    out << format_instant(e.timestamp) << ',' << e.stream_id << ',' << event_kind_name(e.kind) << ','
        << text::format_double(e.value) << ',';
    if (e.tone) out << text::format_double(*e.tone);
    out << ',';
    if (e.mentions) out << *e.mentions;
    out << ',';
    if (e.articles) out << *e.articles;
    out << ',';
    if (e.attack_type) out << *e.attack_type;
    out << '\n';
  }
  if (!out) throw_input("write failed for '" + path + "'");
}

}  // namespace signalcast
