#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signalcast/events.hpp"
#include "signalcast/harness.hpp"
#include "signalcast/synth.hpp"
#include "signalcast/timeline.hpp"

namespace signalcast {

/// Flat key=value configuration. Keys are "section.name"; a "[section]"
/// line in a file prefixes the keys that follow it. Every key can be
/// overridden from the environment as SIGNALCAST_SECTION_NAME.
class Config {
 public:
  static constexpr std::string_view kEnvPrefix = "SIGNALCAST_";

  /// Parses configuration text. `source` names the origin in error messages.
  void parse(std::string_view text, const std::string& source);
  /// Reads and parses a file; Error(kInput) if it cannot be opened.
  void load_file(const std::string& path);
  /// Applies SIGNALCAST_* overrides using `lookup` (defaults to getenv).
  void apply_env(const std::function<const char*(const char*)>& lookup = {});
  /// Sets one key; Error(kConfig) for unknown keys.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  /// The value, or the key's documented default.
  std::string get(const std::string& key) const;
  std::optional<std::string> get_opt(const std::string& key) const;

  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  Duration get_duration(const std::string& key) const;
  Instant get_instant(const std::string& key) const;
  /// Comma-separated list; empty value gives an empty list.
  std::vector<std::string> get_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct ConfigKey {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Every recognised key with its default and a one-line description.
const std::vector<ConfigKey>& config_keys();

/// "run.seed" -> "SIGNALCAST_RUN_SEED".
std::string env_var_name(const std::string& key);

std::vector<GranularityPair> grid_from_config(const Config& c);
TimelineOptions timeline_options_from_config(const Config& c);
FilterSpec filter_from_config(const Config& c, const std::string& name);
std::vector<FilterSpec> filters_from_config(const Config& c);
ClassifierConfig classifier_from_config(const Config& c);
CvPlan cv_plan_from_config(const Config& c);
SyntheticSpec synthetic_spec_from_config(const Config& c);
std::optional<ColumnMapping> mapping_from_config(const Config& c);
/// SweepConfig without the attack types (see attack_types_for).
SweepConfig sweep_config_from_config(const Config& c);

/// Reads paths.events (and mapping.file when set); merged and sorted.
std::vector<EventRecord> load_events_from_config(const Config& c);
/// run.attack_types, or every attack type present in `events` (sorted).
std::vector<std::string> attack_types_for(const Config& c, const std::vector<EventRecord>& events);

}  // namespace signalcast
