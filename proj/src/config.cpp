#include "signalcast/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "signalcast/error.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"paths.events", "", "native event stream file (input of generate and sweep)"},
      {"paths.dataset", "", "dataset CSV read by the filter command"},
      {"paths.report", "", "report directory read by the report command (default: paths.out)"},
      {"paths.out", "out", "output directory"},

      {"run.seed", "1", "master seed for synthesis, folds and filters"},
      {"run.workers", "1", "worker threads"},
      {"run.attack_types", "", "attack types to model (empty: all present in the events)"},
      {"run.gt_start", "", "first prediction time (RFC 3339 or date)"},
      {"run.gt_end", "", "end of the ground-truth span"},
      {"run.history_start", "", "earliest usable signal time (default: first signal record)"},

      {"grid.t_x", "3d,1w,1m,3m,6m", "signal look-back durations"},
      {"grid.t_g", "6h,12h,24h,48h", "ground-truth durations"},
      {"grid.per_signal_tx", "", "per-signal look-back overrides, e.g. GEM=1m,TEM=1w"},

      {"signals.names", "TCM,TEM,GEM,GEA,GET", "signals to aggregate"},
      {"signals.averaging", "per_day", "per_day or raw_sum"},

      {"filters.list", "none,smote,spread_subsample,smote_pp", "filters evaluated by sweep; the first is the baseline"},
      {"filters.filter", "smote_pp", "filter applied by the filter command"},
      {"filters.smote_percent", "auto", "SMOTE oversampling percent, or auto to balance the classes"},
      {"filters.smote_k", "5", "SMOTE nearest neighbours"},
      {"filters.spread_ratio", "1", "majority/minority ratio kept by spread subsampling"},
      {"filters.p", "20", "SMOTE++ percent of majority rows removed"},
      {"filters.k2", "5", "SMOTE++ nearest neighbours for synthesis"},
      {"filters.kmeans_max_iter", "100", "SMOTE++ k-means iteration cap"},
      {"filters.max_k", "0", "SMOTE++ cap on the cluster-count sweep (0: none)"},

      {"classifier.structure", "naive", "naive or k2_hill_climb"},
      {"classifier.alpha", "0.5", "CPT smoothing pseudo-count"},
      {"classifier.max_parents", "2", "parent limit per signal node, class edge included"},
      {"classifier.discretize", "median", "median, entropy or mdl cut points"},

      {"cv.folds", "10", "cross-validation folds"},
      {"cv.repetitions", "10", "cross-validation repetitions"},
      {"cv.stratified", "true", "stratify folds by class"},

      {"eval.significance", "corrected_resampled_t", "corrected_resampled_t or paired_t"},
      {"eval.variable_tx", "true", "run the per-signal t_x pass after the grid"},
      {"eval.cfs", "true", "count CFS selections per dataset"},
      {"eval.cfs_repetitions", "1", "fold splits pooled into the CFS counts"},
      {"eval.cfs_discretize", "mdl", "binning used before symmetrical uncertainty (median, entropy or mdl)"},

      {"synth.start", "2015-09-01", "first instant of the synthetic stream"},
      {"synth.end", "2016-10-30", "end of the synthetic stream"},
      {"synth.attack_start", "2016-04-01", "attacks are scheduled from here to synth.end"},
      {"synth.attack_bin", "6h", "attack scheduling bin"},
      {"synth.signals", "TCM:4:0.2,TEM:2:0.2,GEM:6:0.2,GEA:3:0.2,GET:3:0.2", "name:base_rate:noise per signal"},
      {"synth.events_per_day", "40", "global events per day"},
      {"synth.negative_fraction", "0.4", "share of events with negative tone"},
      {"synth.planted", "GEM,GEA", "signals that lead attacks"},
      {"synth.lead", "1m", "lead window of the planted signals"},
      {"synth.strength", "3", "planted intensity lift (0: null model)"},
      {"synth.concentration", "10", "attack preference for active regimes per unit strength"},
      {"synth.active_mean_days", "25", "mean active spell length"},
      {"synth.quiet_mean_days", "45", "mean quiet spell length"},
      {"synth.attacks", "Malware:0.36,Defacement:0.15,DOS:0.02,MEU:0.10", "type:density of attacked bins"},
      {"synth.extra_attacks", "0.3", "mean extra attacks inside an attacked bin"},

      {"mapping.file", "", "third-party event export read through the column mapping"},
      {"mapping.delimiter", "tab", "tab or comma"},
      {"mapping.has_header", "false", "skip the first line"},
      {"mapping.timestamp_col", "0", "zero-based timestamp column"},
      {"mapping.time_format", "yyyymmdd", "rfc3339, yyyymmdd or yyyymmddhhmmss"},
      {"mapping.stream_id", "gdelt-events", "stream id assigned to mapped records"},
      {"mapping.kind", "event", "record kind assigned to mapped records"},
      {"mapping.value_col", "", "value column (optional)"},
      {"mapping.tone_col", "", "tone column (optional)"},
      {"mapping.mentions_col", "", "mentions column (optional)"},
      {"mapping.articles_col", "", "articles column (optional)"},
      {"mapping.attack_type_col", "", "attack type column (optional)"},
  };
  return keys;
}

namespace {

const ConfigKey* find_key(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string ctx(const std::string& key) { return "config key " + key; }

}  // namespace

std::string env_var_name(const std::string& key) {
  std::string out(Config::kEnvPrefix);
  for (char c : key) out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void Config::parse(std::string_view text, const std::string& source) {
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    std::string line(text::trim(raw));
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw_config(where + ": unterminated section header");
      section = std::string(text::trim(std::string_view(line).substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw_config(where + ": expected key = value");
    std::string key(text::trim(std::string_view(line).substr(0, eq)));
    std::string value(text::trim(std::string_view(line).substr(eq + 1)));
    if (!section.empty()) key = section + "." + key;
    if (!find_key(key)) throw_config(where + ": unknown key '" + key + "'");
    values_[key] = value;
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  parse(buf.str(), path);
}

void Config::apply_env(const std::function<const char*(const char*)>& lookup) {
  for (const auto& k : config_keys()) {
    const std::string name = env_var_name(k.key);
    const char* v = lookup ? lookup(name.c_str()) : std::getenv(name.c_str());
    if (v) values_[k.key] = v;
  }
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw_config("unknown config key '" + key + "'");
  values_[key] = value;
}

bool Config::has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string Config::get(const std::string& key) const {
  const auto* k = find_key(key);
  if (!k) throw_internal("lookup of unregistered config key '" + key + "'");
  auto it = values_.find(key);
  return it != values_.end() ? it->second : k->default_value;
}

std::optional<std::string> Config::get_opt(const std::string& key) const {
  auto v = get(key);
  if (v.empty()) return std::nullopt;
  return v;
}

double Config::get_double(const std::string& key) const {
  try {
    return text::parse_double(get(key), ctx(key));
  } catch (const Error& e) {
    throw_config(e.what());
  }
}

long long Config::get_int(const std::string& key) const {
  try {
    return text::parse_int(get(key), ctx(key));
  } catch (const Error& e) {
    throw_config(e.what());
  }
}

bool Config::get_bool(const std::string& key) const {
  try {
    return text::parse_bool(get(key), ctx(key));
  } catch (const Error& e) {
    throw_config(e.what());
  }
}

Duration Config::get_duration(const std::string& key) const { return parse_duration(get(key)); }

Instant Config::get_instant(const std::string& key) const {
  const auto v = get(key);
  if (v.empty()) throw_config(ctx(key) + " is required");
  try {
    return parse_instant(v);
  } catch (const Error& e) {
    throw_config(ctx(key) + ": " + e.what());
  }
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const auto v = get(key);
  if (text::trim(v).empty()) return out;
  for (auto part : text::split(v, ',')) {
    auto t = text::trim(part);
    if (t.empty()) throw_config(ctx(key) + ": empty list element");
    out.emplace_back(t);
  }
  return out;
}

namespace {

std::pair<std::string, std::string> split_pair(const std::string& item, char sep, const std::string& key) {
  const auto pos = item.find(sep);
  if (pos == std::string::npos) throw_config(ctx(key) + ": expected name" + sep + "value in '" + item + "'");
  return {std::string(text::trim(std::string_view(item).substr(0, pos))),
          std::string(text::trim(std::string_view(item).substr(pos + 1)))};
}

long long bounded_int(const Config& c, const std::string& key, long long lo, long long hi) {
  const auto v = c.get_int(key);
  if (v < lo || v > hi) {
    throw_config(ctx(key) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::optional<std::size_t> optional_col(const Config& c, const std::string& key) {
  if (!c.has(key)) return std::nullopt;
  return static_cast<std::size_t>(bounded_int(c, key, 0, 1 << 20));
}

}  // namespace

std::vector<GranularityPair> grid_from_config(const Config& c) {
  std::map<std::string, Duration> overrides;
  for (const auto& item : c.get_list("grid.per_signal_tx")) {
    auto [name, dur] = split_pair(item, '=', "grid.per_signal_tx");
    builtin_signal(name);
    overrides[name] = parse_duration(dur);
  }
  const auto tx = c.get_list("grid.t_x");
  const auto tg = c.get_list("grid.t_g");
  if (tx.empty() || tg.empty()) throw_config("grid.t_x and grid.t_g must not be empty");
  std::vector<GranularityPair> grid;
  for (const auto& x : tx) {
    for (const auto& g : tg) grid.push_back({parse_duration(x), parse_duration(g), overrides});
  }
  return grid;
}

TimelineOptions timeline_options_from_config(const Config& c) {
  TimelineOptions o;
  o.signals.clear();
  std::set<std::string> seen;
  for (const auto& n : c.get_list("signals.names")) {
    if (!seen.insert(n).second) throw_config("signal '" + n + "' listed twice");
    o.signals.push_back(builtin_signal(n));
  }
  if (o.signals.empty()) throw_config("signals.names must not be empty");
  o.averaging = parse_averaging(c.get("signals.averaging"));
  if (c.has("run.history_start")) o.history_start = c.get_instant("run.history_start");
  o.workers = static_cast<unsigned>(bounded_int(c, "run.workers", 1, 1024));
  return o;
}

FilterSpec filter_from_config(const Config& c, const std::string& name) {
  FilterSpec f;
  f.kind = parse_filter_kind(name);
  const auto pct = c.get("filters.smote_percent");
  if (pct != "auto") {
    f.smote_percent = c.get_double("filters.smote_percent");
    if (*f.smote_percent < 0) throw_config("filters.smote_percent must be >= 0");
  }
  f.smote_k = static_cast<int>(bounded_int(c, "filters.smote_k", 1, 1000));
  f.spread_ratio = c.get_double("filters.spread_ratio");
  if (!(f.spread_ratio >= 1.0)) throw_config("filters.spread_ratio must be >= 1");
  f.smote_pp.p = c.get_double("filters.p");
  f.smote_pp.k2 = static_cast<int>(bounded_int(c, "filters.k2", 1, 1000));
  f.smote_pp.kmeans_max_iter = static_cast<int>(bounded_int(c, "filters.kmeans_max_iter", 1, 100000));
  f.smote_pp.max_k = static_cast<std::size_t>(bounded_int(c, "filters.max_k", 0, 1 << 20));
  f.smote_pp.seed = static_cast<std::uint64_t>(c.get_int("run.seed"));
  f.smote_pp.validate();
  return f;
}

std::vector<FilterSpec> filters_from_config(const Config& c) {
  std::vector<FilterSpec> out;
  std::set<std::string> seen;
  for (const auto& n : c.get_list("filters.list")) {
    auto f = filter_from_config(c, n);
    if (!seen.insert(f.name()).second) throw_config("filter '" + f.name() + "' listed twice");
    out.push_back(std::move(f));
  }
  if (out.empty()) throw_config("filters.list must not be empty");
  return out;
}

ClassifierConfig classifier_from_config(const Config& c) {
  ClassifierConfig cc;
  cc.structure = parse_structure_strategy(c.get("classifier.structure"));
  cc.alpha = c.get_double("classifier.alpha");
  if (!(cc.alpha > 0)) throw_config("classifier.alpha must be > 0");
  cc.max_parents = static_cast<int>(bounded_int(c, "classifier.max_parents", 1, 16));
  cc.discretize = parse_discretize_strategy(c.get("classifier.discretize"));
  return cc;
}

CvPlan cv_plan_from_config(const Config& c) {
  CvPlan p;
  p.folds = static_cast<int>(bounded_int(c, "cv.folds", 2, 1000));
  p.repetitions = static_cast<int>(bounded_int(c, "cv.repetitions", 1, 1000));
  p.stratified = c.get_bool("cv.stratified");
  p.seed = static_cast<std::uint64_t>(c.get_int("run.seed"));
  p.validate();
  return p;
}

SyntheticSpec synthetic_spec_from_config(const Config& c) {
  SyntheticSpec s;
  s.start = c.get_instant("synth.start");
  s.end = c.get_instant("synth.end");
  if (c.has("synth.attack_start")) s.attack_start = c.get_instant("synth.attack_start");
  s.attack_bin = c.get_duration("synth.attack_bin");
  for (const auto& item : c.get_list("synth.signals")) {
    const auto parts = text::split(item, ':');
    if (parts.size() != 3) throw_config("synth.signals: expected name:base_rate:noise in '" + item + "'");
    s.signals.push_back({std::string(text::trim(parts[0])), text::parse_double(parts[1], "synth.signals"),
                         text::parse_double(parts[2], "synth.signals")});
  }
  s.events_per_day = c.get_double("synth.events_per_day");
  s.negative_fraction = c.get_double("synth.negative_fraction");
  s.planted = c.get_list("synth.planted");
  s.lead = c.get_duration("synth.lead");
  s.strength = c.get_double("synth.strength");
  s.concentration = c.get_double("synth.concentration");
  s.active_mean_days = c.get_double("synth.active_mean_days");
  s.quiet_mean_days = c.get_double("synth.quiet_mean_days");
  for (const auto& item : c.get_list("synth.attacks")) {
    auto [name, dens] = split_pair(item, ':', "synth.attacks");
    s.attacks.push_back({name, text::parse_double(dens, "synth.attacks")});
  }
  s.extra_attacks = c.get_double("synth.extra_attacks");
  s.seed = static_cast<std::uint64_t>(c.get_int("run.seed"));
  s.validate();
  return s;
}

std::optional<ColumnMapping> mapping_from_config(const Config& c) {
  if (!c.has("mapping.file")) return std::nullopt;
  ColumnMapping m;
  const auto delim = c.get("mapping.delimiter");
  if (delim == "tab") {
    m.delimiter = '\t';
  } else if (delim == "comma") {
    m.delimiter = ',';
  } else {
    throw_config("mapping.delimiter must be tab or comma");
  }
  m.has_header = c.get_bool("mapping.has_header");
  m.timestamp_col = static_cast<std::size_t>(bounded_int(c, "mapping.timestamp_col", 0, 1 << 20));
  const auto fmt = c.get("mapping.time_format");
  if (fmt == "rfc3339") {
    m.time_format = ColumnMapping::TimeFormat::kRfc3339;
  } else if (fmt == "yyyymmdd") {
    m.time_format = ColumnMapping::TimeFormat::kYyyymmdd;
  } else if (fmt == "yyyymmddhhmmss") {
    m.time_format = ColumnMapping::TimeFormat::kYyyymmddhhmmss;
  } else {
    throw_config("mapping.time_format must be rfc3339, yyyymmdd or yyyymmddhhmmss");
  }
  m.stream_id = c.get("mapping.stream_id");
  try {
    m.kind = parse_event_kind(c.get("mapping.kind"));
  } catch (const Error& e) {
    throw_config(std::string("mapping.kind: ") + e.what());
  }
  m.value_col = optional_col(c, "mapping.value_col");
  m.tone_col = optional_col(c, "mapping.tone_col");
  m.mentions_col = optional_col(c, "mapping.mentions_col");
  m.articles_col = optional_col(c, "mapping.articles_col");
  m.attack_type_col = optional_col(c, "mapping.attack_type_col");
  return m;
}

SweepConfig sweep_config_from_config(const Config& c) {
  SweepConfig s;
  s.grid = grid_from_config(c);
  s.filters = filters_from_config(c);
  s.classifier = classifier_from_config(c);
  s.plan = cv_plan_from_config(c);
  s.significance = parse_significance_method(c.get("eval.significance"));
  s.timeline = timeline_options_from_config(c);
  s.gt_start = c.get_instant("run.gt_start");
  s.gt_end = c.get_instant("run.gt_end");
  if (!(s.gt_start < s.gt_end)) throw_config("run.gt_start must precede run.gt_end");
  s.variable_tx_pass = c.get_bool("eval.variable_tx");
  s.cfs = c.get_bool("eval.cfs");
  s.cfs_options.repetitions = static_cast<int>(bounded_int(c, "eval.cfs_repetitions", 1, 1000));
  s.cfs_options.discretize = parse_discretize_strategy(c.get("eval.cfs_discretize"));
  s.workers = s.timeline.workers;
  return s;
}

std::vector<EventRecord> load_events_from_config(const Config& c) {
  std::vector<EventRecord> events;
  const auto mapping = mapping_from_config(c);
  if (!c.has("paths.events") && !mapping) throw_config("paths.events is required");
  if (c.has("paths.events")) {
    const auto path = c.get("paths.events");
    if (!std::filesystem::exists(path)) throw_input("events file '" + path + "' does not exist");
    events = read_events(path);
  }
  if (mapping) {
    const auto path = c.get("mapping.file");
    if (!std::filesystem::exists(path)) throw_input("mapped events file '" + path + "' does not exist");
    auto more = read_mapped_events(path, *mapping);
    events.insert(events.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    std::stable_sort(events.begin(), events.end(),
                     [](const EventRecord& a, const EventRecord& b) { return a.timestamp < b.timestamp; });
  }
  return events;
}

std::vector<std::string> attack_types_for(const Config& c, const std::vector<EventRecord>& events) {
  auto types = c.get_list("run.attack_types");
  if (!types.empty()) return types;
  std::set<std::string> found;
  for (const auto& e : events) {
    if (e.kind == EventKind::kAttack && e.attack_type) found.insert(*e.attack_type);
  }
  if (found.empty()) throw_input("no attack records found and run.attack_types is empty");
  return {found.begin(), found.end()};
}

}  // namespace signalcast
