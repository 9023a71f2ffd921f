#include "signalcast/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "signalcast/error.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

WeightedDataset::WeightedDataset(std::vector<std::string> signal_names, std::vector<InstanceRow> rows,
                                 Provenance provenance, bool discrete, std::string class_name)
    : signal_names_(std::move(signal_names)),
      class_name_(std::move(class_name)),
      rows_(std::move(rows)),
      provenance_(std::move(provenance)),
      discrete_(discrete) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.features.size() != signal_names_.size()) {
      throw_input("row " + std::to_string(i) + " has " + std::to_string(r.features.size()) + " features, schema has " +
                  std::to_string(signal_names_.size()));
    }
    if (r.label != 0 && r.label != 1) throw_input("row " + std::to_string(i) + " has non-binary class label");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
      throw_input("row " + std::to_string(i) + " has non-positive weight");
    }
    for (double v : r.features) {
      if (std::isnan(v)) throw_input("row " + std::to_string(i) + " has a NaN feature");
    }
  }
}

double WeightedDataset::total_weight() const {
  double s = 0;
  for (const auto& r : rows_) s += r.weight;
  return s;
}

double WeightedDataset::class_weight(int label) const {
  double s = 0;
  for (const auto& r : rows_) {
    if (r.label == label) s += r.weight;
  }
  return s;
}

std::size_t WeightedDataset::class_count(int label) const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.label == label ? 1 : 0;
  return n;
}

double WeightedDataset::positive_rate() const {
  return rows_.empty() ? 0.0 : static_cast<double>(class_count(1)) / static_cast<double>(rows_.size());
}

void WeightedDataset::require_both_classes(const char* context) const {
  if (class_count(0) == 0 || class_count(1) == 0) {
    throw_input(std::string(context) + ": training data must contain both classes");
  }
}

WeightedDataset WeightedDataset::with_rows(std::vector<InstanceRow> rows, bool discrete) const {
  return WeightedDataset(signal_names_, std::move(rows), provenance_, discrete, class_name_);
}

WeightedDataset WeightedDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<InstanceRow> rows;
  rows.reserve(indices.size());
  for (auto i : indices) rows.push_back(rows_.at(i));
  return with_rows(std::move(rows));
}

WeightedDataset WeightedDataset::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  for (auto c : columns) names.push_back(signal_names_.at(c));
  std::vector<InstanceRow> rows;
  rows.reserve(rows_.size());
  for (const auto& r : rows_) {
    InstanceRow nr{{}, r.label, r.weight};
    for (auto c : columns) nr.features.push_back(r.features[c]);
    rows.push_back(std::move(nr));
  }
  return WeightedDataset(std::move(names), std::move(rows), provenance_, discrete_, class_name_);
}

std::size_t WeightedDataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < signal_names_.size(); ++i) {
    if (signal_names_[i] == name) return i;
  }
  throw_config("unknown signal '" + name + "'");
}

void write_dataset(const WeightedDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write dataset '" + path + "'");
  for (const auto& n : ds.signal_names()) out << n << ',';
  out << ds.class_name() << ",weight\n";
  for (const auto& r : ds.rows()) {
    for (double v : r.features) {
      if (ds.discrete()) {
        out << (v == kHigh ? "High" : "Low");
      } else {
        out << text::format_double(v);
      }
      out << ',';
    }
    out << r.label << ',' << text::format_double(r.weight) << '\n';
  }
  if (!out) throw_input("write failed for '" + path + "'");
}

WeightedDataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open dataset '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> names;
  std::string class_name;
  bool has_weight = false;
  bool header_seen = false;
  int discrete_state = -1;  // -1 unknown, 0 numeric, 1 Low/High
  std::vector<InstanceRow> rows;

  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(line_no);
    const auto fields = text::split(trimmed, ',');
    if (!header_seen) {
      header_seen = true;
      std::vector<std::string> cols;
      for (auto f : fields) cols.emplace_back(text::trim(f));
      if (!cols.empty() && cols.back() == "weight") {
        has_weight = true;
        cols.pop_back();
      }
      if (cols.empty()) throw_input(ctx + ": header has no class column");
      class_name = cols.back();
      cols.pop_back();
      names = std::move(cols);
      continue;
    }
    const std::size_t expected = names.size() + 1 + (has_weight ? 1 : 0);
    if (fields.size() != expected) {
      throw_input(ctx + ": expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    InstanceRow r;
    r.features.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto f = text::trim(fields[i]);
      const bool is_label = f == "Low" || f == "High";
      const int state = is_label ? 1 : 0;
      if (discrete_state == -1) discrete_state = state;
      if (state != discrete_state) throw_input(ctx + ": mixes Low/High and numeric feature values");
      r.features.push_back(is_label ? (f == "High" ? kHigh : kLow) : text::parse_double(f, ctx));
    }
    const long long label = text::parse_int(fields[names.size()], ctx);
    if (label != 0 && label != 1) throw_input(ctx + ": class must be 0 or 1");
    r.label = static_cast<int>(label);
    if (has_weight) {
      r.weight = text::parse_double(fields[names.size() + 1], ctx);
      if (!(r.weight > 0.0) || !std::isfinite(r.weight)) throw_input(ctx + ": weight must be positive");
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw_input(path + ": empty dataset file");
  return WeightedDataset(std::move(names), std::move(rows), Provenance{}, discrete_state == 1, class_name);
}

void write_metadata(const Metadata& meta, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write metadata '" + path + "'");
  for (const auto& [k, v] : meta) out << k << '=' << v << '\n';
  if (!out) throw_input("write failed for '" + path + "'");
}

std::map<std::string, std::string> read_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open metadata '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw_input(path + ":" + std::to_string(line_no) + ": expected key=value");
    out[std::string(text::trim(t.substr(0, eq)))] = std::string(text::trim(t.substr(eq + 1)));
  }
  return out;
}

Metadata dataset_metadata(const WeightedDataset& ds) {
  const auto& p = ds.provenance();
  return {
      {"attack_type", p.synthetic() ? "synthetic" : p.attack_type},
      {"t_x", p.t_x},
      {"t_g", p.t_g},
      {"rows", std::to_string(ds.size())},
      {"positive_rate", text::format_double(ds.positive_rate())},
  };
}

}  // namespace signalcast
