#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace signalcast {

/// Feature value encoding after discretization.
inline constexpr double kLow = 0.0;
inline constexpr double kHigh = 1.0;

struct InstanceRow {
  std::vector<double> features;
  int label = 0;  // 0 = no attack, 1 = attack
  double weight = 1.0;

  bool operator==(const InstanceRow&) const = default;
};

/// Where a dataset came from. An empty attack type marks synthetic data.
struct Provenance {
  std::string attack_type;
  std::string t_x;
  std::string t_g;

  bool synthetic() const { return attack_type.empty(); }
  bool operator==(const Provenance&) const = default;
};

/// Ordered, immutable collection of weighted binary-class rows.
class WeightedDataset {
 public:
  WeightedDataset() = default;
  /// Validates arity, labels and weights; throws Error(kInput) on violation.
  WeightedDataset(std::vector<std::string> signal_names, std::vector<InstanceRow> rows, Provenance provenance = {},
                  bool discrete = false, std::string class_name = "class");

  const std::vector<std::string>& signal_names() const { return signal_names_; }
  const std::string& class_name() const { return class_name_; }
  const Provenance& provenance() const { return provenance_; }
  bool discrete() const { return discrete_; }

  std::size_t arity() const { return signal_names_.size(); }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<InstanceRow>& rows() const { return rows_; }
  const InstanceRow& row(std::size_t i) const { return rows_[i]; }

  double total_weight() const;
  double class_weight(int label) const;
  std::size_t class_count(int label) const;
  double positive_rate() const;  // fraction of rows with label 1

  /// Throws Error(kInput) unless both classes are present with positive weight.
  void require_both_classes(const char* context) const;

  /// Same schema, different rows.
  WeightedDataset with_rows(std::vector<InstanceRow> rows, bool discrete) const;
  WeightedDataset with_rows(std::vector<InstanceRow> rows) const { return with_rows(std::move(rows), discrete_); }
  WeightedDataset subset(std::span<const std::size_t> indices) const;
  /// Keeps only the named columns, in the given order.
  WeightedDataset select_columns(std::span<const std::size_t> columns) const;

  std::size_t column_index(const std::string& name) const;

  bool operator==(const WeightedDataset&) const = default;

 private:
  std::vector<std::string> signal_names_;
  std::string class_name_ = "class";
  std::vector<InstanceRow> rows_;
  Provenance provenance_;
  bool discrete_ = false;
};

/// CSV with header "sig_1,...,sig_n,class,weight". Discrete features are
/// written as Low/High. Values round-trip exactly.
void write_dataset(const WeightedDataset& ds, const std::string& path);

/// Inverse of write_dataset. The weight column is optional (defaults to 1).
/// Errors carry "path:line".
WeightedDataset read_dataset(const std::string& path);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Flat key=value sidecar.
void write_metadata(const Metadata& meta, const std::string& path);
std::map<std::string, std::string> read_metadata(const std::string& path);

/// Standard sidecar for a generated dataset.
Metadata dataset_metadata(const WeightedDataset& ds);

}  // namespace signalcast
