#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signalcast/dataset.hpp"
#include "signalcast/discretizer.hpp"

namespace signalcast {

/// parents[i] lists the parent node indices of node i.
using ParentMap = std::vector<std::vector<std::size_t>>;

/// One CPT row: {P(Low | config), P(High | config)}.
using CptRow = std::array<double, 2>;

/// Partial assignment over all nodes; nullopt = unobserved.
using Evidence = std::vector<std::optional<int>>;

enum class StructureStrategy { kNaive, kK2HillClimb };
StructureStrategy parse_structure_strategy(std::string_view text);
const char* structure_strategy_name(StructureStrategy s);

bool is_acyclic(const ParentMap& parents);

/// Discrete network over binary nodes. Immutable once built.
class BayesNetModel {
 public:
  BayesNetModel() = default;
  /// cpts[i] has 2^|parents[i]| rows; row index bit j is the value of
  /// parents[i][j]. Throws Error(kInput) on a cycle, a bad table shape, or
  /// a row that does not sum to 1 within 1e-9.
  BayesNetModel(std::vector<std::string> nodes, std::size_t class_node, ParentMap parents,
                std::vector<std::vector<CptRow>> cpts, Discretizer discretizer = {});

  const std::vector<std::string>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t class_node() const { return class_node_; }
  const ParentMap& parents() const { return parents_; }
  const std::vector<std::vector<CptRow>>& cpts() const { return cpts_; }
  const Discretizer& discretizer() const { return discretizer_; }
  std::size_t node_index(const std::string& name) const;

  /// Signal nodes in order (every node except the class node).
  std::vector<std::size_t> signal_nodes() const;

  /// P(node = value | parents as in `assignment`).
  double conditional(std::size_t node, int value, std::span<const int> assignment) const;

  bool operator==(const BayesNetModel&) const = default;

 private:
  std::vector<std::string> nodes_;
  std::size_t class_node_ = 0;
  ParentMap parents_;
  std::vector<std::vector<CptRow>> cpts_;
  Discretizer discretizer_;
};

/// Node layout used for datasets: signals in schema order, class last.
std::vector<std::string> dataset_nodes(const WeightedDataset& ds);

/// Cooper-Herskovits (K2) log score of one node given its parents, with
/// uniform Dirichlet priors, on weighted counts.
double k2_node_score(const WeightedDataset& train, std::size_t node, std::span<const std::size_t> parents);
double k2_score(const WeightedDataset& train, const ParentMap& parents);

/// Naive: the class is the only parent of every signal. K2 hill climb starts
/// there and greedily adds the signal->signal edge with the largest score
/// gain while one exists and the node keeps at most `max_parents` parents
/// (the class edge included). Requires discrete data with both classes.
ParentMap learn_structure(const WeightedDataset& train, int max_parents, StructureStrategy strategy);

/// CPT entries (weighted count + alpha) / (config total + 2 alpha). A
/// parent configuration with zero total weight and alpha = 0 gets 0.5/0.5.
BayesNetModel fit_cpts(const WeightedDataset& train, const ParentMap& parents, double alpha,
                       Discretizer discretizer = {});

/// Product of CPT lookups over a full assignment.
double joint_probability(const BayesNetModel& model, std::span<const int> assignment);

/// Exact inference by enumeration over the unobserved nodes. An observed
/// query node yields a point mass on its value. Throws Error(kInput) for
/// impossible evidence.
std::array<double, 2> posterior(const BayesNetModel& model, const Evidence& evidence, std::size_t query);

/// P(class = 1 | all signals). `features` are Low/High in signal order.
double predict_score(const BayesNetModel& model, std::span<const double> features);

/// Scores every row; numeric datasets go through the model's discretizer.
std::vector<double> predict_scores(const BayesNetModel& model, const WeightedDataset& ds);

struct SignalImportance {
  std::string signal;
  double p_high_attack = 0;     // P(High | A=1)
  double p_low_attack = 0;      // P(Low | A=1)
  double p_high_no_attack = 0;  // P(High | A=0)
  double p_low_no_attack = 0;   // P(Low | A=0)
  double discriminativeness = 0;
  bool connected_to_class = false;
};

struct CptReport {
  std::vector<SignalImportance> signals;

  /// Signals sorted by discriminativeness, descending (stable).
  std::vector<SignalImportance> ranked() const;
};

CptReport importance_report(const BayesNetModel& model);

/// Flat text, one fact per line, doubles at 17 significant digits.
void write_model(const BayesNetModel& model, const std::string& path);
BayesNetModel read_model(const std::string& path);
std::string model_to_string(const BayesNetModel& model);
BayesNetModel model_from_string(const std::string& text);

}  // namespace signalcast
