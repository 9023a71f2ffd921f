#include "signalcast/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "signalcast/error.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

StructureStrategy parse_structure_strategy(std::string_view text) {
  if (text == "naive") return StructureStrategy::kNaive;
  if (text == "k2_hill_climb" || text == "k2") return StructureStrategy::kK2HillClimb;
  throw_config("unknown structure strategy '" + std::string(text) + "'");
}

const char* structure_strategy_name(StructureStrategy s) {
  return s == StructureStrategy::kNaive ? "naive" : "k2_hill_climb";
}

bool is_acyclic(const ParentMap& parents) {
  const std::size_t n = parents.size();
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  // Iterative DFS over parent edges.
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < parents[node].size()) {
        const std::size_t p = parents[node][next++];
        if (p >= n) return false;
        if (state[p] == 1) return false;
        if (state[p] == 0) {
          state[p] = 1;
          stack.emplace_back(p, 0);
        }
      } else {
        state[node] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

namespace {

std::size_t config_index(const std::vector<std::size_t>& parents, std::span<const int> assignment) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (assignment[parents[j]]) idx |= std::size_t{1} << j;
  }
  return idx;
}

int dataset_value(const InstanceRow& r, std::size_t node, std::size_t arity) {
  if (node == arity) return r.label;
  return r.features[node] == kHigh ? 1 : 0;
}

void require_discrete(const WeightedDataset& ds, const char* context) {
  if (!ds.discrete()) throw_input(std::string(context) + ": dataset must be discretized first");
}

}  // namespace

BayesNetModel::BayesNetModel(std::vector<std::string> nodes, std::size_t class_node, ParentMap parents,
                             std::vector<std::vector<CptRow>> cpts, Discretizer discretizer)
    : nodes_(std::move(nodes)),
      class_node_(class_node),
      parents_(std::move(parents)),
      cpts_(std::move(cpts)),
      discretizer_(std::move(discretizer)) {
  const std::size_t n = nodes_.size();
  if (class_node_ >= n) throw_input("class node index out of range");
  if (parents_.size() != n || cpts_.size() != n) throw_input("parent map and CPTs must cover every node");
  if (!is_acyclic(parents_)) throw_input("network structure has a cycle");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rows = std::size_t{1} << parents_[i].size();
    if (cpts_[i].size() != rows) {
      throw_input("CPT of node " + nodes_[i] + " has " + std::to_string(cpts_[i].size()) + " rows, expected " +
                  std::to_string(rows));
    }
    for (const auto& row : cpts_[i]) {
      if (row[0] < 0 || row[1] < 0 || std::abs(row[0] + row[1] - 1.0) > 1e-9) {
        throw_input("CPT row of node " + nodes_[i] + " does not sum to 1");
      }
    }
  }
  if (!discretizer_.empty()) {
    const auto sig = signal_nodes();
    if (sig.size() != discretizer_.names().size()) throw_input("discretizer does not match the signal nodes");
    for (std::size_t k = 0; k < sig.size(); ++k) {
      if (nodes_[sig[k]] != discretizer_.names()[k]) throw_input("discretizer does not match the signal nodes");
    }
  }
}

std::size_t BayesNetModel::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == name) return i;
  }
  throw_input("unknown node '" + name + "'");
}

std::vector<std::size_t> BayesNetModel::signal_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i != class_node_) out.push_back(i);
  }
  return out;
}

double BayesNetModel::conditional(std::size_t node, int value, std::span<const int> assignment) const {
  return cpts_[node][config_index(parents_[node], assignment)][value];
}

std::vector<std::string> dataset_nodes(const WeightedDataset& ds) {
  auto nodes = ds.signal_names();
  nodes.push_back(ds.class_name());
  return nodes;
}

double k2_node_score(const WeightedDataset& train, std::size_t node, std::span<const std::size_t> parents) {
  const std::size_t arity = train.arity();
  const std::size_t configs = std::size_t{1} << parents.size();
  std::vector<std::array<double, 2>> counts(configs, {0.0, 0.0});
  for (const auto& r : train.rows()) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < parents.size(); ++j) {
      if (dataset_value(r, parents[j], arity)) idx |= std::size_t{1} << j;
    }
    counts[idx][dataset_value(r, node, arity)] += r.weight;
  }
  // r = 2 states: lgamma(r) = 0.
  double score = 0;
  for (const auto& c : counts) {
    score += -std::lgamma(c[0] + c[1] + 2.0) + std::lgamma(c[0] + 1.0) + std::lgamma(c[1] + 1.0);
  }
  return score;
}

double k2_score(const WeightedDataset& train, const ParentMap& parents) {
  double s = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) s += k2_node_score(train, i, parents[i]);
  return s;
}

ParentMap learn_structure(const WeightedDataset& train, int max_parents, StructureStrategy strategy) {
  if (max_parents < 1) throw_config("max_parents must be at least 1");
  require_discrete(train, "learn_structure");
  if (train.empty()) throw_input("learn_structure: empty training set");
  train.require_both_classes("learn_structure");

  const std::size_t arity = train.arity();
  const std::size_t cls = arity;
  ParentMap parents(arity + 1);
  for (std::size_t s = 0; s < arity; ++s) parents[s] = {cls};
  if (strategy == StructureStrategy::kNaive) return parents;

  std::vector<double> node_score(arity + 1);
  for (std::size_t i = 0; i <= arity; ++i) node_score[i] = k2_node_score(train, i, parents[i]);

  while (true) {
    double best_gain = 0;
    std::size_t best_from = 0, best_to = 0;
    double best_score = 0;
    bool found = false;
    for (std::size_t to = 0; to < arity; ++to) {
      if (parents[to].size() >= static_cast<std::size_t>(max_parents)) continue;
      for (std::size_t from = 0; from < arity; ++from) {
        if (from == to) continue;
        if (std::find(parents[to].begin(), parents[to].end(), from) != parents[to].end()) continue;
        ParentMap trial = parents;
        trial[to].push_back(from);
        if (!is_acyclic(trial)) continue;
        const double s = k2_node_score(train, to, trial[to]);
        const double gain = s - node_score[to];
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_from = from;
          best_to = to;
          best_score = s;
          found = true;
        }
      }
    }
    if (!found) break;
    parents[best_to].push_back(best_from);
    node_score[best_to] = best_score;
  }
  return parents;
}

BayesNetModel fit_cpts(const WeightedDataset& train, const ParentMap& parents, double alpha,
                       Discretizer discretizer) {
  if (!(alpha >= 0)) throw_config("smoothing alpha must be non-negative");
  require_discrete(train, "fit_cpts");
  train.require_both_classes("fit_cpts");
  const std::size_t arity = train.arity();
  if (parents.size() != arity + 1) throw_input("parent map does not match the dataset schema");

  std::vector<std::vector<CptRow>> cpts(arity + 1);
  for (std::size_t node = 0; node <= arity; ++node) {
    const auto& pa = parents[node];
    const std::size_t configs = std::size_t{1} << pa.size();
    std::vector<std::array<double, 2>> counts(configs, {0.0, 0.0});
    for (const auto& r : train.rows()) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < pa.size(); ++j) {
        if (dataset_value(r, pa[j], arity)) idx |= std::size_t{1} << j;
      }
      counts[idx][dataset_value(r, node, arity)] += r.weight;
    }
    cpts[node].resize(configs);
    for (std::size_t c = 0; c < configs; ++c) {
      const double total = counts[c][0] + counts[c][1] + 2.0 * alpha;
      if (total <= 0) {
        cpts[node][c] = {0.5, 0.5};
      } else {
        const double high = (counts[c][1] + alpha) / total;
        cpts[node][c] = {1.0 - high, high};
      }
    }
  }
  return BayesNetModel(dataset_nodes(train), arity, parents, std::move(cpts), std::move(discretizer));
}

double joint_probability(const BayesNetModel& model, std::span<const int> assignment) {
  if (assignment.size() != model.node_count()) throw_input("assignment must cover every node");
  double p = 1.0;
  for (std::size_t i = 0; i < model.node_count(); ++i) {
    if (assignment[i] != 0 && assignment[i] != 1) throw_input("node values must be 0 or 1");
    p *= model.conditional(i, assignment[i], assignment);
  }
  return p;
}

std::array<double, 2> posterior(const BayesNetModel& model, const Evidence& evidence, std::size_t query) {
  const std::size_t n = model.node_count();
  if (evidence.size() != n) throw_input("evidence must list every node (nullopt = unobserved)");
  if (query >= n) throw_input("query node out of range");

  std::vector<int> assignment(n, 0);
  std::vector<std::size_t> hidden;
  for (std::size_t i = 0; i < n; ++i) {
    if (evidence[i]) {
      if (*evidence[i] != 0 && *evidence[i] != 1) throw_input("evidence values must be 0 or 1");
      assignment[i] = *evidence[i];
    } else {
      hidden.push_back(i);
    }
  }
  std::array<double, 2> mass{0.0, 0.0};
  const std::size_t combos = std::size_t{1} << hidden.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    for (std::size_t h = 0; h < hidden.size(); ++h) assignment[hidden[h]] = (mask >> h) & 1U;
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= model.conditional(i, assignment[i], assignment);
    mass[assignment[query]] += p;
  }
  const double total = mass[0] + mass[1];
  if (!(total > 0)) throw_input("impossible evidence: zero probability under the model");
  return {mass[0] / total, mass[1] / total};
}

double predict_score(const BayesNetModel& model, std::span<const double> features) {
  const auto sig = model.signal_nodes();
  if (features.size() != sig.size()) throw_input("row does not cover every signal node");
  // Full evidence: only the class node is hidden, so enumeration is two
  // joint products.
  const std::size_t n = model.node_count();
  std::vector<int> assignment(n, 0);
  for (std::size_t k = 0; k < sig.size(); ++k) assignment[sig[k]] = features[k] == kHigh ? 1 : 0;
  double mass[2];
  for (int c = 0; c < 2; ++c) {
    assignment[model.class_node()] = c;
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= model.conditional(i, assignment[i], assignment);
    mass[c] = p;
  }
  const double total = mass[0] + mass[1];
  if (!(total > 0)) throw_input("impossible evidence: zero probability under the model");
  return mass[1] / total;
}

std::vector<double> predict_scores(const BayesNetModel& model, const WeightedDataset& ds) {
  std::vector<double> out;
  out.reserve(ds.size());
  const bool needs_bins = !ds.discrete();
  if (needs_bins && model.discretizer().empty()) throw_input("numeric rows need a model with a discretizer");
  for (const auto& r : ds.rows()) {
    if (needs_bins) {
      const auto bins = model.discretizer().apply(r.features);
      out.push_back(predict_score(model, bins));
    } else {
      out.push_back(predict_score(model, r.features));
    }
  }
  return out;
}

std::vector<SignalImportance> CptReport::ranked() const {
  auto out = signals;
  std::stable_sort(out.begin(), out.end(), [](const SignalImportance& a, const SignalImportance& b) {
    return a.discriminativeness > b.discriminativeness;
  });
  return out;
}

CptReport importance_report(const BayesNetModel& model) {
  const std::size_t n = model.node_count();
  const std::size_t cls = model.class_node();

  // Undirected reachability from the class node.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : model.parents()[i]) {
      adj[i].push_back(p);
      adj[p].push_back(i);
    }
  }
  std::vector<bool> reach(n, false);
  std::vector<std::size_t> stack{cls};
  reach[cls] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!reach[w]) {
        reach[w] = true;
        stack.push_back(w);
      }
    }
  }

  CptReport report;
  for (auto s : model.signal_nodes()) {
    SignalImportance imp;
    imp.signal = model.nodes()[s];
    for (int a = 0; a < 2; ++a) {
      Evidence ev(n);
      ev[cls] = a;
      const auto dist = posterior(model, ev, s);
      if (a == 1) {
        imp.p_low_attack = dist[0];
        imp.p_high_attack = dist[1];
      } else {
        imp.p_low_no_attack = dist[0];
        imp.p_high_no_attack = dist[1];
      }
    }
    imp.discriminativeness = std::abs(imp.p_high_attack - imp.p_high_no_attack);
    imp.connected_to_class = reach[s];
    report.signals.push_back(imp);
  }
  return report;
}

std::string model_to_string(const BayesNetModel& model) {
  std::ostringstream out;
  out << "signalcast-bayesnet 1\n";
  out << "nodes";
  for (const auto& n : model.nodes()) out << ' ' << n;
  out << "\nclass " << model.nodes()[model.class_node()] << '\n';
  for (std::size_t i = 0; i < model.node_count(); ++i) {
    out << "parents " << model.nodes()[i];
    for (auto p : model.parents()[i]) out << ' ' << model.nodes()[p];
    out << '\n';
  }
  const auto& d = model.discretizer();
  for (std::size_t k = 0; k < d.names().size(); ++k) {
    out << "cut " << d.names()[k] << ' ' << text::format_double17(d.thresholds()[k]) << '\n';
  }
  for (std::size_t i = 0; i < model.node_count(); ++i) {
    for (std::size_t c = 0; c < model.cpts()[i].size(); ++c) {
      const auto& row = model.cpts()[i][c];
      out << "cpt " << model.nodes()[i] << ' ' << c << ' ' << text::format_double17(row[0]) << ' '
          << text::format_double17(row[1]) << '\n';
    }
  }
  return out.str();
}

BayesNetModel model_from_string(const std::string& text_in) {
  std::istringstream in(text_in);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> nodes;
  std::string class_name;
  ParentMap parents;
  std::vector<std::vector<CptRow>> cpts;
  std::vector<std::string> cut_names;
  std::vector<double> cuts;
  auto index_of = [&](const std::string& name, std::size_t ln) {
    auto it = std::find(nodes.begin(), nodes.end(), name);
    if (it == nodes.end()) throw_input("model line " + std::to_string(ln) + ": unknown node '" + name + "'");
    return static_cast<std::size_t>(it - nodes.begin());
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    const std::string ctx = "model line " + std::to_string(line_no);
    if (tag == "signalcast-bayesnet") {
      int version = 0;
      ls >> version;
      if (version != 1) throw_input(ctx + ": unsupported model version");
    } else if (tag == "nodes") {
      std::string n;
      while (ls >> n) nodes.push_back(n);
      parents.assign(nodes.size(), {});
      cpts.assign(nodes.size(), {});
    } else if (tag == "class") {
      ls >> class_name;
    } else if (tag == "parents") {
      std::string n, p;
      ls >> n;
      const auto i = index_of(n, line_no);
      while (ls >> p) parents[i].push_back(index_of(p, line_no));
    } else if (tag == "cut") {
      std::string n, v;
      ls >> n >> v;
      cut_names.push_back(n);
      cuts.push_back(text::parse_double(v, ctx));
    } else if (tag == "cpt") {
      std::string n, c, lo, hi;
      ls >> n >> c >> lo >> hi;
      const auto i = index_of(n, line_no);
      const auto idx = static_cast<std::size_t>(text::parse_int(c, ctx));
      if (cpts[i].size() <= idx) cpts[i].resize(idx + 1);
      cpts[i][idx] = {text::parse_double(lo, ctx), text::parse_double(hi, ctx)};
    } else {
      throw_input(ctx + ": unknown tag '" + tag + "'");
    }
  }
  if (nodes.empty()) throw_input("model has no nodes");
  const auto cls = index_of(class_name, 0);
  Discretizer disc;
  if (!cut_names.empty()) disc = Discretizer(cut_names, cuts);
  return BayesNetModel(nodes, cls, parents, cpts, disc);
}

void write_model(const BayesNetModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write model '" + path + "'");
  out << model_to_string(model);
}

BayesNetModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open model '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_string(ss.str());
}

}  // namespace signalcast
