#include "signalcast/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "signalcast/error.hpp"
#include "signalcast/parallel.hpp"
#include "signalcast/rng.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

BayesNetModel train_classifier(const WeightedDataset& train, const ClassifierConfig& config) {
  if (train.empty()) throw_input("empty training set");
  train.require_both_classes("train_classifier");
  Discretizer disc;
  WeightedDataset binned = train;
  if (!train.discrete()) {
    disc = Discretizer::fit(train, config.discretize);
    binned = disc.apply(train);
  }
  const auto parents = learn_structure(binned, config.max_parents, config.structure);
  return fit_cpts(binned, parents, config.alpha, std::move(disc));
}

FoldOutcome evaluate_fold(const WeightedDataset& ds, const FoldSplit& split, const FilterSpec& filter,
                          const ClassifierConfig& classifier, std::uint64_t seed) {
  FoldOutcome out;
  try {
    const WeightedDataset test = ds.subset(split.test);
    if (test.class_count(0) == 0 || test.class_count(1) == 0) {
      out.error = "test fold lacks one class";
      return out;
    }
    const WeightedDataset train = ds.subset(split.train);
    train.require_both_classes("training fold");
    auto filtered = apply_filter(train, filter, seed);
    out.filter = filtered.report;
    out.model = train_classifier(filtered.data, classifier);
    const auto scores = predict_scores(out.model, test);
    std::vector<ScoredRow> scored;
    scored.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
      scored.push_back({scores[i], test.row(i).label, test.row(i).weight});
    }
    out.auc = auc(scored);
    out.valid = true;
  } catch (const Error& e) {
    out.valid = false;
    out.error = e.what();
  }
  return out;
}

std::size_t FoldAucs::valid_count() const {
  return static_cast<std::size_t>(std::count_if(aucs.begin(), aucs.end(), [](double v) { return !std::isnan(v); }));
}

double FoldAucs::mean() const {
  double s = 0;
  std::size_t n = 0;
  for (double v : aucs) {
    if (!std::isnan(v)) {
      s += v;
      ++n;
    }
  }
  return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

FoldAucs filtered_evaluate(const WeightedDataset& ds, const FilterSpec& filter, const ClassifierConfig& classifier,
                           const CvPlan& plan, unsigned workers) {
  const auto splits = stratified_folds(ds, plan);
  const auto k = static_cast<std::size_t>(plan.folds);
  const std::size_t total = k * static_cast<std::size_t>(plan.repetitions);
  std::vector<FoldOutcome> outcomes(total);
  parallel_for(total, workers, [&](std::size_t job) {
    const std::size_t rep = job / k;
    const std::size_t fold = job % k;
    outcomes[job] = evaluate_fold(ds, splits.repetitions[rep][fold], filter, classifier,
                                  derive_seed(plan.seed, rep, fold));
  });
  FoldAucs out;
  out.warning = splits.warning;
  out.aucs.resize(total);
  for (std::size_t j = 0; j < total; ++j) {
    if (outcomes[j].valid) {
      out.aucs[j] = outcomes[j].auc;
    } else {
      out.aucs[j] = std::numeric_limits<double>::quiet_NaN();
      out.invalid.push_back(std::to_string(j / k) + "/" + std::to_string(j % k) + ": " + outcomes[j].error);
    }
  }
  return out;
}

namespace {

Comparison compare_vectors(const std::vector<double>& a, const std::vector<double>& b, SignificanceMethod method,
                           double ratio) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    x.push_back(a[i]);
    y.push_back(b[i]);
  }
  return compare(x, y, method, ratio);
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

Comparison compare_cells(const FoldAucs& a, const FoldAucs& b, SignificanceMethod method, const CvPlan& plan) {
  return compare_vectors(a.aucs, b.aucs, method, plan.test_train_ratio());
}

EvalReport sweep(const EventTimeline& timeline, const SweepConfig& config) {
  if (config.filters.empty()) throw_config("sweep needs at least one filter");
  if (config.attack_types.empty()) throw_config("sweep needs at least one attack type");
  config.plan.validate();

  EvalReport report;
  for (const auto& p : config.grid) {
    const auto tx = p.tx_label();
    const auto tg = format_duration(p.t_g);
    if (std::find(report.t_x_order.begin(), report.t_x_order.end(), tx) == report.t_x_order.end()) {
      report.t_x_order.push_back(tx);
    }
    if (std::find(report.t_g_order.begin(), report.t_g_order.end(), tg) == report.t_g_order.end()) {
      report.t_g_order.push_back(tg);
    }
  }

  TimelineOptions topt = config.timeline;
  topt.workers = config.workers;
  const auto datasets =
      generate_datasets(timeline, config.attack_types, config.grid, config.gt_start, config.gt_end, topt);

  const std::size_t nf = config.filters.size();
  const std::size_t jobs = datasets.size() * nf;
  std::vector<FoldAucs> results(jobs);
  std::vector<std::string> errors(jobs);
  parallel_for(jobs, config.workers, [&](std::size_t j) {
    const auto& gd = datasets[j / nf];
    try {
      results[j] = filtered_evaluate(gd.data, config.filters[j % nf], config.classifier, config.plan, 1);
    } catch (const Error& e) {
      errors[j] = e.what();
    }
  });

  std::vector<std::vector<ImportanceRow>> importance(datasets.size());
  parallel_for(datasets.size(), config.workers, [&](std::size_t d) {
    const auto& gd = datasets[d];
    try {
      const auto model = train_classifier(gd.data, config.classifier);
      std::vector<std::pair<std::string, int>> counts;
      if (config.cfs) counts = cfs_select(gd.data, config.plan, config.cfs_options);
      for (const auto& s : importance_report(model).signals) {
        ImportanceRow row{gd.attack_type, gd.granularity.tx_label(), format_duration(gd.granularity.t_g), s, -1};
        for (const auto& [name, c] : counts) {
          if (name == s.signal) row.cfs_count = c;
        }
        importance[d].push_back(std::move(row));
      }
    } catch (const Error&) {
      // Single-class datasets have no importance rows; the cell records it.
    }
  });
  for (auto& rows : importance) {
    for (auto& r : rows) report.importance.push_back(std::move(r));
  }

  auto make_cell = [&](const GeneratedDataset& gd, const std::string& filter, const FoldAucs& r,
                       const std::string& err) {
    EvalCell c;
    c.attack_type = gd.attack_type;
    c.filter = filter;
    c.t_x = gd.granularity.tx_label();
    c.t_g = format_duration(gd.granularity.t_g);
    c.variable_tx = !gd.granularity.per_signal_tx.empty();
    c.rows = gd.data.size();
    c.positive_density = gd.data.positive_rate();
    c.fold_aucs = r.aucs;
    c.invalid_folds = r.invalid.size();
    c.mean_auc = err.empty() ? r.mean() : std::numeric_limits<double>::quiet_NaN();
    c.error = !err.empty() ? err : (r.valid_count() == 0 && !r.invalid.empty() ? r.invalid.front() : "");
    return c;
  };

  for (std::size_t j = 0; j < jobs; ++j) {
    report.cells.push_back(make_cell(datasets[j / nf], config.filters[j % nf].name(), results[j], errors[j]));
  }

  // Comparisons: every filter against the baseline, and smote_pp against the
  // other resamplers.
  const std::string baseline = config.filters.front().name();
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < nf; ++b) {
        if (a == b) continue;
        const auto& fa = config.filters[a];
        const auto& fb = config.filters[b];
        const bool vs_baseline = b == 0;
        const bool pp_vs_other = fa.kind == FilterKind::kSmotePP && b != 0 && fb.kind != FilterKind::kSmotePP;
        if (!vs_baseline && !pp_vs_other) continue;
        const std::size_t ja = d * nf + a, jb = d * nf + b;
        if (!errors[ja].empty() || !errors[jb].empty()) continue;
        try {
          const auto cmp = compare_cells(results[ja], results[jb], config.significance, config.plan);
          report.comparisons.push_back({datasets[d].attack_type, datasets[d].granularity.tx_label(),
                                        format_duration(datasets[d].granularity.t_g), fa.name(), fb.name(),
                                        significance_method_name(config.significance), cmp});
        } catch (const Error&) {
          // Fewer than two jointly valid folds: nothing to compare.
        }
      }
    }
  }

  if (config.variable_tx_pass) {
    for (const auto& attack : config.attack_types) {
      const EvalCell* best = nullptr;
      for (const auto& c : report.cells) {
        if (c.attack_type != attack || c.filter != baseline || std::isnan(c.mean_auc)) continue;
        if (!best || c.mean_auc > best->mean_auc) best = &c;
      }
      if (!best) continue;
      const GranularityPair* best_pair = nullptr;
      for (const auto& p : config.grid) {
        if (p.per_signal_tx.empty() && p.tx_label() == best->t_x && format_duration(p.t_g) == best->t_g) {
          best_pair = &p;
        }
      }
      if (!best_pair) continue;
      GranularityPair variable{best_pair->t_x, best_pair->t_g, {}};
      for (const auto& sig : timeline.signals()) {
        double best_score = -1;
        Duration best_tx = best_pair->t_x;
        // Start from the best cell's own t_x so ties keep it.
        std::vector<const GranularityPair*> candidates{best_pair};
        for (const auto& p : config.grid) {
          if (p.per_signal_tx.empty() && p.t_g == best_pair->t_g && !(p.t_x == best_pair->t_x)) {
            candidates.push_back(&p);
          }
        }
        for (const auto* p : candidates) {
          for (const auto& row : report.importance) {
            if (row.attack_type == attack && row.t_x == p->tx_label() && row.t_g == best->t_g &&
                row.signal.signal == sig.name && row.signal.discriminativeness > best_score + 1e-12) {
              best_score = row.signal.discriminativeness;
              best_tx = p->t_x;
            }
          }
        }
        if (!(best_tx == best_pair->t_x)) variable.per_signal_tx[sig.name] = best_tx;
      }
      if (variable.per_signal_tx.empty()) continue;
      try {
        const std::vector<std::string> one{attack};
        const std::vector<GranularityPair> grid{variable};
        const auto gd = generate_datasets(timeline, one, grid, config.gt_start, config.gt_end, topt);
        const auto r = filtered_evaluate(gd.front().data, config.filters.front(), config.classifier, config.plan,
                                         config.workers);
        report.cells.push_back(make_cell(gd.front(), baseline, r, ""));
        const auto cmp = compare_vectors(r.aucs, best->fold_aucs, config.significance,
                                         config.plan.test_train_ratio());
        report.comparisons.push_back({attack, variable.tx_label(), best->t_g, baseline + "@variable_tx",
                                      baseline + "@" + best->t_x, significance_method_name(config.significance),
                                      cmp});
      } catch (const Error& e) {
        EvalCell c;
        c.attack_type = attack;
        c.filter = baseline;
        c.t_x = variable.tx_label();
        c.t_g = best->t_g;
        c.variable_tx = true;
        c.mean_auc = std::numeric_limits<double>::quiet_NaN();
        c.error = e.what();
        report.cells.push_back(c);
      }
    }
  }

  // Best grid cell per (attack type, filter).
  std::map<std::pair<std::string, std::string>, std::size_t> best_idx;
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const auto& c = report.cells[i];
    if (c.variable_tx || std::isnan(c.mean_auc)) continue;
    auto key = std::make_pair(c.attack_type, c.filter);
    auto it = best_idx.find(key);
    if (it == best_idx.end() || c.mean_auc > report.cells[it->second].mean_auc) best_idx[key] = i;
  }
  for (const auto& [key, i] : best_idx) report.cells[i].best = true;
  return report;
}

namespace {

std::string fmt(double v) { return text::format_double(v); }

std::string join_aucs(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt(v[i]);
  }
  return s;
}

std::string file_safe(std::string s) {
  for (auto& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
  }
  return s;
}

void write_rows(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write '" + path + "'");
  for (const auto& r : rows) out << text::join(r, ",") << '\n';
  if (!out) throw_input("write failed for '" + path + "'");
}

std::vector<std::map<std::string, std::string>> read_csv_maps(const std::string& path, bool required) {
  std::ifstream in(path);
  if (!in) {
    if (required) throw_input("cannot open '" + path + "'");
    return {};
  }
  std::vector<std::map<std::string, std::string>> out;
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(text::trim(line), ',');
    if (header.empty()) {
      for (auto f : fields) header.emplace_back(f);
      continue;
    }
    if (fields.size() != header.size()) {
      throw_input(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields");
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = std::string(fields[i]);
    out.push_back(std::move(row));
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& row, const std::string& key,
                         const std::string& path) {
  auto it = row.find(key);
  if (it == row.end()) throw_input(path + ": missing column '" + key + "'");
  return it->second;
}

}  // namespace

std::vector<std::vector<std::string>> tx_tg_plot(const EvalReport& report, const std::string& attack_type,
                                                 const std::string& filter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"tx_ordinal", "t_x"};
  for (const auto& tg : report.t_g_order) header.push_back(tg);
  rows.push_back(header);
  for (std::size_t i = 0; i < report.t_x_order.size(); ++i) {
    std::vector<std::string> r{std::to_string(i), report.t_x_order[i]};
    for (const auto& tg : report.t_g_order) {
      std::string v = "nan";
      for (const auto& c : report.cells) {
        if (c.attack_type == attack_type && c.filter == filter && !c.variable_tx && c.t_x == report.t_x_order[i] &&
            c.t_g == tg) {
          v = fmt(c.mean_auc);
        }
      }
      r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_report(const EvalReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> cells{{"attack_type", "filter", "t_x", "t_g", "variable_tx", "rows",
                                               "positive_density", "mean_auc", "valid_folds", "invalid_folds",
                                               "best", "fold_aucs", "error"}};
  for (const auto& c : report.cells) {
    const std::size_t valid = c.fold_aucs.size() - c.invalid_folds;
    cells.push_back({c.attack_type, c.filter, c.t_x, c.t_g, c.variable_tx ? "true" : "false", std::to_string(c.rows),
                     fmt(c.positive_density), fmt(c.mean_auc), std::to_string(valid), std::to_string(c.invalid_folds),
                     c.best ? "true" : "false", join_aucs(c.fold_aucs), sanitize(c.error)});
  }
  write_rows(dir + "/cells.csv", cells);

  std::vector<std::vector<std::string>> cmp{{"attack_type", "t_x", "t_g", "filter_a", "filter_b", "method",
                                             "mean_difference", "t_statistic", "p_value", "significant"}};
  for (const auto& c : report.comparisons) {
    cmp.push_back({c.attack_type, c.t_x, c.t_g, c.filter_a, c.filter_b, c.method, fmt(c.result.mean_difference),
                   fmt(c.result.t_statistic), fmt(c.result.p_value), c.result.significant ? "true" : "false"});
  }
  write_rows(dir + "/comparisons.csv", cmp);

  std::vector<std::vector<std::string>> imp{{"attack_type", "t_x", "t_g", "signal", "p_high_attack", "p_low_attack",
                                             "p_high_no_attack", "p_low_no_attack", "discriminativeness",
                                             "connected_to_class", "cfs_count"}};
  for (const auto& r : report.importance) {
    const auto& s = r.signal;
    imp.push_back({r.attack_type, r.t_x, r.t_g, s.signal, fmt(s.p_high_attack), fmt(s.p_low_attack),
                   fmt(s.p_high_no_attack), fmt(s.p_low_no_attack), fmt(s.discriminativeness),
                   s.connected_to_class ? "true" : "false", std::to_string(r.cfs_count)});
  }
  write_rows(dir + "/importance.csv", imp);

  // Plot data: AUC by t_x with one series per t_g, per attack and filter;
  // and AUC by t_x with one series per filter plus density, per attack and t_g.
  std::vector<std::string> attacks, filters;
  for (const auto& c : report.cells) {
    if (std::find(attacks.begin(), attacks.end(), c.attack_type) == attacks.end()) attacks.push_back(c.attack_type);
    if (std::find(filters.begin(), filters.end(), c.filter) == filters.end()) filters.push_back(c.filter);
  }
  const std::string plots = dir + "/plots";
  std::filesystem::create_directories(plots);
  for (const auto& a : attacks) {
    for (const auto& f : filters) {
      write_rows(plots + "/auc_by_tx_tg_" + file_safe(a) + "_" + file_safe(f) + ".csv", tx_tg_plot(report, a, f));
    }
    for (const auto& tg : report.t_g_order) {
      std::vector<std::vector<std::string>> rows;
      std::vector<std::string> header{"tx_ordinal", "t_x"};
      for (const auto& f : filters) header.push_back(f);
      header.push_back("density");
      rows.push_back(header);
      for (std::size_t i = 0; i < report.t_x_order.size(); ++i) {
        std::vector<std::string> r{std::to_string(i), report.t_x_order[i]};
        std::string density = "nan";
        for (const auto& f : filters) {
          std::string v = "nan";
          for (const auto& c : report.cells) {
            if (c.attack_type == a && c.filter == f && !c.variable_tx && c.t_x == report.t_x_order[i] && c.t_g == tg) {
              v = fmt(c.mean_auc);
              density = fmt(c.positive_density);
            }
          }
          r.push_back(v);
        }
        r.push_back(density);
        rows.push_back(std::move(r));
      }
      write_rows(plots + "/auc_by_filter_" + file_safe(a) + "_" + file_safe(tg) + ".csv", rows);
    }
  }
}

EvalReport read_report(const std::string& dir) {
  EvalReport report;
  const std::string cells_path = dir + "/cells.csv";
  for (const auto& row : read_csv_maps(cells_path, true)) {
    EvalCell c;
    c.attack_type = field(row, "attack_type", cells_path);
    c.filter = field(row, "filter", cells_path);
    c.t_x = field(row, "t_x", cells_path);
    c.t_g = field(row, "t_g", cells_path);
    c.variable_tx = text::parse_bool(field(row, "variable_tx", cells_path), cells_path);
    c.rows = static_cast<std::size_t>(text::parse_int(field(row, "rows", cells_path), cells_path));
    c.positive_density = text::parse_double(field(row, "positive_density", cells_path), cells_path);
    c.mean_auc = text::parse_double(field(row, "mean_auc", cells_path), cells_path);
    c.invalid_folds = static_cast<std::size_t>(text::parse_int(field(row, "invalid_folds", cells_path), cells_path));
    c.best = text::parse_bool(field(row, "best", cells_path), cells_path);
    const auto& aucs = field(row, "fold_aucs", cells_path);
    if (!aucs.empty()) {
      for (auto v : text::split(aucs, ';')) c.fold_aucs.push_back(text::parse_double(v, cells_path));
    }
    c.error = field(row, "error", cells_path);
    if (!c.variable_tx) {
      if (std::find(report.t_x_order.begin(), report.t_x_order.end(), c.t_x) == report.t_x_order.end()) {
        report.t_x_order.push_back(c.t_x);
      }
      if (std::find(report.t_g_order.begin(), report.t_g_order.end(), c.t_g) == report.t_g_order.end()) {
        report.t_g_order.push_back(c.t_g);
      }
    }
    report.cells.push_back(std::move(c));
  }
  const std::string cmp_path = dir + "/comparisons.csv";
  for (const auto& row : read_csv_maps(cmp_path, false)) {
    ComparisonRow c;
    c.attack_type = field(row, "attack_type", cmp_path);
    c.t_x = field(row, "t_x", cmp_path);
    c.t_g = field(row, "t_g", cmp_path);
    c.filter_a = field(row, "filter_a", cmp_path);
    c.filter_b = field(row, "filter_b", cmp_path);
    c.method = field(row, "method", cmp_path);
    c.result.mean_difference = text::parse_double(field(row, "mean_difference", cmp_path), cmp_path);
    c.result.t_statistic = text::parse_double(field(row, "t_statistic", cmp_path), cmp_path);
    c.result.p_value = text::parse_double(field(row, "p_value", cmp_path), cmp_path);
    c.result.significant = text::parse_bool(field(row, "significant", cmp_path), cmp_path);
    report.comparisons.push_back(std::move(c));
  }
  const std::string imp_path = dir + "/importance.csv";
  for (const auto& row : read_csv_maps(imp_path, false)) {
    ImportanceRow r;
    r.attack_type = field(row, "attack_type", imp_path);
    r.t_x = field(row, "t_x", imp_path);
    r.t_g = field(row, "t_g", imp_path);
    r.signal.signal = field(row, "signal", imp_path);
    r.signal.p_high_attack = text::parse_double(field(row, "p_high_attack", imp_path), imp_path);
    r.signal.p_low_attack = text::parse_double(field(row, "p_low_attack", imp_path), imp_path);
    r.signal.p_high_no_attack = text::parse_double(field(row, "p_high_no_attack", imp_path), imp_path);
    r.signal.p_low_no_attack = text::parse_double(field(row, "p_low_no_attack", imp_path), imp_path);
    r.signal.discriminativeness = text::parse_double(field(row, "discriminativeness", imp_path), imp_path);
    r.signal.connected_to_class = text::parse_bool(field(row, "connected_to_class", imp_path), imp_path);
    r.cfs_count = static_cast<int>(text::parse_int(field(row, "cfs_count", imp_path), imp_path));
    report.importance.push_back(std::move(r));
  }
  return report;
}

std::string summarize_report(const EvalReport& report) {
  std::ostringstream out;
  if (report.cells.empty()) {
    out << "No evaluation cells found.\n";
    return out.str();
  }
  char buf[256];
  std::vector<std::string> attacks, filters;
  for (const auto& c : report.cells) {
    if (std::find(attacks.begin(), attacks.end(), c.attack_type) == attacks.end()) attacks.push_back(c.attack_type);
    if (std::find(filters.begin(), filters.end(), c.filter) == filters.end()) filters.push_back(c.filter);
  }
  const std::string baseline = filters.front();
  for (const auto& a : attacks) {
    out << "== " << a << " ==\n";
    out << "Best (t_x, t_g) per filter:\n";
    const EvalCell* base_best = nullptr;
    for (const auto& f : filters) {
      for (const auto& c : report.cells) {
        if (c.attack_type == a && c.filter == f && c.best) {
          std::snprintf(buf, sizeof buf, "  %-18s t_x=%-6s t_g=%-5s mean AUC=%.4f  density=%.1f%%\n", f.c_str(),
                        c.t_x.c_str(), c.t_g.c_str(), c.mean_auc, 100.0 * c.positive_density);
          out << buf;
          if (f == baseline) base_best = &c;
        }
      }
    }
    if (base_best) {
      out << "Filters at t_x=" << base_best->t_x << ", t_g=" << base_best->t_g << " (* = significant vs "
          << baseline << "):\n";
      std::vector<std::pair<double, std::string>> ranking;
      for (const auto& c : report.cells) {
        if (c.attack_type == a && !c.variable_tx && c.t_x == base_best->t_x && c.t_g == base_best->t_g) {
          ranking.emplace_back(c.mean_auc, c.filter);
        }
      }
      std::stable_sort(ranking.begin(), ranking.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      for (const auto& [auc_v, f] : ranking) {
        std::string marker;
        for (const auto& cmp : report.comparisons) {
          if (cmp.attack_type == a && cmp.t_x == base_best->t_x && cmp.t_g == base_best->t_g && cmp.filter_a == f &&
              cmp.filter_b == baseline) {
            std::snprintf(buf, sizeof buf, "%s p=%.4g", cmp.result.significant ? "*" : " ", cmp.result.p_value);
            marker = buf;
          }
        }
        std::snprintf(buf, sizeof buf, "  %-18s %.4f %s\n", f.c_str(), auc_v, marker.c_str());
        out << buf;
      }
      std::vector<SignalImportance> sigs;
      for (const auto& r : report.importance) {
        if (r.attack_type == a && r.t_x == base_best->t_x && r.t_g == base_best->t_g) sigs.push_back(r.signal);
      }
      if (!sigs.empty()) {
        CptReport cr{sigs};
        out << "Signals by discriminativeness:\n";
        for (const auto& s : cr.ranked()) {
          std::string cfs;
          for (const auto& r : report.importance) {
            if (r.attack_type == a && r.t_x == base_best->t_x && r.t_g == base_best->t_g && r.signal.signal == s.signal &&
                r.cfs_count >= 0) {
              cfs = "  CFS " + std::to_string(r.cfs_count);
            }
          }
          std::snprintf(buf, sizeof buf, "  %-6s %.4f  P(H|A=1)=%.3f P(H|A=0)=%.3f%s%s\n", s.signal.c_str(),
                        s.discriminativeness, s.p_high_attack, s.p_high_no_attack, cfs.c_str(),
                        s.connected_to_class ? "" : "  (not connected)");
          out << buf;
        }
      }
    }
    for (const auto& c : report.cells) {
      if (c.attack_type == a && c.variable_tx) {
        std::snprintf(buf, sizeof buf, "Variable t_x %s at t_g=%s: mean AUC=%.4f\n", c.t_x.c_str(), c.t_g.c_str(),
                      c.mean_auc);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace signalcast
