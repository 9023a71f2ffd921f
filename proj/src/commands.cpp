#include "signalcast/commands.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "signalcast/error.hpp"
#include "signalcast/synth.hpp"
#include "signalcast/text.hpp"

namespace signalcast {

namespace fs = std::filesystem;

std::string file_label(const std::string& label) {
  std::string out = label;
  for (auto& c : out) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return out;
}

namespace {

std::string out_dir(const Config& c) {
  const auto dir = c.get("paths.out");
  if (dir.empty()) throw_config("paths.out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_input("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

}  // namespace

CommandResult run_synth(const Config& config) {
  const auto spec = synthetic_spec_from_config(config);
  const auto events = generate_synthetic_events(spec);
  const auto path = out_dir(config) + "/events.csv";
  write_events(events, path);
  CommandResult r;
  r.outputs.push_back(path);
  r.message = "wrote " + std::to_string(events.size()) + " events to " + path;
  return r;
}

CommandResult run_generate(const Config& config) {
  const auto events = load_events_from_config(config);
  const auto types = attack_types_for(config, events);
  const auto grid = grid_from_config(config);
  const auto options = timeline_options_from_config(config);
  const auto start = config.get_instant("run.gt_start");
  const auto end = config.get_instant("run.gt_end");
  if (!(start < end)) throw_config("run.gt_start must precede run.gt_end");
  const auto datasets = generate_datasets(events, types, grid, start, end, options);
  const auto dir = out_dir(config);
  CommandResult r;
  for (const auto& gd : datasets) {
    const auto stem = dir + "/" + file_label(gd.attack_type) + "_tx" + file_label(gd.granularity.tx_label()) + "_tg" +
                      file_label(format_duration(gd.granularity.t_g));
    write_dataset(gd.data, stem + ".csv");
    write_metadata(dataset_metadata(gd.data), stem + ".meta");
    r.outputs.push_back(stem + ".csv");
    r.outputs.push_back(stem + ".meta");
  }
  r.message = "wrote " + std::to_string(datasets.size()) + " datasets to " + dir;
  return r;
}

CommandResult run_filter(const Config& config) {
  if (!config.has("paths.dataset")) throw_config("paths.dataset is required");
  const auto in = config.get("paths.dataset");
  if (!fs::exists(in)) throw_input("dataset file '" + in + "' does not exist");
  auto ds = read_dataset(in);
  // Carry the provenance recorded by generate, when the sidecar is present.
  const auto sidecar = (fs::path(in).parent_path() / fs::path(in).stem()).string() + ".meta";
  if (fs::exists(sidecar)) {
    const auto meta = read_metadata(sidecar);
    auto get = [&](const char* k) {
      auto it = meta.find(k);
      return it == meta.end() ? std::string() : it->second;
    };
    Provenance prov{get("attack_type"), get("t_x"), get("t_g")};
    if (prov.attack_type == "synthetic") prov = {};
    ds = WeightedDataset(ds.signal_names(), ds.rows(), prov, ds.discrete(), ds.class_name());
  }
  const auto spec = filter_from_config(config, config.get("filters.filter"));
  const auto result = apply_filter(ds, spec, static_cast<std::uint64_t>(config.get_int("run.seed")));
  const auto stem = out_dir(config) + "/" + fs::path(in).stem().string() + "_" + spec.name();
  write_dataset(result.data, stem + ".csv");
  auto meta = dataset_metadata(result.data);
  for (auto& kv : filter_metadata(spec, result.report)) meta.push_back(std::move(kv));
  write_metadata(meta, stem + ".meta");
  CommandResult r;
  r.outputs = {stem + ".csv", stem + ".meta"};
  if (!result.report.warning.empty()) r.warnings.push_back(result.report.warning);
  r.message = spec.name() + ": " + std::to_string(ds.size()) + " rows in, " + std::to_string(result.data.size()) +
              " rows out (removed " + std::to_string(result.report.removed) + ", synthetic " +
              std::to_string(result.report.synthetic) + ")";
  return r;
}

CommandResult run_sweep(const Config& config) {
  auto sc = sweep_config_from_config(config);
  auto events = load_events_from_config(config);
  sc.attack_types = attack_types_for(config, events);
  const EventTimeline timeline(std::move(events), sc.timeline.signals);
  const auto report = sweep(timeline, sc);
  const auto dir = out_dir(config);
  write_report(report, dir);
  CommandResult r;
  r.outputs = {dir + "/cells.csv", dir + "/comparisons.csv", dir + "/importance.csv"};
  std::size_t failed = 0;
  for (const auto& c : report.cells) {
    if (std::isnan(c.mean_auc)) {
      ++failed;
      r.warnings.push_back("cell " + c.attack_type + "/" + c.filter + "/" + c.t_x + "/" + c.t_g + " failed: " +
                           c.error);
    } else if (c.invalid_folds > 0) {
      r.warnings.push_back("cell " + c.attack_type + "/" + c.filter + "/" + c.t_x + "/" + c.t_g + ": " +
                           std::to_string(c.invalid_folds) + " invalid folds");
    }
  }
  r.message = "evaluated " + std::to_string(report.cells.size()) + " cells (" + std::to_string(failed) +
              " failed) into " + dir;
  return r;
}

CommandResult run_report(const Config& config) {
  const auto in = config.has("paths.report") ? config.get("paths.report") : config.get("paths.out");
  if (in.empty()) throw_config("paths.report or paths.out is required");
  if (!fs::exists(in + "/cells.csv")) throw_input("no cells.csv in '" + in + "'");
  const auto report = read_report(in);
  CommandResult r;
  r.message = summarize_report(report);
  const auto dir = out_dir(config);
  const auto path = dir + "/summary.txt";
  std::ofstream out(path);
  if (!out) throw_input("cannot write '" + path + "'");
  out << r.message;
  r.outputs.push_back(path);
  if (!report.cells.empty() && fs::absolute(dir) != fs::absolute(in)) {
    write_report(report, dir);
  }
  return r;
}

}  // namespace signalcast
