// Command-line front end. Links only the C interface.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "signalcast/signalcast.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// "signalcast: error E_INPUT: <text>" on stderr.
int report_error(const char* code, const std::string& text) {
  std::fprintf(stderr, "signalcast: error %s: %s\n", code, one_line(text).c_str());
  return std::string(code) == "E_INTERNAL" ? kExitInternal : kExitInput;
}

int report_status(sc_status status) { return report_error(sc_status_code(status), sc_last_error()); }

struct ConfigHandle {
  sc_config* ptr = nullptr;
  ~ConfigHandle() { sc_config_free(ptr); }
};

struct ResultHandle {
  sc_result* ptr = nullptr;
  ~ResultHandle() { sc_result_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forecast cyber attacks from unconventional signals"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", sc_version());

  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  int workers = 0;
  std::vector<std::string> sets;

  app.add_option("--config", config_path, "configuration file (key = value, [section] headers)");
  app.add_option("--seed", seed, "master seed (overrides run.seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--workers", workers, "worker threads (overrides run.workers)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory (overrides paths.out)");
  app.add_option("--set", sets, "extra key=value override, repeatable");
  app.fallthrough();

  struct Command {
    const char* name;
    const char* help;
    sc_status (*run)(const sc_config*, sc_result**);
  };
  const Command commands[] = {
      {"synth", "write a synthetic event stream", sc_run_synth},
      {"generate", "materialise one dataset per attack type and granularity pair", sc_run_generate},
      {"filter", "apply a resampling filter to a dataset CSV", sc_run_filter},
      {"sweep", "evaluate every attack type, granularity pair and filter", sc_run_sweep},
      {"report", "summarise a sweep directory", sc_run_report},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("E_USAGE", e.what());
  }

  ConfigHandle config;
  if (auto st = sc_config_new(&config.ptr); st != SC_OK) return report_status(st);
  if (!config_path.empty()) {
    if (auto st = sc_config_load_file(config.ptr, config_path.c_str()); st != SC_OK) return report_status(st);
  }
  if (auto st = sc_config_apply_env(config.ptr); st != SC_OK) return report_status(st);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) return report_error("E_USAGE", "--set expects key=value, got '" + kv + "'");
    const auto key = kv.substr(0, eq);
    const auto value = kv.substr(eq + 1);
    if (auto st = sc_config_set(config.ptr, key.c_str(), value.c_str()); st != SC_OK) return report_status(st);
  }
  if (seed >= 0) {
    if (auto st = sc_config_set(config.ptr, "run.seed", std::to_string(seed).c_str()); st != SC_OK) {
      return report_status(st);
    }
  }
  if (workers > 0) {
    if (auto st = sc_config_set(config.ptr, "run.workers", std::to_string(workers).c_str()); st != SC_OK) {
      return report_status(st);
    }
  }
  if (!out_dir.empty()) {
    if (auto st = sc_config_set(config.ptr, "paths.out", out_dir.c_str()); st != SC_OK) return report_status(st);
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    ResultHandle result;
    if (auto st = c.run(config.ptr, &result.ptr); st != SC_OK) return report_status(st);
    for (size_t i = 0; i < sc_result_warning_count(result.ptr); ++i) {
      std::fprintf(stderr, "signalcast: warning: %s\n", one_line(sc_result_warning(result.ptr, i)).c_str());
    }
    std::string msg = sc_result_message(result.ptr);
    if (!msg.empty() && msg.back() != '\n') msg += '\n';
    std::fputs(msg.c_str(), stdout);
    return kExitOk;
  }
  return report_error("E_USAGE", "no command given");
}
