#include "signalcast/signalcast.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "signalcast/commands.hpp"
#include "signalcast/config.hpp"
#include "signalcast/error.hpp"
#include "signalcast/harness.hpp"
#include "signalcast/metrics.hpp"

struct sc_config {
  signalcast::Config config;
};

struct sc_result {
  signalcast::CommandResult result;
};

struct sc_dataset {
  signalcast::WeightedDataset data;
};

struct sc_model {
  signalcast::BayesNetModel model;
};

namespace {

thread_local std::string g_last_error;

sc_status fail(sc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
sc_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return SC_OK;
  } catch (const signalcast::Error& e) {
    switch (e.code()) {
      case signalcast::ErrorCode::kConfig:
        return fail(SC_ERR_CONFIG, e.what());
      case signalcast::ErrorCode::kInput:
        return fail(SC_ERR_INPUT, e.what());
      case signalcast::ErrorCode::kInternal:
        return fail(SC_ERR_INTERNAL, e.what());
    }
    return fail(SC_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SC_ERR_INTERNAL, "unknown failure");
  }
}

#define SC_REQUIRE(cond, what)                                  \
  do {                                                          \
    if (!(cond)) return fail(SC_ERR_ARGUMENT, what);            \
  } while (0)

template <typename Run>
sc_status run_command(const sc_config* config, sc_result** out, Run run) {
  SC_REQUIRE(config && out, "config and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new sc_result{run(config->config)}; });
}

const signalcast::Config& config_or_default(const sc_config* c) {
  static const signalcast::Config defaults;
  return c ? c->config : defaults;
}

}  // namespace

extern "C" {

const char* sc_version(void) { return "0.1.0"; }

const char* sc_status_code(sc_status status) {
  switch (status) {
    case SC_OK:
      return "OK";
    case SC_ERR_CONFIG:
      return "E_CONFIG";
    case SC_ERR_INPUT:
      return "E_INPUT";
    case SC_ERR_ARGUMENT:
      return "E_ARGUMENT";
    case SC_ERR_INTERNAL:
      return "E_INTERNAL";
  }
  return "E_INTERNAL";
}

const char* sc_last_error(void) { return g_last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_config_new(sc_config** out) {
  SC_REQUIRE(out, "out must not be NULL");
  return guarded([&] { *out = new sc_config{}; });
}

void sc_config_free(sc_config* config) { delete config; }

sc_status sc_config_load_file(sc_config* config, const char* path) {
  SC_REQUIRE(config && path, "config and path must not be NULL");
  return guarded([&] { config->config.load_file(path); });
}

sc_status sc_config_parse(sc_config* config, const char* text) {
  SC_REQUIRE(config && text, "config and text must not be NULL");
  return guarded([&] { config->config.parse(text, "<text>"); });
}

sc_status sc_config_apply_env(sc_config* config) {
  SC_REQUIRE(config, "config must not be NULL");
  return guarded([&] { config->config.apply_env(); });
}

sc_status sc_config_set(sc_config* config, const char* key, const char* value) {
  SC_REQUIRE(config && key && value, "config, key and value must not be NULL");
  return guarded([&] { config->config.set(key, value); });
}

sc_status sc_config_get(const sc_config* config, const char* key, char** out) {
  SC_REQUIRE(config && key && out, "config, key and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto known = signalcast::config_keys();
    bool found = false;
    for (const auto& k : known) found = found || k.key == key;
    if (!found) signalcast::throw_config(std::string("unknown config key '") + key + "'");
    const auto v = config->config.get(key);
    char* s = static_cast<char*>(std::malloc(v.size() + 1));
    if (!s) throw std::bad_alloc();
    std::memcpy(s, v.c_str(), v.size() + 1);
    *out = s;
  });
}

sc_status sc_run_synth(const sc_config* config, sc_result** out) {
  return run_command(config, out, signalcast::run_synth);
}
sc_status sc_run_generate(const sc_config* config, sc_result** out) {
  return run_command(config, out, signalcast::run_generate);
}
sc_status sc_run_filter(const sc_config* config, sc_result** out) {
  return run_command(config, out, signalcast::run_filter);
}
sc_status sc_run_sweep(const sc_config* config, sc_result** out) {
  return run_command(config, out, signalcast::run_sweep);
}
sc_status sc_run_report(const sc_config* config, sc_result** out) {
  return run_command(config, out, signalcast::run_report);
}

const char* sc_result_message(const sc_result* result) { return result ? result->result.message.c_str() : ""; }

size_t sc_result_output_count(const sc_result* result) { return result ? result->result.outputs.size() : 0; }

const char* sc_result_output(const sc_result* result, size_t index) {
  if (!result || index >= result->result.outputs.size()) return nullptr;
  return result->result.outputs[index].c_str();
}

size_t sc_result_warning_count(const sc_result* result) { return result ? result->result.warnings.size() : 0; }

const char* sc_result_warning(const sc_result* result, size_t index) {
  if (!result || index >= result->result.warnings.size()) return nullptr;
  return result->result.warnings[index].c_str();
}

void sc_result_free(sc_result* result) { delete result; }

sc_status sc_dataset_create(size_t n_signals, const char* const* signal_names, size_t n_rows, const double* features,
                            const int* labels, const double* weights, sc_dataset** out) {
  SC_REQUIRE(out, "out must not be NULL");
  *out = nullptr;
  SC_REQUIRE(n_signals == 0 || signal_names, "signal_names must not be NULL");
  SC_REQUIRE(n_rows == 0 || (labels && (n_signals == 0 || features)), "features and labels must not be NULL");
  return guarded([&] {
    std::vector<std::string> names;
    for (size_t i = 0; i < n_signals; ++i) {
      if (!signal_names[i]) signalcast::throw_input("signal name must not be NULL");
      names.emplace_back(signal_names[i]);
    }
    std::vector<signalcast::InstanceRow> rows(n_rows);
    for (size_t r = 0; r < n_rows; ++r) {
      rows[r].features.assign(features + r * n_signals, features + (r + 1) * n_signals);
      rows[r].label = labels[r];
      rows[r].weight = weights ? weights[r] : 1.0;
    }
    *out = new sc_dataset{signalcast::WeightedDataset(std::move(names), std::move(rows))};
  });
}

sc_status sc_dataset_read(const char* path, sc_dataset** out) {
  SC_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new sc_dataset{signalcast::read_dataset(path)}; });
}

sc_status sc_dataset_write(const sc_dataset* dataset, const char* path) {
  SC_REQUIRE(dataset && path, "dataset and path must not be NULL");
  return guarded([&] { signalcast::write_dataset(dataset->data, path); });
}

size_t sc_dataset_rows(const sc_dataset* dataset) { return dataset ? dataset->data.size() : 0; }

size_t sc_dataset_signals(const sc_dataset* dataset) { return dataset ? dataset->data.arity() : 0; }

sc_status sc_dataset_row(const sc_dataset* dataset, size_t index, double* features, int* label, double* weight) {
  SC_REQUIRE(dataset, "dataset must not be NULL");
  SC_REQUIRE(index < dataset->data.size(), "row index out of range");
  const auto& row = dataset->data.row(index);
  if (features) std::copy(row.features.begin(), row.features.end(), features);
  if (label) *label = row.label;
  if (weight) *weight = row.weight;
  return SC_OK;
}

sc_status sc_dataset_filter(const sc_dataset* dataset, const sc_config* config, const char* name, uint64_t seed,
                            sc_dataset** out) {
  SC_REQUIRE(dataset && name && out, "dataset, name and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto spec = signalcast::filter_from_config(config_or_default(config), name);
    *out = new sc_dataset{signalcast::apply_filter(dataset->data, spec, seed).data};
  });
}

void sc_dataset_free(sc_dataset* dataset) { delete dataset; }

sc_status sc_model_train(const sc_dataset* train, const sc_config* config, sc_model** out) {
  SC_REQUIRE(train && out, "train and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    const auto cc = signalcast::classifier_from_config(config_or_default(config));
    *out = new sc_model{signalcast::train_classifier(train->data, cc)};
  });
}

sc_status sc_model_score(const sc_model* model, const sc_dataset* dataset, double* scores) {
  SC_REQUIRE(model && dataset && (scores || dataset->data.empty()), "model, dataset and scores must not be NULL");
  return guarded([&] {
    const auto s = signalcast::predict_scores(model->model, dataset->data);
    std::copy(s.begin(), s.end(), scores);
  });
}

sc_status sc_model_write(const sc_model* model, const char* path) {
  SC_REQUIRE(model && path, "model and path must not be NULL");
  return guarded([&] { signalcast::write_model(model->model, path); });
}

sc_status sc_model_read(const char* path, sc_model** out) {
  SC_REQUIRE(path && out, "path and out must not be NULL");
  *out = nullptr;
  return guarded([&] { *out = new sc_model{signalcast::read_model(path)}; });
}

void sc_model_free(sc_model* model) { delete model; }

sc_status sc_auc(size_t n, const double* scores, const int* labels, const double* weights, double* out) {
  SC_REQUIRE(out, "out must not be NULL");
  SC_REQUIRE(n == 0 || (scores && labels), "scores and labels must not be NULL");
  return guarded([&] {
    std::vector<signalcast::ScoredRow> rows(n);
    for (size_t i = 0; i < n; ++i) rows[i] = {scores[i], labels[i], weights ? weights[i] : 1.0};
    *out = signalcast::auc(rows);
  });
}

}  // extern "C"
