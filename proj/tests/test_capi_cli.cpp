#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "signalcast/signalcast.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SIGNALCAST_CLI_PATH + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 512> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.output += buf.data();
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class ScratchDir {
 public:
  ScratchDir() {
    path_ = fs::temp_directory_path() / ("signalcast_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

std::string small_config(const ScratchDir& dir) {
  const auto path = (dir / "run.conf").string();
  std::ofstream(path) << "[paths]\nevents = " << dir.str() << "/events.csv\n"
                      << "[run]\ngt_start = 2016-03-01\ngt_end = 2016-05-01\nattack_types = Malware\n"
                      << "[grid]\nt_x = 3d,1w\nt_g = 24h\n"
                      << "[filters]\nlist = none,smote_pp\n"
                      << "[cv]\nfolds = 5\nrepetitions = 1\n"
                      << "[synth]\nstart = 2016-01-01\nend = 2016-05-01\nattack_start = 2016-03-01\n";
  return path;
}

}  // namespace

TEST(CApi, StatusNamesAndNullHandles) {
  EXPECT_STREQ(sc_status_code(SC_OK), "OK");
  EXPECT_STREQ(sc_status_code(SC_ERR_CONFIG), "E_CONFIG");
  EXPECT_STREQ(sc_status_code(SC_ERR_INPUT), "E_INPUT");
  EXPECT_STREQ(sc_status_code(SC_ERR_INTERNAL), "E_INTERNAL");
  EXPECT_EQ(sc_config_set(nullptr, "run.seed", "1"), SC_ERR_ARGUMENT);
  EXPECT_NE(std::string(sc_last_error()), "");
  EXPECT_NE(std::string(sc_version()), "");
  sc_config_free(nullptr);
  sc_result_free(nullptr);
  sc_dataset_free(nullptr);
  sc_model_free(nullptr);
}

TEST(CApi, ConfigSetGetAndErrors) {
  sc_config* c = nullptr;
  ASSERT_EQ(sc_config_new(&c), SC_OK);
  EXPECT_EQ(sc_config_parse(c, "[run]\nseed = 5\n"), SC_OK);
  char* v = nullptr;
  ASSERT_EQ(sc_config_get(c, "run.seed", &v), SC_OK);
  EXPECT_STREQ(v, "5");
  sc_string_free(v);
  EXPECT_EQ(sc_config_set(c, "no.such", "1"), SC_ERR_CONFIG);
  EXPECT_NE(std::string(sc_last_error()).find("no.such"), std::string::npos);
  EXPECT_EQ(sc_config_load_file(c, "/nonexistent.conf"), SC_ERR_INPUT);
  sc_config_free(c);
}

TEST(CApi, DatasetFilterTrainScore) {
  const char* names[] = {"a", "b"};
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    const int label = i < 12 ? 1 : 0;
    x.push_back(label * 2.0 + (i % 7) * 0.3);
    x.push_back((i % 5) * 0.2);
    y.push_back(label);
  }
  sc_dataset* ds = nullptr;
  ASSERT_EQ(sc_dataset_create(2, names, 60, x.data(), y.data(), nullptr, &ds), SC_OK);
  EXPECT_EQ(sc_dataset_rows(ds), 60u);
  EXPECT_EQ(sc_dataset_signals(ds), 2u);
  double f[2];
  int label = -1;
  double w = 0;
  ASSERT_EQ(sc_dataset_row(ds, 3, f, &label, &w), SC_OK);
  EXPECT_EQ(label, 1);
  EXPECT_EQ(w, 1.0);
  EXPECT_EQ(sc_dataset_row(ds, 60, f, &label, &w), SC_ERR_ARGUMENT);

  sc_config* c = nullptr;
  ASSERT_EQ(sc_config_new(&c), SC_OK);
  sc_dataset* filtered = nullptr;
  ASSERT_EQ(sc_dataset_filter(ds, c, "smote_pp", 3, &filtered), SC_OK);
  double maj = 0;
  for (size_t i = 0; i < sc_dataset_rows(filtered); ++i) {
    ASSERT_EQ(sc_dataset_row(filtered, i, f, &label, &w), SC_OK);
    if (label == 0) maj += w;
  }
  EXPECT_NEAR(maj, 48.0, 1e-9);
  sc_dataset* rejected = nullptr;
  EXPECT_EQ(sc_dataset_filter(ds, c, "bogus", 3, &rejected), SC_ERR_CONFIG);
  EXPECT_EQ(rejected, nullptr);

  sc_model* m = nullptr;
  ASSERT_EQ(sc_model_train(filtered, c, &m), SC_OK);
  std::vector<double> scores(60);
  ASSERT_EQ(sc_model_score(m, ds, scores.data()), SC_OK);
  double a = 0;
  ASSERT_EQ(sc_auc(60, scores.data(), y.data(), nullptr, &a), SC_OK);
  EXPECT_GT(a, 0.9);

  ScratchDir dir;
  const auto mp = (dir / "m.txt").string();
  ASSERT_EQ(sc_model_write(m, mp.c_str()), SC_OK);
  sc_model* m2 = nullptr;
  ASSERT_EQ(sc_model_read(mp.c_str(), &m2), SC_OK);
  std::vector<double> s2(60);
  ASSERT_EQ(sc_model_score(m2, ds, s2.data()), SC_OK);
  EXPECT_EQ(scores, s2);

  const auto dp = (dir / "d.csv").string();
  ASSERT_EQ(sc_dataset_write(ds, dp.c_str()), SC_OK);
  sc_dataset* back = nullptr;
  ASSERT_EQ(sc_dataset_read(dp.c_str(), &back), SC_OK);
  EXPECT_EQ(sc_dataset_rows(back), 60u);
  sc_dataset* missing = nullptr;
  EXPECT_EQ(sc_dataset_read((dir / "none.csv").string().c_str(), &missing), SC_ERR_INPUT);

  const int one_class[] = {1, 1};
  const double two[] = {0.1, 0.2};
  EXPECT_EQ(sc_auc(2, two, one_class, nullptr, &a), SC_ERR_INPUT);

  sc_dataset_free(back);
  sc_model_free(m2);
  sc_model_free(m);
  sc_dataset_free(filtered);
  sc_dataset_free(ds);
  sc_config_free(c);
}

TEST(Cli, PipelineSucceeds) {
  ScratchDir dir;
  const auto conf = small_config(dir);
  const auto out = dir.str();
  auto r = run_cli("synth --config " + conf + " --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  r = run_cli("generate --config " + conf + " --out " + out + "/data --workers 2");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "data/Malware_tx3d_tg24h.csv"));
  r = run_cli("filter --config " + conf + " --set paths.dataset=" + out + "/data/Malware_tx1w_tg24h.csv --out " + out +
              "/filtered --seed 4");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "filtered/Malware_tx1w_tg24h_smote_pp.meta"));
  r = run_cli("sweep --config " + conf + " --out " + out + "/sweep");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  r = run_cli("report --config " + conf + " --out " + out + "/sweep");
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("Malware"), std::string::npos);
}

TEST(Cli, ErrorsAreSingleLineCodes) {
  ScratchDir dir;
  const auto conf = small_config(dir);
  auto r = run_cli("");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error E_USAGE"), std::string::npos) << r.output;

  r = run_cli("generate --config " + conf + " --out " + dir.str());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.output.rfind("signalcast: error E_INPUT: ", 0), 0u) << r.output;
  EXPECT_EQ(std::count(r.output.begin(), r.output.end(), '\n'), 1);

  r = run_cli("synth --config " + conf + " --out " + dir.str(), "SIGNALCAST_RUN_SEED=abc");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error E_CONFIG"), std::string::npos) << r.output;

  r = run_cli("synth --config " + (dir / "missing.conf").string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error E_INPUT"), std::string::npos) << r.output;

  r = run_cli("synth --set nonsense");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error E_USAGE"), std::string::npos) << r.output;

  r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
}

TEST(Cli, EnvironmentOverridesFileAndFlagsOverrideEnvironment) {
  ScratchDir dir;
  const auto conf = small_config(dir);
  const auto a = run_cli("synth --config " + conf + " --out " + dir.str() + "/a", "SIGNALCAST_RUN_SEED=3");
  const auto b = run_cli("synth --config " + conf + " --out " + dir.str() + "/b --seed 3", "SIGNALCAST_RUN_SEED=9");
  const auto c = run_cli("synth --config " + conf + " --out " + dir.str() + "/c");
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  ASSERT_EQ(c.exit_code, 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(dir / "a/events.csv"), slurp(dir / "b/events.csv"));
  EXPECT_NE(slurp(dir / "a/events.csv"), slurp(dir / "c/events.csv"));
}
