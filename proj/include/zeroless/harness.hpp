#pragma once

// Configuration, experiment runners and report emission behind the CLI.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zeroless/classification.hpp"

namespace zeroless {

inline constexpr const char* kVersion = "zeroless 0.1.0";
inline constexpr const char* kCacheDirEnv = "ZEROLESS_CACHE_DIR";

struct Config {
  int k = 2;
  int n = 3;
  int m = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = 5'000'000;
  std::string cache_dir;  // empty: no disk cache
  int threads = 0;        // 0: OpenMP default
  std::optional<std::vector<LambdaSet>> filter;
  GaugeMask gauge;

  nlohmann::json to_json() const;
  SettingPtr setting() const;  // make_setting(k, n, m, filter)
};

// "key = value" lines (# comments) or a JSON object. Unknown keys and bad
// values throw ConfigError. Fields not mentioned keep their values in base.
Config parse_config_text(const std::string& text, Config base = {});
Config load_config_file(const std::filesystem::path& path, Config base = {});
// Cache directory from the environment, if set.
void apply_environment(Config& config);

struct Table {
  std::string heading;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;  // aligned text
};

struct Report {
  std::string name;  // file stem, e.g. "verify-modset"
  bool success = true;
  nlohmann::json data = nlohmann::json::object();
  std::vector<Table> tables;
  nlohmann::json caches = nlohmann::json::array();

  nlohmann::json to_json(const Config& config) const;
  std::string human(const Config& config) const;
};

// Writes <dir>/<name>.json and <dir>/<name>.txt.
void write_report(const Report& report, const Config& config, const std::filesystem::path& dir);

// The coboundary image for the config, through the disk cache when
// cache_dir is set; records the cache hash in report.caches either way.
CoboundaryImage image_for(const Config& config, GaugeMask mask, Report& report);

struct BuildOptions {
  std::optional<std::filesystem::path> f_file;  // correction JSON; zero if absent
  bool random_f = false;
  std::filesystem::path output;  // structure text
};
Report run_build(const Config& config, const BuildOptions& opt);

Report run_classify(const Config& config, std::size_t max_representatives = 16);

// Suites: modset, labase, existxyz, zerosforchoices, contrapositive.
// samples bounds randomized parts of a suite.
Report run_verify(const Config& config, const std::string& suite, std::size_t samples = 32);
std::vector<std::string> verify_suites();

struct SweepOptions {
  std::vector<int> ks{2, 3};
  int n_max = 8;
  int m_max = 3;
  std::vector<GaugeMask> gauges{GaugeMask::all(), GaugeMask::only_g3()};
};
Report run_sweep(const Config& config, const SweepOptions& opt);

struct ExtendOptions {
  std::filesystem::path choice_file;            // partial choice JSON
  std::optional<std::filesystem::path> f_file;  // correction JSON; zero if absent
  std::optional<IndexSet> w;                    // extend_choice_w mode
  std::optional<IndexSet> j1, j2;               // full_extend mode
  std::optional<std::filesystem::path> output;  // extended choice JSON
};
Report run_extend(const Config& config, const ExtendOptions& opt);

struct OracleOptions {
  std::filesystem::path a, b;
  std::optional<std::filesystem::path> map_output;
};
Report run_oracle(const Config& config, const OracleOptions& opt);

// Exit status for an exception escaping a runner: 2 configuration or
// precondition, 3 guardrail, 1 otherwise.
int exit_code_for(const std::exception& e);
nlohmann::json error_record(const std::exception& e);

}  // namespace zeroless
