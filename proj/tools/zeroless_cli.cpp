#include <omp.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "zeroless/error.hpp"
#include "zeroless/harness.hpp"

using namespace zeroless;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(sep, start);
    if (pos == std::string::npos) pos = text.size();
    if (pos > start) out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

struct Flags {
  std::optional<std::string> config_file;
  std::optional<int> k, n, m, threads;
  std::optional<std::uint64_t> seed, budget;
  std::optional<std::string> cache_dir, filter, gauge;
  std::string out = "reports";
};

Config resolve(const Flags& f) {
  Config c;
  if (f.config_file) c = load_config_file(*f.config_file, c);
  apply_environment(c);
  std::string overrides;
  auto put = [&](const char* key, const auto& v) {
    if (!v) return;
    std::ostringstream ss;
    ss << *v;
    overrides += std::string(key) + " = " + ss.str() + "\n";
  };
  put("k", f.k);
  put("n", f.n);
  put("m", f.m);
  put("threads", f.threads);
  put("seed", f.seed);
  put("budget", f.budget);
  put("cache_dir", f.cache_dir);
  put("filter", f.filter);
  put("gauge", f.gauge);
  return parse_config_text(overrides, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroless-copy models: classification, extension and isomorphism experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config_file, "config file (key = value lines or JSON)");
  app.add_option("--k", f.k, "arity k");
  app.add_option("--n", f.n, "|I|");
  app.add_option("--m", f.m, "|Lambda|");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--budget", f.budget, "oracle node budget");
  app.add_option("--cache-dir", f.cache_dir, "basis cache directory (overrides $ZEROLESS_CACHE_DIR)");
  app.add_option("--threads", f.threads, "OpenMP threads (0 = default)");
  app.add_option("--filter", f.filter, "filter generators, e.g. {0};{1}");
  app.add_option("--gauge", f.gauge, "gauge components, e.g. g1+g2+g3 or g3");
  app.add_option("--out", f.out, "report directory");

  BuildOptions build;
  std::optional<std::string> build_output, build_f;
  auto* cmd_build = app.add_subcommand("build", "materialize a model and export it");
  cmd_build->add_option("--f", build_f, "correction function JSON (default: zero)");
  cmd_build->add_flag("--random-f", build.random_f, "draw f from the seed");
  cmd_build->add_option("--output", build_output, "structure file (default: <out>/structure.txt)");

  std::size_t max_reps = 16;
  auto* cmd_classify = app.add_subcommand("classify", "quotient dimension, class counts and representatives");
  cmd_classify->add_option("--max-reps", max_reps, "representatives to list");

  std::string suite;
  std::size_t samples = 32;
  auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
  cmd_verify->add_option("suite", suite, "modset | labase | existxyz | zerosforchoices | contrapositive")->required();
  cmd_verify->add_option("--samples", samples, "size of randomized parts");

  SweepOptions sweep;
  std::string ks = "2,3", gauges = "g1+g2+g3,g3";
  auto* cmd_sweep = app.add_subcommand("sweep", "parameter grid for non-isomorphism witnesses");
  cmd_sweep->add_option("--ks", ks, "comma-separated k values");
  cmd_sweep->add_option("--n-max", sweep.n_max, "largest n");
  cmd_sweep->add_option("--m-max", sweep.m_max, "largest m");
  cmd_sweep->add_option("--gauges", gauges, "comma-separated gauge masks");

  ExtendOptions ext;
  std::string choice_file;
  std::optional<std::string> ext_f, ext_w, ext_j1, ext_j2, ext_output;
  auto* cmd_extend = app.add_subcommand("extend", "extend a partial zero-correction choice");
  cmd_extend->add_option("--choice", choice_file, "partial choice JSON")->required();
  cmd_extend->add_option("--f", ext_f, "correction function JSON (default: zero)");
  cmd_extend->add_option("--w", ext_w, "W for the single-set extension, e.g. {3}");
  cmd_extend->add_option("--j1", ext_j1, "points carrying the choice");
  cmd_extend->add_option("--j2", ext_j2, "points to extend to");
  cmd_extend->add_option("--output", ext_output, "extended choice JSON");

  std::string oracle_a, oracle_b;
  std::optional<std::string> oracle_map;
  auto* cmd_oracle = app.add_subcommand("oracle", "brute-force isomorphism between two exported structures");
  cmd_oracle->add_option("a", oracle_a, "first structure")->required();
  cmd_oracle->add_option("b", oracle_b, "second structure")->required();
  cmd_oracle->add_option("--map", oracle_map, "write the isomorphism here");

  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path out_dir = f.out;
  try {
    const Config config = resolve(f);
    if (config.threads > 0) omp_set_num_threads(config.threads);
    Report report;
    if (cmd_build->parsed()) {
      if (build_f) build.f_file = *build_f;
      build.output = build_output ? std::filesystem::path(*build_output) : out_dir / "structure.txt";
      report = run_build(config, build);
    } else if (cmd_classify->parsed()) {
      report = run_classify(config, max_reps);
    } else if (cmd_verify->parsed()) {
      report = run_verify(config, suite, samples);
    } else if (cmd_sweep->parsed()) {
      sweep.ks.clear();
      for (const auto& s : split(ks, ',')) sweep.ks.push_back(std::stoi(s));
      sweep.gauges.clear();
      for (const auto& g : split(gauges, ',')) sweep.gauges.push_back(GaugeMask::parse(g));
      report = run_sweep(config, sweep);
    } else if (cmd_extend->parsed()) {
      ext.choice_file = choice_file;
      if (ext_f) ext.f_file = *ext_f;
      if (ext_w) ext.w = parse_index_set(*ext_w);
      if (ext_j1) ext.j1 = parse_index_set(*ext_j1);
      if (ext_j2) ext.j2 = parse_index_set(*ext_j2);
      if (ext_output) ext.output = *ext_output;
      report = run_extend(config, ext);
    } else if (cmd_oracle->parsed()) {
      report = run_oracle(config, {oracle_a, oracle_b, oracle_map ? std::optional<std::filesystem::path>(*oracle_map)
                                                                  : std::nullopt});
    }
    write_report(report, config, out_dir);
    std::cout << report.human(config);
    return report.success ? 0 : 1;
  } catch (const std::exception& e) {
    const auto record = error_record(e);
    std::cerr << record.dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
