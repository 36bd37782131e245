#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "zeroless/error.hpp"
#include "zeroless/harness.hpp"

using namespace zeroless;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config text in both forms") {
  auto c = parse_config_text("# sizes\nk = 3\nn = 5   # five\nm=2\ngauge = g3\nfilter = {0};{1}\n");
  CHECK(c.k == 3);
  CHECK(c.n == 5);
  CHECK(c.m == 2);
  CHECK(c.gauge == GaugeMask::only_g3());
  REQUIRE(c.filter);
  CHECK(c.filter->size() == 2);
  CHECK(c.setting()->filter_core() == parse_lambda_set("{0,1}"));

  auto j = parse_config_text(R"({"k": 2, "n": 4, "seed": 99, "budget": 10})");
  CHECK(j.n == 4);
  CHECK(j.seed == 99);
  CHECK(j.budget == 10);

  // Later layers override earlier ones.
  auto layered = parse_config_text("n = 6", j);
  CHECK(layered.n == 6);
  CHECK(layered.seed == 99);

  CHECK_THROWS_AS(parse_config_text("colour = blue"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("k = two"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just words"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"k\": "), ConfigError);
}

TEST_CASE("the cache directory comes from the environment") {
  setenv(kCacheDirEnv, "/tmp/zeroless-env-cache", 1);
  Config c;
  apply_environment(c);
  CHECK(c.cache_dir == "/tmp/zeroless-env-cache");
  unsetenv(kCacheDirEnv);
  Config d;
  apply_environment(d);
  CHECK(d.cache_dir.empty());
}

TEST_CASE("classify and modset at the smallest size") {
  Config c;  // k=2 n=3 m=1
  auto cls = run_classify(c);
  CHECK(cls.success);
  CHECK(cls.data["identity_classes"] == 1);
  CHECK(cls.data["quotient_dimension"] == 0);

  auto mod = run_verify(c, "modset");
  CHECK(mod.success);
  CHECK(mod.data["pairs"] == 16);
  CHECK(mod.data["agreements"] == 16);
  CHECK(mod.data["verdict"] == "agree on all pairs");
  CHECK(mod.human(c).find("agree on all pairs") != std::string::npos);
}

TEST_CASE("every suite passes at the smallest size") {
  Config c;
  for (const auto& s : verify_suites()) {
    auto r = run_verify(c, s, 8);
    CHECK_MESSAGE(r.success, s);
  }
  CHECK_THROWS_AS(run_verify(c, "nonsense"), ConfigError);
}

TEST_CASE("reports are deterministic and carry the configuration") {
  auto dir = std::filesystem::temp_directory_path() / "zeroless-test-reports";
  std::filesystem::remove_all(dir);
  Config c;
  c.cache_dir = (dir / "cache").string();
  SweepOptions opt;
  opt.ks = {2};
  opt.n_max = 4;
  opt.m_max = 1;
  auto a = run_sweep(c, opt);
  write_report(a, c, dir / "a");
  auto b = run_sweep(c, opt);  // warm cache
  write_report(b, c, dir / "b");
  CHECK(slurp(dir / "a" / "sweep.json") == slurp(dir / "b" / "sweep.json"));
  CHECK(slurp(dir / "a" / "sweep.txt") == slurp(dir / "b" / "sweep.txt"));
  auto j = nlohmann::json::parse(slurp(dir / "a" / "sweep.json"));
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["k"] == 2);
  CHECK_FALSE(j["caches"].empty());
  CHECK(j["caches"][0].contains("sha256"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(GuardrailError("x")) == 3);
  CHECK(exit_code_for(ConfigError("x")) == 2);
  CHECK(exit_code_for(PreconditionError("x")) == 2);
  CHECK(exit_code_for(InternalError("x")) == 1);
  CHECK(error_record(GuardrailError("too big"))["error"]["kind"] == "guardrail");

  Config big;
  big.n = 8;
  big.m = 2;
  try {
    auto dir = std::filesystem::temp_directory_path() / "zeroless-test-build";
    (void)run_build(big, BuildOptions{std::nullopt, false, dir / "s.txt"});
    FAIL("materializing n=8 m=2 should hit the guardrail");
  } catch (const GuardrailError& e) {
    CHECK(exit_code_for(e) == 3);
    CHECK(std::string(e.what()).find("H copies") != std::string::npos);
  }
}
