#include <random>

#include "doctest.h"
#include "zeroless/error.hpp"
#include "zeroless/extension.hpp"

using namespace zeroless;

namespace {

bool zero_on_domain(const ModelHandle& M, const Choice& c) { return correction_of(M, c).is_zero(); }

// A global zero-correction choice for M_{I,δg}.
std::pair<ModelHandle, Choice> gauge_model(SettingPtr st, std::mt19937_64& rng) {
  ModelHandle M(st, coboundary(*st, GaugeTriple::random(*st, rng)));
  auto c = zero_choice_exists(M);
  REQUIRE(c);
  return {M, *c};
}

}  // namespace

TEST_CASE("zero choices come from gauge certificates") {
  std::mt19937_64 rng(1);
  auto st = make_setting(2, 4, 1);
  ModelHandle M0(st);
  auto c0 = zero_choice_exists(M0);
  REQUIRE(c0);
  CHECK(*c0 == canonical_choice(M0));

  for (int t = 0; t < 10; ++t) {
    auto [M, c] = gauge_model(st, rng);
    CHECK(c.is_global());
    CHECK(zero_on_domain(M, c));
  }
  // Under the g3-only gauge an f off B has no such choice from that gauge.
  auto img = coboundary_image(st, GaugeMask::only_g3());
  ModelHandle off(st, coset_representative(img, 1));
  CHECK_FALSE(zero_choice_exists(off, img));
  CHECK(zero_choice_exists(off));
}

TEST_CASE("W-avoiding domains") {
  auto st = make_setting(2, 4, 1);
  auto d = w_avoiding_domain(*st, parse_index_set("{3}"));
  for (std::size_t v = 0; v < st->k_sets().size(); ++v) CHECK(d.j0[v] == !st->k_sets()[v].contains(3));
  CHECK(d == ChoiceDomain::for_points(*st, parse_index_set("{0,1,2}")));
}

TEST_CASE("extending the zero choice of M_I") {
  auto st = make_setting(2, 4, 2);
  ModelHandle M(st);
  for (const char* w : {"{0}", "{2}", "{3}"}) {
    auto W = parse_index_set(w);
    auto partial = restrict(canonical_choice(M), w_avoiding_domain(*st, W));
    auto out = extend_choice_w(M, W, partial);
    REQUIRE(out.ok());
    CHECK(out.choice->is_global());
    CHECK(zero_on_domain(M, *out.choice));
    CHECK(restrict(*out.choice, partial.domain()) == partial);
    CHECK_FALSE(out.trace.lines.empty());
  }
}

TEST_CASE("extending a partial choice read off a gauge") {
  std::mt19937_64 rng(3);
  for (int m : {2, 3}) {
    auto st = make_setting(2, 4, m);
    for (int t = 0; t < 8; ++t) {
      auto [M, c] = gauge_model(st, rng);
      const auto W = IndexSet::of({t % 4});
      auto partial = restrict(c, w_avoiding_domain(*st, W));
      auto out = extend_choice_w(M, W, partial);
      REQUIRE(out.ok());
      CHECK(zero_on_domain(M, *out.choice));
      CHECK(restrict(*out.choice, partial.domain()) == partial);
      // W = {a} lies in three triples of {0..3}; the explicit construction
      // needs that many points of Λ, and no triple may have its max in W.
      if (m == 3 && t % 4 < 2) CHECK(out.path == "structured");
      if (m == 2) CHECK(out.path == "solver");
    }
  }
}

TEST_CASE("extension preconditions") {
  std::mt19937_64 rng(5);
  auto st = make_setting(2, 4, 1);
  ModelHandle M(st);
  const auto W = parse_index_set("{3}");
  auto bad = restrict(canonical_choice(M), w_avoiding_domain(*st, W));
  bad.set_x(st->k_index(parse_index_set("{1,2}")), 0, true);
  CHECK_THROWS_AS(extend_choice_w(M, W, bad), PreconditionError);
  auto ok = restrict(canonical_choice(M), w_avoiding_domain(*st, W));
  CHECK_THROWS_AS(extend_choice_w(M, parse_index_set("{0,1}"), ok), PreconditionError);
  CHECK_THROWS_AS(extend_choice_w(M, parse_index_set("{2}"), ok), PreconditionError);
}

TEST_CASE("amalgamating the restrictions of a choice") {
  std::mt19937_64 rng(7);
  auto st = make_setting(2, 4, 2);
  for (int t = 0; t < 6; ++t) {
    auto [M, c] = gauge_model(st, rng);
    auto sys = system_from_choice(c, parse_index_set("{0,1,2}"), {3});
    auto out = amalgamate_system(M, sys);
    REQUIRE(out.ok());
    CHECK(out.choice->domain() == ChoiceDomain::for_points(*st, sys.target()));
    CHECK(zero_on_domain(M, *out.choice));
    CHECK(restrict(*out.choice, sys.choices.at(0).domain()) == sys.choices.at(0));
  }
  auto [M, c] = gauge_model(make_setting(2, 5, 1), rng);
  auto two = system_from_choice(c, parse_index_set("{0,1}"), {2, 3});
  CHECK_THROWS_AS(amalgamate_system(M, two), PreconditionError);  // m2 = k
}

TEST_CASE("full extension with J1 = J2 returns the choice") {
  std::mt19937_64 rng(9);
  auto st = make_setting(2, 4, 1);
  ModelHandle M(st);
  const auto j = parse_index_set("{0,1,3}");
  auto c = random_zero_choice(M, ChoiceDomain::for_points(*st, j), rng);
  REQUIRE(c);
  auto out = full_extend(M, j, j, *c);
  REQUIRE(out.ok());
  CHECK(*out.choice == *c);
}

TEST_CASE("full extension agrees with the linear criterion and reports where it sticks") {
  std::mt19937_64 rng(11);
  int stuck = 0, extended = 0;
  for (int m = 0; m <= 2; ++m) {
    auto st = make_setting(2, 4, m);
    for (int t = 0; t < 24; ++t) {
      ModelHandle M(st, random_correction(*st, rng));
      const auto j1 = parse_index_set("{0,1,2}");
      auto c = random_zero_choice(M, ChoiceDomain::for_points(*st, j1), rng);
      REQUIRE(c);
      auto out = full_extend(M, j1, st->index_set(), *c);
      CHECK(out.ok() == linear_criterion(M, *c, ChoiceDomain::global(*st)));
      if (out.ok()) {
        ++extended;
        CHECK(zero_on_domain(M, *out.choice));
        CHECK(restrict(*out.choice, c->domain()) == *c);
      } else {
        ++stuck;
        REQUIRE(out.stuck);
        CHECK(*out.stuck == 3);
        CHECK_FALSE(out.inconsistency.empty());
      }
    }
  }
  // Random y-values on the triangle {0,1,2} break the cocycle condition
  // about half the time.
  CHECK(stuck > 0);
  CHECK(extended > 0);
}

TEST_CASE("extend_choice_w is complete with respect to the criterion") {
  std::mt19937_64 rng(13);
  for (int m = 0; m <= 2; ++m) {
    auto st = make_setting(2, 4, m);
    for (int t = 0; t < 16; ++t) {
      ModelHandle M(st, random_correction(*st, rng));
      const auto W = IndexSet::of({static_cast<int>(rng() % 4)});
      auto partial = random_zero_choice(M, w_avoiding_domain(*st, W), rng);
      REQUIRE(partial);
      auto out = extend_choice_w(M, W, *partial);
      CHECK(out.ok() == linear_criterion(M, *partial, ChoiceDomain::global(*st)));
      if (out.ok()) CHECK(zero_on_domain(M, *out.choice));
    }
  }
}

TEST_CASE("full extension is monotone in J2") {
  std::mt19937_64 rng(15);
  auto st = make_setting(2, 5, 1);
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    auto [M, g] = gauge_model(st, rng);
    const auto j1 = parse_index_set("{0,1}");
    auto c = restrict(g, ChoiceDomain::for_points(*st, j1));
    auto full = full_extend(M, j1, st->index_set(), c);
    if (!full.ok()) continue;
    ++checked;
    for (const char* mid : {"{0,1,2}", "{0,1,4}", "{0,1,2,3}"}) {
      auto j = parse_index_set(mid);
      auto out = full_extend(M, j1, j, c);
      CHECK(out.ok());
      CHECK(zero_on_domain(M, restrict(*full.choice, ChoiceDomain::for_points(*st, j))));
    }
  }
  CHECK(checked > 0);
}
