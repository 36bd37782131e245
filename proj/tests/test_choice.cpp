#include <algorithm>
#include <random>

#include "doctest.h"
#include "zeroless/choice.hpp"
#include "zeroless/error.hpp"

using namespace zeroless;

namespace {

std::vector<bool> flags_of(const Setting& st, std::initializer_list<const char*> sets) {
  std::vector<bool> j(st.k_sets().size());
  for (auto s : sets) j[st.k_index(parse_index_set(s))] = true;
  return j;
}

bool only_coordinate(const PartialCorrection& pc, std::size_t idx) {
  return pc.values.popcount() == 1 && pc.values.get(idx);
}

}  // namespace

TEST_CASE("J* keeps the (k+1)-sets whose faces all lie in J") {
  auto st = make_setting(2, 3, 1);
  CHECK(j_star(*st, flags_of(*st, {"{0,2}", "{1,2}"})) == std::vector<bool>{false});
  CHECK(j_star(*st, flags_of(*st, {"{0,1}", "{0,2}", "{1,2}"})) == std::vector<bool>{true});

  auto st4 = make_setting(2, 4, 0);
  auto js = j_star(*st4, k_sets_within(*st4, parse_index_set("{0,1,3}")));
  for (std::size_t u = 0; u < st4->k1_sets().size(); ++u)
    CHECK(js[u] == (st4->k1_sets()[u] == parse_index_set("{0,1,3}")));
}

TEST_CASE("the canonical choice has correction f") {
  std::mt19937_64 rng(2);
  for (auto [k, n, m] : {std::tuple{2, 3, 1}, {2, 4, 2}, {3, 4, 1}, {2, 5, 0}}) {
    auto st = make_setting(k, n, m);
    for (int t = 0; t < 5; ++t) {
      ModelHandle M(st, random_correction(*st, rng));
      auto pc = correction_of(M, canonical_choice(M));
      CHECK(pc.total());
      CHECK(pc.values == M.f());
    }
  }
}

TEST_CASE("closed form equals the definition") {
  std::mt19937_64 rng(4);
  for (auto [k, n, m] : {std::tuple{2, 3, 1}, {2, 4, 1}, {3, 4, 1}, {2, 3, 2}}) {
    auto st = make_setting(k, n, m);
    for (int t = 0; t < 6; ++t) {
      ModelHandle M(st, random_correction(*st, rng));
      auto c = random_choice(st, ChoiceDomain::global(*st), rng);
      auto a = correction_of(M, c);
      auto b = correction_of_definitional(M, c);
      CHECK(a.values == b.values);
      CHECK(a.defined == b.defined);
    }
  }
}

TEST_CASE("single coordinates of a choice move single corrections") {
  auto st = make_setting(2, 3, 1);
  ModelHandle M(st);
  const auto u = parse_index_set("{0,1,2}");
  const auto u0 = parse_index_set("{1,2}");
  const std::size_t s1 = st->s_index(parse_lambda_set("{0}"));

  Choice c = canonical_choice(M);
  c.set_x(st->k_index(u0), s1, true);
  CHECK(only_coordinate(correction_of(M, c), st->correction_index(st->k1_index(u), s1)));

  // γ ∈ G: the indicator of ∅.
  Choice d = canonical_choice(M);
  auto gamma = Gf2Vector::from_bitstring(st->s_basis(), "10");
  d.set_z(st->k1_index(u), gamma);
  auto pc = correction_of(M, d);
  CHECK(only_coordinate(pc, st->correction_index(st->k1_index(u), 0)));
  CHECK(correction_value_definitional(M, d, st->k1_index(u), 0));
  CHECK_FALSE(correction_value_definitional(M, d, st->k1_index(u), s1));

  // z outside G is rejected.
  CHECK_THROWS_AS(d.set_z(0, Gf2Vector::from_bitstring(st->s_basis(), "01")), PreconditionError);
}

TEST_CASE("partial domains restrict where the correction is defined") {
  auto st = make_setting(2, 4, 1);
  ModelHandle M(st);
  std::mt19937_64 rng(8);
  auto d = ChoiceDomain::for_points(*st, parse_index_set("{0,1,2}"));
  auto c = random_choice(st, d, rng);
  auto pc = correction_of(M, c);
  CHECK(pc.defined == correction_domain(*st, d));
  // Only {0,1,2} has all its faces inside [{0,1,2}]^2.
  CHECK(std::count(pc.defined.begin(), pc.defined.end(), true) == 2);
  CHECK_THROWS_AS(c.x(st->k_index(parse_index_set("{0,3}")), 0), PreconditionError);
  CHECK_FALSE(pc.total());
}

TEST_CASE("choice JSON round trips") {
  std::mt19937_64 rng(6);
  auto st = make_setting(2, 4, 2);
  for (const auto& d : {ChoiceDomain::global(*st), ChoiceDomain::for_points(*st, parse_index_set("{1,2,3}"))}) {
    auto c = random_choice(st, d, rng);
    auto text = choice_to_json(c);
    auto back = choice_from_json(st, text);
    CHECK(back == c);
    CHECK(choice_to_json(back) == text);
  }
  auto other = make_setting(2, 3, 2);
  CHECK_THROWS(choice_from_json(other, choice_to_json(random_choice(st, ChoiceDomain::global(*st), rng))));

  ModelHandle M(st, random_correction(*st, rng));
  CHECK(correction_from_json(*st, correction_to_json(*st, M.f())) == M.f());
}

TEST_CASE("restrict and merge") {
  std::mt19937_64 rng(10);
  auto st = make_setting(2, 4, 1);
  auto c = random_choice(st, ChoiceDomain::global(*st), rng);
  auto a = restrict(c, ChoiceDomain::for_points(*st, parse_index_set("{0,1,2}")));
  auto b = restrict(c, ChoiceDomain::for_points(*st, parse_index_set("{1,2,3}")));
  auto ab = merge(a, b);
  CHECK(ab.domain() == a.domain().united(b.domain()));
  CHECK(restrict(ab, a.domain()) == a);
  CHECK(restrict(ab, b.domain()) == b);

  // Flip a shared coordinate in one of them.
  const auto v = st->k_index(parse_index_set("{1,2}"));
  auto b2 = b;
  b2.set_x(v, 0, !b.x(v, 0));
  try {
    (void)merge(a, b2);
    FAIL("merge accepted conflicting choices");
  } catch (const MergeConflict& e) {
    CHECK(std::string(e.what()).find("{1,2}") != std::string::npos);
  }
}

TEST_CASE("compatible systems from a choice validate") {
  std::mt19937_64 rng(12);
  auto st = make_setting(2, 5, 1);
  auto c = random_choice(st, ChoiceDomain::global(*st), rng);
  auto sys = system_from_choice(c, parse_index_set("{0,1}"), {3, 4});
  CHECK(sys.m2 == 2);
  CHECK(sys.target() == parse_index_set("{0,1,3,4}"));
  CHECK(sys.choices.size() == 3);
  CHECK_NOTHROW(sys.validate());
  CHECK(sys.points_of(0b10) == parse_index_set("{0,1,4}"));

  auto broken = sys;
  auto& ch = broken.choices.at(0b01);
  const auto v = st->k_index(parse_index_set("{0,1}"));
  ch.set_x(v, 0, !ch.x(v, 0));
  CHECK_THROWS_AS(broken.validate(), PreconditionError);
}
