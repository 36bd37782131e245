#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "zeroless/error.hpp"
#include "zeroless/extension.hpp"
#include "zeroless/oracle.hpp"

using namespace zeroless;

namespace {

std::vector<std::uint32_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> p(n);
  for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

TEST_CASE("a structure is isomorphic to itself") {
  auto e = materialize(ModelHandle(make_setting(2, 3, 1)));
  auto o = brute_force_iso(e, e);
  REQUIRE(o.status == OracleStatus::Found);
  CHECK(verify_map(e, e, o.map));
}

TEST_CASE("randomly relabeled copies are found") {
  std::mt19937_64 rng(7);
  for (auto [k, n, m] : {std::tuple{2, 3, 1}, {2, 3, 0}, {2, 4, 0}, {3, 4, 1}}) {
    auto st = make_setting(k, n, m);
    auto e = materialize(ModelHandle(st, random_correction(*st, rng)));
    auto perm = shuffled(e.size(), rng);
    auto r = relabel(e, perm);
    auto o = brute_force_iso(e, r);
    REQUIRE(o.status == OracleStatus::Found);
    CHECK(verify_map(e, r, o.map));
  }
}

TEST_CASE("different universes are rejected early") {
  auto a = materialize(ModelHandle(make_setting(2, 3, 0)));
  auto b = materialize(ModelHandle(make_setting(2, 4, 0)));
  auto o = brute_force_iso(a, b);
  CHECK(o.status == OracleStatus::None);
  CHECK(o.reason.find("universe sizes differ") != std::string::npos);
}

TEST_CASE("a tampered copy is not isomorphic") {
  auto e = materialize(ModelHandle(make_setting(2, 3, 1)));
  auto t = e;
  // Drop one fact from the first relation that has more than one.
  for (auto& sym : t.symbols)
    if (!sym.is_function && sym.tuples.size() > 1) {
      sym.tuples.pop_back();
      break;
    }
  CHECK(brute_force_iso(e, t).status == OracleStatus::None);
  std::vector<std::uint32_t> id(e.size());
  for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
  CHECK_FALSE(verify_map(e, t, id));
  CHECK(verify_map(e, e, id));
  id[0] = 1;
  CHECK_FALSE(verify_map(e, e, id));  // not a bijection
}

TEST_CASE("a tiny budget reports unknown, never none") {
  std::mt19937_64 rng(9);
  auto e = materialize(ModelHandle(make_setting(2, 3, 1)));
  auto r = relabel(e, shuffled(e.size(), rng));
  auto o = brute_force_iso(e, r, 1);
  CHECK(o.status == OracleStatus::Unknown);
  CHECK(o.nodes >= 1);
}

TEST_CASE("maps are written by element name") {
  auto e = materialize(ModelHandle(make_setting(2, 3, 0)));
  auto o = brute_force_iso(e, e);
  REQUIRE(o.status == OracleStatus::Found);
  std::ostringstream out;
  write_map(out, e, e, o.map);
  CHECK(out.str().rfind("map I:0 ", 0) == 0);
}

TEST_CASE("the canonical choice induces the identity") {
  std::mt19937_64 rng(11);
  auto st = make_setting(2, 3, 1);
  ModelHandle M(st, random_correction(*st, rng));
  auto iso = build_iso_from_choice(M, canonical_choice(M));
  auto e = materialize(M);
  auto map = materialized_map(iso, e, e);
  for (std::uint32_t i = 0; i < map.size(); ++i) CHECK(map[i] == i);
}

TEST_CASE("a gauge certificate maps M_{I,δg} onto M_I") {
  std::mt19937_64 rng(13);
  auto st = make_setting(2, 3, 1);
  for (int t = 0; t < 4; ++t) {
    auto g = GaugeTriple::random(*st, rng);
    ModelHandle N(st, coboundary(*st, g));
    auto c = zero_choice_exists(N);
    REQUIRE(c);
    auto iso = build_iso_from_choice(N, *c, zero_correction(*st));
    auto src = materialize(N);
    auto dst = materialize(ModelHandle(st));
    auto map = materialized_map(iso, src, dst);
    CHECK(verify_map(src, dst, map));  // every Q_s fact, exhaustively
    for (std::uint32_t i = 0; i < src.size(); i += 5) {
      auto el = parse_element(*st, src.elements[i]);
      CHECK(iso.invert(iso.apply(el)) == el);
    }
    auto report = zero_correction_implies_canonical(src, *c);
    CHECK(report.success);
  }
}

TEST_CASE("choice isomorphisms check their preconditions") {
  std::mt19937_64 rng(15);
  auto st = make_setting(2, 3, 1);
  ModelHandle M(st, random_correction(*st, rng));
  auto c = canonical_choice(M);
  Gf2Vector other = M.f();
  other.flip(0);
  CHECK_THROWS_AS(build_iso_from_choice(M, c, other), PreconditionError);
  auto partial = restrict(c, ChoiceDomain::for_points(*st, parse_index_set("{0,1}")));
  CHECK_THROWS_AS(build_iso_from_choice(M, partial), PreconditionError);
}

TEST_CASE("zero correction on the structure implies the canonical model") {
  auto st = make_setting(2, 3, 1);
  ModelHandle M(st);
  auto e = materialize(M);
  CHECK(recover_correction(e).is_zero());
  CHECK(zero_correction_implies_canonical(e, canonical_choice(M)).success);

  // A non-zero f makes the canonical choice malformed for this purpose.
  auto f = zero_correction(*st);
  f.set(0);
  ModelHandle N(st, f);
  auto en = materialize(N);
  CHECK(recover_correction(en) == f);
  CHECK_THROWS_AS(zero_correction_implies_canonical(en, canonical_choice(N)), PreconditionError);
  auto partial = restrict(canonical_choice(M), ChoiceDomain::empty(*st));
  CHECK_THROWS_AS(zero_correction_implies_canonical(e, partial), PreconditionError);
}
