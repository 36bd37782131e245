#include <random>

#include "doctest.h"
#include "zeroless/error.hpp"
#include "zeroless/extension.hpp"
#include "zeroless/noncategoricity.hpp"

using namespace zeroless;

namespace {

Gf2Vector ones(const BasisPtr& b) {
  Gf2Vector v(b);
  for (std::size_t i = 0; i < v.size(); ++i) v.set(i);
  return v;
}

ObstructionData empty_data(const Setting& st) {
  return {std::vector<IndexSet>(st.k_sets().size()),
          std::vector<Gf2Vector>(st.k_sets().size(), Gf2Vector(st.s_basis()))};
}

}  // namespace

TEST_CASE("I-functions") {
  auto st = make_setting(2, 3, 1);
  CHECK(is_I_function(*st, ones(st->correction_basis())));
  CHECK_FALSE(is_I_function(*st, zero_correction(*st)));
  auto f = zero_correction(*st);
  const auto s1 = st->s_index(parse_lambda_set("{0}"));
  for (std::size_t u = 0; u < st->k1_sets().size(); ++u) f.set(st->correction_index(u, s1));
  CHECK(is_I_function(*st, f));

  std::mt19937_64 rng(1);
  auto st5 = make_setting(2, 5, 2);
  for (int t = 0; t < 50; ++t) {
    auto g = random_correction(*st5, rng);
    auto pi = Permutation::unrank(5, rng() % 120);
    CHECK(is_I_function(*st5, g) == is_I_function(*st5, permutation_action(*st5, pi, g)));
  }
}

TEST_CASE("the sufficient condition on simple data") {
  auto st = make_setting(2, 4, 1);
  const auto id = Permutation::identity(4);
  auto data = empty_data(*st);
  CHECK_FALSE(star_condition(*st, zero_correction(*st), data, id));

  auto w = star_condition(*st, ones(st->correction_basis()), data, id);
  REQUIRE(w);
  CHECK(*w == parse_index_set("{0,1,2}"));

  for (auto& f1 : data.f1) f1 = st->index_set();
  CHECK_FALSE(star_condition(*st, ones(st->correction_basis()), data, id));
}

TEST_CASE("obstruction data read off a choice") {
  auto st = make_setting(2, 3, 1);
  ModelHandle M0(st);
  auto d0 = derive_obstruction_data(M0, canonical_choice(M0));
  for (const auto& f1 : d0.f1) CHECK(f1.empty());
  for (const auto& f2 : d0.f2) CHECK(f2.is_zero());

  // A single y-coordinate, on the model where it has zero correction.
  auto c = canonical_choice(M0);
  const auto v = st->k_index(parse_index_set("{0,1}"));
  const auto v0 = st->k_index(parse_index_set("{1,2}"));
  c.set_y(v, 0, Gf2Vector::unit(st->h_basis(), v0));
  c.set_x(v0, 1, true);
  ModelHandle M(st, correction_of(M0, c).values);
  auto d = derive_obstruction_data(M, c);
  CHECK(d.f1[v] == parse_index_set("{1,2}"));
  CHECK(d.f1[v0].empty());
  CHECK(d.f2[v0] == Gf2Vector::from_bitstring(st->s_basis(), "01"));

  CHECK_THROWS_AS(derive_obstruction_data(M0, c), PreconditionError);
  CHECK_THROWS_AS(derive_obstruction_data(M0, restrict(c, ChoiceDomain::empty(*st))), PreconditionError);
}

TEST_CASE("zero-correction choices never satisfy the condition") {
  // Exhaustive at k=2, n=3, m <= 1.
  for (int m = 0; m <= 1; ++m) {
    auto st = make_setting(2, 3, m);
    const auto dim = st->correction_basis()->size();
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << dim); ++w) {
      auto f = Gf2Vector::from_words(st->correction_basis(), {w});
      ModelHandle M(st, f);
      auto c = zero_choice_exists(M);
      REQUIRE(c);
      CHECK_FALSE(star_condition(*st, f, derive_obstruction_data(M, *c), Permutation::identity(3)));
    }
  }
  std::mt19937_64 rng(3);
  for (auto [k, n, m] : {std::tuple{2, 4, 1}, {2, 5, 2}, {3, 5, 1}}) {
    auto st = make_setting(k, n, m);
    for (int t = 0; t < 10; ++t) {
      ModelHandle M(st, random_correction(*st, rng));
      auto c = zero_choice_exists(M);
      REQUIRE(c);
      CHECK_FALSE(star_condition(*st, M.f(), derive_obstruction_data(M, *c), Permutation::identity(n)));
    }
  }
}

TEST_CASE("non-isomorphic corrections") {
  CHECK_FALSE(find_noniso_f(make_setting(2, 3, 1)));
  CHECK_FALSE(find_noniso_f(make_setting(2, 4, 1)));

  auto img = coboundary_image(make_setting(2, 4, 1), GaugeMask::only_g3());
  auto w = find_noniso_f(img);
  REQUIRE(w);
  CHECK(w->i_function);
  CHECK(w->quotient_dimension == 4);
  CHECK(w->identity_classes == 16);
  REQUIRE(w->full_classes);
  CHECK(*w->full_classes == 5);
  CHECK_FALSE(iso_with_permutation(img, w->f, zero_correction(*img.setting)));
}

TEST_CASE("monochromatic sinks") {
  const auto e3 = IndexSet::range(3);
  auto w = monochromatic_sink(2, e3, [](IndexSet) { return std::uint64_t{0}; });
  REQUIRE(w);
  CHECK(*w == e3);

  // Every 2-colouring of the pairs of a 6-set has a monochromatic triangle.
  const auto pairs = combinations(6, 2);
  std::uint64_t found = 0;
  for (std::uint32_t bits = 0; bits < (1u << pairs.size()); ++bits) {
    auto colour = [&](IndexSet v) -> std::uint64_t {
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i] == v) return (bits >> i) & 1u;
      return 2;
    };
    auto t = monochromatic_sink(2, IndexSet::range(6), colour);
    if (!t) continue;
    ++found;
    const auto ms = t->members();
    CHECK(colour(t->without(ms[0])) == colour(t->without(ms[1])));
    CHECK(colour(t->without(ms[0])) == colour(t->without(ms[2])));
  }
  CHECK(found == (1u << pairs.size()));

  // A 5-cycle and its complement: no monochromatic triangle on 5 points.
  auto pentagon = [](IndexSet v) -> std::uint64_t {
    const auto ms = v.members();
    const int d = (ms[1] - ms[0]) % 5;
    return d == 1 || d == 4;
  };
  CHECK_FALSE(monochromatic_sink(2, IndexSet::range(5), pentagon));
}

TEST_CASE("parity on even-k sinks") {
  auto sbasis = make_setting(2, 3, 2)->s_basis();
  std::mt19937_64 rng(5);
  const auto a = Gf2Vector::from_bitstring(sbasis, "1010");
  const auto b = Gf2Vector::from_bitstring(sbasis, "0111");
  for (int t = 0; t < 50; ++t) {
    const auto salt = rng();
    VectorColoring colour = [&](IndexSet v) { return ((v.bits * 0x9e3779b97f4a7c15ull) ^ salt) >> 63 ? a : b; };
    auto w = monochromatic_sink(2, IndexSet::range(6), colour);
    REQUIRE(w);
    CHECK(w->parity_checked);
    CHECK(w->parity_zero);
  }
  auto odd = monochromatic_sink(3, IndexSet::range(4), VectorColoring([&](IndexSet) { return a; }));
  REQUIRE(odd);
  CHECK_FALSE(odd->parity_checked);
}

TEST_CASE("closed subsets for F1") {
  auto st = make_setting(2, 8, 0);
  const auto id = Permutation::identity(8);
  std::vector<IndexSet> none(st->k_sets().size());
  CHECK(f1_closed_subset(*st, none, id, st->index_set()) == st->index_set());

  std::vector<IndexSet> all(st->k_sets().size(), st->index_set());
  CHECK_FALSE(f1_closed_subset(*st, all, id, st->index_set()));

  std::vector<IndexSet> next(st->k_sets().size());
  for (std::size_t v = 0; v < next.size(); ++v) {
    const int top = st->k_sets()[v].max() + 1;
    if (top < 8) next[v] = IndexSet::of({top});
  }
  auto e = f1_closed_subset(*st, next, id, st->index_set());
  REQUIRE(e);
  CHECK(*e == parse_index_set("{0,1,3,5,7}"));
  CHECK(is_f1_closed(*st, next, id, *e));
  CHECK_FALSE(is_f1_closed(*st, next, id, parse_index_set("{0,1,2}")));

  // π pushes elements upward; E has to skip past the images.
  auto shift = Permutation({1, 2, 3, 4, 5, 6, 7, 0});
  auto es = f1_closed_subset(*st, none, shift, st->index_set());
  REQUIRE(es);
  CHECK(is_f1_closed(*st, none, shift, *es));
}
