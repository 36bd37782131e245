#include "doctest.h"
#include "helpers.hpp"
#include "zeroless/error.hpp"
#include "zeroless/setting.hpp"

using namespace zeroless;

TEST_CASE("k-subsets come out in lexicographic order") {
  auto c = combinations(4, 2);
  std::vector<std::string> texts;
  for (auto s : c) texts.push_back(s.text());
  CHECK(texts == std::vector<std::string>{"0,1", "0,2", "0,3", "1,2", "1,3", "2,3"});
  CHECK(combinations(6, 3).size() == binomial(6, 3));
  CHECK(combinations(3, 0).size() == 1);
  CHECK(std::is_sorted(c.begin(), c.end()));
}

TEST_CASE("set parsing") {
  CHECK(parse_index_set("{0,2}") == IndexSet::of({0, 2}));
  CHECK(parse_index_set("1, 3") == IndexSet::of({1, 3}));
  CHECK(parse_index_set("{}").empty());
  CHECK_THROWS_AS(parse_index_set("{a}"), ConfigError);
  CHECK_THROWS_AS(parse_lambda_set("{0,"), ConfigError);
}

TEST_CASE("setting parameters are validated") {
  CHECK_THROWS_AS(Setting(1, 3, 1), ConfigError);
  CHECK_THROWS_AS(Setting(3, 2, 1), ConfigError);
  CHECK_THROWS_AS(Setting(2, 3, -1), ConfigError);
  CHECK_THROWS_AS(Setting(2, 13, 1), GuardrailError);
  CHECK_THROWS_AS(Setting(2, 5, 5), GuardrailError);
  CHECK_THROWS_AS(Setting(5, 6, 1), GuardrailError);
  Setting st(2, 4, 2);
  CHECK(st.describe() == "k=2 n=4 m=2");
  CHECK(st.k_sets().size() == 6);
  CHECK(st.k1_sets().size() == 4);
  CHECK(st.s_count() == 4);
  CHECK(st.correction_basis()->size() == 16);
  CHECK(st.k_index(IndexSet::of({1, 3})) == 4);
  CHECK_THROWS(st.k_index(IndexSet::of({1})));
}

TEST_CASE("sub-k-sets omit members in ascending order") {
  Setting st(2, 4, 0);
  auto sub = st.sub_k_sets(IndexSet::of({0, 2, 3}));
  REQUIRE(sub.size() == 3);
  CHECK(sub[0] == IndexSet::of({2, 3}));  // omits the minimum
  CHECK(sub[1] == IndexSet::of({0, 3}));
  CHECK(sub[2] == IndexSet::of({0, 2}));  // omits the maximum
}

TEST_CASE("permutations unrank in lexicographic order") {
  CHECK(Permutation::unrank(3, 0).is_identity());
  CHECK(Permutation::unrank(3, 1).image() == std::vector<int>{0, 2, 1});
  CHECK(Permutation::unrank(3, 5).image() == std::vector<int>{2, 1, 0});
  auto p = Permutation::unrank(5, 77);
  CHECK(p.compose(p.inverse()).is_identity());
  CHECK(p.apply(IndexSet::of({0, 1})) == IndexSet::of({p(0), p(1)}));
  CHECK_THROWS(Permutation({0, 0, 1}));
}

namespace {

// All families A ⊆ S over the S basis.
std::vector<Gf2Vector> families(const Setting& st) { return testing::all_vectors(st.s_basis()); }

bool subset(const Gf2Vector& a, const Gf2Vector& b) { return (a + b).support().size() == b.popcount() - a.popcount(); }

Gf2Vector meet(const Gf2Vector& a, const Gf2Vector& b) {
  Gf2Vector out(a.basis());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a.get(i) && b.get(i));
  return out;
}

}  // namespace

TEST_CASE("filter axioms hold for every generator family, m <= 3") {
  for (int m = 0; m <= 3; ++m) {
    const Setting base(2, 3, m);
    // Every non-empty list of generators given by a nonempty subset of S.
    for (std::uint32_t gens = 1; gens < (1u << base.s_count()); ++gens) {
      if (m == 3 && gens % 7 != 1) continue;  // thin out the 255 families
      std::vector<LambdaSet> g;
      for (std::size_t s = 0; s < base.s_count(); ++s)
        if ((gens >> s) & 1u) g.push_back(base.s_element(s));
      Setting st(2, 3, m, g);
      auto fams = families(st);
      Gf2Vector all(st.s_basis());
      for (std::size_t i = 0; i < all.size(); ++i) all.set(i);
      CHECK(filter_contains(st, all));
      CHECK_FALSE(filter_contains(st, Gf2Vector(st.s_basis())));
      for (const auto& a : fams) {
        if (!filter_contains(st, a)) continue;
        for (const auto& b : fams) {
          if (subset(a, b)) CHECK(filter_contains(st, b));
          if (filter_contains(st, b)) CHECK(filter_contains(st, meet(a, b)));
        }
      }
      // Each generator's cone belongs to the filter.
      for (auto gen : g) {
        Gf2Vector cone(st.s_basis());
        for (std::size_t s = 0; s < st.s_count(); ++s) cone.set(s, gen.subset_of(st.s_element(s)));
        CHECK(filter_contains(st, cone));
      }
    }
  }
}

TEST_CASE("G is a subgroup of the stated dimension") {
  for (int m = 0; m <= 3; ++m) {
    Setting st(2, 3, m);
    CHECK(st.g_dimension() == (std::size_t{1} << m) - 1);
    auto g = enumerate_g(st);
    CHECK(g.size() == (std::size_t{1} << st.g_dimension()));
    for (const auto& a : g) {
      CHECK(g_membership(st, a));
      for (const auto& b : g) CHECK(g_membership(st, a + b));
    }
    CHECK(g_membership(st, Gf2Vector(st.s_basis())));
    CHECK(g_basis(st).row_count() == st.g_dimension());
  }
  // A smaller core leaves more of S forced to zero.
  Setting st(2, 3, 2, std::vector<LambdaSet>{LambdaSet::of({0})});
  CHECK(st.filter_core() == LambdaSet::of({0}));
  CHECK(st.g_dimension() == 2);
  for (const auto& g : enumerate_g(st))
    for (std::size_t s = 0; s < st.s_count(); ++s)
      if (st.in_core_cone(s)) CHECK_FALSE(g.get(s));
}

TEST_CASE("filter and G at m = 1") {
  Setting st(2, 3, 1);
  // S = {∅, {0}} in bitmask order.
  auto fam = [&](const char* bits) { return Gf2Vector::from_bitstring(st.s_basis(), bits); };
  CHECK(filter_contains(st, fam("01")));
  CHECK_FALSE(filter_contains(st, fam("10")));
  CHECK(g_membership(st, fam("10")));
  CHECK_FALSE(g_membership(st, fam("01")));
  CHECK_FALSE(g_membership(st, fam("11")));
  auto basis = g_basis(st);
  REQUIRE(basis.row_count() == 1);
  CHECK(basis.row(0) == fam("10"));
  CHECK(enumerate_g(st).size() == 2);
}
