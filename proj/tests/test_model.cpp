#include <random>

#include "doctest.h"
#include "zeroless/error.hpp"
#include "zeroless/model.hpp"
#include "zeroless/oracle.hpp"
#include "zeroless/structure.hpp"

using namespace zeroless;

namespace {

std::vector<bool> zeros(int k) { return std::vector<bool>(static_cast<std::size_t>(k), false); }

}  // namespace

TEST_CASE("element names round trip") {
  auto st = make_setting(2, 3, 1);
  Gf2Vector h(st->h_basis());
  h.set(0);
  h.set(2);
  Gf2Vector g(st->s_basis());
  g.set(0);
  std::vector<Element> es{IndexElem{2},
                          KSetElem{IndexSet::of({0, 1})},
                          K1SetElem{IndexSet::of({0, 1, 2})},
                          HCopyElem{IndexSet::of({0, 2}), LambdaSet::of({0}), h},
                          Z2CopyElem{IndexSet::of({1, 2}), LambdaSet{}, true},
                          HPureElem{h},
                          GCopyElem{IndexSet::of({0, 1, 2}), g}};
  for (const auto& e : es) {
    validate_element(*st, e);
    CHECK(parse_element(*st, element_name(e)) == e);
  }
  CHECK(element_name(es[3]) == "HC:{0,2}/{0}/[{0,1};{1,2}]");
  CHECK(element_name(es[6]) == "GC:{0,1,2}/[{}]");
  CHECK_THROWS_AS(parse_element(*st, "Q:1"), ConfigError);
  Gf2Vector bad(st->s_basis());
  bad.set(1);  // g({0}) = 1 is outside G
  CHECK_THROWS_AS(validate_element(*st, GCopyElem{IndexSet::of({0, 1, 2}), bad}), PreconditionError);
}

TEST_CASE("predicates and partial functions") {
  auto st = make_setting(2, 3, 1);
  ModelHandle M(st);
  const Gf2Vector h0(st->h_basis());
  const auto u = IndexSet::of({0, 1});
  CHECK(eval_predicate(M, {PredicateKind::P0, {}}, IndexElem{2}));
  CHECK_FALSE(eval_predicate(M, {PredicateKind::P0, {}}, KSetElem{u}));
  const Element hc = HCopyElem{u, LambdaSet::of({0}), h0};
  CHECK(eval_predicate(M, {PredicateKind::P2s, LambdaSet::of({0})}, hc));
  CHECK_FALSE(eval_predicate(M, {PredicateKind::P2s, LambdaSet{}}, hc));
  CHECK(eval_predicate(M, {PredicateKind::P5, {}}, GCopyElem{IndexSet::of({0, 1, 2}), Gf2Vector(st->s_basis())}));

  Gf2Vector h1 = Gf2Vector::unit(st->h_basis(), 1);
  std::vector<Element> args{hc, HPureElem{h1}};
  auto r = eval_function(M, {FunctionKind::F4, 0, {}}, args);
  REQUIRE(r);
  CHECK(*r == Element{HCopyElem{u, LambdaSet::of({0}), h1}});
  std::vector<Element> one{hc};
  CHECK_THROWS_AS(eval_function(M, {FunctionKind::F4, 0, {}}, one), PreconditionError);
  CHECK(*eval_function(M, {FunctionKind::F2, 0, {}}, one) == Element{KSetElem{u}});
  std::vector<Element> idx{IndexElem{0}};
  CHECK_FALSE(eval_function(M, {FunctionKind::F2, 0, {}}, idx));

  // Translating a G copy twice by the same g* returns the start.
  Gf2Vector gs = Gf2Vector::unit(st->s_basis(), 0);
  std::vector<Element> gc{GCopyElem{IndexSet::of({0, 1, 2}), Gf2Vector(st->s_basis())}};
  auto once = eval_function(M, {FunctionKind::F3g, 0, gs}, gc);
  std::vector<Element> again{*once};
  CHECK(*eval_function(M, {FunctionKind::F3g, 0, gs}, again) == gc[0]);

  // The last projection is defined only on (k+1)-sets.
  std::vector<Element> kset{KSetElem{u}};
  CHECK_FALSE(eval_function(M, {FunctionKind::Pi, 2, {}}, kset));
  std::vector<Element> k1{K1SetElem{IndexSet::of({0, 1, 2})}};
  CHECK(*eval_function(M, {FunctionKind::Pi, 2, {}}, k1) == Element{IndexElem{2}});
}

TEST_CASE("Q_s on the all-zero tuple follows f") {
  auto st = make_setting(2, 3, 1);
  const auto u = IndexSet::of({0, 1, 2});
  const auto s = LambdaSet::of({0});
  auto t = assemble_q_tuple(*st, u, s, zeros(2), Gf2Vector(st->h_basis()), Gf2Vector(st->s_basis()));
  CHECK(q_s_holds(ModelHandle(st), s, t));
  Gf2Vector f(st->correction_basis());
  f.set(st->correction_index(0, st->s_index(s)));
  CHECK_FALSE(q_s_holds(ModelHandle(st, f), s, t));
  CHECK(q_s_holds(ModelHandle(st, f), LambdaSet{}, assemble_q_tuple(*st, u, LambdaSet{}, zeros(2),
                                                                     Gf2Vector(st->h_basis()),
                                                                     Gf2Vector(st->s_basis()))));
  auto flipped = assemble_q_tuple(*st, u, s, {true, false}, Gf2Vector(st->h_basis()), Gf2Vector(st->s_basis()));
  CHECK_FALSE(q_s_holds(ModelHandle(st), s, flipped));
  // A non-ascending ordering of the same set is not in Q_s.
  auto swapped = t;
  std::swap(swapped.a[0], swapped.a[1]);
  CHECK_FALSE(q_s_holds(ModelHandle(st), s, swapped));
  CHECK_THROWS(q_s_holds(ModelHandle(st).reduct_tau_minus(), s, t));
}

TEST_CASE("materialized universes have the expected sizes") {
  auto e1 = materialize(ModelHandle(make_setting(2, 3, 1)));
  CHECK(e1.size() == 77);
  CHECK(universe_size(*make_setting(2, 3, 1)) == 77u);
  auto e0 = materialize(ModelHandle(make_setting(2, 3, 0)));
  CHECK(e0.size() == 46);
  CHECK(universe_size(*make_setting(2, 3, 0)) == 46u);
  std::map<std::string, int> sorts;
  for (const auto& n : e1.elements) ++sorts[n.substr(0, n.find(':'))];
  CHECK(sorts["I"] == 3);
  CHECK(sorts["K"] == 3);
  CHECK(sorts["K1"] == 1);
  CHECK(sorts["HC"] == 48);
  CHECK(sorts["ZC"] == 12);
  CHECK(sorts["HP"] == 8);
  CHECK(sorts["GC"] == 2);
}

TEST_CASE("materialization guardrail names the oversized sort") {
  try {
    materialize(ModelHandle(make_setting(2, 8, 2)));
    FAIL("expected a guardrail error");
  } catch (const GuardrailError& e) {
    CHECK(std::string(e.what()).find("H copies") != std::string::npos);
  }
}

TEST_CASE("structure text round trips and stays strongly standard") {
  std::mt19937_64 rng(4);
  auto st = make_setting(2, 3, 1);
  for (int i = 0; i < 4; ++i) {
    auto e = materialize(ModelHandle(st, random_correction(*st, rng)));
    auto back = parse_structure(structure_text(e));
    CHECK(structure_text(back) == structure_text(e));
    CHECK(is_strongly_standard(e));
    CHECK(is_standard(e));
    CHECK(reduct_tau_minus(e).symbols.size() + st->s_count() == e.symbols.size());
  }
}

TEST_CASE("a relabeled copy is not strongly standard but is isomorphic") {
  auto st = make_setting(2, 3, 1);
  auto e = materialize(ModelHandle(st));
  std::vector<std::uint32_t> perm(e.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = (i * 31 + 5) % e.size();
  auto r = relabel(e, perm);
  CHECK_FALSE(is_strongly_standard(r));
  auto o = brute_force_iso(e, r);
  REQUIRE(o.status == OracleStatus::Found);
  CHECK(verify_map(e, r, o.map));
}
