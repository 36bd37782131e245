#include <filesystem>
#include <random>

#include "doctest.h"
#include "zeroless/classification.hpp"
#include "zeroless/error.hpp"

using namespace zeroless;

TEST_CASE("coboundary of a single g1 unit") {
  auto st = make_setting(2, 3, 1);
  auto g = GaugeTriple::zero(*st);
  const std::size_t s1 = st->s_index(parse_lambda_set("{0}"));
  g.g1.set(st->kset_s_index(st->k_index(parse_index_set("{1,2}")), s1));
  auto d = coboundary(*st, g);
  CHECK(d.popcount() == 1);
  CHECK(d.get(st->correction_index(st->k1_index(parse_index_set("{0,1,2}")), s1)));
}

TEST_CASE("coboundary is linear") {
  std::mt19937_64 rng(1);
  auto st = make_setting(2, 4, 2);
  for (int t = 0; t < 20; ++t) {
    auto a = GaugeTriple::random(*st, rng);
    auto b = GaugeTriple::random(*st, rng);
    auto ab = a;
    ab += b;
    CHECK(coboundary(*st, ab) == coboundary(*st, a) + coboundary(*st, b));
  }
}

TEST_CASE("the full gauge image is the whole space") {
  for (auto [k, n, m] : {std::tuple{2, 3, 1}, {2, 4, 2}, {3, 5, 1}, {2, 6, 0}}) {
    auto img = coboundary_image(make_setting(k, n, m));
    CHECK(img.quotient_dimension() == 0);
    CHECK(img.rank() == img.domain_dimension());
    auto only_g2 = coboundary_image(make_setting(k, n, m), GaugeMask{false, true, false});
    CHECK(only_g2.quotient_dimension() == 0);
  }
  auto img = coboundary_image(make_setting(2, 3, 1));
  CHECK(count_iso_classes(img, CountMode::Identity).count == 1);
  CHECK(iso_over_identity(img, Gf2Vector::from_bitstring(img.basis_matrix.col_basis(), "11"),
                          Gf2Vector(img.basis_matrix.col_basis()))
            .isomorphic);
}

TEST_CASE("parallel and serial images agree") {
  for (auto mask : {GaugeMask::all(), GaugeMask::only_g3(), GaugeMask{true, false, true}}) {
    auto st = make_setting(2, 5, 1);
    auto a = coboundary_image(st, mask);
    auto b = coboundary_image_reference(st, mask);
    CHECK(a.rank() == b.rank());
    for (const auto& r : a.basis_matrix.rows()) CHECK(b.contains(r));

    auto units = gauge_units(*st, mask);
    CHECK(coboundary_rows(*st, units) == coboundary_rows_reference(*st, units));
  }
}

TEST_CASE("gauge unit labels round trip") {
  auto st = make_setting(2, 4, 1);
  for (const auto& u : gauge_units(*st, GaugeMask::all())) {
    auto back = GaugeUnit::parse(*st, u.label(*st));
    CHECK(back.label(*st) == u.label(*st));
  }
  CHECK(GaugeMask::parse("g3") == GaugeMask::only_g3());
  CHECK(GaugeMask::parse(GaugeMask::all().text()) == GaugeMask::all());
  CHECK_THROWS_AS(GaugeMask::parse("g4"), ConfigError);
}

TEST_CASE("certificates have the right coboundary") {
  std::mt19937_64 rng(3);
  auto st = make_setting(2, 4, 1);
  auto img = coboundary_image(st);
  for (int t = 0; t < 20; ++t) {
    auto f = random_correction(*st, rng);
    auto cert = img.certificate(f);
    REQUIRE(cert);
    CHECK(coboundary(*st, *cert) == f);
  }
  // A rejection comes with a functional vanishing on B.
  auto g3 = coboundary_image(st, GaugeMask::only_g3());
  REQUIRE(g3.quotient_dimension() > 0);
  auto f = coset_representative(g3, 1);
  auto r = iso_over_identity(g3, f, Gf2Vector(st->correction_basis()));
  CHECK_FALSE(r.isomorphic);
  REQUIRE(r.functional);
  for (const auto& row : g3.basis_matrix.rows()) CHECK_FALSE(r.functional->dot(row));
  CHECK(r.functional->dot(f));
}

TEST_CASE("g3-only classes count (k+1)-uniform hypergraphs") {
  const std::vector<std::tuple<int, int, std::uint64_t>> cases{{2, 3, 2}, {2, 4, 5}, {2, 5, 34}, {3, 4, 2}, {3, 5, 6}};
  for (auto [k, n, expected] : cases) {
    auto img = coboundary_image(make_setting(k, n, 1), GaugeMask::only_g3());
    CHECK(img.quotient_dimension() == img.setting->k1_sets().size());
    CHECK(image_is_symmetric(img));
    auto full = count_iso_classes(img, CountMode::Full);
    CHECK(full.count == expected);
    CHECK_FALSE(full.sampled);
    CHECK(full.representatives.size() == expected);
    if (n <= 5) CHECK(count_orbits_burnside(img) == expected);
  }
}

TEST_CASE("the full-gauge image is Sym(I)-invariant") {
  CHECK(image_is_symmetric(coboundary_image(make_setting(2, 4, 1))));
  CHECK(image_is_symmetric(coboundary_image(make_setting(3, 5, 1))));
}

TEST_CASE("permutation search agrees with the serial reference") {
  std::mt19937_64 rng(5);
  auto img = coboundary_image(make_setting(2, 5, 1), GaugeMask::only_g3());
  const auto& st = *img.setting;
  for (int t = 0; t < 10; ++t) {
    auto f1 = random_correction(st, rng);
    auto f2 = t % 2 ? permutation_action(st, Permutation::unrank(5, rng() % 120), f1) : random_correction(st, rng);
    auto a = iso_with_permutation(img, f1, f2);
    auto b = iso_with_permutation_reference(img, f1, f2);
    REQUIRE(a.has_value() == b.has_value());
    if (t % 2) CHECK(a);
    if (!a) continue;
    CHECK(a->pi == b->pi);
    CHECK(coboundary(st, a->gauge) == permutation_action(st, a->pi, f1) + f2);
  }
}

TEST_CASE("coset indices and representatives are inverse") {
  auto img = coboundary_image(make_setting(2, 4, 1), GaugeMask::only_g3());
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << img.quotient_dimension()); ++i)
    CHECK(coset_index(img, coset_representative(img, i)) == i);
}

TEST_CASE("images survive the disk cache") {
  auto dir = std::filesystem::temp_directory_path() / "zeroless-test-cache";
  std::filesystem::remove_all(dir);
  auto st = make_setting(2, 4, 1);
  CacheRecord first, second;
  auto a = cached_coboundary_image(st, GaugeMask::only_g3(), dir, &first);
  auto b = cached_coboundary_image(st, GaugeMask::only_g3(), dir, &second);
  CHECK_FALSE(first.hit);
  CHECK(second.hit);
  CHECK(first.sha256 == second.sha256);
  CHECK(a.rank() == b.rank());
  CHECK(a.basis_matrix.rows() == b.basis_matrix.rows());
  for (std::size_t i = 0; i < a.units.size(); ++i) CHECK(a.units[i].label(*st) == b.units[i].label(*st));
  CHECK(image_cache_key(*st, GaugeMask::only_g3()) != image_cache_key(*st, GaugeMask::all()));
  CHECK_FALSE(load_image(make_setting(2, 5, 1), GaugeMask::only_g3(), dir));
  std::filesystem::remove_all(dir);
}

TEST_CASE("oversized correction spaces hit the guardrail") {
  CHECK_THROWS_AS(coboundary_image(make_setting(3, 12, 4)), GuardrailError);
}
