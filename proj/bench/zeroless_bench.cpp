#include <benchmark/benchmark.h>

#include <random>

#include "zeroless/classification.hpp"
#include "zeroless/gf2.hpp"
#include "zeroless/gf2_kernels.hpp"

using namespace zeroless;

namespace {

Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto basis = indexed_basis("c", cols);
  std::vector<Gf2Vector> rs;
  for (std::size_t r = 0; r < rows; ++r) {
    Gf2Vector v(basis);
    for (auto& w : v.mutable_words()) w = rng();
    if (cols % 64) v.mutable_words().back() &= (std::uint64_t{1} << (cols % 64)) - 1;
    rs.push_back(std::move(v));
  }
  return Gf2Matrix(basis, std::move(rs));
}

void BM_RowReduce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(row_reduce(m).rank);
}

void BM_RowReduceReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto m = random_matrix(n, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(row_reduce_reference(m).rank);
}

void BM_CoboundaryImage(benchmark::State& state) {
  auto st = make_setting(2, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(coboundary_image(st).rank());
}

void BM_CoboundaryImageReference(benchmark::State& state) {
  auto st = make_setting(2, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(coboundary_image_reference(st).rank());
}

// No π works for the all-ones function against 0 under the g3-only gauge, so
// both searches scan all of Sym(I).
struct PermutationCase {
  CoboundaryImage image;
  Gf2Vector ones, zero;

  explicit PermutationCase(int n)
      : image(coboundary_image(make_setting(2, n, 1), GaugeMask::only_g3())),
        ones(image.setting->correction_basis()),
        zero(image.setting->correction_basis()) {
    for (std::size_t i = 0; i < ones.size(); ++i) ones.set(i);
  }
};

void BM_PermutationSearch(benchmark::State& state) {
  PermutationCase c(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iso_with_permutation(c.image, c.ones, c.zero).has_value());
}

void BM_PermutationSearchReference(benchmark::State& state) {
  PermutationCase c(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iso_with_permutation_reference(c.image, c.ones, c.zero).has_value());
}

}  // namespace

BENCHMARK(BM_RowReduce)->Arg(256)->Arg(1024);
BENCHMARK(BM_RowReduceReference)->Arg(256)->Arg(1024);
BENCHMARK(BM_CoboundaryImage)->Arg(5)->Arg(7);
BENCHMARK(BM_CoboundaryImageReference)->Arg(5)->Arg(7);
BENCHMARK(BM_PermutationSearch)->Arg(6)->Arg(7);
BENCHMARK(BM_PermutationSearchReference)->Arg(6)->Arg(7);

BENCHMARK_MAIN();
