#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "zeroless/gf2.hpp"
#include "zeroless/setting.hpp"

namespace testing {

inline zeroless::Gf2Vector random_vector(const zeroless::BasisPtr& basis, std::mt19937_64& rng) {
  zeroless::Gf2Vector v(basis);
  for (std::size_t i = 0; i < v.size(); ++i) v.set(i, rng() & 1u);
  return v;
}

inline zeroless::Gf2Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  auto basis = zeroless::indexed_basis("c", cols);
  std::vector<zeroless::Gf2Vector> rs;
  for (std::size_t r = 0; r < rows; ++r) rs.push_back(random_vector(basis, rng));
  return zeroless::Gf2Matrix(basis, std::move(rs));
}

// Every vector over a basis of at most 20 coordinates.
inline std::vector<zeroless::Gf2Vector> all_vectors(const zeroless::BasisPtr& basis) {
  std::vector<zeroless::Gf2Vector> out;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << basis->size()); ++w) {
    zeroless::Gf2Vector v(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) v.set(i, (w >> i) & 1u);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace testing
