#pragma once

// Dense packed bit matrices and the elimination kernels behind row_reduce,
// Gf2Span and solve. eliminate() is the OpenMP kernel; eliminate_reference()
// is the serial version kept for testing and benchmarking.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace zeroless::kernels {

struct BitMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t words = 0;  // words per row
  std::vector<std::uint64_t> data;

  BitMatrix() = default;
  BitMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), words((c + 63) / 64), data(r * ((c + 63) / 64), 0) {}

  static BitMatrix identity(std::size_t n);

  std::uint64_t* row(std::size_t i) { return data.data() + i * words; }
  const std::uint64_t* row(std::size_t i) const { return data.data() + i * words; }
  bool get(std::size_t i, std::size_t j) const { return (row(i)[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t i, std::size_t j, bool v) {
    auto bit = std::uint64_t{1} << (j & 63);
    if (v)
      row(i)[j >> 6] |= bit;
    else
      row(i)[j >> 6] &= ~bit;
  }
  void swap_rows(std::size_t a, std::size_t b);
  bool operator==(const BitMatrix&) const = default;
};

struct Elimination {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

// Reduces `a` in place to reduced row-echelon form. Row operations are
// mirrored on `tracker` when given (tracker->rows must equal a.rows), so that
// starting from the identity, tracker * a_original = a_reduced.
Elimination eliminate(BitMatrix& a, BitMatrix* tracker = nullptr);
Elimination eliminate_reference(BitMatrix& a, BitMatrix* tracker = nullptr);

}  // namespace zeroless::kernels
