#include "zeroless/gf2_kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace zeroless::kernels {

namespace {

// Below this many word-XORs per pivot the thread fork costs more than it saves.
constexpr std::size_t kParallelWork = 1 << 14;

std::size_t find_pivot_row(const BitMatrix& a, std::size_t from, std::size_t col) {
  for (std::size_t i = from; i < a.rows; ++i)
    if (a.get(i, col)) return i;
  return a.rows;
}

}  // namespace

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(row(a), row(a) + words, row(b));
}

Elimination eliminate(BitMatrix& a, BitMatrix* tracker) {
  if (tracker && tracker->rows != a.rows) throw std::invalid_argument("tracker row count mismatch");
  Elimination out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols && r < a.rows; ++col) {
    auto p = find_pivot_row(a, r, col);
    if (p == a.rows) continue;
    a.swap_rows(p, r);
    if (tracker) tracker->swap_rows(p, r);

    // Row r is zero left of `col`, so only the tail words need XOR-ing.
    const std::size_t first_word = col >> 6;
    const std::size_t tail = a.words - first_word;
    const std::uint64_t* pivot = a.row(r);
    const std::uint64_t* pivot_t = tracker ? tracker->row(r) : nullptr;
    const std::size_t twords = tracker ? tracker->words : 0;
    const auto rows = static_cast<std::ptrdiff_t>(a.rows);
    const bool wide = a.rows * (tail + twords) > kParallelWork;

#pragma omp parallel for schedule(static) if (wide)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      auto ui = static_cast<std::size_t>(i);
      if (ui == r || !a.get(ui, col)) continue;
      std::uint64_t* dst = a.row(ui);
      for (std::size_t w = first_word; w < a.words; ++w) dst[w] ^= pivot[w];
      if (pivot_t) {
        std::uint64_t* tdst = tracker->row(ui);
        for (std::size_t w = 0; w < twords; ++w) tdst[w] ^= pivot_t[w];
      }
    }
    out.pivot_cols.push_back(col);
    ++r;
  }
  out.rank = r;
  return out;
}

Elimination eliminate_reference(BitMatrix& a, BitMatrix* tracker) {
  if (tracker && tracker->rows != a.rows) throw std::invalid_argument("tracker row count mismatch");
  Elimination out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols && r < a.rows; ++col) {
    auto p = find_pivot_row(a, r, col);
    if (p == a.rows) continue;
    a.swap_rows(p, r);
    if (tracker) tracker->swap_rows(p, r);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i == r || !a.get(i, col)) continue;
      for (std::size_t j = 0; j < a.cols; ++j)
        if (a.get(r, j)) a.set(i, j, !a.get(i, j));
      if (tracker)
        for (std::size_t j = 0; j < tracker->cols; ++j)
          if (tracker->get(r, j)) tracker->set(i, j, !tracker->get(i, j));
    }
    out.pivot_cols.push_back(col);
    ++r;
  }
  out.rank = r;
  return out;
}

}  // namespace zeroless::kernels
