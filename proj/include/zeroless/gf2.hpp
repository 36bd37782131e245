#pragma once

// Bit-packed linear algebra over Z_2 with labeled coordinates.
//
// Every vector carries a shared, immutable Basis. Two vectors may only be
// combined when their bases agree (same object, or same labels in the same
// order); otherwise BasisMismatch is thrown.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace zeroless {

class Basis {
 public:
  explicit Basis(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t fingerprint_ = 0;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_basis(std::vector<std::string> labels);
// Labels prefix0, prefix1, ...
BasisPtr indexed_basis(std::string_view prefix, std::size_t n);
bool same_basis(const BasisPtr& a, const BasisPtr& b);
void require_same_basis(const BasisPtr& a, const BasisPtr& b, std::string_view what);

class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(BasisPtr basis);

  static Gf2Vector unit(BasisPtr basis, std::size_t i);
  static Gf2Vector from_words(BasisPtr basis, std::vector<std::uint64_t> words);
  // Parses "0110" (coordinate 0 first).
  static Gf2Vector from_bitstring(BasisPtr basis, std::string_view bits);

  const BasisPtr& basis() const { return basis_; }
  std::size_t size() const;
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool is_zero() const;
  std::size_t popcount() const;
  std::vector<std::size_t> support() const;
  bool dot(const Gf2Vector& other) const;

  Gf2Vector& operator+=(const Gf2Vector& other);
  friend Gf2Vector operator+(Gf2Vector a, const Gf2Vector& b) { return a += b; }
  bool operator==(const Gf2Vector& other) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }
  std::string to_bitstring() const;

 private:
  BasisPtr basis_;
  std::vector<std::uint64_t> words_;
};

Gf2Vector add(const Gf2Vector& a, const Gf2Vector& b);

class Gf2Matrix {
 public:
  Gf2Matrix(BasisPtr row_basis, BasisPtr col_basis);
  Gf2Matrix(BasisPtr row_basis, BasisPtr col_basis, std::vector<Gf2Vector> rows);
  // Rows labeled r0, r1, ...
  Gf2Matrix(BasisPtr col_basis, std::vector<Gf2Vector> rows);

  static Gf2Matrix identity(const BasisPtr& basis);

  const BasisPtr& row_basis() const { return row_basis_; }
  const BasisPtr& col_basis() const { return col_basis_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t col_count() const { return col_basis_->size(); }
  const Gf2Vector& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<Gf2Vector>& rows() const { return rows_; }
  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v) { rows_[r].set(c, v); }

  Gf2Matrix transpose() const;
  // m * x, with x over the column basis.
  Gf2Vector apply(const Gf2Vector& x) const;
  // c * m, with c over the row basis.
  Gf2Vector left_apply(const Gf2Vector& c) const;

 private:
  BasisPtr row_basis_;
  BasisPtr col_basis_;
  std::vector<Gf2Vector> rows_;
};

struct RowReduction {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  Gf2Matrix reduced;  // RREF; nonzero rows first
};

// Gauss-Jordan with leftmost pivot column and first nonzero row. The
// elimination step runs under OpenMP; results do not depend on scheduling.
RowReduction row_reduce(const Gf2Matrix& m);
// Serial reference implementation used to cross-check row_reduce.
RowReduction row_reduce_reference(const Gf2Matrix& m);

struct SpanCertificate {
  bool in_span = false;
  // in_span: coefficients over m's row basis with c * m = v.
  // otherwise: functional over m's column basis vanishing on every row of m
  // with functional . v = 1.
  Gf2Vector certificate;
};

// A matrix prepared for repeated membership queries against its row space.
class Gf2Span {
 public:
  explicit Gf2Span(Gf2Matrix generators);

  std::size_t rank() const { return pivot_cols_.size(); }
  const std::vector<std::size_t>& pivot_cols() const { return pivot_cols_; }
  const Gf2Matrix& generators() const { return generators_; }

  bool contains(const Gf2Vector& v) const;
  SpanCertificate certify(const Gf2Vector& v) const;
  // Unique representative of v modulo the row space: zero on pivot columns.
  Gf2Vector normal_form(const Gf2Vector& v) const;

 private:
  Gf2Matrix generators_;
  std::vector<std::size_t> pivot_cols_;
  std::vector<std::vector<std::uint64_t>> reduced_;    // one per pivot
  std::vector<std::vector<std::uint64_t>> transform_;  // reduced_[i] = transform_[i] * generators
};

SpanCertificate in_span(const Gf2Matrix& m, const Gf2Vector& v);

struct SolveResult {
  // x over m's column basis with m * x = b; free variables are zero.
  std::optional<Gf2Vector> solution;
  // When inconsistent: y over m's row basis with y * m = 0 and y . b = 1.
  std::optional<Gf2Vector> inconsistency;
};

SolveResult solve(const Gf2Matrix& m, const Gf2Vector& b);

}  // namespace zeroless
