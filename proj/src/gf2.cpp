#include "zeroless/gf2.hpp"

#include <bit>
#include <functional>

#include "zeroless/error.hpp"
#include "zeroless/gf2_kernels.hpp"

namespace zeroless {

using kernels::BitMatrix;

Basis::Basis(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second)
      throw ConfigError("duplicate basis label '" + labels_[i] + "'");
    h ^= std::hash<std::string>{}(labels_[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  fingerprint_ = h ^ labels_.size();
}

std::optional<std::size_t> Basis::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Basis::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw ConfigError("unknown basis label '" + std::string(label) + "'");
  return *i;
}

BasisPtr make_basis(std::vector<std::string> labels) {
  return std::make_shared<const Basis>(std::move(labels));
}

BasisPtr indexed_basis(std::string_view prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return make_basis(std::move(labels));
}

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return (!a || a->size() == 0) && (!b || b->size() == 0);
  return a->fingerprint() == b->fingerprint() && a->labels() == b->labels();
}

void require_same_basis(const BasisPtr& a, const BasisPtr& b, std::string_view what) {
  if (!same_basis(a, b))
    throw BasisMismatch(std::string(what) + ": incompatible coordinate systems (" +
                        std::to_string(a ? a->size() : 0) + " vs " +
                        std::to_string(b ? b->size() : 0) + " coordinates)");
}

// ---------------------------------------------------------------------------

Gf2Vector::Gf2Vector(BasisPtr basis)
    : basis_(std::move(basis)), words_(((basis_ ? basis_->size() : 0) + 63) / 64, 0) {}

Gf2Vector Gf2Vector::unit(BasisPtr basis, std::size_t i) {
  Gf2Vector v(std::move(basis));
  v.set(i);
  return v;
}

Gf2Vector Gf2Vector::from_words(BasisPtr basis, std::vector<std::uint64_t> words) {
  Gf2Vector v(std::move(basis));
  if (words.size() != v.words_.size()) throw ConfigError("word count does not match basis size");
  v.words_ = std::move(words);
  // Clear padding bits beyond the basis size.
  if (auto rem = v.size() & 63; rem && !v.words_.empty()) v.words_.back() &= (std::uint64_t{1} << rem) - 1;
  return v;
}

Gf2Vector Gf2Vector::from_bitstring(BasisPtr basis, std::string_view bits) {
  Gf2Vector v(std::move(basis));
  if (bits.size() != v.size()) throw ConfigError("bitstring length does not match basis size");
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i);
    else if (bits[i] != '0')
      throw ConfigError("bitstring must contain only 0 and 1");
  }
  return v;
}

std::size_t Gf2Vector::size() const { return basis_ ? basis_->size() : 0; }

void Gf2Vector::set(std::size_t i, bool value) {
  auto bit = std::uint64_t{1} << (i & 63);
  if (value)
    words_[i >> 6] |= bit;
  else
    words_[i >> 6] &= ~bit;
}

bool Gf2Vector::is_zero() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

std::size_t Gf2Vector::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> Gf2Vector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    auto w = words_[wi];
    while (w) {
      out.push_back(wi * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

bool Gf2Vector::dot(const Gf2Vector& other) const {
  require_same_basis(basis_, other.basis_, "dot");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return std::popcount(acc) & 1;
}

Gf2Vector& Gf2Vector::operator+=(const Gf2Vector& other) {
  require_same_basis(basis_, other.basis_, "add");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

bool Gf2Vector::operator==(const Gf2Vector& other) const {
  return same_basis(basis_, other.basis_) && words_ == other.words_;
}

std::string Gf2Vector::to_bitstring() const {
  std::string s(size(), '0');
  for (std::size_t i = 0; i < size(); ++i)
    if (get(i)) s[i] = '1';
  return s;
}

Gf2Vector add(const Gf2Vector& a, const Gf2Vector& b) { return a + b; }

// ---------------------------------------------------------------------------

Gf2Matrix::Gf2Matrix(BasisPtr row_basis, BasisPtr col_basis)
    : row_basis_(std::move(row_basis)), col_basis_(std::move(col_basis)) {
  rows_.assign(row_basis_->size(), Gf2Vector(col_basis_));
}

Gf2Matrix::Gf2Matrix(BasisPtr row_basis, BasisPtr col_basis, std::vector<Gf2Vector> rows)
    : row_basis_(std::move(row_basis)), col_basis_(std::move(col_basis)), rows_(std::move(rows)) {
  if (rows_.size() != row_basis_->size()) throw ConfigError("row count does not match row basis");
  for (const auto& r : rows_) require_same_basis(r.basis(), col_basis_, "matrix row");
}

Gf2Matrix::Gf2Matrix(BasisPtr col_basis, std::vector<Gf2Vector> rows)
    : row_basis_(indexed_basis("r", rows.size())), col_basis_(std::move(col_basis)), rows_(std::move(rows)) {
  for (const auto& r : rows_) require_same_basis(r.basis(), col_basis_, "matrix row");
}

Gf2Matrix Gf2Matrix::identity(const BasisPtr& basis) {
  Gf2Matrix m(basis, basis);
  for (std::size_t i = 0; i < basis->size(); ++i) m.set(i, i, true);
  return m;
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(col_basis_, row_basis_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (auto c : rows_[r].support()) t.set(c, r, true);
  return t;
}

Gf2Vector Gf2Matrix::apply(const Gf2Vector& x) const {
  require_same_basis(x.basis(), col_basis_, "matrix apply");
  Gf2Vector out(row_basis_);
  for (std::size_t r = 0; r < rows_.size(); ++r)
    if (rows_[r].dot(x)) out.set(r);
  return out;
}

Gf2Vector Gf2Matrix::left_apply(const Gf2Vector& c) const {
  require_same_basis(c.basis(), row_basis_, "matrix left_apply");
  Gf2Vector out(col_basis_);
  for (auto r : c.support()) out += rows_[r];
  return out;
}

// ---------------------------------------------------------------------------

namespace {

BitMatrix pack(const Gf2Matrix& m) {
  BitMatrix a(m.row_count(), m.col_count());
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    auto w = m.row(r).words();
    std::copy(w.begin(), w.end(), a.row(r));
  }
  return a;
}

std::vector<std::uint64_t> row_words(const BitMatrix& a, std::size_t r) {
  return {a.row(r), a.row(r) + a.words};
}

RowReduction unpack(const Gf2Matrix& m, const BitMatrix& a, kernels::Elimination e) {
  std::vector<Gf2Vector> rows;
  rows.reserve(a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) rows.push_back(Gf2Vector::from_words(m.col_basis(), row_words(a, r)));
  return RowReduction{e.rank, std::move(e.pivot_cols), Gf2Matrix(m.row_basis(), m.col_basis(), std::move(rows))};
}

}  // namespace

RowReduction row_reduce(const Gf2Matrix& m) {
  auto a = pack(m);
  auto e = kernels::eliminate(a);
  return unpack(m, a, std::move(e));
}

RowReduction row_reduce_reference(const Gf2Matrix& m) {
  auto a = pack(m);
  auto e = kernels::eliminate_reference(a);
  return unpack(m, a, std::move(e));
}

Gf2Span::Gf2Span(Gf2Matrix generators) : generators_(std::move(generators)) {
  auto a = pack(generators_);
  auto t = BitMatrix::identity(a.rows);
  auto e = kernels::eliminate(a, &t);
  pivot_cols_ = std::move(e.pivot_cols);
  for (std::size_t i = 0; i < e.rank; ++i) {
    reduced_.push_back(row_words(a, i));
    transform_.push_back(row_words(t, i));
  }
}

Gf2Vector Gf2Span::normal_form(const Gf2Vector& v) const {
  require_same_basis(v.basis(), generators_.col_basis(), "span normal_form");
  Gf2Vector out = v;
  auto w = out.mutable_words();
  for (std::size_t i = 0; i < pivot_cols_.size(); ++i) {
    if (!out.get(pivot_cols_[i])) continue;
    for (std::size_t j = 0; j < w.size(); ++j) w[j] ^= reduced_[i][j];
  }
  return out;
}

bool Gf2Span::contains(const Gf2Vector& v) const { return normal_form(v).is_zero(); }

SpanCertificate Gf2Span::certify(const Gf2Vector& v) const {
  require_same_basis(v.basis(), generators_.col_basis(), "in_span");
  Gf2Vector residual = v;
  std::vector<std::uint64_t> coeff((generators_.row_count() + 63) / 64, 0);
  auto w = residual.mutable_words();
  for (std::size_t i = 0; i < pivot_cols_.size(); ++i) {
    if (!residual.get(pivot_cols_[i])) continue;
    for (std::size_t j = 0; j < w.size(); ++j) w[j] ^= reduced_[i][j];
    for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] ^= transform_[i][j];
  }
  if (residual.is_zero())
    return SpanCertificate{true, Gf2Vector::from_words(generators_.row_basis(), std::move(coeff))};

  // The residual vanishes on every pivot column. Pick a free column j where it
  // is set; e_j plus the pivot columns of the rows with a 1 at j is orthogonal
  // to every reduced row and pairs to 1 with v.
  auto j = residual.support().front();
  Gf2Vector functional = Gf2Vector::unit(generators_.col_basis(), j);
  for (std::size_t i = 0; i < pivot_cols_.size(); ++i)
    if ((reduced_[i][j >> 6] >> (j & 63)) & 1u) functional.flip(pivot_cols_[i]);
  return SpanCertificate{false, std::move(functional)};
}

SpanCertificate in_span(const Gf2Matrix& m, const Gf2Vector& v) { return Gf2Span(m).certify(v); }

SolveResult solve(const Gf2Matrix& m, const Gf2Vector& b) {
  require_same_basis(b.basis(), m.row_basis(), "solve");
  const std::size_t cols = m.col_count();
  BitMatrix a(m.row_count(), cols + 1);
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    auto w = m.row(r).words();
    std::copy(w.begin(), w.end(), a.row(r));
    a.set(r, cols, b.get(r));
  }
  auto t = BitMatrix::identity(a.rows);
  auto e = kernels::eliminate(a, &t);

  // Leftmost pivoting means a pivot in the augmented column is the last one,
  // and its row reads 0 = 1.
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == cols) {
    auto r = e.rank - 1;
    return SolveResult{std::nullopt, Gf2Vector::from_words(m.row_basis(), row_words(t, r))};
  }
  Gf2Vector x(m.col_basis());
  for (std::size_t i = 0; i < e.rank; ++i)
    if (a.get(i, cols)) x.set(e.pivot_cols[i]);
  return SolveResult{std::move(x), std::nullopt};
}

}  // namespace zeroless
