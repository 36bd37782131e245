#pragma once

// The finite ground data every other object is built over: the index set
// I = {0..n-1}, Λ = {0..m-1}, S = all subsets of Λ, the cone filter D on S,
// and the coordinate systems of the groups G ⊆ Z_2^S and H = Z_2^{[I]^k}.

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zeroless/gf2.hpp"

namespace zeroless {

// A subset of {0..31} as a bitmask. The tag keeps subsets of I and subsets
// of Λ from being mixed up.
template <class Tag>
struct SmallSet {
  std::uint32_t bits = 0;

  static SmallSet of(std::initializer_list<int> members) {
    SmallSet s;
    for (int a : members) s.bits |= std::uint32_t{1} << a;
    return s;
  }
  static SmallSet range(int n) { return SmallSet{n >= 32 ? ~0u : (std::uint32_t{1} << n) - 1}; }

  bool contains(int a) const { return (bits >> a) & 1u; }
  int size() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
  int min() const { return std::countr_zero(bits); }
  int max() const { return 31 - std::countl_zero(bits); }
  bool subset_of(SmallSet other) const { return (bits & ~other.bits) == 0; }
  SmallSet with(int a) const { return SmallSet{bits | (std::uint32_t{1} << a)}; }
  SmallSet without(int a) const { return SmallSet{bits & ~(std::uint32_t{1} << a)}; }
  SmallSet operator|(SmallSet o) const { return SmallSet{bits | o.bits}; }
  SmallSet operator&(SmallSet o) const { return SmallSet{bits & o.bits}; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (auto b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Sorted comma-separated integers, e.g. "0,2"; the empty set is "".
  std::string text() const {
    std::string out;
    for (int a : members()) {
      if (!out.empty()) out += ',';
      out += std::to_string(a);
    }
    return out;
  }
  std::string braced() const { return "{" + text() + "}"; }

  bool operator==(const SmallSet&) const = default;
  // Lexicographic on the ascending member lists.
  std::strong_ordering operator<=>(const SmallSet& o) const { return members() <=> o.members(); }
};

struct IndexTag {};
struct LambdaTag {};
using IndexSet = SmallSet<IndexTag>;    // subsets of I
using LambdaSet = SmallSet<LambdaTag>;  // subsets of Λ, i.e. elements of S

IndexSet parse_index_set(std::string_view text);
LambdaSet parse_lambda_set(std::string_view text);

// All r-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSet> combinations(int n, int r);
std::uint64_t binomial(int n, int r);

class Permutation {
 public:
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);
  // The rank-th permutation of {0..n-1} in lexicographic order.
  static Permutation unrank(int n, std::uint64_t rank);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int a) const { return image_.at(static_cast<std::size_t>(a)); }
  IndexSet apply(IndexSet s) const;
  Permutation inverse() const;
  // (this ∘ inner)(a) = this(inner(a))
  Permutation compose(const Permutation& inner) const;
  bool is_identity() const;
  const std::vector<int>& image() const { return image_; }
  std::string text() const;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

std::uint64_t factorial(int n);

inline constexpr int kMaxN = 12;
inline constexpr int kMaxM = 4;
inline constexpr int kMaxK = 4;

class Setting {
 public:
  // Throws ConfigError for k < 2 or n < k, GuardrailError for n > 12,
  // m > 4 or k > 4. Without explicit generators the filter is generated by
  // all cones, i.e. it is the principal filter at Λ.
  Setting(int k, int n, int m, std::optional<std::vector<LambdaSet>> filter_generators = std::nullopt);

  int k() const { return k_; }
  int n() const { return n_; }
  int m() const { return m_; }

  IndexSet index_set() const { return IndexSet::range(n_); }
  LambdaSet lambda() const { return LambdaSet::range(m_); }

  // S in canonical order: the i-th element is the subset with bitmask i.
  std::size_t s_count() const { return std::size_t{1} << m_; }
  LambdaSet s_element(std::size_t i) const { return LambdaSet{static_cast<std::uint32_t>(i)}; }
  std::size_t s_index(LambdaSet s) const;

  const std::vector<IndexSet>& k_sets() const { return k_sets_; }
  const std::vector<IndexSet>& k1_sets() const { return k1_sets_; }
  std::size_t k_index(IndexSet u) const;
  std::size_t k1_index(IndexSet u) const;
  std::optional<std::size_t> find_k_index(IndexSet u) const;
  std::optional<std::size_t> find_k1_index(IndexSet u) const;

  // u_0..u_k for an ascending (k+1)-set: u_l omits the l-th smallest member.
  std::vector<IndexSet> sub_k_sets(IndexSet u) const;

  const std::optional<std::vector<LambdaSet>>& filter_generators() const { return generators_; }
  // The filter is {A ⊆ S : <core> ⊆ A}.
  LambdaSet filter_core() const { return core_; }
  bool in_core_cone(std::size_t s_idx) const { return core_.subset_of(s_element(s_idx)); }

  // Coordinate systems.
  const BasisPtr& s_basis() const { return s_basis_; }            // S
  const BasisPtr& h_basis() const { return h_basis_; }            // [I]^k
  const BasisPtr& kset_s_basis() const { return kset_s_basis_; }  // [I]^k × S
  const BasisPtr& correction_basis() const { return corr_basis_; }  // [I]^{k+1} × S

  std::size_t kset_s_index(std::size_t v_idx, std::size_t s_idx) const { return v_idx * s_count() + s_idx; }
  std::size_t correction_index(std::size_t u_idx, std::size_t s_idx) const { return u_idx * s_count() + s_idx; }

  std::size_t g_dimension() const;
  std::string describe() const;  // "k=2 n=3 m=1"

 private:
  int k_, n_, m_;
  std::optional<std::vector<LambdaSet>> generators_;
  LambdaSet core_;
  std::vector<IndexSet> k_sets_, k1_sets_;
  std::vector<std::int32_t> k_lookup_, k1_lookup_;  // bitmask -> index or -1
  BasisPtr s_basis_, h_basis_, kset_s_basis_, corr_basis_;
};

using SettingPtr = std::shared_ptr<const Setting>;

SettingPtr make_setting(int k, int n, int m, std::optional<std::vector<LambdaSet>> filter_generators = std::nullopt);

// A ⊆ S given as an indicator vector over the S basis.
bool filter_contains(const Setting& setting, const Gf2Vector& family);
// g ∈ G iff ker g ∈ D.
bool g_membership(const Setting& setting, const Gf2Vector& g);
// Unit vectors e_s for s outside the core cone; rows labeled by s.
Gf2Matrix g_basis(const Setting& setting);
// Every element of G, in increasing order of the packed coefficient word.
std::vector<Gf2Vector> enumerate_g(const Setting& setting);

}  // namespace zeroless
