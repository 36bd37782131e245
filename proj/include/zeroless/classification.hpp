#pragma once

// Gauge triples, the coboundary operator δ and its image B inside the space
// of correction functions, plus isomorphism tests and class counting built
// on membership in B.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zeroless/gf2.hpp"
#include "zeroless/model.hpp"

namespace zeroless {

// Which gauge components may be used. The full gauge is the default; the
// restricted ones give non-trivial quotients to exercise negative paths.
struct GaugeMask {
  bool g1 = true;
  bool g2 = true;
  bool g3 = true;

  static GaugeMask all() { return {}; }
  static GaugeMask only_g3() { return {false, false, true}; }
  bool full() const { return g1 && g2 && g3; }
  std::string text() const;  // "g1+g2+g3"
  static GaugeMask parse(std::string_view text);
  bool operator==(const GaugeMask&) const = default;
};

struct GaugeTriple {
  Gf2Vector g1;                // over kset_s_basis: (v,s) -> Z_2
  std::vector<Gf2Vector> g2;   // index v*|S|+s, over h_basis
  std::vector<Gf2Vector> g3;   // per u in k1_sets, over s_basis, values in G

  static GaugeTriple zero(const Setting& st);
  static GaugeTriple random(const Setting& st, std::mt19937_64& rng, GaugeMask mask = {});
  GaugeTriple& operator+=(const GaugeTriple& o);
  bool operator==(const GaugeTriple&) const = default;
};

// δg(u,s) = Σ_{l<k} g1(u_l,s) + g2(u_k,s)(u_0) + g3(u)(s).
Gf2Vector coboundary(const Setting& st, const GaugeTriple& g);

// One gauge basis vector: a unit of g1 at (v,s), of g2 at (v,s) with H
// coordinate w, or of g3 at u with the G basis element e_s.
struct GaugeUnit {
  enum class Kind { G1, G2, G3 } kind;
  std::size_t a = 0;  // v for G1/G2, u for G3
  std::size_t s = 0;
  std::size_t w = 0;  // G2 only

  std::string label(const Setting& st) const;  // "g2:{0,1}|{0}|{1,2}"
  static GaugeUnit parse(const Setting& st, std::string_view label);
  GaugeTriple triple(const Setting& st) const;
};

// Every gauge unit permitted by the mask, in the order g1, g2, g3.
std::vector<GaugeUnit> gauge_units(const Setting& st, GaugeMask mask);

inline constexpr std::size_t kMaxCorrectionDimension = 4096;

struct CoboundaryImage {
  SettingPtr setting;
  GaugeMask mask;
  Gf2Matrix basis_matrix;               // independent rows δ(unit); row labels = provenance
  std::vector<GaugeUnit> units;         // the unit behind each row
  std::optional<Gf2Span> span;

  std::size_t rank() const { return basis_matrix.row_count(); }
  std::size_t domain_dimension() const { return basis_matrix.col_count(); }
  std::size_t quotient_dimension() const { return domain_dimension() - rank(); }
  bool contains(const Gf2Vector& f) const { return span->contains(f); }
  // Gauge whose coboundary is f, if f ∈ B.
  std::optional<GaugeTriple> certificate(const Gf2Vector& f) const;
};

// Rows δ(unit) for a block of units; OpenMP over units.
std::vector<Gf2Vector> coboundary_rows(const Setting& st, const std::vector<GaugeUnit>& units);
// Same rows through coboundary() applied to dense unit triples.
std::vector<Gf2Vector> coboundary_rows_reference(const Setting& st, const std::vector<GaugeUnit>& units);

// Builds B by applying δ to gauge units block by block and keeping an
// independent subset; stops once the whole domain is spanned. Throws
// GuardrailError when the correction space exceeds kMaxCorrectionDimension.
CoboundaryImage coboundary_image(SettingPtr st, GaugeMask mask = {});
CoboundaryImage coboundary_image_reference(SettingPtr st, GaugeMask mask = {});

// Cache: <dir>/<key>.gf2b holds basis_matrix in the basis-cache format and
// <dir>/<key>.prov one provenance label per row.
struct CacheRecord {
  std::filesystem::path path;
  std::string sha256;
  bool hit = false;
};
std::string image_cache_key(const Setting& st, GaugeMask mask);
void save_image(const CoboundaryImage& image, const std::filesystem::path& dir, CacheRecord* record = nullptr);
std::optional<CoboundaryImage> load_image(SettingPtr st, GaugeMask mask, const std::filesystem::path& dir,
                                          CacheRecord* record = nullptr);
CoboundaryImage cached_coboundary_image(SettingPtr st, GaugeMask mask, const std::filesystem::path& dir,
                                        CacheRecord* record = nullptr);

struct IsoCertificate {
  bool isomorphic = false;
  std::optional<GaugeTriple> gauge;        // δ(gauge) = f1 + f2
  std::optional<Gf2Vector> functional;     // vanishes on B, not on f1 + f2
};

IsoCertificate iso_over_identity(const CoboundaryImage& image, const Gf2Vector& f1, const Gf2Vector& f2);

// (π·f)(u,s) = f(π⁻¹[u], s).
Gf2Vector permutation_action(const Setting& st, const Permutation& pi, const Gf2Vector& f);

struct PermutationWitness {
  Permutation pi;
  GaugeTriple gauge;  // δ(gauge) = π·f1 + f2
};

// The identity first, then all of Sym(I) in lexicographic order; returns the
// first π with π·f1 + f2 ∈ B. The parallel version returns the same π.
std::optional<PermutationWitness> iso_with_permutation(const CoboundaryImage& image, const Gf2Vector& f1,
                                                       const Gf2Vector& f2);
std::optional<PermutationWitness> iso_with_permutation_reference(const CoboundaryImage& image, const Gf2Vector& f1,
                                                                 const Gf2Vector& f2);

// π·B = B, checked on the Sym(I) generators (0 1) and (0 1 … n-1).
bool image_is_symmetric(const CoboundaryImage& image);

enum class CountMode { Identity, Full };

inline constexpr std::size_t kMaxEnumeratedQuotient = 20;

struct ClassCount {
  CountMode mode = CountMode::Identity;
  std::size_t quotient_dimension = 0;
  std::uint64_t count = 0;
  bool sampled = false;  // count is then a lower bound from random cosets
  std::vector<Gf2Vector> representatives;
};

// Identity mode: 2^{quotient dim}, representatives are unit vectors on the
// non-pivot coordinates. Full mode: Sym(I)-orbits of cosets with the least
// coset (in normal-form order) as representative. Full mode needs
// quotient dim ≤ kMaxEnumeratedQuotient unless sampling is requested.
ClassCount count_iso_classes(const CoboundaryImage& image, CountMode mode, bool allow_sampling = false,
                             std::uint64_t seed = 0, std::size_t samples = 256);
// Burnside's lemma over all of Sym(I); cross-check for full mode.
std::uint64_t count_orbits_burnside(const CoboundaryImage& image);

// Coordinates of f modulo B on the non-pivot columns, packed LSB first.
std::uint64_t coset_index(const CoboundaryImage& image, const Gf2Vector& f);
Gf2Vector coset_representative(const CoboundaryImage& image, std::uint64_t index);

}  // namespace zeroless
