#include "zeroless/classification.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "zeroless/error.hpp"
#include "zeroless/gf2_cache.hpp"

namespace zeroless {

std::string GaugeMask::text() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add(g1, "g1");
  add(g2, "g2");
  add(g3, "g3");
  return out.empty() ? "none" : out;
}

GaugeMask GaugeMask::parse(std::string_view text) {
  GaugeMask m{false, false, false};
  if (text == "all") return GaugeMask::all();
  while (!text.empty()) {
    auto plus = text.find('+');
    auto part = text.substr(0, plus);
    if (part == "g1") m.g1 = true;
    else if (part == "g2") m.g2 = true;
    else if (part == "g3") m.g3 = true;
    else throw ConfigError("unknown gauge component '" + std::string(part) + "'");
    if (plus == std::string_view::npos) break;
    text.remove_prefix(plus + 1);
  }
  return m;
}

GaugeTriple GaugeTriple::zero(const Setting& st) {
  return {Gf2Vector(st.kset_s_basis()), std::vector<Gf2Vector>(st.k_sets().size() * st.s_count(), Gf2Vector(st.h_basis())),
          std::vector<Gf2Vector>(st.k1_sets().size(), Gf2Vector(st.s_basis()))};
}

GaugeTriple GaugeTriple::random(const Setting& st, std::mt19937_64& rng, GaugeMask mask) {
  auto g = zero(st);
  if (mask.g1)
    for (std::size_t i = 0; i < g.g1.size(); ++i) g.g1.set(i, rng() & 1u);
  if (mask.g2)
    for (auto& h : g.g2)
      for (std::size_t i = 0; i < h.size(); ++i) h.set(i, rng() & 1u);
  if (mask.g3)
    for (auto& v : g.g3)
      for (std::size_t s = 0; s < v.size(); ++s)
        if (!st.in_core_cone(s)) v.set(s, rng() & 1u);
  return g;
}

GaugeTriple& GaugeTriple::operator+=(const GaugeTriple& o) {
  g1 += o.g1;
  for (std::size_t i = 0; i < g2.size(); ++i) g2[i] += o.g2.at(i);
  for (std::size_t i = 0; i < g3.size(); ++i) g3[i] += o.g3.at(i);
  return *this;
}

Gf2Vector coboundary(const Setting& st, const GaugeTriple& g) {
  const auto k = static_cast<std::size_t>(st.k());
  Gf2Vector out(st.correction_basis());
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    auto sub = st.sub_k_sets(st.k1_sets()[u]);
    std::vector<std::size_t> idx;
    for (auto v : sub) idx.push_back(st.k_index(v));
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      bool v = g.g2.at(st.kset_s_index(idx[k], s)).get(idx[0]) ^ g.g3.at(u).get(s);
      for (std::size_t l = 0; l < k; ++l) v ^= g.g1.get(st.kset_s_index(idx[l], s));
      out.set(st.correction_index(u, s), v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// gauge units

std::string GaugeUnit::label(const Setting& st) const {
  const auto s_text = st.s_element(s).braced();
  switch (kind) {
    case Kind::G1: return "g1:" + st.k_sets()[a].braced() + "|" + s_text;
    case Kind::G2: return "g2:" + st.k_sets()[a].braced() + "|" + s_text + "|" + st.k_sets()[w].braced();
    case Kind::G3: return "g3:" + st.k1_sets()[a].braced() + "|" + s_text;
  }
  throw InternalError("bad gauge unit kind");
}

GaugeUnit GaugeUnit::parse(const Setting& st, std::string_view label) {
  auto fail = [&]() -> GaugeUnit { throw ConfigError("bad gauge label '" + std::string(label) + "'"); };
  if (label.size() < 3 || label[0] != 'g' || label[2] != ':') return fail();
  std::vector<std::string_view> parts;
  auto rest = label.substr(3);
  while (true) {
    auto bar = rest.find('|');
    parts.push_back(rest.substr(0, bar));
    if (bar == std::string_view::npos) break;
    rest.remove_prefix(bar + 1);
  }
  auto s = parse_lambda_set(parts.at(1));
  if (!s.subset_of(st.lambda())) return fail();
  GaugeUnit out{};
  out.s = st.s_index(s);
  switch (label[1]) {
    case '1':
      if (parts.size() != 2) return fail();
      out.kind = Kind::G1;
      out.a = st.k_index(parse_index_set(parts[0]));
      return out;
    case '2':
      if (parts.size() != 3) return fail();
      out.kind = Kind::G2;
      out.a = st.k_index(parse_index_set(parts[0]));
      out.w = st.k_index(parse_index_set(parts[2]));
      return out;
    case '3':
      if (parts.size() != 2 || st.in_core_cone(out.s)) return fail();
      out.kind = Kind::G3;
      out.a = st.k1_index(parse_index_set(parts[0]));
      return out;
    default: return fail();
  }
}

GaugeTriple GaugeUnit::triple(const Setting& st) const {
  auto g = GaugeTriple::zero(st);
  switch (kind) {
    case Kind::G1: g.g1.set(st.kset_s_index(a, s)); break;
    case Kind::G2: g.g2.at(st.kset_s_index(a, s)).set(w); break;
    case Kind::G3: g.g3.at(a).set(s); break;
  }
  return g;
}

std::vector<GaugeUnit> gauge_units(const Setting& st, GaugeMask mask) {
  std::vector<GaugeUnit> out;
  const auto nk = st.k_sets().size();
  const auto S = st.s_count();
  if (mask.g1)
    for (std::size_t v = 0; v < nk; ++v)
      for (std::size_t s = 0; s < S; ++s) out.push_back({GaugeUnit::Kind::G1, v, s, 0});
  if (mask.g2)
    for (std::size_t v = 0; v < nk; ++v)
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t w = 0; w < nk; ++w) out.push_back({GaugeUnit::Kind::G2, v, s, w});
  if (mask.g3)
    for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
      for (std::size_t s = 0; s < S; ++s)
        if (!st.in_core_cone(s)) out.push_back({GaugeUnit::Kind::G3, u, s, 0});
  return out;
}

// ---------------------------------------------------------------------------
// image construction

namespace {

// δ of one unit, read off the formula coordinate by coordinate but only over
// the (k+1)-sets the unit can reach.
Gf2Vector unit_row(const Setting& st, const GaugeUnit& unit) {
  const auto k = static_cast<std::size_t>(st.k());
  Gf2Vector row(st.correction_basis());
  switch (unit.kind) {
    case GaugeUnit::Kind::G1: {
      const auto v = st.k_sets()[unit.a];
      for (int b = 0; b < st.n(); ++b) {
        if (v.contains(b)) continue;
        const auto u = v.with(b);
        const auto sub = st.sub_k_sets(u);
        for (std::size_t l = 0; l < k; ++l)
          if (sub[l] == v) row.flip(st.correction_index(st.k1_index(u), unit.s));
      }
      break;
    }
    case GaugeUnit::Kind::G2: {
      const auto v = st.k_sets()[unit.a];
      for (int b = 0; b < st.n(); ++b) {
        if (v.contains(b)) continue;
        const auto u = v.with(b);
        const auto sub = st.sub_k_sets(u);
        if (sub[k] == v && st.k_index(sub[0]) == unit.w) row.flip(st.correction_index(st.k1_index(u), unit.s));
      }
      break;
    }
    case GaugeUnit::Kind::G3: row.flip(st.correction_index(unit.a, unit.s)); break;
  }
  return row;
}

// Incremental basis keyed by lowest set bit.
class BasisBuilder {
 public:
  explicit BasisBuilder(std::size_t dim) : pivot_row_(dim, -1) {}

  bool add(const Gf2Vector& v) {
    Gf2Vector r = v;
    while (true) {
      auto p = lowest_bit(r);
      if (p == kNone) return false;
      if (pivot_row_[p] < 0) {
        pivot_row_[p] = static_cast<std::int64_t>(rows_.size());
        rows_.push_back(std::move(r));
        return true;
      }
      r += rows_[static_cast<std::size_t>(pivot_row_[p])];
    }
  }
  std::size_t rank() const { return rows_.size(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static std::size_t lowest_bit(const Gf2Vector& v) {
    auto w = v.words();
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w[i]));
    return kNone;
  }
  std::vector<std::int64_t> pivot_row_;
  std::vector<Gf2Vector> rows_;
};

constexpr std::size_t kUnitBlock = 2048;

CoboundaryImage finish_image(SettingPtr st, GaugeMask mask, std::vector<GaugeUnit> units, std::vector<Gf2Vector> rows) {
  std::vector<std::string> labels;
  labels.reserve(units.size());
  for (const auto& u : units) labels.push_back(u.label(*st));
  Gf2Matrix m(make_basis(std::move(labels)), st->correction_basis(), std::move(rows));
  CoboundaryImage out{st, mask, m, std::move(units), std::nullopt};
  out.span.emplace(std::move(m));
  if (out.span->rank() != out.rank()) throw InternalError("selected coboundary rows are not independent");
  return out;
}

template <class RowFn>
CoboundaryImage build_image(SettingPtr st, GaugeMask mask, RowFn&& rows_of) {
  const auto dim = st->correction_basis()->size();
  if (dim > kMaxCorrectionDimension)
    throw GuardrailError("correction space of " + st->describe() + " has dimension " + std::to_string(dim) +
                         ", over the limit " + std::to_string(kMaxCorrectionDimension));
  const auto all = gauge_units(*st, mask);
  BasisBuilder builder(dim);
  std::vector<GaugeUnit> kept;
  std::vector<Gf2Vector> kept_rows;
  for (std::size_t start = 0; start < all.size() && builder.rank() < dim; start += kUnitBlock) {
    std::vector<GaugeUnit> block(all.begin() + static_cast<std::ptrdiff_t>(start),
                                 all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), start + kUnitBlock)));
    auto rows = rows_of(*st, block);
    for (std::size_t i = 0; i < block.size() && builder.rank() < dim; ++i) {
      if (!builder.add(rows[i])) continue;
      kept.push_back(block[i]);
      kept_rows.push_back(std::move(rows[i]));
    }
  }
  return finish_image(std::move(st), mask, std::move(kept), std::move(kept_rows));
}

}  // namespace

std::vector<Gf2Vector> coboundary_rows(const Setting& st, const std::vector<GaugeUnit>& units) {
  std::vector<Gf2Vector> rows(units.size());
  const auto count = static_cast<std::ptrdiff_t>(units.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) rows[static_cast<std::size_t>(i)] = unit_row(st, units[static_cast<std::size_t>(i)]);
  return rows;
}

std::vector<Gf2Vector> coboundary_rows_reference(const Setting& st, const std::vector<GaugeUnit>& units) {
  std::vector<Gf2Vector> rows;
  rows.reserve(units.size());
  for (const auto& u : units) rows.push_back(coboundary(st, u.triple(st)));
  return rows;
}

CoboundaryImage coboundary_image(SettingPtr st, GaugeMask mask) {
  return build_image(std::move(st), mask, coboundary_rows);
}

CoboundaryImage coboundary_image_reference(SettingPtr st, GaugeMask mask) {
  return build_image(std::move(st), mask, coboundary_rows_reference);
}

std::optional<GaugeTriple> CoboundaryImage::certificate(const Gf2Vector& f) const {
  auto cert = span->certify(f);
  if (!cert.in_span) return std::nullopt;
  auto g = GaugeTriple::zero(*setting);
  for (auto i : cert.certificate.support()) {
    const auto& u = units[i];
    switch (u.kind) {
      case GaugeUnit::Kind::G1: g.g1.flip(setting->kset_s_index(u.a, u.s)); break;
      case GaugeUnit::Kind::G2: g.g2.at(setting->kset_s_index(u.a, u.s)).flip(u.w); break;
      case GaugeUnit::Kind::G3: g.g3.at(u.a).flip(u.s); break;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// cache

std::string image_cache_key(const Setting& st, GaugeMask mask) {
  std::string key = "image-k" + std::to_string(st.k()) + "-n" + std::to_string(st.n()) + "-m" + std::to_string(st.m()) +
                    "-core" + std::to_string(st.filter_core().bits) + "-" + mask.text();
  std::replace(key.begin(), key.end(), '+', '_');
  return key;
}

void save_image(const CoboundaryImage& image, const std::filesystem::path& dir, CacheRecord* record) {
  std::filesystem::create_directories(dir);
  const auto key = image_cache_key(*image.setting, image.mask);
  const auto bytes = encode_basis_cache(image.basis_matrix);
  write_file_bytes(dir / (key + ".gf2b"), bytes);
  std::ofstream prov(dir / (key + ".prov"), std::ios::trunc);
  if (!prov) throw ConfigError("cannot write provenance sidecar in " + dir.string());
  for (const auto& label : image.basis_matrix.row_basis()->labels()) prov << label << '\n';
  if (record) *record = {dir / (key + ".gf2b"), sha256_hex(bytes), false};
}

std::optional<CoboundaryImage> load_image(SettingPtr st, GaugeMask mask, const std::filesystem::path& dir,
                                          CacheRecord* record) {
  const auto key = image_cache_key(*st, mask);
  const auto path = dir / (key + ".gf2b");
  const auto prov_path = dir / (key + ".prov");
  if (!std::filesystem::exists(path) || !std::filesystem::exists(prov_path)) return std::nullopt;
  const auto bytes = read_file_bytes(path);
  auto m = decode_basis_cache(bytes);
  if (!same_basis(m.col_basis(), st->correction_basis()))
    throw ConfigError("cache " + path.string() + " was written for a different coordinate system");
  std::ifstream prov(prov_path);
  std::vector<GaugeUnit> units;
  std::vector<Gf2Vector> rows;
  std::string line;
  while (std::getline(prov, line)) {
    if (line.empty()) continue;
    units.push_back(GaugeUnit::parse(*st, line));
  }
  if (units.size() != m.row_count()) throw ConfigError("provenance sidecar does not match " + path.string());
  for (std::size_t i = 0; i < units.size(); ++i) {
    Gf2Vector row = m.row(i);
    Gf2Vector rebased = Gf2Vector::from_words(st->correction_basis(), {row.words().begin(), row.words().end()});
    if (!(rebased == unit_row(*st, units[i]))) throw ConfigError("cache row " + std::to_string(i) + " does not match its provenance");
    rows.push_back(std::move(rebased));
  }
  if (record) *record = {path, sha256_hex(bytes), true};
  return finish_image(std::move(st), mask, std::move(units), std::move(rows));
}

CoboundaryImage cached_coboundary_image(SettingPtr st, GaugeMask mask, const std::filesystem::path& dir,
                                        CacheRecord* record) {
  if (auto hit = load_image(st, mask, dir, record)) return std::move(*hit);
  auto image = coboundary_image(std::move(st), mask);
  save_image(image, dir, record);
  return image;
}

// ---------------------------------------------------------------------------
// isomorphism tests

IsoCertificate iso_over_identity(const CoboundaryImage& image, const Gf2Vector& f1, const Gf2Vector& f2) {
  const auto diff = f1 + f2;
  auto cert = image.span->certify(diff);
  IsoCertificate out;
  if (cert.in_span) {
    out.isomorphic = true;
    out.gauge = image.certificate(diff);
    if (!(coboundary(*image.setting, *out.gauge) == diff)) throw InternalError("gauge certificate does not recompute");
  } else {
    out.functional = std::move(cert.certificate);
  }
  return out;
}

Gf2Vector permutation_action(const Setting& st, const Permutation& pi, const Gf2Vector& f) {
  require_same_basis(f.basis(), st.correction_basis(), "permutation_action");
  if (pi.size() != st.n()) throw PreconditionError("permutation is not on I");
  Gf2Vector out(st.correction_basis());
  const auto S = st.s_count();
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    const auto target = st.k1_index(pi.apply(st.k1_sets()[u]));
    for (std::size_t s = 0; s < S; ++s)
      if (f.get(st.correction_index(u, s))) out.set(st.correction_index(target, s));
  }
  return out;
}

namespace {

std::vector<Permutation> sym_generators(int n) {
  std::vector<Permutation> gens;
  if (n < 2) return gens;
  std::vector<int> swap(static_cast<std::size_t>(n)), cycle(static_cast<std::size_t>(n));
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (int i = 0; i < n; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % n;
  gens.emplace_back(std::move(swap));
  gens.emplace_back(std::move(cycle));
  return gens;
}

std::optional<PermutationWitness> witness_for(const CoboundaryImage& image, const Permutation& pi, const Gf2Vector& f1,
                                              const Gf2Vector& f2) {
  auto moved = permutation_action(*image.setting, pi, f1);
  auto gauge = image.certificate(moved + f2);
  if (!gauge) return std::nullopt;
  return PermutationWitness{pi, std::move(*gauge)};
}

}  // namespace

std::optional<PermutationWitness> iso_with_permutation_reference(const CoboundaryImage& image, const Gf2Vector& f1,
                                                                 const Gf2Vector& f2) {
  const int n = image.setting->n();
  for (std::uint64_t r = 0; r < factorial(n); ++r)
    if (auto w = witness_for(image, Permutation::unrank(n, r), f1, f2)) return w;
  return std::nullopt;
}

std::optional<PermutationWitness> iso_with_permutation(const CoboundaryImage& image, const Gf2Vector& f1,
                                                       const Gf2Vector& f2) {
  const int n = image.setting->n();
  if (auto w = witness_for(image, Permutation::identity(n), f1, f2)) return w;
  const auto total = static_cast<std::int64_t>(factorial(n));
  std::atomic<std::int64_t> best{total};
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t r = 1; r < total; ++r) {
    if (r >= best.load(std::memory_order_relaxed)) continue;
    auto moved = permutation_action(*image.setting, Permutation::unrank(n, static_cast<std::uint64_t>(r)), f1);
    if (!image.contains(moved + f2)) continue;
    auto cur = best.load();
    while (r < cur && !best.compare_exchange_weak(cur, r)) {
    }
  }
  if (best.load() == total) return std::nullopt;
  return witness_for(image, Permutation::unrank(n, static_cast<std::uint64_t>(best.load())), f1, f2);
}

bool image_is_symmetric(const CoboundaryImage& image) {
  const Setting& st = *image.setting;
  for (const auto& pi : sym_generators(st.n()))
    for (const auto& row : image.basis_matrix.rows())
      if (!image.contains(permutation_action(st, pi, row))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// counting

namespace {

std::vector<std::size_t> free_columns(const CoboundaryImage& image) {
  std::vector<bool> pivot(image.domain_dimension());
  for (auto c : image.span->pivot_cols()) pivot[c] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < pivot.size(); ++c)
    if (!pivot[c]) out.push_back(c);
  return out;
}

std::size_t find_root(std::vector<std::uint64_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::uint64_t coset_index(const CoboundaryImage& image, const Gf2Vector& f) {
  const auto cols = free_columns(image);
  if (cols.size() > 64) throw GuardrailError("quotient dimension exceeds 64");
  const auto nf = image.span->normal_form(f);
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (nf.get(cols[j])) idx |= std::uint64_t{1} << j;
  return idx;
}

Gf2Vector coset_representative(const CoboundaryImage& image, std::uint64_t index) {
  const auto cols = free_columns(image);
  Gf2Vector out(image.setting->correction_basis());
  for (std::size_t j = 0; j < cols.size(); ++j)
    if ((index >> j) & 1u) out.set(cols[j]);
  return out;
}

ClassCount count_iso_classes(const CoboundaryImage& image, CountMode mode, bool allow_sampling, std::uint64_t seed,
                             std::size_t samples) {
  const Setting& st = *image.setting;
  const auto q = image.quotient_dimension();
  ClassCount out;
  out.mode = mode;
  out.quotient_dimension = q;
  const auto cols = free_columns(image);

  if (mode == CountMode::Identity) {
    if (q >= 64) throw GuardrailError("quotient dimension " + std::to_string(q) + " is too large to count");
    out.count = std::uint64_t{1} << q;
    for (auto c : cols) out.representatives.push_back(Gf2Vector::unit(st.correction_basis(), c));
    return out;
  }

  if (!image_is_symmetric(image))
    throw PreconditionError("gauge image is not Sym(I)-invariant, orbits of cosets are undefined");
  const auto gens = sym_generators(st.n());
  auto image_of = [&](std::uint64_t idx, const Permutation& pi) {
    return coset_index(image, permutation_action(st, pi, coset_representative(image, idx)));
  };

  if (q <= kMaxEnumeratedQuotient) {
    const std::uint64_t total = std::uint64_t{1} << q;
    std::vector<std::uint64_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    for (std::uint64_t i = 0; i < total; ++i)
      for (const auto& g : gens) {
        auto a = find_root(parent, i);
        auto b = find_root(parent, image_of(i, g));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    for (std::uint64_t i = 0; i < total; ++i)
      if (find_root(parent, i) == i) out.representatives.push_back(coset_representative(image, i));
    out.count = out.representatives.size();
    return out;
  }

  if (!allow_sampling)
    throw GuardrailError("quotient dimension " + std::to_string(q) + " is over " +
                         std::to_string(kMaxEnumeratedQuotient) + "; enable sampling to estimate orbits");
  if (q > 64) throw GuardrailError("quotient dimension exceeds 64, cannot sample cosets");
  std::mt19937_64 rng(seed);
  std::set<std::uint64_t> orbit_keys;
  for (std::size_t t = 0; t < samples; ++t) {
    std::uint64_t start = rng();
    if (q < 64) start &= (std::uint64_t{1} << q) - 1;
    std::set<std::uint64_t> seen{start};
    std::vector<std::uint64_t> frontier{start};
    while (!frontier.empty()) {
      auto cur = frontier.back();
      frontier.pop_back();
      for (const auto& g : gens) {
        auto nxt = image_of(cur, g);
        if (seen.insert(nxt).second) frontier.push_back(nxt);
      }
    }
    orbit_keys.insert(*seen.begin());
  }
  out.sampled = true;
  out.count = orbit_keys.size();
  for (auto key : orbit_keys) out.representatives.push_back(coset_representative(image, key));
  return out;
}

std::uint64_t count_orbits_burnside(const CoboundaryImage& image) {
  const Setting& st = *image.setting;
  const auto q = image.quotient_dimension();
  const auto perms = factorial(st.n());
  if (q > kMaxEnumeratedQuotient || perms * (std::uint64_t{1} << q) > 50'000'000)
    throw GuardrailError("Burnside count is too large at " + st.describe());
  std::uint64_t fixed = 0;
  for (std::uint64_t r = 0; r < perms; ++r) {
    auto pi = Permutation::unrank(st.n(), r);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << q); ++i)
      if (coset_index(image, permutation_action(st, pi, coset_representative(image, i))) == i) ++fixed;
  }
  if (fixed % perms != 0) throw InternalError("Burnside sum is not divisible by |Sym(I)|");
  return fixed / perms;
}

}  // namespace zeroless
