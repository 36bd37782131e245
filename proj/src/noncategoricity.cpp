#include "zeroless/noncategoricity.hpp"

#include "zeroless/error.hpp"

namespace zeroless {

bool is_I_function(const Setting& st, const Gf2Vector& f) {
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    if (!filter_contains(st, correction_fiber(st, f, u))) return false;
  return true;
}

std::optional<IndexSet> star_condition(const Setting& st, const Gf2Vector& f, const ObstructionData& data,
                                       const Permutation& pi) {
  const auto k = static_cast<std::size_t>(st.k());
  for (const auto& t : st.k1_sets()) {
    const auto sub = st.sub_k_sets(t);
    if (data.f1[st.k_index(sub[k])].contains(t.max())) continue;  // (α)
    auto sum = correction_fiber(st, f, st.k1_index(pi.apply(t)));
    for (std::size_t l = 0; l < k; ++l) sum += data.f2[st.k_index(sub[l])];
    if (!g_membership(st, sum)) return t;  // (β)
  }
  return std::nullopt;
}

ObstructionData derive_obstruction_data(const ModelHandle& M, const Choice& c) {
  const Setting& st = M.setting();
  if (!c.is_global()) throw PreconditionError("derive_obstruction_data needs a global choice");
  if (!correction_of(M, c).is_zero()) throw PreconditionError("derive_obstruction_data needs zero correction");
  ObstructionData out;
  for (std::size_t v = 0; v < st.k_sets().size(); ++v) {
    IndexSet f1;
    Gf2Vector f2(st.s_basis());
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      for (auto w : c.y(v, s).support()) f1 = f1 | st.k_sets()[w];
      f2.set(s, c.x(v, s));
    }
    out.f1.push_back(f1);
    out.f2.push_back(std::move(f2));
  }
  return out;
}

namespace {

constexpr std::size_t kMaxFullCountQuotient = 16;
constexpr std::uint64_t kMaxCosetCandidates = 4096;

}  // namespace

std::optional<NonIsoWitness> find_noniso_f(const CoboundaryImage& image) {
  const Setting& st = *image.setting;
  const auto q = image.quotient_dimension();
  if (q == 0) return std::nullopt;
  const Gf2Vector zero(st.correction_basis());

  std::vector<Gf2Vector> candidates;
  Gf2Vector ones(st.correction_basis());
  for (std::size_t i = 0; i < ones.size(); ++i) ones.set(i);
  candidates.push_back(ones);
  const auto cosets = q >= 63 ? kMaxCosetCandidates : std::min<std::uint64_t>((1ull << q) - 1, kMaxCosetCandidates);
  for (std::uint64_t i = 1; i <= cosets; ++i) candidates.push_back(coset_representative(image, i));
  std::stable_partition(candidates.begin(), candidates.end(), [&](const Gf2Vector& f) { return is_I_function(st, f); });

  for (auto& f : candidates) {
    if (iso_with_permutation(image, f, zero)) continue;
    if (iso_with_permutation_reference(image, f, zero)) throw InternalError("parallel and serial permutation search disagree");
    NonIsoWitness w{std::move(f), false, q, 0, std::nullopt};
    w.i_function = is_I_function(st, w.f);
    w.identity_classes = q < 64 ? (1ull << q) : 0;
    if (q <= kMaxFullCountQuotient) {
      try {
        w.full_classes = count_iso_classes(image, CountMode::Full).count;
      } catch (const PreconditionError&) {
      }
    }
    return w;
  }
  return std::nullopt;
}

std::optional<NonIsoWitness> find_noniso_f(SettingPtr st, GaugeMask mask) {
  return find_noniso_f(coboundary_image(std::move(st), mask));
}

namespace {

template <class Colour, class Same>
std::optional<IndexSet> first_sink(int k, IndexSet e, const std::function<Colour(IndexSet)>& coloring, Same same) {
  const auto members = e.members();
  for (const auto& pick : combinations(static_cast<int>(members.size()), k + 1)) {
    IndexSet t;
    for (int i : pick.members()) t = t.with(members[static_cast<std::size_t>(i)]);
    const auto ts = t.members();
    std::optional<Colour> first;
    bool mono = true;
    for (int drop : ts) {
      auto c = coloring(t.without(drop));
      if (!first) {
        first = std::move(c);
      } else if (!same(*first, c)) {
        mono = false;
        break;
      }
    }
    if (mono) return t;
  }
  return std::nullopt;
}

}  // namespace

std::optional<IndexSet> monochromatic_sink(int k, IndexSet e, const Coloring& coloring) {
  return first_sink<std::uint64_t>(k, e, coloring, std::equal_to<>{});
}

std::optional<ParitySink> monochromatic_sink(int k, IndexSet e, const VectorColoring& coloring) {
  auto t = first_sink<Gf2Vector>(k, e, coloring, std::equal_to<>{});
  if (!t) return std::nullopt;
  ParitySink out{*t, k % 2 == 0, false};
  if (out.parity_checked) {
    // Σ over the k subsets omitting the k smallest members, i.e. u_0..u_{k-1}.
    const auto ms = t->members();
    Gf2Vector sum = coloring(t->without(ms[0]));
    for (int l = 1; l < k; ++l) sum += coloring(t->without(ms[static_cast<std::size_t>(l)]));
    out.parity_zero = sum.is_zero();
  }
  return out;
}

namespace {

bool closed_at(const Setting& st, const std::vector<IndexSet>& f1, const Permutation& pi, IndexSet below, int alpha) {
  const IndexSet lower = IndexSet::range(alpha);
  const auto members = below.members();
  for (const auto& pick : combinations(static_cast<int>(members.size()), st.k())) {
    IndexSet v;
    for (int i : pick.members()) v = v.with(members[static_cast<std::size_t>(i)]);
    if (!f1[st.k_index(v)].subset_of(lower) || !pi.apply(v).subset_of(lower)) return false;
  }
  return true;
}

}  // namespace

std::optional<IndexSet> f1_closed_subset(const Setting& st, const std::vector<IndexSet>& f1, const Permutation& pi,
                                         IndexSet e0) {
  IndexSet e;
  for (int alpha : e0.members())
    if (closed_at(st, f1, pi, e, alpha)) e = e.with(alpha);
  if (e.size() < st.k() + 2) return std::nullopt;
  return e;
}

bool is_f1_closed(const Setting& st, const std::vector<IndexSet>& f1, const Permutation& pi, IndexSet e) {
  IndexSet below;
  for (int alpha : e.members()) {
    if (!closed_at(st, f1, pi, below, alpha)) return false;
    below = below.with(alpha);
  }
  return true;
}

}  // namespace zeroless
