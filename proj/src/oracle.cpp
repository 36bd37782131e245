#include "zeroless/oracle.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "zeroless/error.hpp"

namespace zeroless {

namespace {

struct Occurrence {
  std::uint32_t sym;
  std::uint32_t tuple;
  std::uint32_t posmask;  // positions of the element inside the tuple
};

struct Prepared {
  const ExplicitStructure* e;
  std::vector<std::vector<Occurrence>> occ;  // per element
};

Prepared prepare(const ExplicitStructure& e) {
  Prepared p{&e, std::vector<std::vector<Occurrence>>(e.size())};
  for (std::uint32_t si = 0; si < e.symbols.size(); ++si) {
    const auto& tuples = e.symbols[si].tuples;
    for (std::uint32_t ti = 0; ti < tuples.size(); ++ti) {
      const auto& t = tuples[ti];
      for (std::size_t pos = 0; pos < t.size(); ++pos) {
        std::uint32_t mask = 0;
        bool first = true;
        for (std::size_t q = 0; q < t.size(); ++q) {
          if (t[q] != t[pos]) continue;
          if (q < pos) first = false;
          mask |= 1u << q;
        }
        if (first) p.occ[t[pos]].push_back({si, ti, mask});
      }
    }
  }
  return p;
}

std::optional<std::string> vocabulary_mismatch(const ExplicitStructure& a, const ExplicitStructure& b) {
  if (a.size() != b.size())
    return "universe sizes differ (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")";
  if (a.symbols.size() != b.symbols.size()) return "vocabularies differ in size";
  for (std::size_t i = 0; i < a.symbols.size(); ++i) {
    const auto& x = a.symbols[i];
    const auto& y = b.symbols[i];
    if (x.name != y.name || x.arity != y.arity || x.is_function != y.is_function)
      return "vocabularies differ at symbol " + x.name;
    if (x.tuples.size() != y.tuples.size()) return "symbol " + x.name + " has different fact counts";
  }
  return std::nullopt;
}

// Joint colour refinement: both structures share one signature dictionary so
// equal colours mean equal refined invariants.
struct Coloring {
  std::vector<std::uint32_t> a, b;
  std::uint32_t classes = 0;
};

std::vector<std::uint64_t> initial_signature(const Prepared& p, std::size_t e) {
  std::vector<std::uint64_t> sig;
  for (const auto& o : p.occ[e]) sig.push_back((std::uint64_t{o.sym} << 32) | o.posmask);
  std::sort(sig.begin(), sig.end());
  return sig;
}

std::vector<std::uint64_t> signature(const Prepared& p, const std::vector<std::uint32_t>& col, std::size_t e) {
  std::vector<std::vector<std::uint64_t>> parts;
  for (const auto& o : p.occ[e]) {
    const auto& t = p.e->symbols[o.sym].tuples[o.tuple];
    std::vector<std::uint64_t> part{(std::uint64_t{o.sym} << 32) | o.posmask};
    for (auto x : t) part.push_back(col[x]);
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  std::vector<std::uint64_t> sig{col[e]};
  for (auto& part : parts) {
    sig.push_back(part.size());
    sig.insert(sig.end(), part.begin(), part.end());
  }
  return sig;
}

bool balanced(const Coloring& c) {
  std::vector<std::uint32_t> ha(c.classes), hb(c.classes);
  for (auto x : c.a) ++ha[x];
  for (auto x : c.b) ++hb[x];
  return ha == hb;
}

// Refines c to the coarsest stable colouring below it. Returns false as soon
// as the two sides have different colour histograms.
bool refine(const Prepared& pa, const Prepared& pb, Coloring& c) {
  std::map<std::vector<std::uint64_t>, std::uint32_t> dict;
  auto intern = [&](std::vector<std::uint64_t> sig) {
    return dict.emplace(std::move(sig), static_cast<std::uint32_t>(dict.size())).first->second;
  };
  for (std::size_t round = 0; round < pa.e->size() + 1; ++round) {
    if (!balanced(c)) return false;
    dict.clear();
    std::vector<std::uint32_t> na(c.a.size()), nb(c.b.size());
    for (std::size_t e = 0; e < na.size(); ++e) na[e] = intern(signature(pa, c.a, e));
    for (std::size_t e = 0; e < nb.size(); ++e) nb[e] = intern(signature(pb, c.b, e));
    const auto classes = static_cast<std::uint32_t>(dict.size());
    c.a = std::move(na);
    c.b = std::move(nb);
    const bool stable = classes == c.classes;
    c.classes = classes;
    if (stable) break;
  }
  return balanced(c);
}

Coloring initial_coloring(const Prepared& pa, const Prepared& pb) {
  Coloring c;
  std::map<std::vector<std::uint64_t>, std::uint32_t> dict;
  auto intern = [&](std::vector<std::uint64_t> sig) {
    return dict.emplace(std::move(sig), static_cast<std::uint32_t>(dict.size())).first->second;
  };
  c.a.resize(pa.e->size());
  c.b.resize(pb.e->size());
  for (std::size_t e = 0; e < c.a.size(); ++e) c.a[e] = intern(initial_signature(pa, e));
  for (std::size_t e = 0; e < c.b.size(); ++e) c.b[e] = intern(initial_signature(pb, e));
  c.classes = static_cast<std::uint32_t>(dict.size());
  return c;
}

// Individualize-and-refine: pin one element of a non-trivial colour class to
// each candidate on the other side, refine, recurse. A
// discrete colouring is a candidate bijection and is checked fact by fact.
class Search {
 public:
  Search(const ExplicitStructure& a, const ExplicitStructure& b, const Prepared& pa, const Prepared& pb,
         std::uint64_t budget)
      : a_(a), b_(b), pa_(pa), pb_(pb), budget_(budget) {}

  OracleStatus run(Coloring c) {
    if (extend(c)) return OracleStatus::Found;
    return exhausted_ ? OracleStatus::Unknown : OracleStatus::None;
  }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& map() const { return map_; }

 private:
  bool extend(const Coloring& c) {
    std::vector<std::uint32_t> size(c.classes);
    for (auto x : c.a) ++size[x];
    // Prefer cells tied most tightly to what is already pinned, then small ones.
    std::vector<std::uint64_t> score(c.classes);
    std::vector<bool> seen(c.classes);
    for (std::uint32_t e = 0; e < c.a.size(); ++e) {
      const auto col = c.a[e];
      if (size[col] < 2 || seen[col]) continue;
      seen[col] = true;
      for (const auto& o : pa_.occ[e])
        for (auto x : pa_.e->symbols[o.sym].tuples[o.tuple])
          if (x != e && size[c.a[x]] == 1) {
            ++score[col];
            break;
          }
    }
    std::uint32_t cell = c.classes;
    for (std::uint32_t k = 0; k < c.classes; ++k) {
      if (size[k] < 2) continue;
      if (cell == c.classes || score[k] > score[cell] || (score[k] == score[cell] && size[k] < size[cell])) cell = k;
    }

    if (cell == c.classes) {
      std::vector<std::uint32_t> where(c.classes);
      for (std::uint32_t e = 0; e < c.b.size(); ++e) where[c.b[e]] = e;
      std::vector<std::uint32_t> m(c.a.size());
      for (std::uint32_t e = 0; e < c.a.size(); ++e) m[e] = where[c.a[e]];
      if (!verify_map(a_, b_, m)) return false;
      map_ = std::move(m);
      return true;
    }

    const auto x = static_cast<std::uint32_t>(std::find(c.a.begin(), c.a.end(), cell) - c.a.begin());
    for (std::uint32_t y = 0; y < c.b.size(); ++y) {
      if (c.b[y] != cell) continue;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return false;
      }
      Coloring next = c;
      next.a[x] = next.b[y] = next.classes++;
      if (refine(pa_, pb_, next) && extend(next)) return true;
      if (exhausted_) return false;
    }
    return false;
  }

  const ExplicitStructure& a_;
  const ExplicitStructure& b_;
  const Prepared& pa_;
  const Prepared& pb_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  std::vector<std::uint32_t> map_;
};

}  // namespace

OracleResult brute_force_iso(const ExplicitStructure& a, const ExplicitStructure& b, std::uint64_t budget) {
  OracleResult out;
  if (auto why = vocabulary_mismatch(a, b)) {
    out.reason = *why;
    return out;
  }
  const auto pa = prepare(a);
  const auto pb = prepare(b);
  auto col = initial_coloring(pa, pb);
  if (!refine(pa, pb, col)) {
    out.reason = "colour refinement separates the structures";
    return out;
  }
  Search search(a, b, pa, pb, budget);
  out.status = search.run(std::move(col));
  out.nodes = search.nodes();
  if (out.status == OracleStatus::Found) {
    out.map = search.map();
    if (!verify_map(a, b, out.map)) throw InternalError("oracle produced a map that fails verification");
  } else if (out.status == OracleStatus::None) {
    out.reason = "exhaustive search found no isomorphism";
  }
  return out;
}

bool verify_map(const ExplicitStructure& a, const ExplicitStructure& b, const std::vector<std::uint32_t>& map) {
  if (vocabulary_mismatch(a, b) || map.size() != a.size()) return false;
  std::vector<bool> hit(b.size());
  for (auto x : map) {
    if (x >= b.size() || hit[x]) return false;
    hit[x] = true;
  }
  std::vector<std::uint32_t> img;
  for (std::size_t si = 0; si < a.symbols.size(); ++si) {
    const auto& target = b.symbols[si].tuples;
    for (const auto& t : a.symbols[si].tuples) {
      img.clear();
      for (auto x : t) img.push_back(map[x]);
      if (!std::binary_search(target.begin(), target.end(), img)) return false;
    }
  }
  return true;
}

void write_map(std::ostream& out, const ExplicitStructure& a, const ExplicitStructure& b,
               const std::vector<std::uint32_t>& map) {
  for (std::size_t i = 0; i < map.size(); ++i) out << "map " << a.elements[i] << ' ' << b.elements[map[i]] << '\n';
}

// ---------------------------------------------------------------------------
// isomorphisms from choices

ChoiceIsomorphism::ChoiceIsomorphism(ModelHandle source, ModelHandle target, Choice choice)
    : source_(std::move(source)), target_(std::move(target)), choice_(std::move(choice)) {
  if (!choice_.is_global()) throw PreconditionError("the isomorphism needs a global choice");
}

Element ChoiceIsomorphism::apply(const Element& e) const {
  const Setting& st = source_.setting();
  if (auto* x = std::get_if<Z2CopyElem>(&e))
    return Z2CopyElem{x->u, x->s, x->i != choice_.x(st.k_index(x->u), st.s_index(x->s))};
  if (auto* x = std::get_if<HCopyElem>(&e))
    return HCopyElem{x->u, x->s, x->h + choice_.y(st.k_index(x->u), st.s_index(x->s))};
  if (auto* x = std::get_if<GCopyElem>(&e)) return GCopyElem{x->u, x->g + choice_.z(st.k1_index(x->u))};
  return e;
}

// Every translation has order two.
Element ChoiceIsomorphism::invert(const Element& e) const { return apply(e); }

namespace {

ChoiceIsomorphism checked_iso(const ModelHandle& N, const Choice& c, const Gf2Vector& target_f) {
  const Setting& st = N.setting();
  ChoiceIsomorphism iso(N, ModelHandle(N.setting_ptr(), target_f), c);
  const auto k = static_cast<std::size_t>(st.k());
  const auto g_rows = g_basis(st).rows();
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    const auto uset = st.k1_sets()[u];
    const auto u0 = st.k_index(st.sub_k_sets(uset)[0]);
    std::vector<Gf2Vector> hs{Gf2Vector(st.h_basis()), Gf2Vector::unit(st.h_basis(), u0)};
    std::vector<Gf2Vector> gs{Gf2Vector(st.s_basis())};
    if (!g_rows.empty()) gs.push_back(g_rows.front());
    for (std::size_t s = 0; s < st.s_count(); ++s)
      for (std::uint32_t xs = 0; xs < (1u << k); ++xs)
        for (const auto& h : hs)
          for (const auto& g : gs) {
            std::vector<bool> bits(k);
            for (std::size_t l = 0; l < k; ++l) bits[l] = (xs >> l) & 1u;
            auto t = assemble_q_tuple(st, uset, st.s_element(s), bits, h, g);
            auto flat = t.flat();
            for (auto& e : flat) e = iso.apply(e);
            auto img = QTuple::from_flat(st.k(), flat);
            if (q_s_holds(N, st.s_element(s), t) != q_s_holds(iso.target(), st.s_element(s), img))
              throw InternalError("choice isomorphism fails to preserve Q_s at " + uset.braced());
          }
  }
  return iso;
}

}  // namespace

ChoiceIsomorphism build_iso_from_choice(const ModelHandle& N, const Choice& c) {
  if (!c.is_global()) throw PreconditionError("build_iso_from_choice needs a global choice");
  return checked_iso(N, c, correction_of(N, c).values);
}

ChoiceIsomorphism build_iso_from_choice(const ModelHandle& N, const Choice& c, const Gf2Vector& f) {
  if (!c.is_global()) throw PreconditionError("build_iso_from_choice needs a global choice");
  auto corr = correction_of(N, c).values;
  if (!(corr == f)) throw PreconditionError("the choice's correction function differs from the requested target");
  return checked_iso(N, c, f);
}

std::vector<std::uint32_t> materialized_map(const ChoiceIsomorphism& iso, const ExplicitStructure& source,
                                            const ExplicitStructure& target) {
  const Setting& st = iso.source().setting();
  std::vector<std::uint32_t> out(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto img = element_name(iso.apply(parse_element(st, source.elements[i])));
    auto id = target.find_element(img);
    if (!id) throw InternalError("image element " + img + " is missing from the target structure");
    out[i] = *id;
  }
  return out;
}

namespace {

bool has_q_fact(const ExplicitStructure& e, LambdaSet s, const QTuple& t) {
  const Symbol* q = e.find_symbol("Q:" + s.braced());
  if (!q) throw ConfigError("structure has no relation Q:" + s.braced());
  std::vector<std::uint32_t> ids;
  for (const auto& x : t.flat()) {
    auto id = e.find_element(element_name(x));
    if (!id) return false;
    ids.push_back(*id);
  }
  return std::binary_search(q->tuples.begin(), q->tuples.end(), ids);
}

}  // namespace

PartialCorrection structure_correction(const ExplicitStructure& e, const Choice& c) {
  const Setting& st = c.setting();
  const auto k = static_cast<std::size_t>(st.k());
  PartialCorrection out{Gf2Vector(st.correction_basis()), correction_domain(st, c.domain())};
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (!out.defined[st.correction_index(u, 0)]) continue;
    const auto uset = st.k1_sets()[u];
    const auto sub = st.sub_k_sets(uset);
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      std::vector<bool> bits;
      for (std::size_t l = 0; l < k; ++l) bits.push_back(c.x(st.k_index(sub[l]), s));
      auto t = assemble_q_tuple(st, uset, st.s_element(s), bits, c.y(st.k_index(sub[k]), s), c.z(u));
      out.values.set(st.correction_index(u, s), !has_q_fact(e, st.s_element(s), t));
    }
  }
  return out;
}

Gf2Vector recover_correction(const ExplicitStructure& e) {
  auto st = setting_from_params(e);
  return structure_correction(e, Choice(st, ChoiceDomain::global(*st))).values;
}

VerificationReport zero_correction_implies_canonical(const ExplicitStructure& e, const Choice& c) {
  auto st = setting_from_params(e);
  if (!same_basis(st->correction_basis(), c.setting().correction_basis()))
    throw PreconditionError("choice and structure belong to different settings");
  if (!c.is_global()) throw PreconditionError("zero_correction_implies_canonical needs a global choice");
  auto corr = structure_correction(e, c);
  if (!corr.is_zero()) throw PreconditionError("the choice's correction function is not identically zero");

  ChoiceIsomorphism iso(ModelHandle(st, recover_correction(e)), ModelHandle(st), c);
  auto target = materialize(ModelHandle(st));
  VerificationReport report;
  std::vector<std::uint32_t> map;
  try {
    map = materialized_map(iso, e, target);
  } catch (const Error& err) {
    report.detail = err.what();
    return report;
  }
  report.success = verify_map(e, target, map);
  report.detail = report.success ? "choice map onto M_I preserves every fact (" + std::to_string(e.size()) + " elements)"
                                 : "choice map onto M_I fails fact preservation";
  return report;
}

}  // namespace zeroless
