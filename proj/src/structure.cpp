#include "zeroless/structure.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "zeroless/error.hpp"

namespace zeroless {

std::optional<std::uint32_t> ExplicitStructure::find_element(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Symbol* ExplicitStructure::find_symbol(const std::string& name) const {
  auto it = std::lower_bound(symbols.begin(), symbols.end(), name,
                             [](const Symbol& s, const std::string& n) { return s.name < n; });
  if (it != symbols.end() && it->name == name) return &*it;
  for (const auto& s : symbols)
    if (s.name == name) return &s;
  return nullptr;
}

void ExplicitStructure::normalize() {
  index_.clear();
  for (std::uint32_t i = 0; i < elements.size(); ++i)
    if (!index_.emplace(elements[i], i).second) throw ConfigError("duplicate element '" + elements[i] + "'");
  std::sort(symbols.begin(), symbols.end(), [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < symbols.size(); ++i)
    if (symbols[i].name == symbols[i - 1].name) throw ConfigError("duplicate symbol '" + symbols[i].name + "'");
  for (auto& sym : symbols) {
    const std::size_t width = static_cast<std::size_t>(sym.arity) + (sym.is_function ? 1 : 0);
    for (const auto& t : sym.tuples) {
      if (t.size() != width) throw ConfigError("fact of wrong arity for " + sym.name);
      for (auto id : t)
        if (id >= elements.size()) throw ConfigError("fact for " + sym.name + " names an unknown element");
    }
    std::sort(sym.tuples.begin(), sym.tuples.end());
    sym.tuples.erase(std::unique(sym.tuples.begin(), sym.tuples.end()), sym.tuples.end());
    if (sym.is_function)
      for (std::size_t i = 1; i < sym.tuples.size(); ++i)
        if (std::equal(sym.tuples[i].begin(), sym.tuples[i].end() - 1, sym.tuples[i - 1].begin()))
          throw ConfigError("function " + sym.name + " has two values at one argument");
  }
}

// ---------------------------------------------------------------------------
// materialize

namespace {

struct SortSizes {
  std::vector<std::pair<std::string, long double>> sorts;
  long double total = 0;
};

SortSizes sort_sizes(const Setting& st) {
  const long double ck = static_cast<long double>(binomial(st.n(), st.k()));
  const long double ck1 = static_cast<long double>(binomial(st.n(), st.k() + 1));
  const long double s = static_cast<long double>(st.s_count());
  const long double h = std::pow(2.0L, ck);
  const long double g = std::pow(2.0L, static_cast<long double>(st.g_dimension()));
  SortSizes out;
  out.sorts = {{"P0 (I)", st.n()},           {"P11 (k-sets)", ck},   {"P12 ((k+1)-sets)", ck1},
               {"P2 (H copies)", ck * s * h}, {"P3 (Z2 copies)", ck * s * 2}, {"P4 (H)", h},
               {"P5 (G copies)", ck1 * g}};
  for (auto& [_, v] : out.sorts) out.total += v;
  return out;
}

}  // namespace

std::optional<std::uint64_t> universe_size(const Setting& st) {
  auto sizes = sort_sizes(st);
  if (sizes.total >= 1.8e19L) return std::nullopt;
  return static_cast<std::uint64_t>(sizes.total);
}

ExplicitStructure materialize(const ModelHandle& M, std::uint64_t cap) {
  if (M.tau_minus_only()) throw PreconditionError("materialize needs the full model, not its reduct");
  const Setting& st = M.setting();
  {
    auto sizes = sort_sizes(st);
    if (sizes.total > static_cast<long double>(cap)) {
      auto worst = std::max_element(sizes.sorts.begin(), sizes.sorts.end(),
                                    [](const auto& a, const auto& b) { return a.second < b.second; });
      std::ostringstream msg;
      msg << "universe of " << st.describe() << " has about " << static_cast<double>(sizes.total)
          << " elements, over the cap " << cap << "; largest sort " << worst->first << " has about "
          << static_cast<double>(worst->second);
      throw GuardrailError(msg.str());
    }
  }

  const auto k = static_cast<std::size_t>(st.k());
  const std::size_t n = static_cast<std::size_t>(st.n());
  const auto& ks = st.k_sets();
  const auto& k1s = st.k1_sets();
  const std::size_t S = st.s_count();
  const std::size_t ck = ks.size();
  const std::uint64_t hcount = std::uint64_t{1} << ck;
  const auto gs = enumerate_g(st);

  auto h_of = [&](std::uint64_t mask) { return Gf2Vector::from_words(st.h_basis(), {mask}); };
  std::vector<std::uint32_t> g_index(std::size_t{1} << S, 0);
  for (std::size_t i = 0; i < gs.size(); ++i) g_index[gs[i].words().empty() ? 0 : gs[i].words()[0]] = static_cast<std::uint32_t>(i);

  const std::uint32_t off_k = static_cast<std::uint32_t>(n);
  const std::uint32_t off_k1 = off_k + static_cast<std::uint32_t>(ck);
  const std::uint32_t off_hc = off_k1 + static_cast<std::uint32_t>(k1s.size());
  const std::uint32_t off_zc = off_hc + static_cast<std::uint32_t>(ck * S * hcount);
  const std::uint32_t off_hp = off_zc + static_cast<std::uint32_t>(ck * S * 2);
  const std::uint32_t off_gc = off_hp + static_cast<std::uint32_t>(hcount);
  auto hc_id = [&](std::size_t v, std::size_t s, std::uint64_t h) {
    return off_hc + static_cast<std::uint32_t>(((v * S + s) << ck) + h);
  };
  auto zc_id = [&](std::size_t v, std::size_t s, bool i) { return off_zc + static_cast<std::uint32_t>((v * S + s) * 2 + i); };
  auto gc_id = [&](std::size_t u, std::size_t g) { return off_gc + static_cast<std::uint32_t>(u * gs.size() + g); };

  ExplicitStructure E;
  E.params = {{"k", std::to_string(st.k())}, {"n", std::to_string(st.n())}, {"m", std::to_string(st.m())}};
  if (st.filter_generators()) {
    std::string gens;
    for (auto g : *st.filter_generators()) gens += (gens.empty() ? "" : ";") + g.braced();
    E.params["filter"] = gens;
  }

  auto& names = E.elements;
  for (std::size_t a = 0; a < n; ++a) names.push_back(element_name(IndexElem{static_cast<int>(a)}));
  for (auto v : ks) names.push_back(element_name(KSetElem{v}));
  for (auto u : k1s) names.push_back(element_name(K1SetElem{u}));
  for (std::size_t v = 0; v < ck; ++v)
    for (std::size_t s = 0; s < S; ++s)
      for (std::uint64_t h = 0; h < hcount; ++h)
        names.push_back(element_name(HCopyElem{ks[v], st.s_element(s), h_of(h)}));
  for (std::size_t v = 0; v < ck; ++v)
    for (std::size_t s = 0; s < S; ++s)
      for (int i = 0; i < 2; ++i) names.push_back(element_name(Z2CopyElem{ks[v], st.s_element(s), i == 1}));
  for (std::uint64_t h = 0; h < hcount; ++h) names.push_back(element_name(HPureElem{h_of(h)}));
  for (auto u : k1s)
    for (const auto& g : gs) names.push_back(element_name(GCopyElem{u, g}));

  auto unary = [&](std::string name, std::uint32_t from, std::uint32_t to) {
    Symbol sym{std::move(name), 1, false, {}};
    for (auto i = from; i < to; ++i) sym.tuples.push_back({i});
    E.symbols.push_back(std::move(sym));
  };
  unary("P0", 0, off_k);
  unary("P11", off_k, off_k1);
  unary("P12", off_k1, off_hc);
  unary("P2", off_hc, off_zc);
  unary("P3", off_zc, off_hp);
  unary("P4", off_hp, off_gc);
  unary("P5", off_gc, static_cast<std::uint32_t>(names.size()));
  for (std::size_t s = 0; s < S; ++s) {
    Symbol p2{"P2s:" + st.s_element(s).braced(), 1, false, {}};
    Symbol p3{"P3s:" + st.s_element(s).braced(), 1, false, {}};
    for (std::size_t v = 0; v < ck; ++v) {
      for (std::uint64_t h = 0; h < hcount; ++h) p2.tuples.push_back({hc_id(v, s, h)});
      for (int i = 0; i < 2; ++i) p3.tuples.push_back({zc_id(v, s, i == 1)});
    }
    E.symbols.push_back(std::move(p2));
    E.symbols.push_back(std::move(p3));
  }

  // Projections read the ascending view of k- and (k+1)-sets.
  for (std::size_t l = 0; l <= k; ++l) {
    Symbol pi{"pi" + std::to_string(l), 1, true, {}};
    if (l < k)
      for (std::size_t v = 0; v < ck; ++v)
        pi.tuples.push_back({off_k + static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(ks[v].members()[l])});
    for (std::size_t u = 0; u < k1s.size(); ++u)
      pi.tuples.push_back({off_k1 + static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(k1s[u].members()[l])});
    E.symbols.push_back(std::move(pi));
  }
  Symbol f2{"F2", 1, true, {}}, f3{"F3", 1, true, {}}, f4{"F4", 2, true, {}}, f5{"F5", 1, true, {}};
  for (std::size_t v = 0; v < ck; ++v)
    for (std::size_t s = 0; s < S; ++s) {
      for (std::uint64_t h = 0; h < hcount; ++h) {
        f2.tuples.push_back({hc_id(v, s, h), off_k + static_cast<std::uint32_t>(v)});
        for (std::uint64_t h1 = 0; h1 < hcount; ++h1)
          f4.tuples.push_back({hc_id(v, s, h), off_hp + static_cast<std::uint32_t>(h1), hc_id(v, s, h ^ h1)});
      }
      for (int i = 0; i < 2; ++i) f3.tuples.push_back({zc_id(v, s, i == 1), off_k + static_cast<std::uint32_t>(v)});
    }
  for (std::size_t u = 0; u < k1s.size(); ++u)
    for (std::size_t g = 0; g < gs.size(); ++g) f5.tuples.push_back({gc_id(u, g), off_k1 + static_cast<std::uint32_t>(u)});
  E.symbols.push_back(std::move(f2));
  E.symbols.push_back(std::move(f3));
  E.symbols.push_back(std::move(f4));
  E.symbols.push_back(std::move(f5));
  for (std::size_t gstar = 0; gstar < gs.size(); ++gstar) {
    Symbol t{"F3g:" + g_text(st, gs[gstar]), 1, true, {}};
    for (std::size_t u = 0; u < k1s.size(); ++u)
      for (std::size_t g = 0; g < gs.size(); ++g) {
        const auto sum = gs[g].words()[0] ^ gs[gstar].words()[0];
        t.tuples.push_back({gc_id(u, g), gc_id(u, g_index[sum])});
      }
    E.symbols.push_back(std::move(t));
  }

  // Q_s: the last x-bit is forced by (ζ)_f once everything else is chosen.
  for (std::size_t s = 0; s < S; ++s) {
    Symbol q{"Q:" + st.s_element(s).braced(), static_cast<int>(3 * k + 4), false, {}};
    for (std::size_t ui = 0; ui < k1s.size(); ++ui) {
      const auto u = k1s[ui];
      const auto members = u.members();
      const auto sub = st.sub_k_sets(u);
      std::vector<std::size_t> sub_idx;
      for (auto v : sub) sub_idx.push_back(st.k_index(v));
      const bool f_us = M.f().get(st.correction_index(ui, s));
      for (std::uint64_t xs = 0; xs < (std::uint64_t{1} << (k - 1)); ++xs)
        for (std::uint64_t h = 0; h < hcount; ++h)
          for (std::size_t g = 0; g < gs.size(); ++g) {
            bool last = ((h >> sub_idx[0]) & 1u) ^ gs[g].get(s) ^ f_us ^ (std::popcount(xs) & 1);
            std::vector<std::uint32_t> t;
            t.reserve(3 * k + 4);
            for (int a : members) t.push_back(static_cast<std::uint32_t>(a));
            for (auto vi : sub_idx) t.push_back(off_k + static_cast<std::uint32_t>(vi));
            for (std::size_t l = 0; l + 1 < k; ++l) t.push_back(zc_id(sub_idx[l], s, (xs >> l) & 1u));
            t.push_back(zc_id(sub_idx[k - 1], s, last));
            t.push_back(hc_id(sub_idx[k], s, h));
            t.push_back(gc_id(ui, g));
            q.tuples.push_back(std::move(t));
          }
    }
    E.symbols.push_back(std::move(q));
  }
  E.normalize();
  return E;
}

// ---------------------------------------------------------------------------
// text format

void write_structure(std::ostream& out, const ExplicitStructure& e) {
  out << "structure zeroless 1\n";
  for (const auto& [key, value] : e.params) out << "param " << key << ' ' << value << '\n';
  for (const auto& name : e.elements) out << "element " << name << '\n';
  for (const auto& sym : e.symbols) {
    out << (sym.is_function ? "function " : "relation ") << sym.name << ' ' << sym.arity << '\n';
    for (const auto& t : sym.tuples) {
      out << "fact " << sym.name;
      for (int i = 0; i < sym.arity; ++i) out << ' ' << e.elements[t[static_cast<std::size_t>(i)]];
      if (sym.is_function) out << " -> " << e.elements[t.back()];
      out << '\n';
    }
  }
}

std::string structure_text(const ExplicitStructure& e) {
  std::ostringstream out;
  write_structure(out, e);
  return out.str();
}

ExplicitStructure read_structure(std::istream& in) {
  ExplicitStructure e;
  std::unordered_map<std::string, std::uint32_t> ids;
  std::unordered_map<std::string, std::size_t> sym_index;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  auto fail = [&](const std::string& why) -> void {
    throw ConfigError("structure line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (!header) {
      std::string tag;
      int version = 0;
      ls >> tag >> version;
      if (kind != "structure" || tag != "zeroless" || version != 1) fail("missing 'structure zeroless 1' header");
      header = true;
    } else if (kind == "param") {
      std::string key, value;
      ls >> key;
      std::getline(ls >> std::ws, value);
      e.params[key] = value;
    } else if (kind == "element") {
      std::string name;
      ls >> name;
      if (name.empty()) fail("element without a name");
      if (!ids.emplace(name, static_cast<std::uint32_t>(e.elements.size())).second) fail("duplicate element " + name);
      e.elements.push_back(name);
    } else if (kind == "relation" || kind == "function") {
      Symbol sym;
      sym.is_function = kind == "function";
      if (!(ls >> sym.name >> sym.arity) || sym.arity < 1) fail("bad symbol declaration");
      if (!sym_index.emplace(sym.name, e.symbols.size()).second) fail("duplicate symbol " + sym.name);
      e.symbols.push_back(std::move(sym));
    } else if (kind == "fact") {
      std::string name, tok;
      ls >> name;
      auto it = sym_index.find(name);
      if (it == sym_index.end()) fail("fact for undeclared symbol " + name);
      auto& sym = e.symbols[it->second];
      std::vector<std::uint32_t> t;
      bool arrow = false;
      while (ls >> tok) {
        if (tok == "->") {
          arrow = true;
          continue;
        }
        auto id = ids.find(tok);
        if (id == ids.end()) fail("unknown element " + tok);
        t.push_back(id->second);
      }
      if (arrow != sym.is_function) fail("fact shape does not match symbol kind");
      if (t.size() != static_cast<std::size_t>(sym.arity) + (sym.is_function ? 1 : 0)) fail("fact of wrong arity");
      sym.tuples.push_back(std::move(t));
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!header) throw ConfigError("empty structure file");
  e.normalize();
  return e;
}

ExplicitStructure parse_structure(const std::string& text) {
  std::istringstream in(text);
  return read_structure(in);
}

ExplicitStructure reduct_tau_minus(const ExplicitStructure& e) {
  ExplicitStructure out = e;
  std::erase_if(out.symbols, [](const Symbol& s) { return s.name.starts_with("Q:"); });
  out.normalize();
  return out;
}

SettingPtr setting_from_params(const ExplicitStructure& e) {
  auto get = [&](const char* key) {
    auto it = e.params.find(key);
    if (it == e.params.end()) throw ConfigError(std::string("structure lacks param ") + key);
    return std::stoi(it->second);
  };
  std::optional<std::vector<LambdaSet>> gens;
  if (auto it = e.params.find("filter"); it != e.params.end()) {
    gens.emplace();
    std::string_view rest = it->second;
    while (!rest.empty()) {
      auto semi = rest.find(';');
      gens->push_back(parse_lambda_set(rest.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  return make_setting(get("k"), get("n"), get("m"), std::move(gens));
}

namespace {

using NamedFacts = std::set<std::vector<std::string>>;

NamedFacts named_facts(const ExplicitStructure& e, const Symbol& sym) {
  NamedFacts out;
  for (const auto& t : sym.tuples) {
    std::vector<std::string> row;
    for (auto id : t) row.push_back(e.elements[id]);
    out.insert(std::move(row));
  }
  return out;
}

}  // namespace

bool is_strongly_standard(const ExplicitStructure& e) {
  SettingPtr st;
  try {
    st = setting_from_params(e);
  } catch (const Error&) {
    return false;
  }
  auto ref = reduct_tau_minus(materialize(ModelHandle(st)));
  auto mine = reduct_tau_minus(e);
  if (std::set<std::string>(mine.elements.begin(), mine.elements.end()) !=
      std::set<std::string>(ref.elements.begin(), ref.elements.end()))
    return false;
  if (mine.symbols.size() != ref.symbols.size()) return false;
  for (std::size_t i = 0; i < ref.symbols.size(); ++i) {
    const auto& a = mine.symbols[i];
    const auto& b = ref.symbols[i];
    if (a.name != b.name || a.arity != b.arity || a.is_function != b.is_function) return false;
    if (named_facts(mine, a) != named_facts(ref, b)) return false;
  }
  return true;
}

bool is_standard(const ExplicitStructure& e) {
  auto k_it = e.params.find("k");
  if (k_it == e.params.end()) return false;
  const int k = std::stoi(k_it->second);
  const Symbol* p0 = e.find_symbol("P0");
  const Symbol* p11 = e.find_symbol("P11");
  const Symbol* p12 = e.find_symbol("P12");
  if (!p0 || !p11 || !p12) return false;

  std::vector<int> points;
  for (const auto& t : p0->tuples) {
    const auto& name = e.elements[t[0]];
    if (!name.starts_with("I:")) return false;
    try {
      points.push_back(std::stoi(name.substr(2)));
    } catch (...) {
      return false;
    }
  }
  std::sort(points.begin(), points.end());
  if (points.empty() || points.front() < 0 || points.back() >= 32) return false;

  auto expected = [&](int r) {
    std::set<std::string> out;
    for (auto c : combinations(static_cast<int>(points.size()), r)) {
      IndexSet u;
      for (int i : c.members()) u = u.with(points[static_cast<std::size_t>(i)]);
      out.insert(u.braced());
    }
    return out;
  };
  auto payloads = [&](const Symbol* p, std::string_view prefix, std::set<std::string>& out) {
    for (const auto& t : p->tuples) {
      const auto& name = e.elements[t[0]];
      if (!name.starts_with(prefix)) return false;
      out.insert(name.substr(prefix.size()));
    }
    return true;
  };
  std::set<std::string> ks, k1s;
  if (!payloads(p11, "K:", ks) || !payloads(p12, "K1:", k1s)) return false;
  if (ks != expected(k) || k1s != expected(k + 1)) return false;

  // Natural projections: pi_l sends a set to its l-th smallest member.
  for (int l = 0; l <= k; ++l) {
    const Symbol* pi = e.find_symbol("pi" + std::to_string(l));
    if (!pi) return false;
    std::size_t expected_facts = (l < k ? ks.size() : 0) + k1s.size();
    if (pi->tuples.size() != expected_facts) return false;
    for (const auto& t : pi->tuples) {
      const auto& arg = e.elements[t[0]];
      auto brace = arg.find('{');
      if (brace == std::string::npos) return false;
      auto set = parse_index_set(arg.substr(brace));
      auto members = set.members();
      if (static_cast<std::size_t>(l) >= members.size()) return false;
      if (e.elements[t[1]] != "I:" + std::to_string(members[static_cast<std::size_t>(l)])) return false;
    }
  }
  return true;
}

ExplicitStructure relabel(const ExplicitStructure& e, const std::vector<std::uint32_t>& perm) {
  if (perm.size() != e.size()) throw PreconditionError("relabel permutation has the wrong size");
  std::vector<bool> seen(perm.size());
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) throw PreconditionError("relabel map is not a permutation");
    seen[p] = true;
  }
  ExplicitStructure out = e;
  for (auto& sym : out.symbols)
    for (auto& t : sym.tuples)
      for (auto& id : t) id = perm[id];
  out.normalize();
  return out;
}

}  // namespace zeroless
