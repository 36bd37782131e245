#include "zeroless/model.hpp"

#include "zeroless/error.hpp"

namespace zeroless {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_k_set(const Setting& st, IndexSet u) {
  if (!st.find_k_index(u)) throw PreconditionError(u.braced() + " is not a k-subset of I");
}
void require_k1_set(const Setting& st, IndexSet u) {
  if (!st.find_k1_index(u)) throw PreconditionError(u.braced() + " is not a (k+1)-subset of I");
}
void require_s(const Setting& st, LambdaSet s) {
  if (!s.subset_of(st.lambda())) throw PreconditionError(s.braced() + " is not in S");
}

std::string s_list(const Gf2Vector& v, auto&& label) {
  std::string out = "[";
  bool first = true;
  for (auto i : v.support()) {
    if (!first) out += ';';
    first = false;
    out += label(i);
  }
  return out + "]";
}

Gf2Vector parse_g_list(const Setting& st, std::string_view text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') throw ConfigError("bad G element '" + std::string(text) + "'");
  text = text.substr(1, text.size() - 2);
  Gf2Vector g(st.s_basis());
  while (!text.empty()) {
    auto semi = text.find(';');
    auto s = parse_lambda_set(text.substr(0, semi));
    if (!s.subset_of(st.lambda())) throw ConfigError("bad G element coordinate " + s.braced());
    g.set(st.s_index(s));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return g;
}

bool is_ascending_indices(const std::vector<Element>& a, std::vector<int>& out) {
  out.clear();
  for (const auto& e : a) {
    auto* p = std::get_if<IndexElem>(&e);
    if (!p) return false;
    if (!out.empty() && p->a <= out.back()) return false;
    out.push_back(p->a);
  }
  return true;
}

}  // namespace

CorrectionFunction zero_correction(const Setting& setting) { return Gf2Vector(setting.correction_basis()); }

CorrectionFunction random_correction(const Setting& setting, std::mt19937_64& rng) {
  Gf2Vector f(setting.correction_basis());
  for (std::size_t i = 0; i < f.size(); ++i) f.set(i, rng() & 1u);
  return f;
}

bool correction_at(const Setting& setting, const CorrectionFunction& f, IndexSet u, LambdaSet s) {
  return f.get(setting.correction_index(setting.k1_index(u), setting.s_index(s)));
}

Gf2Vector correction_fiber(const Setting& setting, const CorrectionFunction& f, std::size_t u_idx) {
  Gf2Vector out(setting.s_basis());
  for (std::size_t s = 0; s < setting.s_count(); ++s)
    if (f.get(setting.correction_index(u_idx, s))) out.set(s);
  return out;
}

void validate_element(const Setting& st, const Element& e) {
  std::visit(Overloaded{
                 [&](const IndexElem& x) {
                   if (x.a < 0 || x.a >= st.n()) throw PreconditionError("index " + std::to_string(x.a) + " not in I");
                 },
                 [&](const KSetElem& x) { require_k_set(st, x.u); },
                 [&](const K1SetElem& x) { require_k1_set(st, x.u); },
                 [&](const HCopyElem& x) {
                   require_k_set(st, x.u);
                   require_s(st, x.s);
                   require_same_basis(x.h.basis(), st.h_basis(), "HCopy element");
                 },
                 [&](const Z2CopyElem& x) {
                   require_k_set(st, x.u);
                   require_s(st, x.s);
                 },
                 [&](const HPureElem& x) { require_same_basis(x.h.basis(), st.h_basis(), "HPure element"); },
                 [&](const GCopyElem& x) {
                   require_k1_set(st, x.u);
                   require_same_basis(x.g.basis(), st.s_basis(), "GCopy element");
                   if (!g_membership(st, x.g)) throw PreconditionError("GCopy coordinate is not in G");
                 },
             },
             e);
}

std::string h_text(const Setting& st, const Gf2Vector& h) {
  return s_list(h, [&](std::size_t i) { return st.k_sets()[i].braced(); });
}

std::string g_text(const Setting& st, const Gf2Vector& g) {
  return s_list(g, [&](std::size_t i) { return st.s_element(i).braced(); });
}

std::string element_name(const Element& e) {
  // Group payloads carry their own bases, whose labels are the braced sets.
  auto list = [](const Gf2Vector& v) { return s_list(v, [&](std::size_t i) { return v.basis()->label(i); }); };
  return std::visit(Overloaded{
                        [](const IndexElem& x) { return "I:" + std::to_string(x.a); },
                        [](const KSetElem& x) { return "K:" + x.u.braced(); },
                        [](const K1SetElem& x) { return "K1:" + x.u.braced(); },
                        [&](const HCopyElem& x) { return "HC:" + x.u.braced() + "/" + x.s.braced() + "/" + list(x.h); },
                        [](const Z2CopyElem& x) {
                          return "ZC:" + x.u.braced() + "/" + x.s.braced() + "/" + (x.i ? "1" : "0");
                        },
                        [&](const HPureElem& x) { return "HP:" + list(x.h); },
                        [&](const GCopyElem& x) { return "GC:" + x.u.braced() + "/" + list(x.g); },
                    },
                    e);
}

Element parse_element(const Setting& st, std::string_view name) {
  auto fail = [&]() -> Element { throw ConfigError("bad element name '" + std::string(name) + "'"); };
  auto colon = name.find(':');
  if (colon == std::string_view::npos) return fail();
  const auto tag = name.substr(0, colon);
  std::vector<std::string_view> parts;
  for (auto rest = name.substr(colon + 1);;) {
    auto slash = rest.find('/');
    parts.push_back(rest.substr(0, slash));
    if (slash == std::string_view::npos) break;
    rest.remove_prefix(slash + 1);
  }
  auto h_of = [&](std::string_view text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') fail();
    Gf2Vector h(st.h_basis());
    text = text.substr(1, text.size() - 2);
    while (!text.empty()) {
      auto semi = text.find(';');
      auto v = st.find_k_index(parse_index_set(text.substr(0, semi)));
      if (!v) fail();
      h.set(*v);
      if (semi == std::string_view::npos) break;
      text.remove_prefix(semi + 1);
    }
    return h;
  };
  Element e = IndexElem{0};
  try {
    if (tag == "I" && parts.size() == 1) {
      e = IndexElem{std::stoi(std::string(parts[0]))};
    } else if (tag == "K" && parts.size() == 1) {
      e = KSetElem{parse_index_set(parts[0])};
    } else if (tag == "K1" && parts.size() == 1) {
      e = K1SetElem{parse_index_set(parts[0])};
    } else if (tag == "HC" && parts.size() == 3) {
      e = HCopyElem{parse_index_set(parts[0]), parse_lambda_set(parts[1]), h_of(parts[2])};
    } else if (tag == "ZC" && parts.size() == 3 && (parts[2] == "0" || parts[2] == "1")) {
      e = Z2CopyElem{parse_index_set(parts[0]), parse_lambda_set(parts[1]), parts[2] == "1"};
    } else if (tag == "HP" && parts.size() == 1) {
      e = HPureElem{h_of(parts[0])};
    } else if (tag == "GC" && parts.size() == 2) {
      e = GCopyElem{parse_index_set(parts[0]), parse_g_list(st, parts[1])};
    } else {
      return fail();
    }
    validate_element(st, e);
  } catch (const PreconditionError&) {
    return fail();
  } catch (const std::logic_error&) {
    return fail();
  }
  return e;
}

// ---------------------------------------------------------------------------

ModelHandle::ModelHandle(SettingPtr setting, std::optional<CorrectionFunction> f)
    : setting_(std::move(setting)), f_(f ? std::move(*f) : zero_correction(*setting_)) {
  require_same_basis(f_.basis(), setting_->correction_basis(), "correction function");
}

ModelHandle ModelHandle::reduct_tau_minus() const {
  ModelHandle out(setting_);
  out.tau_minus_only_ = true;
  return out;
}

PredicateId parse_predicate(const Setting& st, std::string_view name) {
  auto indexed = [&](std::string_view prefix, PredicateKind kind) -> std::optional<PredicateId> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto s = parse_lambda_set(name.substr(prefix.size()));
    if (!s.subset_of(st.lambda())) throw ConfigError("predicate index " + s.braced() + " not in S");
    return PredicateId{kind, s};
  };
  if (name == "P0") return {PredicateKind::P0, {}};
  if (name == "P11") return {PredicateKind::P11, {}};
  if (name == "P12") return {PredicateKind::P12, {}};
  if (name == "P2") return {PredicateKind::P2, {}};
  if (name == "P3") return {PredicateKind::P3, {}};
  if (name == "P4") return {PredicateKind::P4, {}};
  if (name == "P5") return {PredicateKind::P5, {}};
  if (auto p = indexed("P2s:", PredicateKind::P2s)) return *p;
  if (auto p = indexed("P3s:", PredicateKind::P3s)) return *p;
  throw ConfigError("unknown predicate '" + std::string(name) + "'");
}

std::string predicate_name(const PredicateId& p) {
  switch (p.kind) {
    case PredicateKind::P0: return "P0";
    case PredicateKind::P11: return "P11";
    case PredicateKind::P12: return "P12";
    case PredicateKind::P2: return "P2";
    case PredicateKind::P2s: return "P2s:" + p.s.braced();
    case PredicateKind::P3: return "P3";
    case PredicateKind::P3s: return "P3s:" + p.s.braced();
    case PredicateKind::P4: return "P4";
    case PredicateKind::P5: return "P5";
  }
  throw InternalError("bad predicate kind");
}

FunctionId parse_function(const Setting& st, std::string_view name) {
  if (name == "F2") return {FunctionKind::F2, 0, {}};
  if (name == "F3") return {FunctionKind::F3, 0, {}};
  if (name == "F4") return {FunctionKind::F4, 0, {}};
  if (name == "F5") return {FunctionKind::F5, 0, {}};
  if (name.starts_with("pi")) {
    auto rest = name.substr(2);
    if (rest.size() == 1 && rest[0] >= '0' && rest[0] - '0' <= st.k()) return {FunctionKind::Pi, rest[0] - '0', {}};
  }
  if (name.starts_with("F3g:")) {
    auto g = parse_g_list(st, name.substr(4));
    if (!g_membership(st, g)) throw ConfigError("F3g translation is not in G");
    return {FunctionKind::F3g, 0, std::move(g)};
  }
  throw ConfigError("unknown function '" + std::string(name) + "'");
}

std::string function_name(const Setting& st, const FunctionId& fn) {
  switch (fn.kind) {
    case FunctionKind::Pi: return "pi" + std::to_string(fn.index);
    case FunctionKind::F2: return "F2";
    case FunctionKind::F3: return "F3";
    case FunctionKind::F4: return "F4";
    case FunctionKind::F5: return "F5";
    case FunctionKind::F3g: return "F3g:" + g_text(st, fn.g_star);
  }
  throw InternalError("bad function kind");
}

int function_arity(const FunctionId& fn) { return fn.kind == FunctionKind::F4 ? 2 : 1; }

bool eval_predicate(const ModelHandle& M, const PredicateId& p, const Element& e) {
  switch (p.kind) {
    case PredicateKind::P0: return std::holds_alternative<IndexElem>(e);
    case PredicateKind::P11: return std::holds_alternative<KSetElem>(e);
    case PredicateKind::P12: return std::holds_alternative<K1SetElem>(e);
    case PredicateKind::P2: return std::holds_alternative<HCopyElem>(e);
    case PredicateKind::P2s: {
      auto* x = std::get_if<HCopyElem>(&e);
      return x && x->s == p.s;
    }
    case PredicateKind::P3: return std::holds_alternative<Z2CopyElem>(e);
    case PredicateKind::P3s: {
      auto* x = std::get_if<Z2CopyElem>(&e);
      return x && x->s == p.s;
    }
    case PredicateKind::P4: return std::holds_alternative<HPureElem>(e);
    case PredicateKind::P5: return std::holds_alternative<GCopyElem>(e);
  }
  (void)M;
  throw InternalError("bad predicate kind");
}

std::optional<Element> eval_function(const ModelHandle& M, const FunctionId& fn, std::span<const Element> args) {
  if (static_cast<int>(args.size()) != function_arity(fn))
    throw PreconditionError(function_name(M.setting(), fn) + " expects " + std::to_string(function_arity(fn)) +
                            " argument(s), got " + std::to_string(args.size()));
  const Element& e = args[0];
  switch (fn.kind) {
    case FunctionKind::Pi: {
      IndexSet u;
      if (auto* x = std::get_if<KSetElem>(&e); x && fn.index < M.setting().k())
        u = x->u;
      else if (auto* y = std::get_if<K1SetElem>(&e))
        u = y->u;
      else
        return std::nullopt;
      return IndexElem{u.members()[static_cast<std::size_t>(fn.index)]};
    }
    case FunctionKind::F2:
      if (auto* x = std::get_if<HCopyElem>(&e)) return KSetElem{x->u};
      return std::nullopt;
    case FunctionKind::F3:
      if (auto* x = std::get_if<Z2CopyElem>(&e)) return KSetElem{x->u};
      return std::nullopt;
    case FunctionKind::F5:
      if (auto* x = std::get_if<GCopyElem>(&e)) return K1SetElem{x->u};
      return std::nullopt;
    case FunctionKind::F4: {
      auto* x = std::get_if<HCopyElem>(&e);
      auto* h1 = std::get_if<HPureElem>(&args[1]);
      if (!x || !h1) return std::nullopt;
      return HCopyElem{x->u, x->s, x->h + h1->h};
    }
    case FunctionKind::F3g:
      if (auto* x = std::get_if<GCopyElem>(&e)) return GCopyElem{x->u, x->g + fn.g_star};
      return std::nullopt;
  }
  throw InternalError("bad function kind");
}

std::vector<Element> QTuple::flat() const {
  std::vector<Element> out(a);
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), x.begin(), x.end());
  out.push_back(y);
  out.push_back(z);
  return out;
}

QTuple QTuple::from_flat(int k, std::span<const Element> flat) {
  const auto kk = static_cast<std::size_t>(k);
  if (flat.size() != 3 * kk + 4) throw PreconditionError("Q tuple must have 3k+4 entries");
  QTuple t{{flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(kk + 1)},
           {flat.begin() + static_cast<std::ptrdiff_t>(kk + 1), flat.begin() + static_cast<std::ptrdiff_t>(2 * kk + 2)},
           {flat.begin() + static_cast<std::ptrdiff_t>(2 * kk + 2), flat.begin() + static_cast<std::ptrdiff_t>(3 * kk + 2)},
           flat[3 * kk + 2],
           flat[3 * kk + 3]};
  return t;
}

bool q_s_holds(const ModelHandle& M, LambdaSet s, const QTuple& t) {
  if (M.tau_minus_only()) throw PreconditionError("Q_s is not part of the τ⁻-reduct");
  const Setting& st = M.setting();
  const auto k = static_cast<std::size_t>(st.k());
  if (!s.subset_of(st.lambda())) return false;
  if (t.a.size() != k + 1 || t.u.size() != k + 1 || t.x.size() != k) return false;

  // (α)
  std::vector<int> a;
  if (!is_ascending_indices(t.a, a) || a.back() >= st.n()) return false;
  IndexSet u;
  for (int v : a) u = u.with(v);
  const auto sub = st.sub_k_sets(u);

  // (β)
  for (std::size_t l = 0; l <= k; ++l) {
    auto* ul = std::get_if<KSetElem>(&t.u[l]);
    if (!ul || ul->u != sub[l]) return false;
  }
  // (γ)
  auto* y = std::get_if<HCopyElem>(&t.y);
  if (!y || y->u != sub[k] || y->s != s || !same_basis(y->h.basis(), st.h_basis())) return false;
  // (δ)
  bool lhs = false;
  for (std::size_t l = 0; l < k; ++l) {
    auto* xl = std::get_if<Z2CopyElem>(&t.x[l]);
    if (!xl || xl->u != sub[l] || xl->s != s) return false;
    lhs ^= xl->i;
  }
  // (ε)
  auto* z = std::get_if<GCopyElem>(&t.z);
  if (!z || z->u != u || !same_basis(z->g.basis(), st.s_basis()) || !g_membership(st, z->g)) return false;

  // (ζ)_f
  const auto s_idx = st.s_index(s);
  bool rhs = y->h.get(st.k_index(sub[0])) ^ z->g.get(s_idx) ^
             M.f().get(st.correction_index(st.k1_index(u), s_idx));
  return lhs == rhs;
}

QTuple assemble_q_tuple(const Setting& st, IndexSet u, LambdaSet s, const std::vector<bool>& x_bits, const Gf2Vector& y_h,
                        const Gf2Vector& z_g) {
  const auto k = static_cast<std::size_t>(st.k());
  if (x_bits.size() != k) throw PreconditionError("assemble_q_tuple needs k x-bits");
  const auto sub = st.sub_k_sets(u);
  QTuple t{{}, {}, {}, HCopyElem{sub[k], s, y_h}, GCopyElem{u, z_g}};
  for (int a : u.members()) t.a.emplace_back(IndexElem{a});
  for (auto v : sub) t.u.emplace_back(KSetElem{v});
  for (std::size_t l = 0; l < k; ++l) t.x.emplace_back(Z2CopyElem{sub[l], s, x_bits[l]});
  return t;
}

}  // namespace zeroless
