#include "zeroless/choice.hpp"

#include <json.hpp>

#include "zeroless/error.hpp"

namespace zeroless {

using nlohmann::json;

ChoiceDomain ChoiceDomain::empty(const Setting& st) {
  return {std::vector<bool>(st.k_sets().size()), std::vector<bool>(st.k_sets().size()),
          std::vector<bool>(st.k1_sets().size())};
}

ChoiceDomain ChoiceDomain::global(const Setting& st) {
  return {std::vector<bool>(st.k_sets().size(), true), std::vector<bool>(st.k_sets().size(), true),
          std::vector<bool>(st.k1_sets().size(), true)};
}

ChoiceDomain ChoiceDomain::for_j(const Setting& st, const std::vector<bool>& j) {
  if (j.size() != st.k_sets().size()) throw PreconditionError("J flags have the wrong length");
  return {j, j, j_star(st, j)};
}

ChoiceDomain ChoiceDomain::for_points(const Setting& st, IndexSet a) { return for_j(st, k_sets_within(st, a)); }

bool ChoiceDomain::subset_of(const ChoiceDomain& o) const {
  auto sub = [](const std::vector<bool>& a, const std::vector<bool>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  return sub(j0, o.j0) && sub(j1, o.j1) && sub(j2, o.j2);
}

ChoiceDomain ChoiceDomain::united(const ChoiceDomain& o) const {
  auto uni = [](std::vector<bool> a, const std::vector<bool>& b) {
    if (a.size() != b.size()) throw PreconditionError("domains over different settings");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
    return a;
  };
  return {uni(j0, o.j0), uni(j1, o.j1), uni(j2, o.j2)};
}

std::vector<bool> j_star(const Setting& st, const std::vector<bool>& j) {
  if (j.size() != st.k_sets().size()) throw PreconditionError("J flags have the wrong length");
  std::vector<bool> out(st.k1_sets().size());
  for (std::size_t u = 0; u < out.size(); ++u) {
    bool all = true;
    for (auto v : st.sub_k_sets(st.k1_sets()[u])) all = all && j[st.k_index(v)];
    out[u] = all;
  }
  return out;
}

std::vector<bool> k_sets_within(const Setting& st, IndexSet a) {
  std::vector<bool> out(st.k_sets().size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = st.k_sets()[v].subset_of(a);
  return out;
}

// ---------------------------------------------------------------------------

Choice::Choice(SettingPtr setting, ChoiceDomain domain)
    : setting_(std::move(setting)), domain_(std::move(domain)), x_(setting_->kset_s_basis()) {
  const auto& st = *setting_;
  if (domain_.j0.size() != st.k_sets().size() || domain_.j1.size() != st.k_sets().size() ||
      domain_.j2.size() != st.k1_sets().size())
    throw PreconditionError("choice domain does not match the setting");
  y_.assign(st.k_sets().size() * st.s_count(), Gf2Vector(st.h_basis()));
  z_.assign(st.k1_sets().size(), Gf2Vector(st.s_basis()));
}

bool Choice::is_global() const { return domain_ == ChoiceDomain::global(*setting_); }

void Choice::require(bool in_domain, const char* what) const {
  if (!in_domain) throw PreconditionError(std::string("choice coordinate outside its domain: ") + what);
}

bool Choice::x(std::size_t v, std::size_t s) const {
  require(domain_.j0.at(v), "x");
  return x_.get(setting_->kset_s_index(v, s));
}

const Gf2Vector& Choice::y(std::size_t v, std::size_t s) const {
  require(domain_.j1.at(v), "y");
  return y_.at(setting_->kset_s_index(v, s));
}

const Gf2Vector& Choice::z(std::size_t u) const {
  require(domain_.j2.at(u), "z");
  return z_.at(u);
}

void Choice::set_x(std::size_t v, std::size_t s, bool bit) {
  require(domain_.j0.at(v), "x");
  x_.set(setting_->kset_s_index(v, s), bit);
}

void Choice::set_y(std::size_t v, std::size_t s, Gf2Vector h) {
  require(domain_.j1.at(v), "y");
  require_same_basis(h.basis(), setting_->h_basis(), "choice y");
  y_.at(setting_->kset_s_index(v, s)) = std::move(h);
}

void Choice::set_z(std::size_t u, Gf2Vector g) {
  require(domain_.j2.at(u), "z");
  require_same_basis(g.basis(), setting_->s_basis(), "choice z");
  if (!g_membership(*setting_, g)) throw PreconditionError("choice z value is not in G");
  z_.at(u) = std::move(g);
}

Choice Choice::operator+(const Choice& o) const {
  if (!(domain_ == o.domain_)) throw PreconditionError("adding choices with different domains");
  Choice out = *this;
  out.x_ += o.x_;
  for (std::size_t i = 0; i < y_.size(); ++i) out.y_[i] += o.y_[i];
  for (std::size_t i = 0; i < z_.size(); ++i) out.z_[i] += o.z_[i];
  return out;
}

bool Choice::operator==(const Choice& o) const {
  return domain_ == o.domain_ && x_ == o.x_ && y_ == o.y_ && z_ == o.z_;
}

Choice canonical_choice(const ModelHandle& M) {
  return Choice(M.setting_ptr(), ChoiceDomain::global(M.setting()));
}

Choice random_choice(SettingPtr sp, const ChoiceDomain& d, std::mt19937_64& rng) {
  const auto& st = *sp;
  Choice c(sp, d);
  const auto S = st.s_count();
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < S; ++s) {
      if (d.j0[v]) c.set_x(v, s, rng() & 1u);
      if (d.j1[v]) {
        Gf2Vector h(st.h_basis());
        for (std::size_t i = 0; i < h.size(); ++i) h.set(i, rng() & 1u);
        c.set_y(v, s, std::move(h));
      }
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (!d.j2[u]) continue;
    Gf2Vector g(st.s_basis());
    for (std::size_t s = 0; s < S; ++s)
      if (!st.in_core_cone(s)) g.set(s, rng() & 1u);
    c.set_z(u, std::move(g));
  }
  return c;
}

// ---------------------------------------------------------------------------

bool PartialCorrection::total() const {
  for (bool b : defined)
    if (!b) return false;
  return true;
}

bool PartialCorrection::agrees_with(const Gf2Vector& g) const {
  require_same_basis(values.basis(), g.basis(), "correction comparison");
  for (std::size_t i = 0; i < defined.size(); ++i)
    if (defined[i] && values.get(i) != g.get(i)) return false;
  return true;
}

std::vector<bool> correction_domain(const Setting& st, const ChoiceDomain& d) {
  const auto k = static_cast<std::size_t>(st.k());
  std::vector<bool> out(st.correction_basis()->size());
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (!d.j2[u]) continue;
    auto sub = st.sub_k_sets(st.k1_sets()[u]);
    bool ok = d.j1[st.k_index(sub[k])];
    for (std::size_t l = 0; l < k && ok; ++l) ok = d.j0[st.k_index(sub[l])];
    if (!ok) continue;
    for (std::size_t s = 0; s < st.s_count(); ++s) out[st.correction_index(u, s)] = true;
  }
  return out;
}

PartialCorrection correction_of(const ModelHandle& M, const Choice& c) {
  const Setting& st = M.setting();
  const auto k = static_cast<std::size_t>(st.k());
  PartialCorrection out{Gf2Vector(st.correction_basis()), correction_domain(st, c.domain())};
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (!out.defined[st.correction_index(u, 0)]) continue;
    auto sub = st.sub_k_sets(st.k1_sets()[u]);
    std::vector<std::size_t> idx;
    for (auto v : sub) idx.push_back(st.k_index(v));
    const auto& zu = c.z(u);
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      const auto ci = st.correction_index(u, s);
      bool v = M.f().get(ci) ^ c.y(idx[k], s).get(idx[0]) ^ zu.get(s);
      for (std::size_t l = 0; l < k; ++l) v ^= c.x(idx[l], s);
      out.values.set(ci, v);
    }
  }
  return out;
}

bool correction_value_definitional(const ModelHandle& M, const Choice& c, std::size_t u_idx, std::size_t s_idx) {
  const Setting& st = M.setting();
  const auto k = static_cast<std::size_t>(st.k());
  const auto u = st.k1_sets().at(u_idx);
  const auto s = st.s_element(s_idx);
  auto sub = st.sub_k_sets(u);
  std::vector<bool> xs;
  for (std::size_t l = 0; l < k; ++l) xs.push_back(c.x(st.k_index(sub[l]), s_idx));
  auto t = assemble_q_tuple(st, u, s, xs, c.y(st.k_index(sub[k]), s_idx), c.z(u_idx));
  return !q_s_holds(M, s, t);
}

PartialCorrection correction_of_definitional(const ModelHandle& M, const Choice& c) {
  const Setting& st = M.setting();
  PartialCorrection out{Gf2Vector(st.correction_basis()), correction_domain(st, c.domain())};
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      const auto ci = st.correction_index(u, s);
      if (out.defined[ci]) out.values.set(ci, correction_value_definitional(M, c, u, s));
    }
  return out;
}

Choice restrict(const Choice& c, const ChoiceDomain& d) {
  if (!d.subset_of(c.domain())) throw PreconditionError("restriction target is not inside the choice's domain");
  const auto& st = c.setting();
  Choice out(c.setting_ptr(), d);
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      if (d.j0[v]) out.set_x(v, s, c.x(v, s));
      if (d.j1[v]) out.set_y(v, s, c.y(v, s));
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    if (d.j2[u]) out.set_z(u, c.z(u));
  return out;
}

Choice merge(const Choice& a, const Choice& b) {
  const auto& st = a.setting();
  require_same_basis(st.correction_basis(), b.setting().correction_basis(), "merge");
  Choice out(a.setting_ptr(), a.domain().united(b.domain()));
  const auto& da = a.domain();
  const auto& db = b.domain();
  auto where = [&](const char* kind, IndexSet v, std::size_t s) {
    return std::string(kind) + " at (" + v.braced() + ", " + st.s_element(s).braced() + ")";
  };
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      if (da.j0[v] && db.j0[v] && a.x(v, s) != b.x(v, s))
        throw MergeConflict("choices disagree on " + where("x", st.k_sets()[v], s));
      if (da.j1[v] && db.j1[v] && !(a.y(v, s) == b.y(v, s)))
        throw MergeConflict("choices disagree on " + where("y", st.k_sets()[v], s));
      if (da.j0[v]) out.set_x(v, s, a.x(v, s));
      else if (db.j0[v]) out.set_x(v, s, b.x(v, s));
      if (da.j1[v]) out.set_y(v, s, a.y(v, s));
      else if (db.j1[v]) out.set_y(v, s, b.y(v, s));
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (da.j2[u] && db.j2[u] && !(a.z(u) == b.z(u)))
      throw MergeConflict("choices disagree on z at " + st.k1_sets()[u].braced());
    if (da.j2[u]) out.set_z(u, a.z(u));
    else if (db.j2[u]) out.set_z(u, b.z(u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json support_list(const Gf2Vector& v, auto&& label) {
  json out = json::array();
  for (auto i : v.support()) out.push_back(label(i));
  return out;
}

json setting_header(const Setting& st) {
  return {{"k", st.k()}, {"n", st.n()}, {"m", st.m()}};
}

void check_header(const Setting& st, const json& j) {
  if (j.value("k", -1) != st.k() || j.value("n", -1) != st.n() || j.value("m", -1) != st.m())
    throw ConfigError("serialized object belongs to a different setting than " + st.describe());
}

std::pair<std::size_t, std::size_t> parse_pair_key(const Setting& st, const std::string& key, bool k1) {
  auto bar = key.find('|');
  if (bar == std::string::npos) throw ConfigError("bad coordinate key '" + key + "'");
  auto u = parse_index_set(key.substr(0, bar));
  auto s = parse_lambda_set(key.substr(bar + 1));
  auto ui = k1 ? st.find_k1_index(u) : st.find_k_index(u);
  if (!ui || !s.subset_of(st.lambda())) throw ConfigError("coordinate key '" + key + "' is outside the setting");
  return {*ui, st.s_index(s)};
}

Gf2Vector parse_list(const Setting& st, const json& arr, bool k_sets) {
  Gf2Vector out(k_sets ? st.h_basis() : st.s_basis());
  for (const auto& item : arr) {
    auto text = item.get<std::string>();
    if (k_sets) {
      auto v = st.find_k_index(parse_index_set(text));
      if (!v) throw ConfigError("'" + text + "' is not a k-subset of I");
      out.set(*v);
    } else {
      auto s = parse_lambda_set(text);
      if (!s.subset_of(st.lambda())) throw ConfigError("'" + text + "' is not in S");
      out.set(st.s_index(s));
    }
  }
  return out;
}

std::string key_of(IndexSet u, LambdaSet s) { return u.text() + "|" + s.text(); }

}  // namespace

std::string choice_to_json(const Choice& c) {
  const auto& st = c.setting();
  const auto& d = c.domain();
  json j = setting_header(st);
  json x = json::object(), y = json::object(), z = json::object();
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      const auto key = key_of(st.k_sets()[v], st.s_element(s));
      if (d.j0[v]) x[key] = c.x(v, s) ? 1 : 0;
      if (d.j1[v]) y[key] = support_list(c.y(v, s), [&](std::size_t i) { return st.k_sets()[i].text(); });
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    if (d.j2[u]) z[st.k1_sets()[u].text()] = support_list(c.z(u), [&](std::size_t i) { return st.s_element(i).text(); });
  j["x"] = std::move(x);
  j["y"] = std::move(y);
  j["z"] = std::move(z);
  return j.dump(1);
}

Choice choice_from_json(SettingPtr sp, const std::string& text) {
  const auto& st = *sp;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("choice JSON: ") + e.what());
  }
  check_header(st, j);
  auto d = ChoiceDomain::empty(st);
  std::vector<std::size_t> x_count(st.k_sets().size()), y_count(st.k_sets().size());
  const json empty = json::object();
  const auto& jx = j.contains("x") ? j["x"] : empty;
  const auto& jy = j.contains("y") ? j["y"] : empty;
  const auto& jz = j.contains("z") ? j["z"] : empty;
  for (auto& [key, _] : jx.items()) {
    auto v = parse_pair_key(st, key, false).first;
    d.j0[v] = true;
    ++x_count[v];
  }
  for (auto& [key, _] : jy.items()) {
    auto v = parse_pair_key(st, key, false).first;
    d.j1[v] = true;
    ++y_count[v];
  }
  for (auto& [key, _] : jz.items()) {
    auto u = st.find_k1_index(parse_index_set(key));
    if (!u) throw ConfigError("'" + key + "' is not a (k+1)-subset of I");
    d.j2[*u] = true;
  }
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    if ((d.j0[v] && x_count[v] != st.s_count()) || (d.j1[v] && y_count[v] != st.s_count()))
      throw ConfigError("choice for " + st.k_sets()[v].braced() + " does not cover every s in S");
  Choice c(sp, d);
  try {
    for (auto& [key, val] : jx.items()) {
      auto [v, s] = parse_pair_key(st, key, false);
      c.set_x(v, s, val.get<int>() != 0);
    }
    for (auto& [key, val] : jy.items()) {
      auto [v, s] = parse_pair_key(st, key, false);
      c.set_y(v, s, parse_list(st, val, true));
    }
    for (auto& [key, val] : jz.items()) c.set_z(st.k1_index(parse_index_set(key)), parse_list(st, val, false));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("choice JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("choice JSON: ") + e.what());
  }
  return c;
}

std::string correction_to_json(const Setting& st, const Gf2Vector& f) {
  require_same_basis(f.basis(), st.correction_basis(), "correction_to_json");
  json j = setting_header(st);
  json vals = json::object();
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    for (std::size_t s = 0; s < st.s_count(); ++s)
      vals[key_of(st.k1_sets()[u], st.s_element(s))] = f.get(st.correction_index(u, s)) ? 1 : 0;
  j["f"] = std::move(vals);
  return j.dump(1);
}

Gf2Vector correction_from_json(const Setting& st, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("correction JSON: ") + e.what());
  }
  check_header(st, j);
  Gf2Vector f(st.correction_basis());
  if (!j.contains("f") || !j["f"].is_object()) throw ConfigError("correction JSON lacks an 'f' object");
  for (auto& [key, val] : j["f"].items()) {
    auto [u, s] = parse_pair_key(st, key, true);
    if (!val.is_number_integer()) throw ConfigError("correction value for '" + key + "' is not 0/1");
    f.set(st.correction_index(u, s), val.get<int>() != 0);
  }
  return f;
}

// ---------------------------------------------------------------------------

IndexSet CompatibleSystem::points_of(std::uint32_t mask) const {
  IndexSet out = base;
  for (std::size_t i = 0; i < points.size(); ++i)
    if ((mask >> i) & 1u) out = out.with(points[i]);
  return out;
}

IndexSet CompatibleSystem::target() const { return points_of((std::uint32_t{1} << m2) - 1); }

void CompatibleSystem::validate() const {
  if (m2 < 1 || static_cast<std::size_t>(m2) != points.size()) throw PreconditionError("system needs exactly m2 points");
  for (int p : points)
    if (base.contains(p)) throw PreconditionError("system point " + std::to_string(p) + " already lies in A_∅");
  const std::uint32_t full = (std::uint32_t{1} << m2) - 1;
  for (std::uint32_t t = 0; t < full; ++t) {
    auto it = choices.find(t);
    if (it == choices.end()) throw PreconditionError("system lacks the choice for mask " + std::to_string(t));
    if (!(it->second.domain() == ChoiceDomain::for_points(it->second.setting(), points_of(t))))
      throw PreconditionError("choice for mask " + std::to_string(t) + " is not over [A_t]^k");
  }
  for (const auto& [t, c] : choices) {
    if (t >= full) throw PreconditionError("system has a choice at a non-proper subset");
    for (std::uint32_t sub = t; sub; sub = (sub - 1) & t) {
      auto smaller = sub ^ t;  // walks every proper subset of t
      if (!(restrict(c, choices.at(smaller).domain()) == choices.at(smaller)))
        throw PreconditionError("system choices are not compatible under restriction");
    }
  }
}

CompatibleSystem system_from_choice(const Choice& c, IndexSet base, std::vector<int> points) {
  CompatibleSystem sys;
  sys.m2 = static_cast<int>(points.size());
  sys.base = base;
  sys.points = std::move(points);
  const std::uint32_t full = (std::uint32_t{1} << sys.m2) - 1;
  for (std::uint32_t t = 0; t < full; ++t)
    sys.choices.emplace(t, restrict(c, ChoiceDomain::for_points(c.setting(), sys.points_of(t))));
  return sys;
}

}  // namespace zeroless
