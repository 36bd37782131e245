#include "zeroless/extension.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "zeroless/error.hpp"

namespace zeroless {

std::string ExtensionTrace::text() const {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

namespace {

std::string coord(IndexSet u, LambdaSet s) { return u.braced() + "|" + s.braced(); }

void copy_coordinates(const Choice& from, Choice& to) {
  const Setting& st = from.setting();
  const auto& d = from.domain();
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      if (d.j0[v]) to.set_x(v, s, from.x(v, s));
      if (d.j1[v]) to.set_y(v, s, from.y(v, s));
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    if (d.j2[u]) to.set_z(u, from.z(u));
}

void require_zero(const ModelHandle& M, const Choice& c, const char* what) {
  if (!correction_of(M, c).is_zero())
    throw PreconditionError(std::string(what) + ": the given choice has nonzero correction on its domain");
}

void recheck(const ModelHandle& M, const Choice& c, const char* what) {
  if (!correction_of(M, c).is_zero()) throw InternalError(std::string(what) + " produced a nonzero correction");
}

struct Unknown {
  enum Kind { X, Y, Z } kind;
  std::size_t a, s, w;
  auto operator<=>(const Unknown&) const = default;
};

std::string unknown_label(const Setting& st, const Unknown& x) {
  switch (x.kind) {
    case Unknown::X: return "x:" + coord(st.k_sets()[x.a], st.s_element(x.s));
    case Unknown::Y: return "y:" + coord(st.k_sets()[x.a], st.s_element(x.s)) + "|" + st.k_sets()[x.w].braced();
    case Unknown::Z: break;
  }
  return "z:" + coord(st.k1_sets()[x.a], st.s_element(x.s));
}

}  // namespace

ExtensionOutcome solve_zero_extension(const ModelHandle& M, const Choice& fixed, const ChoiceDomain& target) {
  const Setting& st = M.setting();
  const auto k = static_cast<std::size_t>(st.k());
  const auto& fd = fixed.domain();
  if (!fd.subset_of(target)) throw PreconditionError("the fixed choice is not inside the target domain");

  const auto eligible = correction_domain(st, target);
  const auto settled = correction_domain(st, fd);

  // One equation per newly eligible (u,s): constant + Σ unknowns = 0.
  struct Equation {
    std::size_t u, s;
    bool constant;
    std::vector<Unknown> terms;
  };
  std::vector<Equation> eqs;
  std::map<Unknown, std::size_t> index;
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) {
    if (!eligible[st.correction_index(u, 0)] || settled[st.correction_index(u, 0)]) continue;
    const auto sub = st.sub_k_sets(st.k1_sets()[u]);
    std::vector<std::size_t> idx;
    for (auto v : sub) idx.push_back(st.k_index(v));
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      Equation e{u, s, M.f().get(st.correction_index(u, s)), {}};
      for (std::size_t l = 0; l < k; ++l) {
        if (fd.j0[idx[l]])
          e.constant ^= fixed.x(idx[l], s);
        else
          e.terms.push_back({Unknown::X, idx[l], s, 0});
      }
      if (fd.j1[idx[k]])
        e.constant ^= fixed.y(idx[k], s).get(idx[0]);
      else
        e.terms.push_back({Unknown::Y, idx[k], s, idx[0]});
      if (fd.j2[u])
        e.constant ^= fixed.z(u).get(s);
      else if (!st.in_core_cone(s))
        e.terms.push_back({Unknown::Z, u, s, 0});
      for (const auto& t : e.terms) index.emplace(t, 0);
      eqs.push_back(std::move(e));
    }
  }

  ExtensionOutcome out;
  out.path = "solver";
  std::vector<std::string> col_labels;
  std::size_t next = 0;
  for (auto& [key, i] : index) {
    i = next++;
    col_labels.push_back(unknown_label(st, key));
  }

  std::optional<Gf2Vector> solution;
  std::vector<std::string> row_labels;
  for (const auto& e : eqs) row_labels.push_back(coord(st.k1_sets()[e.u], st.s_element(e.s)));
  std::ostringstream line;
  line << "solve equations=" << eqs.size() << " unknowns=" << index.size();

  if (!eqs.empty()) {
    auto cols = make_basis(col_labels);
    auto rows_basis = make_basis(row_labels);
    std::vector<Gf2Vector> rows;
    Gf2Vector rhs(rows_basis);
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      Gf2Vector row(cols);
      for (const auto& t : eqs[r].terms) row.flip(index.at(t));
      rows.push_back(std::move(row));
      rhs.set(r, eqs[r].constant);
    }
    if (index.empty()) {
      if (rhs.is_zero()) {
        solution = Gf2Vector(cols);
      } else {
        out.inconsistency.push_back(row_labels[rhs.support().front()]);
      }
    } else {
      auto res = solve(Gf2Matrix(rows_basis, cols, std::move(rows)), rhs);
      if (res.solution) {
        solution = std::move(*res.solution);
      } else {
        for (auto r : res.inconsistency->support()) out.inconsistency.push_back(row_labels[r]);
      }
    }
  } else {
    solution = Gf2Vector(make_basis({}));
  }

  if (!solution) {
    line << " result=inconsistent certificate=" << out.inconsistency.size();
    out.trace.add(line.str());
    out.path = "none";
    return out;
  }
  line << " result=solved";
  out.trace.add(line.str());

  Choice c(fixed.setting_ptr(), target);
  copy_coordinates(fixed, c);
  std::map<std::size_t, Gf2Vector> ys;
  std::map<std::size_t, Gf2Vector> zs;
  for (const auto& [key, i] : index) {
    if (!solution->get(i)) continue;
    switch (key.kind) {
      case Unknown::X: c.set_x(key.a, key.s, true); break;
      case Unknown::Y: {
        const auto slot = st.kset_s_index(key.a, key.s);
        auto it = ys.try_emplace(slot, st.h_basis()).first;
        it->second.set(key.w);
        break;
      }
      case Unknown::Z: {
        auto it = zs.try_emplace(key.a, st.s_basis()).first;
        it->second.set(key.s);
        break;
      }
    }
  }
  for (auto& [slot, h] : ys) c.set_y(slot / st.s_count(), slot % st.s_count(), std::move(h));
  for (auto& [u, g] : zs) c.set_z(u, std::move(g));
  recheck(M, c, "the extension solver");
  out.choice = std::move(c);
  return out;
}

bool linear_criterion(const ModelHandle& M, const Choice& partial, const ChoiceDomain& target) {
  return solve_zero_extension(M, partial, target).ok();
}

std::optional<Choice> zero_choice_exists(const ModelHandle& M, const CoboundaryImage& image) {
  const Setting& st = M.setting();
  auto gauge = image.certificate(M.f());
  if (!gauge) return std::nullopt;
  Choice c(M.setting_ptr(), ChoiceDomain::global(st));
  for (std::size_t v = 0; v < st.k_sets().size(); ++v)
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      c.set_x(v, s, gauge->g1.get(st.kset_s_index(v, s)));
      c.set_y(v, s, gauge->g2[st.kset_s_index(v, s)]);
    }
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u) c.set_z(u, gauge->g3[u]);
  recheck(M, c, "zero_choice_exists");
  return c;
}

std::optional<Choice> zero_choice_exists(const ModelHandle& M, GaugeMask mask) {
  return zero_choice_exists(M, coboundary_image(M.setting_ptr(), mask));
}

ChoiceDomain w_avoiding_domain(const Setting& st, IndexSet w) {
  std::vector<bool> j(st.k_sets().size());
  for (std::size_t v = 0; v < j.size(); ++v) j[v] = !w.subset_of(st.k_sets()[v]);
  return ChoiceDomain::for_j(st, j);
}

namespace {

// The explicit construction. Returns none (with a reason in the trace) when
// it does not apply.
std::optional<Choice> structured_extension(const ModelHandle& M, IndexSet w, const Choice& partial,
                                           ExtensionTrace& trace) {
  const Setting& st = M.setting();
  const auto k = static_cast<std::size_t>(st.k());
  const auto& pd = partial.domain();

  std::vector<std::size_t> gammas;  // W-containing (k+1)-sets, index order
  for (std::size_t u = 0; u < st.k1_sets().size(); ++u)
    if (w.subset_of(st.k1_sets()[u])) gammas.push_back(u);
  const auto core = st.filter_core().members();
  if (gammas.size() > core.size()) {
    trace.add("structured infeasible reason=injection need=" + std::to_string(gammas.size()) +
              " have=" + std::to_string(core.size()));
    return std::nullopt;
  }
  for (auto u : gammas) {
    const auto uk = st.sub_k_sets(st.k1_sets()[u])[k];
    if (pd.j1[st.k_index(uk)]) {
      trace.add("structured infeasible reason=fixed-y u=" + st.k1_sets()[u].braced() + " u_k=" + uk.braced());
      return std::nullopt;
    }
  }

  Choice c(partial.setting_ptr(), ChoiceDomain::global(st));
  copy_coordinates(partial, c);  // new x-bits stay 0

  std::vector<std::vector<std::size_t>> sub_idx;
  for (auto u : gammas) {
    std::vector<std::size_t> idx;
    for (auto v : st.sub_k_sets(st.k1_sets()[u])) idx.push_back(st.k_index(v));
    sub_idx.push_back(std::move(idx));
  }
  auto demand = [&](std::size_t g, std::size_t s) {
    bool t = M.f().get(st.correction_index(gammas[g], s));
    for (std::size_t l = 0; l < k; ++l) t ^= c.x(sub_idx[g][l], s);
    return t;
  };

  // y(v,s) is the characteristic function of the u_0-slots whose demand is 1
  // at an s containing the injected coordinate.
  std::map<std::size_t, Gf2Vector> ys;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const int lam = core[g];
    trace.add("structured inject u=" + st.k1_sets()[gammas[g]].braced() + " lambda=" + std::to_string(lam));
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      if (!st.s_element(s).contains(lam) || !demand(g, s)) continue;
      auto it = ys.try_emplace(st.kset_s_index(sub_idx[g][k], s), st.h_basis()).first;
      it->second.set(sub_idx[g][0]);
    }
  }
  for (auto& [slot, h] : ys) c.set_y(slot / st.s_count(), slot % st.s_count(), std::move(h));

  // Glue z from the residue; its zero set S* must lie in the filter.
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    Gf2Vector residue(st.s_basis());
    Gf2Vector zero_set(st.s_basis());
    for (std::size_t s = 0; s < st.s_count(); ++s) {
      const bool r = demand(g, s) ^ c.y(sub_idx[g][k], s).get(sub_idx[g][0]);
      residue.set(s, r);
      zero_set.set(s, !r);
    }
    if (!filter_contains(st, zero_set))
      throw InternalError("structured extension: S* outside the filter at " + st.k1_sets()[gammas[g]].braced());
    c.set_z(gammas[g], std::move(residue));
  }
  trace.add("structured glued new_k1sets=" + std::to_string(gammas.size()) + " y_slots=" + std::to_string(ys.size()));
  recheck(M, c, "the structured extension");
  return c;
}

}  // namespace

ExtensionOutcome extend_choice_w(const ModelHandle& M, IndexSet w, const Choice& partial) {
  const Setting& st = M.setting();
  if (w.size() >= st.k()) throw PreconditionError("extend_choice_w needs |W| < k");
  if (!w.subset_of(st.index_set())) throw PreconditionError("W is not a subset of I");
  if (!(partial.domain() == w_avoiding_domain(st, w)))
    throw PreconditionError("the partial choice must live on {u : W not inside u}");
  require_zero(M, partial, "extend_choice_w");

  ExtensionTrace trace;
  trace.add("extend W=" + w.braced() + " setting=" + st.describe());
  if (auto c = structured_extension(M, w, partial, trace)) {
    ExtensionOutcome out;
    out.choice = std::move(c);
    out.path = "structured";
    out.trace = std::move(trace);
    out.trace.add("result path=structured");
    return out;
  }
  auto out = solve_zero_extension(M, partial, ChoiceDomain::global(st));
  trace.lines.insert(trace.lines.end(), out.trace.lines.begin(), out.trace.lines.end());
  trace.add("result path=" + out.path);
  out.trace = std::move(trace);
  return out;
}

ExtensionOutcome amalgamate_system(const ModelHandle& M, const CompatibleSystem& sys) {
  const Setting& st = M.setting();
  sys.validate();
  if (sys.m2 >= st.k()) throw PreconditionError("amalgamation needs m2 < k");
  std::optional<Choice> united;
  for (const auto& [mask, c] : sys.choices) {
    require_zero(M, c, "amalgamate_system");
    united = united ? merge(*united, c) : c;
  }
  if (!united) throw PreconditionError("empty system");
  ExtensionTrace trace;
  trace.add("amalgamate m2=" + std::to_string(sys.m2) + " base=" + sys.base.braced() +
            " target=" + sys.target().braced() + " choices=" + std::to_string(sys.choices.size()));
  auto out = solve_zero_extension(M, *united, ChoiceDomain::for_points(st, sys.target()));
  trace.lines.insert(trace.lines.end(), out.trace.lines.begin(), out.trace.lines.end());
  out.trace = std::move(trace);
  return out;
}

ExtensionOutcome full_extend(const ModelHandle& M, IndexSet j1, IndexSet j2, const Choice& c) {
  const Setting& st = M.setting();
  if (!j1.subset_of(j2) || !j2.subset_of(st.index_set())) throw PreconditionError("full_extend needs J1 ⊆ J2 ⊆ I");
  if (!(c.domain() == ChoiceDomain::for_points(st, j1)))
    throw PreconditionError("full_extend: the choice must live on [J1]^k");
  require_zero(M, c, "full_extend");

  ExtensionOutcome out;
  out.path = "structured";
  out.trace.add("full_extend J1=" + j1.braced() + " J2=" + j2.braced());
  Choice current = c;
  IndexSet have = j1;
  auto fresh = j2.members();
  std::erase_if(fresh, [&](int b) { return j1.contains(b); });
  std::sort(fresh.rbegin(), fresh.rend());
  for (int b : fresh) {
    CompatibleSystem sys{1, have, {b}, {}};
    sys.choices.emplace(0u, current);
    auto step = amalgamate_system(M, sys);
    for (auto& l : step.trace.lines) out.trace.add("  " + l);
    if (!step.ok()) {
      out.trace.add("stuck element=" + std::to_string(b));
      out.choice.reset();
      out.path = "none";
      out.stuck = b;
      out.inconsistency = std::move(step.inconsistency);
      return out;
    }
    current = std::move(*step.choice);
    have = have.with(b);
    out.path = "solver";
  }
  out.trace.add("result path=" + out.path);
  out.choice = std::move(current);
  return out;
}

std::optional<Choice> random_zero_choice(const ModelHandle& M, const ChoiceDomain& domain, std::mt19937_64& rng,
                                         int attempts) {
  for (int i = 0; i < attempts; ++i) {
    auto draw = random_choice(M.setting_ptr(), domain, rng);
    ChoiceDomain xy = domain;
    std::fill(xy.j2.begin(), xy.j2.end(), false);
    auto res = solve_zero_extension(M, restrict(draw, xy), domain);
    if (res.ok()) return std::move(*res.choice);
  }
  return std::nullopt;
}

}  // namespace zeroless
