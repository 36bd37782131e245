#pragma once

// Lazy models M_{I,f}: elements are tagged tuples, predicates and partial
// functions are evaluated on demand, and Q_s is always recomputed from its
// defining clauses.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zeroless/gf2.hpp"
#include "zeroless/setting.hpp"

namespace zeroless {

// f : [I]^{k+1} × S → Z_2 over Setting::correction_basis().
using CorrectionFunction = Gf2Vector;

CorrectionFunction zero_correction(const Setting& setting);
CorrectionFunction random_correction(const Setting& setting, std::mt19937_64& rng);
bool correction_at(const Setting& setting, const CorrectionFunction& f, IndexSet u, LambdaSet s);
// The fiber f_u as a vector over S.
Gf2Vector correction_fiber(const Setting& setting, const CorrectionFunction& f, std::size_t u_idx);

// H elements are vectors over Setting::h_basis(), G elements over s_basis().
struct IndexElem {
  int a;
  bool operator==(const IndexElem&) const = default;
};
struct KSetElem {
  IndexSet u;
  bool operator==(const KSetElem&) const = default;
};
struct K1SetElem {
  IndexSet u;
  bool operator==(const K1SetElem&) const = default;
};
struct HCopyElem {
  IndexSet u;
  LambdaSet s;
  Gf2Vector h;
  bool operator==(const HCopyElem&) const = default;
};
struct Z2CopyElem {
  IndexSet u;
  LambdaSet s;
  bool i;
  bool operator==(const Z2CopyElem&) const = default;
};
struct HPureElem {
  Gf2Vector h;
  bool operator==(const HPureElem&) const = default;
};
struct GCopyElem {
  IndexSet u;
  Gf2Vector g;
  bool operator==(const GCopyElem&) const = default;
};

using Element = std::variant<IndexElem, KSetElem, K1SetElem, HCopyElem, Z2CopyElem, HPureElem, GCopyElem>;

// Throws PreconditionError when e is not an element of M_I for this setting
// (wrong sizes, out-of-range indices, g outside G, foreign bases).
void validate_element(const Setting& setting, const Element& e);

// Canonical names: I:0, K:{0,1}, K1:{0,1,2}, HC:{0,1}/{0}/[{0,1};{1,2}],
// ZC:{0,1}/{0}/1, HP:[{0,1}], GC:{0,1,2}/[{};{0}].
std::string element_name(const Element& e);
// Inverse of element_name; throws ConfigError on malformed names.
Element parse_element(const Setting& setting, std::string_view name);
std::string h_text(const Setting& setting, const Gf2Vector& h);  // "[{0,1};{1,2}]"
std::string g_text(const Setting& setting, const Gf2Vector& g);  // "[{};{0}]"

class ModelHandle {
 public:
  // M_{I,f}; without f this is M_I = M_{I,0}.
  explicit ModelHandle(SettingPtr setting, std::optional<CorrectionFunction> f = std::nullopt);

  const Setting& setting() const { return *setting_; }
  const SettingPtr& setting_ptr() const { return setting_; }
  const CorrectionFunction& f() const { return f_; }
  bool tau_minus_only() const { return tau_minus_only_; }

  // The τ⁻-reduct. It no longer depends on f, and Q_s is unavailable.
  ModelHandle reduct_tau_minus() const;

 private:
  SettingPtr setting_;
  CorrectionFunction f_;
  bool tau_minus_only_ = false;
};

enum class PredicateKind { P0, P11, P12, P2, P2s, P3, P3s, P4, P5 };

struct PredicateId {
  PredicateKind kind;
  LambdaSet s;  // used by P2s and P3s
  bool operator==(const PredicateId&) const = default;
};

enum class FunctionKind { Pi, F2, F3, F4, F5, F3g };

struct FunctionId {
  FunctionKind kind;
  int index = 0;       // projection index for Pi
  Gf2Vector g_star;    // translation for F3g
  bool operator==(const FunctionId&) const = default;
};

// Names as used in exports: P0 P11 P12 P2 P2s:{s} P3 P3s:{s} P4 P5, and
// pi0..pik F2 F3 F4 F5 F3g:[...]. Unknown names throw ConfigError.
PredicateId parse_predicate(const Setting& setting, std::string_view name);
FunctionId parse_function(const Setting& setting, std::string_view name);
std::string predicate_name(const PredicateId& p);
std::string function_name(const Setting& setting, const FunctionId& fn);
int function_arity(const FunctionId& fn);

bool eval_predicate(const ModelHandle& M, const PredicateId& p, const Element& e);
// nullopt is the "undefined" result of a partial function. Wrong arity
// throws PreconditionError.
std::optional<Element> eval_function(const ModelHandle& M, const FunctionId& fn, std::span<const Element> args);

// ⟨a_0..a_k, u_0..u_k, x_0..x_{k-1}, y_k, z⟩
struct QTuple {
  std::vector<Element> a;
  std::vector<Element> u;
  std::vector<Element> x;
  Element y;
  Element z;

  std::vector<Element> flat() const;
  static QTuple from_flat(int k, std::span<const Element> flat);
};

// Malformed tuples are simply not in Q_s. The a's must be strictly
// ascending, so u_k omits the maximum and u_0 the minimum.
bool q_s_holds(const ModelHandle& M, LambdaSet s, const QTuple& t);

// The tuple with the given group coordinates over the ascending (k+1)-set u.
QTuple assemble_q_tuple(const Setting& setting, IndexSet u, LambdaSet s, const std::vector<bool>& x_bits,
                        const Gf2Vector& y_h, const Gf2Vector& z_g);

}  // namespace zeroless
