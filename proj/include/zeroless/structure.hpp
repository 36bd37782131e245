#pragma once

// Fully materialized finite structures. The representation is generic:
// named elements plus named relations and partial functions, so the oracle
// can work on anything in this shape.
//
// Text format, one record per line:
//   structure zeroless 1
//   param <key> <value>
//   element <name>
//   relation <name> <arity>
//   function <name> <arity>
//   fact <symbol> <arg>...            (relations)
//   fact <symbol> <arg>... -> <value> (functions)
// Facts follow the declaration of their symbol.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "zeroless/model.hpp"

namespace zeroless {

struct Symbol {
  std::string name;
  int arity = 0;  // argument count; function tuples carry one extra value slot
  bool is_function = false;
  std::vector<std::vector<std::uint32_t>> tuples;  // sorted, distinct
};

class ExplicitStructure {
 public:
  std::map<std::string, std::string> params;
  std::vector<std::string> elements;
  std::vector<Symbol> symbols;  // sorted by name after normalize()

  std::size_t size() const { return elements.size(); }
  std::optional<std::uint32_t> find_element(const std::string& name) const;
  const Symbol* find_symbol(const std::string& name) const;

  // Sorts symbols by name and tuples lexicographically, drops duplicates,
  // rebuilds the name index. Throws ConfigError on duplicate names, bad
  // element ids, or functions with two values at one argument tuple.
  void normalize();

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline constexpr std::uint64_t kDefaultMaterializeCap = 1'000'000;

// Universe size n + C(n,k) + C(n,k+1) + C(n,k)·|S|·2^{C(n,k)} + C(n,k)·|S|·2
// + 2^{C(n,k)} + C(n,k+1)·|G|, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> universe_size(const Setting& setting);

// Throws GuardrailError naming the largest sort when the universe exceeds cap.
ExplicitStructure materialize(const ModelHandle& M, std::uint64_t cap = kDefaultMaterializeCap);

void write_structure(std::ostream& out, const ExplicitStructure& e);
std::string structure_text(const ExplicitStructure& e);
ExplicitStructure read_structure(std::istream& in);
ExplicitStructure parse_structure(const std::string& text);

// Drops every Q_s relation.
ExplicitStructure reduct_tau_minus(const ExplicitStructure& e);

// The setting recorded in the structure's params (k, n, m, optional filter).
SettingPtr setting_from_params(const ExplicitStructure& e);

// τ⁻-part literally equal (same element names, same facts) to the canonical
// construction over the same setting.
bool is_strongly_standard(const ExplicitStructure& e);
// P11 and P12 are literally the k- and (k+1)-subsets of P0 and the
// projections are the natural ones.
bool is_standard(const ExplicitStructure& e);

// Element i of e becomes element perm[i]; the name list stays in place, so
// names end up attached to different roles. i ↦ perm[i] is an isomorphism.
ExplicitStructure relabel(const ExplicitStructure& e, const std::vector<std::uint32_t>& perm);

}  // namespace zeroless
