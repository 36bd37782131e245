#pragma once

// I-functions, the sufficient condition (*) for non-isomorphism and its
// checkable contrapositive, the search for f with M_{I,f} ≄ M_I, and the
// finite Ramsey core of the partition argument.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zeroless/choice.hpp"
#include "zeroless/classification.hpp"

namespace zeroless {

// Every fiber's support {s : f(u,s) = 1} lies in the filter.
bool is_I_function(const Setting& st, const Gf2Vector& f);

// F1 and F2 indexed by k_sets; F2 values over the S basis.
struct ObstructionData {
  std::vector<IndexSet> f1;
  std::vector<Gf2Vector> f2;
};

// Ascending (k+1)-sets t with (α) max(t) ∉ F1(t_k) and (β)
// f_{π[t]} + Σ_{l<k} F2(t_l) ∉ G. Returns the first in lexicographic order.
std::optional<IndexSet> star_condition(const Setting& st, const Gf2Vector& f, const ObstructionData& data,
                                       const Permutation& pi);

// F1(v) = members of every w with y(v,s)(w) = 1 for some s; F2(v) = the
// bits x(v,·). c must be global with zero correction.
ObstructionData derive_obstruction_data(const ModelHandle& M, const Choice& c);

struct NonIsoWitness {
  Gf2Vector f;
  bool i_function = false;
  std::size_t quotient_dimension = 0;
  std::uint64_t identity_classes = 0;
  std::optional<std::uint64_t> full_classes;  // absent when not enumerable
};

// An f (I-functions tried first) with no π making π·f ∈ B. The answer is
// re-verified before it is returned.
std::optional<NonIsoWitness> find_noniso_f(const CoboundaryImage& image);
std::optional<NonIsoWitness> find_noniso_f(SettingPtr st, GaugeMask mask = {});

// Colourings of the k-subsets of a finite index set.
using Coloring = std::function<std::uint64_t(IndexSet)>;
using VectorColoring = std::function<Gf2Vector(IndexSet)>;

// First (k+1)-subset of e, lexicographically, whose k-subsets share a colour.
std::optional<IndexSet> monochromatic_sink(int k, IndexSet e, const Coloring& coloring);

struct ParitySink {
  IndexSet witness;
  bool parity_checked = false;  // k even
  bool parity_zero = false;     // Σ_{l<k} F2(u_l) = 0 on the witness
};

// As above with Z_2^S-valued colours; for even k the parity identity is
// evaluated on the witness.
std::optional<ParitySink> monochromatic_sink(int k, IndexSet e, const VectorColoring& coloring);

// Greedy ascending E ⊆ e0 with F1(v) below α and π[v] below α whenever
// v ∪ {α} is an ascending (k+1)-set of E with max α. None if |E| < k+2.
std::optional<IndexSet> f1_closed_subset(const Setting& st, const std::vector<IndexSet>& f1, const Permutation& pi,
                                         IndexSet e0);
bool is_f1_closed(const Setting& st, const std::vector<IndexSet>& f1, const Permutation& pi, IndexSet e);

}  // namespace zeroless
