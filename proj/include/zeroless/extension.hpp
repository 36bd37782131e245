#pragma once

// Extending partial zero-correction choices: the explicit construction for
// a set W, amalgamation of compatible systems, point-by-point full extension
// and the linear criterion they are checked against.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zeroless/choice.hpp"
#include "zeroless/classification.hpp"

namespace zeroless {

// Ordered log of decisions; one line per event, "key=value" fields.
struct ExtensionTrace {
  std::vector<std::string> lines;

  void add(std::string line) { lines.push_back(std::move(line)); }
  std::string text() const;
};

struct ExtensionOutcome {
  std::optional<Choice> choice;
  std::string path;                          // "structured", "solver" or "none"
  std::vector<std::string> inconsistency;    // equations summing to 0 = 1
  std::optional<int> stuck;                  // full_extend: element that failed
  ExtensionTrace trace;

  bool ok() const { return choice.has_value(); }
};

// A global choice with identically zero correction, built from the gauge
// certificate of f (x = g1, y = g2, z = g3), or none when f ∉ B.
std::optional<Choice> zero_choice_exists(const ModelHandle& M, GaugeMask mask = {});
std::optional<Choice> zero_choice_exists(const ModelHandle& M, const CoboundaryImage& image);

// The linear system "correction ≡ 0 on target" with fixed's coordinates held
// constant. fixed.domain() must lie inside target; fixed must already have
// zero correction on its own domain.
ExtensionOutcome solve_zero_extension(const ModelHandle& M, const Choice& fixed, const ChoiceDomain& target);

// Whether a zero-correction extension of partial to target exists.
bool linear_criterion(const ModelHandle& M, const Choice& partial, const ChoiceDomain& target);

// The domain (J, J, J*) with J = {v ∈ k_sets : W ⊄ v}.
ChoiceDomain w_avoiding_domain(const Setting& st, IndexSet w);

// partial lives on w_avoiding_domain(W) and has zero correction there.
// Tries the explicit construction first (new x-bits 0, y from the demand
// sets, z glued from the residue) and falls back to the solver.
ExtensionOutcome extend_choice_w(const ModelHandle& M, IndexSet w, const Choice& partial);

// Extends the union of the system's choices to [target]^k.
ExtensionOutcome amalgamate_system(const ModelHandle& M, const CompatibleSystem& sys);

// c lives on for_points(j1). Adds the points of j2 \ j1 one at a time, in
// descending order, each through a one-point amalgamation.
ExtensionOutcome full_extend(const ModelHandle& M, IndexSet j1, IndexSet j2, const Choice& c);

// A random choice on domain with zero correction, by drawing x and y at
// random and solving for z. None after the given number of failed draws.
std::optional<Choice> random_zero_choice(const ModelHandle& M, const ChoiceDomain& domain, std::mt19937_64& rng,
                                         int attempts = 256);

}  // namespace zeroless
