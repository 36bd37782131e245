#pragma once

// Ground-truth isomorphism search on explicit structures, and the explicit
// isomorphism N → M_{I,f} induced by a global choice.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zeroless/choice.hpp"
#include "zeroless/structure.hpp"

namespace zeroless {

enum class OracleStatus { Found, None, Unknown };

struct OracleResult {
  OracleStatus status = OracleStatus::None;
  std::vector<std::uint32_t> map;  // map[i] = image of element i, when Found
  std::uint64_t nodes = 0;
  std::string reason;              // why None was decided early, if it was
};

inline constexpr std::uint64_t kDefaultOracleBudget = 5'000'000;

// Vocabulary-driven: nothing here knows about the construction. Prunes by
// iterated colour refinement, then individualizes one element at a time and
// refines again. Budget exhaustion yields Unknown, never None.
OracleResult brute_force_iso(const ExplicitStructure& a, const ExplicitStructure& b,
                             std::uint64_t budget = kDefaultOracleBudget);

// Bijectivity plus exact preservation of every relation and function graph.
bool verify_map(const ExplicitStructure& a, const ExplicitStructure& b, const std::vector<std::uint32_t>& map);

void write_map(std::ostream& out, const ExplicitStructure& a, const ExplicitStructure& b,
               const std::vector<std::uint32_t>& map);

// x ↦ x - x(v,s) on Z2 copies, h ↦ h + y(v,s) on H copies, g ↦ g + z(u) on
// G copies, identity elsewhere. Sends every chosen zero to the zero of its
// fiber in the target.
class ChoiceIsomorphism {
 public:
  ChoiceIsomorphism(ModelHandle source, ModelHandle target, Choice choice);

  const ModelHandle& source() const { return source_; }
  const ModelHandle& target() const { return target_; }
  Element apply(const Element& e) const;
  Element invert(const Element& e) const;

 private:
  ModelHandle source_;
  ModelHandle target_;
  Choice choice_;
};

// Requires c global with correction_of(N, c) = f. Checks Q_s preservation on
// a spanning family of tuples at every (u,s) and throws InternalError if it
// fails.
ChoiceIsomorphism build_iso_from_choice(const ModelHandle& N, const Choice& c);
// Same, but the target f is given and must equal the choice's correction;
// otherwise PreconditionError.
ChoiceIsomorphism build_iso_from_choice(const ModelHandle& N, const Choice& c, const Gf2Vector& f);

// The map between materializations, by element names.
std::vector<std::uint32_t> materialized_map(const ChoiceIsomorphism& iso, const ExplicitStructure& source,
                                            const ExplicitStructure& target);

// f read off an explicit strongly standard structure through the canonical
// choice: f(u,s) = 1 iff the all-zero tuple at (u,s) is missing from Q_s.
Gf2Vector recover_correction(const ExplicitStructure& e);
// Correction of a choice computed from E's Q_s facts.
PartialCorrection structure_correction(const ExplicitStructure& e, const Choice& c);

struct VerificationReport {
  bool success = false;
  std::string detail;
};

// c must be global with zero correction on E; maps E onto M_{I,0} and
// verifies the map fact by fact.
VerificationReport zero_correction_implies_canonical(const ExplicitStructure& e, const Choice& c);

}  // namespace zeroless
