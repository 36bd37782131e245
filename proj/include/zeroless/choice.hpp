#pragma once

// Choices (x̄, ȳ, z̄) of "zeros" in the zeroless copies, and their
// correction functions.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "zeroless/model.hpp"

namespace zeroless {

// Membership flags: j0, j1 over k_sets, j2 over k1_sets.
struct ChoiceDomain {
  std::vector<bool> j0, j1, j2;

  static ChoiceDomain empty(const Setting& st);
  static ChoiceDomain global(const Setting& st);
  // (J, J, J*) for J given as flags over k_sets.
  static ChoiceDomain for_j(const Setting& st, const std::vector<bool>& j);
  // (J, J, J*) with J = [A]^k.
  static ChoiceDomain for_points(const Setting& st, IndexSet a);

  bool subset_of(const ChoiceDomain& o) const;
  ChoiceDomain united(const ChoiceDomain& o) const;
  bool operator==(const ChoiceDomain&) const = default;
};

// All u in k1_sets whose k+1 sub-k-sets lie in J.
std::vector<bool> j_star(const Setting& st, const std::vector<bool>& j);
// Flags over k_sets of the k-subsets of A.
std::vector<bool> k_sets_within(const Setting& st, IndexSet a);

class Choice {
 public:
  Choice(SettingPtr setting, ChoiceDomain domain);

  const Setting& setting() const { return *setting_; }
  const SettingPtr& setting_ptr() const { return setting_; }
  const ChoiceDomain& domain() const { return domain_; }
  bool is_global() const;

  // Coordinates, addressed by k_sets / k1_sets / S indices. Reading or
  // writing outside the domain throws PreconditionError.
  bool x(std::size_t v, std::size_t s) const;
  const Gf2Vector& y(std::size_t v, std::size_t s) const;
  const Gf2Vector& z(std::size_t u) const;
  void set_x(std::size_t v, std::size_t s, bool bit);
  void set_y(std::size_t v, std::size_t s, Gf2Vector h);
  void set_z(std::size_t u, Gf2Vector g);  // g must lie in G

  // Coordinatewise sum; domains must agree.
  Choice operator+(const Choice& o) const;
  bool operator==(const Choice& o) const;

 private:
  void require(bool in_domain, const char* what) const;

  SettingPtr setting_;
  ChoiceDomain domain_;
  Gf2Vector x_;                 // over kset_s_basis
  std::vector<Gf2Vector> y_;    // v*|S| + s, over h_basis
  std::vector<Gf2Vector> z_;    // per u, over s_basis
};

// The global all-zero choice.
Choice canonical_choice(const ModelHandle& M);
Choice random_choice(SettingPtr st, const ChoiceDomain& domain, std::mt19937_64& rng);

// f restricted to the (u,s) pairs where it is defined.
struct PartialCorrection {
  Gf2Vector values;          // over correction_basis; zero off the domain
  std::vector<bool> defined;  // per correction coordinate

  bool is_zero() const { return values.is_zero(); }
  bool total() const;
  // Agreement with g on the domain.
  bool agrees_with(const Gf2Vector& g) const;
};

// Eligible: u ∈ J2, u_l ∈ J0 for l < k, u_k ∈ J1.
std::vector<bool> correction_domain(const Setting& st, const ChoiceDomain& d);

// Closed form f_M(u,s) + Σ_{l<k} x(u_l,s) + y(u_k,s)(u_0) + z(u)(s).
PartialCorrection correction_of(const ModelHandle& M, const Choice& c);
// From the definition: f(u,s) = 0 iff the assembled tuple is in Q_s.
PartialCorrection correction_of_definitional(const ModelHandle& M, const Choice& c);
// Single coordinate through the definition.
bool correction_value_definitional(const ModelHandle& M, const Choice& c, std::size_t u_idx, std::size_t s_idx);

Choice restrict(const Choice& c, const ChoiceDomain& d);
// Union of two choices; throws MergeConflict naming the first coordinate
// where they disagree.
Choice merge(const Choice& a, const Choice& b);

// JSON with sorted keys: {"x": {"0,1|0": 1}, "y": {"0,1|0": ["0,1"]},
// "z": {"0,1,2": [""]}, plus k, n, m}. Domains are implied by the keys.
std::string choice_to_json(const Choice& c);
Choice choice_from_json(SettingPtr st, const std::string& text);

std::string correction_to_json(const Setting& st, const Gf2Vector& f);
Gf2Vector correction_from_json(const Setting& st, const std::string& text);

// Choices indexed by the proper subsets of {0..m2-1}. The choice at mask t
// lives over A_t = base ∪ {points[i] : i ∈ t}, with domain (J, J, J*) for
// J = [A_t]^k.
struct CompatibleSystem {
  int m2 = 0;
  IndexSet base;
  std::vector<int> points;
  std::map<std::uint32_t, Choice> choices;

  IndexSet points_of(std::uint32_t mask) const;
  // A_∅ ∪ {a_0..a_{m2-1}}.
  IndexSet target() const;
  // Throws PreconditionError if shapes are wrong or a choice is not the
  // restriction of a larger one.
  void validate() const;
};

// Builds the system of restrictions of a choice covering the target.
CompatibleSystem system_from_choice(const Choice& c, IndexSet base, std::vector<int> points);

}  // namespace zeroless
