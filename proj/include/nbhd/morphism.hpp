#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbhd/formula.hpp"
#include "nbhd/model.hpp"

namespace nbhd {

/// A total function from the states of `source` to the states of `target`.
struct StateMap {
  StateMap(NeighborhoodModel source, NeighborhoodModel target, std::vector<int> mapping);

  static StateMap identity(NeighborhoodModel source, NeighborhoodModel target);
  /// Parses "a:b,c:d" by state names; every source state must appear once.
  static StateMap parse(NeighborhoodModel source, NeighborhoodModel target, std::string_view spec);

  int operator()(int s) const { return mapping[static_cast<std::size_t>(s)]; }
  /// f[X]
  StateSet image(StateSet x) const;

  NeighborhoodModel source;
  NeighborhoodModel target;
  std::vector<int> mapping;
};

/// g after f; requires f.target and g.source to be the same model.
StateMap compose(const StateMap& g, const StateMap& f);

enum class MorphismKind { kBullet, kWrong };

/// The first place a morphism condition fails: either a subset X at a state
/// or an atom whose (Var) clause fails at a state.
struct MorphismWitness {
  int state = 0;
  std::optional<StateSet> subset;
  std::optional<std::string> atom;

  friend bool operator==(const MorphismWitness&, const MorphismWitness&) = default;
};

struct MorphismCheck {
  bool ok = true;
  std::optional<MorphismWitness> witness;

  explicit operator bool() const { return ok; }
};

/// (Var) for every atom in either valuation, and for every state s and every
/// X <= S: [s in X and X not in N(s)] iff [f(s) in f[X] and f[X] not in N'(f(s))].
MorphismCheck check_bullet_morphism(const StateMap& f);
/// As above with [X in N(s) and s not in X] iff [f[X] in N'(f(s)) and f(s) not in f[X]].
MorphismCheck check_w_morphism(const StateMap& f);
MorphismCheck check_morphism(const StateMap& f, MorphismKind kind);

std::string describe_witness(const StateMap& f, const MorphismWitness& w);

struct InvarianceViolation {
  std::size_t formula_index = 0;
  int state = 0;
};

struct InvarianceReport {
  std::vector<InvarianceViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Whether f belongs to the language preserved by the given morphism kind
/// (boolean connectives plus U and O, or plus W).
bool in_fragment(const Formula& f, MorphismKind kind);

/// Checks eval(M, s, phi) == eval(M', f(s), phi) for every formula and
/// source state. Violations are only ruled out for surjective maps: the
/// conditions compare f[X] with N'(f(s)), which says nothing about states
/// outside the image. Throws Error(kPrecondition) if the morphism check fails or
/// a formula lies outside the fragment.
InvarianceReport verify_invariance(const StateMap& f, MorphismKind kind,
                                   const std::vector<Formula>& formulas);

}  // namespace nbhd
