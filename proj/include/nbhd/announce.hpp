#pragma once

#include <string>
#include <vector>

#include "nbhd/formula.hpp"

namespace nbhd {

/// One rewrite: the subformula at `position` (child indices from the root)
/// was `before` and became `after`.
struct RewriteStep {
  std::string axiom;
  std::vector<int> position;
  Formula before;
  Formula after;
};

struct Reduction {
  Formula result;
  std::vector<RewriteStep> trace;
};

/// Removes every announcement with the reduction axioms
///   AP  [a]p        ==> a -> p
///   AN  [a]!f       ==> a -> ![a]f
///   AC  [a](f & g)  ==> [a]f & [a]g
///   AA  [a][b]f     ==> [a & [a]b]f
///   AU  [a]U f      ==> a -> U [a]f
///   AW  [a]W f      ==> a -> W [a]f
/// plus [a]true ==> true and [a]false ==> a -> false. The outermost
/// announcement (first in preorder) is rewritten at each step.
///
/// The input may use atoms, true, false, !, &, U, W and announcements;
/// anything else raises Error(kInvalidArgument) (desugar first).
Reduction reduce(const Formula& f);

std::string format_position(const std::vector<int>& position);

/// Numbered lines "k. <axiom> @ <position>: <before> ==> <after>".
std::string format_trace(const std::vector<RewriteStep>& trace);

/// Replaces the subformula at `position`.
Formula replace_at(const Formula& f, const std::vector<int>& position, const Formula& with);
Formula subformula_at(const Formula& f, const std::vector<int>& position);

/// Applies the recorded steps in order, checking each `before` matches.
Formula replay(const Formula& input, const std::vector<RewriteStep>& trace);

/// Display-only cleanup: !!f ==> f and !(a & !b) ==> a -> b.
Formula simplify(const Formula& f);

}  // namespace nbhd
