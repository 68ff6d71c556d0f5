#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace nbhd {

enum class Op : std::uint8_t {
  kAtom,
  kTop,
  kBot,
  kNot,
  kAnd,
  kOr,
  kImp,
  kIff,
  kBullet,  // unknown truth
  kCirc,    // essence, abbreviates !U
  kWrong,   // false belief
  kBox,
  kAnnounce,  // [announced] body
};

int arity(Op op);

/// Immutable formula tree. Copies share structure; equality is structural.
class Formula {
 public:
  Op op() const { return node_->op; }
  /// Atom name; empty for every other operator.
  const std::string& name() const { return node_->name; }
  /// Child 0 (operand, left side, or the announced formula).
  Formula lhs() const { return Formula(node_->lhs); }
  /// Child 1 (right side or announcement body).
  Formula rhs() const { return Formula(node_->rhs); }
  Formula child(int i) const { return i == 0 ? lhs() : rhs(); }

  std::size_t hash() const { return node_->hash; }
  /// Number of nodes.
  std::size_t size() const { return node_->size; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  friend Formula make_formula(Op, std::string, const Formula*, const Formula*);

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Low-level node constructor; prefer the named builders below.
Formula make_formula(Op op, std::string name, const Formula* lhs, const Formula* rhs);

/// Throws Error(kInvalidArgument) unless the name matches [a-z][a-z0-9_]* and
/// is not a keyword.
Formula atom(std::string name);
Formula top();
Formula bot();
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula imp(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula bullet(Formula f);
Formula circ(Formula f);
Formula wrong(Formula f);
Formula box(Formula f);
Formula announce(Formula announced, Formula body);

/// Rebuilds a node of the same operator as `like` with new children.
Formula with_children(const Formula& like, const Formula* lhs, const Formula* rhs);

bool is_identifier(std::string_view s);

/// Parses the ASCII surface syntax. Throws ParseError.
Formula parse(std::string_view text);

/// Prints with minimal parentheses; parse(print(f)) == f.
std::string print(const Formula& f);

enum class DesugarTarget {
  kCoreBulletWrong,  // only atoms, true, !, &, U, W and announcements remain
  kFull,             // identity
};

Formula desugar(const Formula& f, DesugarTarget target);

/// Maximum nesting of modalities (U, O, W, K and announcements).
int modal_depth(const Formula& f);
/// Maximum nesting of announcements only.
int announcement_depth(const Formula& f);

std::set<std::string> atoms_of(const Formula& f);
bool contains_op(const Formula& f, Op op);
bool has_announcement(const Formula& f);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

}  // namespace nbhd
