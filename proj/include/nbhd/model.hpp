#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbhd {

/// Largest supported state universe; a StateSet fits one 32-bit word.
inline constexpr int kMaxStates = 16;

/// Subset of {0, ..., universe_size - 1}; bit i is state i.
class StateSet {
 public:
  StateSet() = default;
  StateSet(int universe_size, std::uint32_t bits);

  static StateSet empty(int n) { return StateSet(n, 0); }
  static StateSet full(int n) { return StateSet(n, full_bits(n)); }
  static StateSet singleton(int n, int i) { return StateSet(n, 1u << i); }

  static constexpr std::uint32_t full_bits(int n) {
    return n >= 32 ? ~0u : (1u << n) - 1u;
  }

  int universe_size() const { return n_; }
  std::uint32_t bits() const { return bits_; }
  bool contains(int i) const { return (bits_ >> i) & 1u; }
  int size() const { return std::popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  bool subset_of(StateSet other) const { return (bits_ & ~other.bits_) == 0; }

  StateSet complement() const { return StateSet(n_, ~bits_ & full_bits(n_)); }
  friend StateSet operator&(StateSet a, StateSet b) { return StateSet(a.n_, a.bits_ & b.bits_); }
  friend StateSet operator|(StateSet a, StateSet b) { return StateSet(a.n_, a.bits_ | b.bits_); }

  friend bool operator==(StateSet a, StateSet b) = default;
  /// Canonical order: by bit-vector value.
  friend std::strong_ordering operator<=>(StateSet a, StateSet b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  int n_ = 0;
  std::uint32_t bits_ = 0;
};

/// The function N: for each state a family of subsets, stored as a bitset
/// over the powerset (bit X of state s's block is set iff X is in N(s)).
/// Families are therefore duplicate-free and iterate in canonical order.
class NeighborhoodFunction {
 public:
  NeighborhoodFunction() = default;
  explicit NeighborhoodFunction(int n);

  int size() const { return n_; }
  int words_per_state() const { return words_per_state_; }

  bool contains(int s, std::uint32_t x) const {
    return (words_[static_cast<std::size_t>(s) * words_per_state_ + (x >> 6)] >> (x & 63)) & 1u;
  }
  bool contains(int s, StateSet x) const { return contains(s, x.bits()); }
  void insert(int s, std::uint32_t x) {
    words_[static_cast<std::size_t>(s) * words_per_state_ + (x >> 6)] |= std::uint64_t{1} << (x & 63);
  }
  void insert(int s, StateSet x) { insert(s, x.bits()); }
  void erase(int s, std::uint32_t x) {
    words_[static_cast<std::size_t>(s) * words_per_state_ + (x >> 6)] &= ~(std::uint64_t{1} << (x & 63));
  }
  void erase(int s, StateSet x) { erase(s, x.bits()); }

  /// Members of N(s) in ascending bit-vector order.
  std::vector<StateSet> family(int s) const;
  std::size_t family_size(int s) const;

  /// Calls fn(std::uint32_t x) for every X in N(s), ascending.
  template <typename Fn>
  void for_each(int s, Fn&& fn) const {
    auto block = family_words(s);
    for (std::size_t w = 0; w < block.size(); ++w) {
      std::uint64_t word = block[w];
      while (word != 0) {
        int b = std::countr_zero(word);
        fn(static_cast<std::uint32_t>(w * 64 + b));
        word &= word - 1;
      }
    }
  }

  std::span<const std::uint64_t> family_words(int s) const {
    return {words_.data() + static_cast<std::size_t>(s) * words_per_state_,
            static_cast<std::size_t>(words_per_state_)};
  }
  std::span<std::uint64_t> family_words(int s) {
    return {words_.data() + static_cast<std::size_t>(s) * words_per_state_,
            static_cast<std::size_t>(words_per_state_)};
  }

  friend bool operator==(const NeighborhoodFunction&, const NeighborhoodFunction&) = default;

 private:
  int n_ = 0;
  int words_per_state_ = 0;
  std::vector<std::uint64_t> words_;
};

class NeighborhoodFrame {
 public:
  /// Frame with the given state names and empty neighborhoods. Names must be
  /// unique and nonempty; 1 <= count <= kMaxStates.
  explicit NeighborhoodFrame(std::vector<std::string> states);
  NeighborhoodFrame(std::vector<std::string> states, NeighborhoodFunction nbhd);

  /// States named s, t, u, v, w, x, y, z, s8, ..., s15.
  static NeighborhoodFrame with_default_names(int n);
  static std::string default_state_name(int i);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int i) const { return states_[static_cast<std::size_t>(i)]; }
  std::optional<int> index_of(std::string_view name) const;

  const NeighborhoodFunction& nbhd() const { return nbhd_; }
  NeighborhoodFunction& nbhd() { return nbhd_; }

  StateSet full() const { return StateSet::full(size()); }
  StateSet make_set(std::uint32_t bits) const { return StateSet(size(), bits); }

  friend bool operator==(const NeighborhoodFrame&, const NeighborhoodFrame&) = default;

 private:
  std::vector<std::string> states_;
  NeighborhoodFunction nbhd_;
};

/// Atoms absent from the valuation denote the empty set.
class NeighborhoodModel {
 public:
  explicit NeighborhoodModel(NeighborhoodFrame frame,
                             std::map<std::string, StateSet> valuation = {});

  const NeighborhoodFrame& frame() const { return frame_; }
  NeighborhoodFrame& frame() { return frame_; }
  const NeighborhoodFunction& nbhd() const { return frame_.nbhd(); }
  int size() const { return frame_.size(); }

  const std::map<std::string, StateSet>& valuation() const { return valuation_; }
  StateSet valuation_of(const std::string& atom) const;
  void set_valuation(const std::string& atom, StateSet value);

  friend bool operator==(const NeighborhoodModel&, const NeighborhoodModel&) = default;

 private:
  NeighborhoodFrame frame_;
  std::map<std::string, StateSet> valuation_;
};

struct PointedModel {
  PointedModel(NeighborhoodModel m, int p);

  NeighborhoodModel model;
  int point;

  friend bool operator==(const PointedModel&, const PointedModel&) = default;
};

// ---------------------------------------------------------------------------
// Frame properties

enum class FrameProperty {
  kMonotone,          // m: closed under supersets
  kIntersections,     // c: closed under binary intersections
  kUnit,              // n: contains the full state set
  kCore,              // r: contains the intersection of the family
  kFilter,            // m + c + n
  kNegSupplemented,   // X in N(s), X <= Y, s not in Y  =>  Y in N(s)
};

/// Accepts "m", "c", "n", "r", "filter", "neg-suppl".
FrameProperty parse_property(std::string_view id);
const char* property_id(FrameProperty p);

/// Whether N(s) alone has the property. The core of an empty family is the
/// full set, so an empty family fails (r).
bool state_has_property(const NeighborhoodFunction& nbhd, int s, FrameProperty p);
bool check_property(const NeighborhoodFrame& frame, FrameProperty p);

// ---------------------------------------------------------------------------
// Transformers

/// N+(s) = { X | Y <= X for some Y in N(s) }.
NeighborhoodFrame supplementation(const NeighborhoodFrame& frame);
NeighborhoodModel supplementation(const NeighborhoodModel& model);

enum class PerturbationKind { kBullet, kWrong };
enum class PerturbationSign { kAdd, kRemove };

/// Per-state families to add to or remove from N. For kind bullet every set
/// at w must exclude w; for kind wrong every set at w must contain w.
struct PerturbationMap {
  PerturbationKind kind = PerturbationKind::kBullet;
  PerturbationSign sign = PerturbationSign::kAdd;
  NeighborhoodFunction families;

  /// Throws Error(kPrecondition) naming the first offending (state, set).
  void validate(int universe_size) const;
};

NeighborhoodModel perturb(const NeighborhoodModel& model, const PerturbationMap& pmap);

/// One closure step: N'(w) = N(w) + { m_N(X) | X in N(w) } where
/// m_N(X) = { z | X in N(z) }.
NeighborhoodFrame closure_step(const NeighborhoodFrame& frame);
/// Iterates closure_step to its fixpoint. `rounds`, if given, receives the
/// number of steps that changed the frame.
NeighborhoodFrame transitive_closure(const NeighborhoodFrame& frame, int* rounds = nullptr);
NeighborhoodModel transitive_closure(const NeighborhoodModel& model, int* rounds = nullptr);

/// Submodel on the nonempty set X: N(s) & X for s in X, V(p) & X. States are
/// reindexed in ascending order and keep their names. Requires (m) unless
/// `force` is set.
NeighborhoodModel intersection_submodel(const NeighborhoodModel& model, StateSet x,
                                        bool force = false);

/// Packs the bits of `value` selected by `mask` into the low bits.
std::uint32_t compress_bits(std::uint32_t value, std::uint32_t mask);

std::string format_set(const NeighborhoodFrame& frame, StateSet x);

}  // namespace nbhd
