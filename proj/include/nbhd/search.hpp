#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nbhd/formula.hpp"
#include "nbhd/model.hpp"
#include "nbhd/model_json.hpp"

namespace nbhd {

/// SplitMix64. Sample i of a seeded run starts from seed + i * kGamma, so
/// samples are independent of scheduling.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed + index * kGamma);
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// A class of frames: required per-state properties, a state bound and the
/// atoms whose valuations are enumerated.
struct ClassSpec {
  std::vector<FrameProperty> properties;
  int max_states = 3;
  std::vector<std::string> atoms;
};

/// Parses "m,c", "mc", "filter", "neg-suppl", or "" / "all" for no
/// restriction.
std::vector<FrameProperty> parse_class(std::string_view spec);
std::string class_name(const std::vector<FrameProperty>& properties);

/// Largest state count for exhaustive enumeration.
inline constexpr int kMaxExhaustiveStates = 3;
/// Largest state count for sampling a restricted class.
inline constexpr int kMaxRestrictedSampleStates = 4;

/// All frames on n states whose every N(s) has the given properties, indexed
/// in lexicographic order of (family of state 0, family of state 1, ...),
/// each family ordered by its bit encoding.
class FrameSpace {
 public:
  /// Throws Error(kInvalidArgument) for n outside 1..kMaxRestrictedSampleStates.
  FrameSpace(int n, std::vector<FrameProperty> properties);

  int states() const { return n_; }
  std::uint64_t size() const { return size_; }
  /// Admissible families of state s as powerset bit encodings, ascending.
  const std::vector<std::uint64_t>& admissible(int s) const {
    return admissible_[static_cast<std::size_t>(s)];
  }

  /// Writes frame number `index` into nbhd (which must have n states).
  void decode(std::uint64_t index, NeighborhoodFunction& nbhd) const;
  NeighborhoodFrame at(std::uint64_t index) const;
  /// Draws each family uniformly from the admissible ones.
  void sample(SplitMix64& rng, NeighborhoodFunction& nbhd) const;

  class iterator {
   public:
    using value_type = NeighborhoodFrame;
    using difference_type = std::ptrdiff_t;
    iterator(const FrameSpace* space, std::uint64_t index) : space_(space), index_(index) {}
    NeighborhoodFrame operator*() const { return space_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const FrameSpace* space_;
    std::uint64_t index_;
  };
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  int n_;
  std::vector<std::vector<std::uint64_t>> admissible_;
  std::uint64_t size_ = 1;
};

/// Frames of the class on exactly n states. Throws unless
/// 1 <= n <= kMaxExhaustiveStates.
FrameSpace enumerate_frames(int n, const ClassSpec& cls);

/// Random frame on n states with arbitrary neighborhoods (any n <= 16).
void sample_unrestricted(SplitMix64& rng, NeighborhoodFunction& nbhd);

struct Exhaustive {};
struct Sampled {
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
};
using SearchMode = std::variant<Exhaustive, Sampled>;

struct SearchOptions {
  int jobs = 1;
  bool force = false;
};

/// Result of a bounded search: a falsifying pointed model, or the statement
/// that none exists up to the bound. The latter never claims validity.
struct Verdict {
  std::optional<PointedModel> countermodel;
  int max_states = 0;
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  bool found() const { return countermodel.has_value(); }
};

Json verdict_to_json(const Verdict& v);
/// "countermodel" or "no countermodel up to N states (exhaustive|M samples)".
std::string describe_verdict(const Verdict& v);

/// Exhaustive: frames from 1 state upward, all valuations of the atom budget,
/// returns the least countermodel by (states, frame index, valuation index,
/// state). Sampled: models on max_states states drawn from SplitMix64;
/// returns the lowest falsifying sample. An empty atom budget means the
/// atoms of f.
Verdict find_countermodel(const Formula& f, const ClassSpec& cls, const SearchMode& mode,
                          const SearchOptions& options = {});

enum class Fragment { kBullet, kWrong, kFull };
Fragment parse_fragment(std::string_view id);
/// Modalities generated for the fragment, in enumeration order.
std::vector<Op> fragment_modalities(Fragment fragment);

/// A representative formula for one class of formulas that have the same
/// extension on every model of the enumeration.
struct FormulaClass {
  Formula formula;
  std::vector<std::uint32_t> extensions;  // one per model
  int depth = 0;
};

/// Enumerates fragment formulas over `atoms` up to the modal depth,
/// deduplicated by their joint extensions on `models`. Discovery order:
/// atoms (sorted), true, then boolean closure (negations and pairwise
/// conjunctions), then one modal layer per depth, each followed by closure.
/// `on_new` may return true to stop early.
class FormulaEnumerator {
 public:
  using Callback = std::function<bool(const FormulaClass&)>;

  FormulaEnumerator(std::vector<NeighborhoodModel> models, Fragment fragment,
                    std::vector<std::string> atoms, int depth,
                    std::size_t max_classes = std::size_t{1} << 16);

  /// Runs to completion (or until on_new returns true). Returns the class
  /// that stopped it, if any.
  std::optional<FormulaClass> run(const Callback& on_new = {});

  const std::vector<FormulaClass>& classes() const { return classes_; }

 private:
  bool add(Formula f, std::vector<std::uint32_t> ext, int depth, const Callback& on_new);
  bool close(const Callback& on_new);

  std::vector<NeighborhoodModel> models_;
  Fragment fragment_;
  std::vector<std::string> atoms_;
  int depth_;
  std::size_t max_classes_;
  std::vector<FormulaClass> classes_;
  std::map<std::vector<std::uint32_t>, std::size_t> index_;
  std::size_t closed_ = 0;
  std::optional<FormulaClass> stopper_;
};

/// First fragment formula (discovery order) true at exactly one of the two
/// points, up to the modal depth; nullopt is a bounded verdict only.
std::optional<Formula> distinguish(const PointedModel& a, const PointedModel& b,
                                   Fragment fragment, int depth);

/// Lowest index in [0, total) satisfying pred, scanning contiguous chunks on
/// `jobs` threads. make_scratch() is called once per worker; the result does
/// not depend on jobs.
template <typename Scratch>
std::optional<std::uint64_t> parallel_find_first(
    std::uint64_t total, int jobs, const std::function<Scratch()>& make_scratch,
    const std::function<bool(std::uint64_t, Scratch&)>& pred);

}  // namespace nbhd

#include "nbhd/detail/parallel.hpp"
