#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nbhd/formula.hpp"
#include "nbhd/model.hpp"

namespace nbhd {

struct EvalOptions {
  /// Evaluate announcements on models lacking (m) by applying the
  /// intersection-submodel formula anyway.
  bool force = false;
};

/// {s | X in N(s)}, the states that hold X as a neighborhood.
std::uint32_t holders(const NeighborhoodFunction& nbhd, std::uint32_t x);

/// Extension of a unary modality applied to a formula with extension x.
std::uint32_t modal_image(Op op, const NeighborhoodFunction& nbhd, std::uint32_t x);

/// A formula compiled once for repeated evaluation. Subformulas are shared
/// by structure, so each distinct subformula is computed once per model.
class Evaluator {
 public:
  explicit Evaluator(const Formula& f);

  /// Atoms of the formula, sorted; valuations are passed in this order.
  const std::vector<std::string>& atoms() const { return atoms_; }
  bool has_announcement() const { return blocks_.size() > 1; }

  /// Raw extension; performs no monotonicity check.
  std::uint32_t extension_bits(const NeighborhoodFunction& nbhd,
                               std::span<const std::uint32_t> valuation) const;

  /// Throws Error(kPrecondition) if the formula has announcements, the model
  /// lacks (m) and options.force is unset.
  StateSet extension(const NeighborhoodModel& model, const EvalOptions& options = {}) const;

 private:
  struct Instr {
    Op op;
    int a = -1;
    int b = -1;
    int atom = -1;
    int block = -1;  // announcement body
  };

  int compile(const Formula& f, int block);
  std::uint32_t run(int block, const NeighborhoodFunction& nbhd,
                    std::span<const std::uint32_t> valuation) const;

  std::vector<std::vector<Instr>> blocks_;
  std::vector<std::map<std::array<int, 5>, int>> memo_;  // only during construction
  std::vector<std::string> atoms_;
};

bool eval(const PointedModel& pm, const Formula& f, const EvalOptions& options = {});
StateSet extension(const NeighborhoodModel& model, const Formula& f,
                   const EvalOptions& options = {});

/// Largest n * k (states times occurring atoms) frame_valid will enumerate.
inline constexpr int kMaxValuationBits = 24;

/// True iff f holds at every state under every valuation of its atoms,
/// enumerated in lexicographic order of (atom name, bit vector). Throws
/// Error(kTooLarge) when n * k exceeds kMaxValuationBits.
bool frame_valid(const NeighborhoodFrame& frame, const Formula& f,
                 const EvalOptions& options = {});
bool frame_valid(const NeighborhoodFrame& frame, const Evaluator& evaluator,
                 const EvalOptions& options = {});

}  // namespace nbhd
