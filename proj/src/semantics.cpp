#include "nbhd/semantics.hpp"

#include <algorithm>
#include <array>

#include "nbhd/error.hpp"

namespace nbhd {

std::uint32_t holders(const NeighborhoodFunction& nbhd, std::uint32_t x) {
  std::uint32_t out = 0;
  for (int s = 0; s < nbhd.size(); ++s) {
    if (nbhd.contains(s, x)) out |= 1u << s;
  }
  return out;
}

std::uint32_t modal_image(Op op, const NeighborhoodFunction& nbhd, std::uint32_t x) {
  const std::uint32_t full = StateSet::full_bits(nbhd.size());
  const std::uint32_t h = holders(nbhd, x);
  switch (op) {
    case Op::kBox: return h;
    case Op::kBullet: return x & ~h;
    case Op::kWrong: return h & ~x;
    case Op::kCirc: return (full & ~x) | h;
    default:
      throw Error(ErrorCode::kInvalidArgument, "not a unary modality");
  }
}

namespace {

std::uint32_t expand_bits(std::uint32_t packed, std::uint32_t mask) {
  std::uint32_t out = 0;
  int k = 0;
  while (mask != 0) {
    int b = std::countr_zero(mask);
    if ((packed >> k) & 1u) out |= 1u << b;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

Evaluator::Evaluator(const Formula& f) {
  auto names = atoms_of(f);
  atoms_.assign(names.begin(), names.end());
  blocks_.emplace_back();
  memo_.emplace_back();
  compile(f, 0);
  memo_.clear();
}

int Evaluator::compile(const Formula& f, int block) {
  // Hash-consing per block: structurally equal subformulas get one slot.
  Instr ins{f.op()};
  switch (arity(f.op())) {
    case 0:
      if (f.op() == Op::kAtom) {
        ins.atom = static_cast<int>(std::lower_bound(atoms_.begin(), atoms_.end(), f.name()) -
                                    atoms_.begin());
      }
      break;
    case 1:
      ins.a = compile(f.lhs(), block);
      break;
    default:
      ins.a = compile(f.lhs(), block);
      if (f.op() == Op::kAnnounce) {
        ins.block = static_cast<int>(blocks_.size());
        blocks_.emplace_back();
        memo_.emplace_back();
        compile(f.rhs(), ins.block);
      } else {
        ins.b = compile(f.rhs(), block);
      }
      break;
  }
  auto& code = blocks_[static_cast<std::size_t>(block)];
  auto& memo = memo_[static_cast<std::size_t>(block)];
  const std::array<int, 5> key{static_cast<int>(ins.op), ins.a, ins.b, ins.atom, ins.block};
  if (ins.op != Op::kAnnounce) {
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  code.push_back(ins);
  int slot = static_cast<int>(code.size() - 1);
  memo.emplace(key, slot);
  return slot;
}

std::uint32_t Evaluator::run(int block, const NeighborhoodFunction& nbhd,
                             std::span<const std::uint32_t> valuation) const {
  const auto& code = blocks_[static_cast<std::size_t>(block)];
  const std::uint32_t full = StateSet::full_bits(nbhd.size());
  std::array<std::uint32_t, 64> small{};
  std::vector<std::uint32_t> large;
  std::uint32_t* res = small.data();
  if (code.size() > small.size()) {
    large.resize(code.size());
    res = large.data();
  }
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instr& in = code[i];
    std::uint32_t v = 0;
    switch (in.op) {
      case Op::kAtom: v = valuation[static_cast<std::size_t>(in.atom)] & full; break;
      case Op::kTop: v = full; break;
      case Op::kBot: v = 0; break;
      case Op::kNot: v = full & ~res[in.a]; break;
      case Op::kAnd: v = res[in.a] & res[in.b]; break;
      case Op::kOr: v = res[in.a] | res[in.b]; break;
      case Op::kImp: v = (full & ~res[in.a]) | res[in.b]; break;
      case Op::kIff: v = full & ~(res[in.a] ^ res[in.b]); break;
      case Op::kBullet:
      case Op::kWrong:
      case Op::kCirc:
      case Op::kBox: v = modal_image(in.op, nbhd, res[in.a]); break;
      case Op::kAnnounce: {
        const std::uint32_t x = res[in.a];
        v = full & ~x;
        if (x != 0) {
          // Evaluate the body in the intersection submodel on x.
          const int m = std::popcount(x);
          NeighborhoodFunction sub(m);
          int j = 0;
          for (int s = 0; s < nbhd.size(); ++s) {
            if (!((x >> s) & 1u)) continue;
            nbhd.for_each(s, [&](std::uint32_t p) { sub.insert(j, compress_bits(p & x, x)); });
            ++j;
          }
          std::vector<std::uint32_t> sub_val(valuation.size());
          for (std::size_t k = 0; k < valuation.size(); ++k) {
            sub_val[k] = compress_bits(valuation[k] & x, x);
          }
          v |= expand_bits(run(in.block, sub, sub_val), x);
        }
        break;
      }
    }
    res[i] = v;
  }
  return res[code.size() - 1];
}

std::uint32_t Evaluator::extension_bits(const NeighborhoodFunction& nbhd,
                                        std::span<const std::uint32_t> valuation) const {
  return run(0, nbhd, valuation);
}

namespace {

void require_monotone_for_announcements(const Evaluator& ev, const NeighborhoodFrame& frame,
                                        const EvalOptions& options) {
  if (ev.has_announcement() && !options.force &&
      !check_property(frame, FrameProperty::kMonotone)) {
    throw Error(ErrorCode::kPrecondition,
                "announcements are evaluated on monotone models only (use force)");
  }
}

}  // namespace

StateSet Evaluator::extension(const NeighborhoodModel& model, const EvalOptions& options) const {
  require_monotone_for_announcements(*this, model.frame(), options);
  std::vector<std::uint32_t> val;
  val.reserve(atoms_.size());
  for (const auto& a : atoms_) val.push_back(model.valuation_of(a).bits());
  return StateSet(model.size(), extension_bits(model.nbhd(), val));
}

bool eval(const PointedModel& pm, const Formula& f, const EvalOptions& options) {
  return extension(pm.model, f, options).contains(pm.point);
}

StateSet extension(const NeighborhoodModel& model, const Formula& f, const EvalOptions& options) {
  return Evaluator(f).extension(model, options);
}

bool frame_valid(const NeighborhoodFrame& frame, const Formula& f, const EvalOptions& options) {
  return frame_valid(frame, Evaluator(f), options);
}

bool frame_valid(const NeighborhoodFrame& frame, const Evaluator& evaluator,
                 const EvalOptions& options) {
  const int n = frame.size();
  const int k = static_cast<int>(evaluator.atoms().size());
  if (n * k > kMaxValuationBits) {
    throw Error(ErrorCode::kTooLarge, "valuation space 2^" + std::to_string(n * k) +
                                          " is too large for exhaustive frame validity");
  }
  require_monotone_for_announcements(evaluator, frame, options);
  const std::uint32_t full = StateSet::full_bits(n);
  const std::uint64_t total = std::uint64_t{1} << (n * k);
  std::vector<std::uint32_t> val(static_cast<std::size_t>(k));
  for (std::uint64_t v = 0; v < total; ++v) {
    // First atom (alphabetically) occupies the most significant bits.
    for (int i = 0; i < k; ++i) {
      val[static_cast<std::size_t>(i)] =
          static_cast<std::uint32_t>(v >> ((k - 1 - i) * n)) & full;
    }
    if (evaluator.extension_bits(frame.nbhd(), val) != full) return false;
  }
  return true;
}

}  // namespace nbhd
