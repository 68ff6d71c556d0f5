#include "nbhd/model.hpp"

#include <set>

#include "nbhd/error.hpp"

namespace nbhd {

StateSet::StateSet(int universe_size, std::uint32_t bits) : n_(universe_size), bits_(bits) {
  if (universe_size < 0 || universe_size > kMaxStates) {
    throw Error(ErrorCode::kInvalidArgument, "state universe size out of range");
  }
  if ((bits & ~full_bits(universe_size)) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "state set has members outside its universe");
  }
}

NeighborhoodFunction::NeighborhoodFunction(int n) : n_(n) {
  if (n < 1 || n > kMaxStates) {
    throw Error(ErrorCode::kInvalidArgument, "number of states must be in 1..16");
  }
  std::size_t subsets = std::size_t{1} << n;
  words_per_state_ = static_cast<int>(subsets < 64 ? 1 : subsets / 64);
  words_.assign(static_cast<std::size_t>(n) * words_per_state_, 0);
}

std::vector<StateSet> NeighborhoodFunction::family(int s) const {
  std::vector<StateSet> out;
  for_each(s, [&](std::uint32_t x) { out.emplace_back(n_, x); });
  return out;
}

std::size_t NeighborhoodFunction::family_size(int s) const {
  std::size_t count = 0;
  for (std::uint64_t w : family_words(s)) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

// ---------------------------------------------------------------------------

NeighborhoodFrame::NeighborhoodFrame(std::vector<std::string> states)
    : NeighborhoodFrame(states, NeighborhoodFunction(static_cast<int>(states.size()))) {}

NeighborhoodFrame::NeighborhoodFrame(std::vector<std::string> states, NeighborhoodFunction nbhd)
    : states_(std::move(states)), nbhd_(std::move(nbhd)) {
  if (states_.empty() || states_.size() > static_cast<std::size_t>(kMaxStates)) {
    throw Error(ErrorCode::kInvalidArgument, "a frame needs between 1 and 16 states");
  }
  if (nbhd_.size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "neighborhood function size does not match states");
  }
  std::set<std::string_view> seen;
  for (const auto& name : states_) {
    if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "empty state name");
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate state name '" + name + "'");
    }
  }
}

std::string NeighborhoodFrame::default_state_name(int i) {
  static const char* const kNames[] = {"s", "t", "u", "v", "w", "x", "y", "z"};
  if (i < 8) return kNames[i];
  return "s" + std::to_string(i);
}

NeighborhoodFrame NeighborhoodFrame::with_default_names(int n) {
  if (n < 1 || n > kMaxStates) {
    throw Error(ErrorCode::kInvalidArgument, "number of states must be in 1..16");
  }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(default_state_name(i));
  return NeighborhoodFrame(std::move(names));
}

std::optional<int> NeighborhoodFrame::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (states_[static_cast<std::size_t>(i)] == name) return i;
  }
  return std::nullopt;
}

NeighborhoodModel::NeighborhoodModel(NeighborhoodFrame frame,
                                     std::map<std::string, StateSet> valuation)
    : frame_(std::move(frame)) {
  for (auto& [atom, value] : valuation) set_valuation(atom, value);
}

StateSet NeighborhoodModel::valuation_of(const std::string& atom) const {
  auto it = valuation_.find(atom);
  return it == valuation_.end() ? StateSet::empty(size()) : it->second;
}

void NeighborhoodModel::set_valuation(const std::string& atom, StateSet value) {
  if (value.universe_size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "valuation of '" + atom + "' has the wrong universe");
  }
  valuation_[atom] = value;
}

PointedModel::PointedModel(NeighborhoodModel m, int p) : model(std::move(m)), point(p) {
  if (p < 0 || p >= model.size()) {
    throw Error(ErrorCode::kInvalidArgument, "point is not a state of the model");
  }
}

// ---------------------------------------------------------------------------

FrameProperty parse_property(std::string_view id) {
  if (id == "m") return FrameProperty::kMonotone;
  if (id == "c") return FrameProperty::kIntersections;
  if (id == "n") return FrameProperty::kUnit;
  if (id == "r") return FrameProperty::kCore;
  if (id == "filter") return FrameProperty::kFilter;
  if (id == "neg-suppl") return FrameProperty::kNegSupplemented;
  throw Error(ErrorCode::kInvalidArgument, "unknown property '" + std::string(id) + "'");
}

const char* property_id(FrameProperty p) {
  switch (p) {
    case FrameProperty::kMonotone: return "m";
    case FrameProperty::kIntersections: return "c";
    case FrameProperty::kUnit: return "n";
    case FrameProperty::kCore: return "r";
    case FrameProperty::kFilter: return "filter";
    case FrameProperty::kNegSupplemented: return "neg-suppl";
  }
  return "?";
}

namespace {

// Closure under supersets is equivalent to closure under adding one state.
bool upward_closed(const NeighborhoodFunction& nbhd, int s, std::uint32_t excluded) {
  const std::uint32_t full = StateSet::full_bits(nbhd.size());
  bool ok = true;
  nbhd.for_each(s, [&](std::uint32_t x) {
    if (!ok || (x & excluded) != 0) return;
    std::uint32_t missing = full & ~x & ~excluded;
    while (missing != 0 && ok) {
      std::uint32_t b = missing & (~missing + 1);
      if (!nbhd.contains(s, x | b)) ok = false;
      missing &= missing - 1;
    }
  });
  return ok;
}

}  // namespace

bool state_has_property(const NeighborhoodFunction& nbhd, int s, FrameProperty p) {
  const std::uint32_t full = StateSet::full_bits(nbhd.size());
  switch (p) {
    case FrameProperty::kMonotone:
      return upward_closed(nbhd, s, 0);
    case FrameProperty::kNegSupplemented:
      return upward_closed(nbhd, s, 1u << s);
    case FrameProperty::kIntersections: {
      std::vector<std::uint32_t> members;
      nbhd.for_each(s, [&](std::uint32_t x) { members.push_back(x); });
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          if (!nbhd.contains(s, members[i] & members[j])) return false;
        }
      }
      return true;
    }
    case FrameProperty::kUnit:
      return nbhd.contains(s, full);
    case FrameProperty::kCore: {
      std::uint32_t core = full;
      nbhd.for_each(s, [&](std::uint32_t x) { core &= x; });
      return nbhd.contains(s, core);
    }
    case FrameProperty::kFilter:
      return state_has_property(nbhd, s, FrameProperty::kMonotone) &&
             state_has_property(nbhd, s, FrameProperty::kIntersections) &&
             state_has_property(nbhd, s, FrameProperty::kUnit);
  }
  return false;
}

bool check_property(const NeighborhoodFrame& frame, FrameProperty p) {
  for (int s = 0; s < frame.size(); ++s) {
    if (!state_has_property(frame.nbhd(), s, p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

NeighborhoodFrame supplementation(const NeighborhoodFrame& frame) {
  const int n = frame.size();
  const std::uint32_t full = StateSet::full_bits(n);
  NeighborhoodFunction out(n);
  for (int s = 0; s < n; ++s) {
    frame.nbhd().for_each(s, [&](std::uint32_t y) {
      // Every superset of y: y | sub for sub ranging over subsets of ~y.
      std::uint32_t rest = full & ~y;
      std::uint32_t sub = rest;
      while (true) {
        out.insert(s, y | sub);
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    });
  }
  return NeighborhoodFrame(frame.states(), std::move(out));
}

NeighborhoodModel supplementation(const NeighborhoodModel& model) {
  return NeighborhoodModel(supplementation(model.frame()), model.valuation());
}

void PerturbationMap::validate(int universe_size) const {
  if (families.size() != universe_size) {
    throw Error(ErrorCode::kPrecondition, "perturbation map size does not match the model");
  }
  for (int w = 0; w < universe_size; ++w) {
    families.for_each(w, [&](std::uint32_t x) {
      bool has_w = (x >> w) & 1u;
      if (kind == PerturbationKind::kBullet && has_w) {
        throw Error(ErrorCode::kPrecondition,
                    "bullet perturbation at state " + std::to_string(w) +
                        " contains a set that includes that state");
      }
      if (kind == PerturbationKind::kWrong && !has_w) {
        throw Error(ErrorCode::kPrecondition,
                    "wrong perturbation at state " + std::to_string(w) +
                        " contains a set that excludes that state");
      }
    });
  }
}

NeighborhoodModel perturb(const NeighborhoodModel& model, const PerturbationMap& pmap) {
  pmap.validate(model.size());
  NeighborhoodModel out = model;
  for (int w = 0; w < model.size(); ++w) {
    auto dst = out.frame().nbhd().family_words(w);
    auto src = pmap.families.family_words(w);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      dst[i] = pmap.sign == PerturbationSign::kAdd ? (dst[i] | src[i]) : (dst[i] & ~src[i]);
    }
  }
  return out;
}

NeighborhoodFrame closure_step(const NeighborhoodFrame& frame) {
  const int n = frame.size();
  const auto& nbhd = frame.nbhd();
  NeighborhoodFrame out = frame;
  for (int w = 0; w < n; ++w) {
    nbhd.for_each(w, [&](std::uint32_t x) {
      std::uint32_t holders = 0;
      for (int z = 0; z < n; ++z) {
        if (nbhd.contains(z, x)) holders |= 1u << z;
      }
      out.nbhd().insert(w, holders);
    });
  }
  return out;
}

NeighborhoodFrame transitive_closure(const NeighborhoodFrame& frame, int* rounds) {
  NeighborhoodFrame current = frame;
  int productive = 0;
  while (true) {
    NeighborhoodFrame next = closure_step(current);
    if (next == current) break;
    current = std::move(next);
    ++productive;
  }
  if (rounds) *rounds = productive;
  return current;
}

NeighborhoodModel transitive_closure(const NeighborhoodModel& model, int* rounds) {
  return NeighborhoodModel(transitive_closure(model.frame(), rounds), model.valuation());
}

std::uint32_t compress_bits(std::uint32_t value, std::uint32_t mask) {
  std::uint32_t out = 0;
  int k = 0;
  while (mask != 0) {
    int b = std::countr_zero(mask);
    if ((value >> b) & 1u) out |= 1u << k;
    ++k;
    mask &= mask - 1;
  }
  return out;
}

NeighborhoodModel intersection_submodel(const NeighborhoodModel& model, StateSet x, bool force) {
  if (x.universe_size() != model.size()) {
    throw Error(ErrorCode::kInvalidArgument, "submodel set has the wrong universe");
  }
  if (x.is_empty()) {
    throw Error(ErrorCode::kPrecondition, "intersection submodel needs a nonempty set");
  }
  if (!force && !check_property(model.frame(), FrameProperty::kMonotone)) {
    throw Error(ErrorCode::kPrecondition,
                "intersection submodel is defined for monotone models (use force)");
  }
  const std::uint32_t mask = x.bits();
  const int m = x.size();
  std::vector<std::string> names;
  NeighborhoodFunction nbhd(m);
  int i = 0;
  for (int s = 0; s < model.size(); ++s) {
    if (!x.contains(s)) continue;
    names.push_back(model.frame().state_name(s));
    model.nbhd().for_each(s, [&](std::uint32_t p) { nbhd.insert(i, compress_bits(p & mask, mask)); });
    ++i;
  }
  NeighborhoodModel out(NeighborhoodFrame(std::move(names), std::move(nbhd)));
  for (const auto& [atom, value] : model.valuation()) {
    out.set_valuation(atom, StateSet(m, compress_bits(value.bits() & mask, mask)));
  }
  return out;
}

std::string format_set(const NeighborhoodFrame& frame, StateSet x) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < frame.size(); ++i) {
    if (!x.contains(i)) continue;
    if (!first) out += ",";
    out += frame.state_name(i);
    first = false;
  }
  return out + "}";
}

}  // namespace nbhd
