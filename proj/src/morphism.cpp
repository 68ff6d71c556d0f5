#include "nbhd/morphism.hpp"

#include <set>

#include "nbhd/error.hpp"
#include "nbhd/semantics.hpp"

namespace nbhd {

StateMap::StateMap(NeighborhoodModel src, NeighborhoodModel tgt, std::vector<int> map)
    : source(std::move(src)), target(std::move(tgt)), mapping(std::move(map)) {
  if (mapping.size() != static_cast<std::size_t>(source.size())) {
    throw Error(ErrorCode::kInvalidArgument, "state map must be total on the source");
  }
  for (int v : mapping) {
    if (v < 0 || v >= target.size()) {
      throw Error(ErrorCode::kInvalidArgument, "state map image outside the target");
    }
  }
}

StateMap StateMap::identity(NeighborhoodModel src, NeighborhoodModel tgt) {
  std::vector<int> map;
  for (int s = 0; s < src.size(); ++s) {
    auto t = tgt.frame().index_of(src.frame().state_name(s));
    if (!t) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target has no state named '" + src.frame().state_name(s) + "'");
    }
    map.push_back(*t);
  }
  return StateMap(std::move(src), std::move(tgt), std::move(map));
}

StateMap StateMap::parse(NeighborhoodModel src, NeighborhoodModel tgt, std::string_view spec) {
  std::vector<int> map(static_cast<std::size_t>(src.size()), -1);
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view pair = spec.substr(pos, comma - pos);
    std::size_t colon = pair.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "map entry '" + std::string(pair) + "' lacks ':'");
    }
    auto from = src.frame().index_of(pair.substr(0, colon));
    auto to = tgt.frame().index_of(pair.substr(colon + 1));
    if (!from || !to) {
      throw Error(ErrorCode::kInvalidArgument, "map entry '" + std::string(pair) +
                                                   "' names an unknown state");
    }
    if (map[static_cast<std::size_t>(*from)] != -1) {
      throw Error(ErrorCode::kInvalidArgument, "state mapped twice in '" + std::string(pair) + "'");
    }
    map[static_cast<std::size_t>(*from)] = *to;
    pos = comma + 1;
  }
  for (int s = 0; s < src.size(); ++s) {
    if (map[static_cast<std::size_t>(s)] == -1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "state '" + src.frame().state_name(s) + "' is not mapped");
    }
  }
  return StateMap(std::move(src), std::move(tgt), std::move(map));
}

StateSet StateMap::image(StateSet x) const {
  std::uint32_t out = 0;
  for (int s = 0; s < source.size(); ++s) {
    if (x.contains(s)) out |= 1u << (*this)(s);
  }
  return StateSet(target.size(), out);
}

StateMap compose(const StateMap& g, const StateMap& f) {
  if (!(f.target == g.source)) {
    throw Error(ErrorCode::kInvalidArgument, "maps do not compose");
  }
  std::vector<int> map;
  for (int s = 0; s < f.source.size(); ++s) map.push_back(g(f(s)));
  return StateMap(f.source, g.target, std::move(map));
}

namespace {

// The per-subset condition each morphism kind compares across the map.
bool bullet_side(const NeighborhoodFunction& nbhd, int s, std::uint32_t x) {
  return ((x >> s) & 1u) && !nbhd.contains(s, x);
}

bool wrong_side(const NeighborhoodFunction& nbhd, int s, std::uint32_t x) {
  return nbhd.contains(s, x) && !((x >> s) & 1u);
}

}  // namespace

MorphismCheck check_morphism(const StateMap& f, MorphismKind kind) {
  auto side = kind == MorphismKind::kBullet ? bullet_side : wrong_side;
  std::set<std::string> atoms;
  for (const auto& [a, v] : f.source.valuation()) atoms.insert(a);
  for (const auto& [a, v] : f.target.valuation()) atoms.insert(a);

  const int n = f.source.size();
  const std::uint32_t subsets = 1u << n;
  for (int s = 0; s < n; ++s) {
    const int fs = f(s);
    for (std::uint32_t x = 0; x < subsets; ++x) {
      const std::uint32_t fx = f.image(StateSet(n, x)).bits();
      if (side(f.source.nbhd(), s, x) != side(f.target.nbhd(), fs, fx)) {
        return {false, MorphismWitness{s, StateSet(n, x), std::nullopt}};
      }
    }
    for (const auto& a : atoms) {
      if (f.source.valuation_of(a).contains(s) != f.target.valuation_of(a).contains(fs)) {
        return {false, MorphismWitness{s, std::nullopt, a}};
      }
    }
  }
  return {true, std::nullopt};
}

MorphismCheck check_bullet_morphism(const StateMap& f) {
  return check_morphism(f, MorphismKind::kBullet);
}

MorphismCheck check_w_morphism(const StateMap& f) { return check_morphism(f, MorphismKind::kWrong); }

std::string describe_witness(const StateMap& f, const MorphismWitness& w) {
  std::string out = "state " + f.source.frame().state_name(w.state);
  if (w.subset) out += ", subset " + format_set(f.source.frame(), *w.subset);
  if (w.atom) out += ", atom " + *w.atom;
  return out;
}

bool in_fragment(const Formula& f, MorphismKind kind) {
  switch (f.op()) {
    case Op::kAtom:
    case Op::kTop:
    case Op::kBot:
      return true;
    case Op::kNot:
      return in_fragment(f.lhs(), kind);
    case Op::kAnd:
    case Op::kOr:
    case Op::kImp:
    case Op::kIff:
      return in_fragment(f.lhs(), kind) && in_fragment(f.rhs(), kind);
    case Op::kBullet:
    case Op::kCirc:
      return kind == MorphismKind::kBullet && in_fragment(f.lhs(), kind);
    case Op::kWrong:
      return kind == MorphismKind::kWrong && in_fragment(f.lhs(), kind);
    case Op::kBox:
    case Op::kAnnounce:
      return false;
  }
  return false;
}

InvarianceReport verify_invariance(const StateMap& f, MorphismKind kind,
                                   const std::vector<Formula>& formulas) {
  if (auto check = check_morphism(f, kind); !check) {
    throw Error(ErrorCode::kPrecondition,
                "map is not a morphism: " + describe_witness(f, *check.witness));
  }
  InvarianceReport report;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    if (!in_fragment(formulas[i], kind)) {
      throw Error(ErrorCode::kPrecondition,
                  "formula '" + print(formulas[i]) + "' is outside the preserved fragment");
    }
    Evaluator ev(formulas[i]);
    StateSet src = ev.extension(f.source);
    StateSet dst = ev.extension(f.target);
    for (int s = 0; s < f.source.size(); ++s) {
      if (src.contains(s) != dst.contains(f(s))) report.violations.push_back({i, s});
    }
  }
  return report;
}

}  // namespace nbhd
