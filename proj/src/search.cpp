#include "nbhd/search.hpp"

#include <algorithm>
#include <set>

#include "nbhd/error.hpp"
#include "nbhd/semantics.hpp"

namespace nbhd {

std::vector<FrameProperty> parse_class(std::string_view spec) {
  std::vector<FrameProperty> out;
  if (spec.empty() || spec == "all") return out;
  auto push = [&](FrameProperty p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  if (spec.find(',') == std::string_view::npos && spec != "filter" && spec != "neg-suppl" &&
      spec.size() > 1) {
    // Concatenated single-letter ids such as "mc".
    for (char c : spec) push(parse_property(std::string_view(&c, 1)));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    push(parse_property(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::string class_name(const std::vector<FrameProperty>& properties) {
  if (properties.empty()) return "all";
  std::string out;
  for (auto p : properties) {
    if (!out.empty()) out += ',';
    out += property_id(p);
  }
  return out;
}

namespace {

bool requires_monotone(const std::vector<FrameProperty>& properties) {
  return std::any_of(properties.begin(), properties.end(), [](FrameProperty p) {
    return p == FrameProperty::kMonotone || p == FrameProperty::kFilter;
  });
}

std::uint64_t family_mask(int n) {
  const int bits = 1 << n;
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

FrameSpace::FrameSpace(int n, std::vector<FrameProperty> properties) : n_(n) {
  if (n < 1 || n > kMaxRestrictedSampleStates) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame spaces are built for 1 to " + std::to_string(kMaxRestrictedSampleStates) +
                    " states, got " + std::to_string(n));
  }
  const std::uint64_t families = std::uint64_t{1} << (1 << n);
  NeighborhoodFunction scratch(n);
  admissible_.resize(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    auto& list = admissible_[static_cast<std::size_t>(s)];
    for (std::uint64_t enc = 0; enc < families; ++enc) {
      scratch.family_words(s)[0] = enc;
      bool ok = std::all_of(properties.begin(), properties.end(), [&](FrameProperty p) {
        return state_has_property(scratch, s, p);
      });
      if (ok) list.push_back(enc);
    }
    size_ *= list.size();
  }
}

void FrameSpace::decode(std::uint64_t index, NeighborhoodFunction& nbhd) const {
  for (int s = n_ - 1; s >= 0; --s) {
    const auto& list = admissible_[static_cast<std::size_t>(s)];
    nbhd.family_words(s)[0] = list[index % list.size()];
    index /= list.size();
  }
}

NeighborhoodFrame FrameSpace::at(std::uint64_t index) const {
  NeighborhoodFrame frame = NeighborhoodFrame::with_default_names(n_);
  decode(index, frame.nbhd());
  return frame;
}

void FrameSpace::sample(SplitMix64& rng, NeighborhoodFunction& nbhd) const {
  for (int s = 0; s < n_; ++s) {
    const auto& list = admissible_[static_cast<std::size_t>(s)];
    nbhd.family_words(s)[0] = list[rng.below(list.size())];
  }
}

FrameSpace enumerate_frames(int n, const ClassSpec& cls) {
  if (n < 1 || n > kMaxExhaustiveStates) {
    throw Error(ErrorCode::kTooLarge, "exhaustive enumeration supports 1 to " +
                                          std::to_string(kMaxExhaustiveStates) +
                                          " states, got " + std::to_string(n) +
                                          "; use sampling");
  }
  return FrameSpace(n, cls.properties);
}

void sample_unrestricted(SplitMix64& rng, NeighborhoodFunction& nbhd) {
  const std::uint64_t mask = family_mask(nbhd.size());
  for (int s = 0; s < nbhd.size(); ++s) {
    for (auto& w : nbhd.family_words(s)) w = rng.next() & mask;
  }
}

Json verdict_to_json(const Verdict& v) {
  Json out = Json::object();
  if (v.countermodel) {
    out["verdict"] = "countermodel";
    out["model"] = model_to_json(v.countermodel->model);
    out["state"] = v.countermodel->model.frame().state_name(v.countermodel->point);
    return out;
  }
  out["verdict"] = "no-counterexample";
  out["max_states"] = v.max_states;
  if (v.sampled) {
    out["valuations"] = "sampled";
    out["samples"] = v.samples;
    out["seed"] = v.seed;
  } else {
    out["valuations"] = "exhaustive";
  }
  return out;
}

std::string describe_verdict(const Verdict& v) {
  if (v.countermodel) {
    return "countermodel at state " +
           v.countermodel->model.frame().state_name(v.countermodel->point);
  }
  std::string out = "no countermodel up to " + std::to_string(v.max_states) + " states (";
  if (v.sampled) {
    out += std::to_string(v.samples) + " samples, seed " + std::to_string(v.seed) + ")";
  } else {
    out += "exhaustive)";
  }
  return out;
}

namespace {

struct Budget {
  std::vector<std::string> atoms;   // sorted
  std::vector<std::size_t> lookup;  // evaluator atom i -> budget position
};

Budget make_budget(const Evaluator& ev, const std::vector<std::string>& requested) {
  Budget b;
  std::set<std::string> atoms(requested.begin(), requested.end());
  if (atoms.empty()) atoms.insert(ev.atoms().begin(), ev.atoms().end());
  b.atoms.assign(atoms.begin(), atoms.end());
  for (const auto& a : ev.atoms()) {
    auto it = std::lower_bound(b.atoms.begin(), b.atoms.end(), a);
    if (it == b.atoms.end() || *it != a) {
      throw Error(ErrorCode::kInvalidArgument, "atom '" + a + "' is not in the atom budget");
    }
    b.lookup.push_back(static_cast<std::size_t>(it - b.atoms.begin()));
  }
  return b;
}

// Valuation number v assigns atom i (budget order) the bits at position
// (k - 1 - i) * n, so the first atom is most significant.
std::uint32_t budget_atom_bits(std::uint64_t v, std::size_t i, std::size_t k, int n) {
  return static_cast<std::uint32_t>((v >> ((k - 1 - i) * static_cast<std::size_t>(n))) &
                                    StateSet::full_bits(n));
}

PointedModel build_countermodel(const NeighborhoodFunction& nbhd, const Budget& budget,
                                const std::vector<std::uint32_t>& values, std::uint32_t ext) {
  const int n = nbhd.size();
  NeighborhoodFrame frame(NeighborhoodFrame::with_default_names(n).states(), nbhd);
  NeighborhoodModel model(std::move(frame));
  for (std::size_t i = 0; i < budget.atoms.size(); ++i) {
    model.set_valuation(budget.atoms[i], StateSet(n, values[i]));
  }
  const std::uint32_t falsified = ~ext & StateSet::full_bits(n);
  return PointedModel(std::move(model), std::countr_zero(falsified));
}

void self_check(const PointedModel& pm, const Formula& f, bool force) {
  if (eval(pm, f, EvalOptions{force})) {
    throw std::logic_error("countermodel search returned a model satisfying " + print(f));
  }
}

struct Scratch {
  NeighborhoodFunction nbhd;
  std::uint64_t frame = ~std::uint64_t{0};
  std::vector<std::uint32_t> values;
};

Verdict exhaustive_search(const Formula& f, const Evaluator& ev, const Budget& budget,
                          const ClassSpec& cls, const SearchOptions& options) {
  const std::size_t k = budget.atoms.size();
  Verdict verdict;
  verdict.max_states = cls.max_states;
  for (int n = 1; n <= cls.max_states; ++n) {
    FrameSpace space = enumerate_frames(n, cls);
    if (static_cast<int>(k) * n > kMaxValuationBits) {
      throw Error(ErrorCode::kTooLarge, "valuation space of " + std::to_string(k) + " atoms on " +
                                            std::to_string(n) + " states is too large; use sampling");
    }
    const std::uint64_t nval = std::uint64_t{1} << (k * static_cast<std::size_t>(n));
    const std::uint32_t full = StateSet::full_bits(n);

    auto load = [&](std::uint64_t index, Scratch& sc) {
      const std::uint64_t frame = index / nval;
      if (frame != sc.frame) {
        space.decode(frame, sc.nbhd);
        sc.frame = frame;
      }
      const std::uint64_t v = index % nval;
      for (std::size_t i = 0; i < ev.atoms().size(); ++i) {
        sc.values[i] = budget_atom_bits(v, budget.lookup[i], k, n);
      }
      return ev.extension_bits(sc.nbhd, sc.values);
    };
    std::function<Scratch()> make = [&] {
      return Scratch{NeighborhoodFunction(n), ~std::uint64_t{0},
                     std::vector<std::uint32_t>(ev.atoms().size())};
    };
    std::function<bool(std::uint64_t, Scratch&)> pred = [&](std::uint64_t index, Scratch& sc) {
      return load(index, sc) != full;
    };
    auto hit = parallel_find_first<Scratch>(space.size() * nval, options.jobs, make, pred);
    if (!hit) continue;

    Scratch sc = make();
    const std::uint32_t ext = load(*hit, sc);
    std::vector<std::uint32_t> values(k);
    for (std::size_t i = 0; i < k; ++i) values[i] = budget_atom_bits(*hit % nval, i, k, n);
    verdict.countermodel = build_countermodel(sc.nbhd, budget, values, ext);
    self_check(*verdict.countermodel, f, options.force);
    return verdict;
  }
  return verdict;
}

Verdict sampled_search(const Formula& f, const Evaluator& ev, const Budget& budget,
                       const ClassSpec& cls, const Sampled& mode, const SearchOptions& options) {
  const int n = cls.max_states;
  const std::size_t k = budget.atoms.size();
  std::optional<FrameSpace> space;
  if (!cls.properties.empty()) {
    if (n > kMaxRestrictedSampleStates) {
      throw Error(ErrorCode::kTooLarge, "sampling a restricted class supports up to " +
                                            std::to_string(kMaxRestrictedSampleStates) + " states");
    }
    space.emplace(n, cls.properties);
  }
  const std::uint32_t full = StateSet::full_bits(n);

  struct SampleScratch {
    NeighborhoodFunction nbhd;
    std::vector<std::uint32_t> budget_values;
    std::vector<std::uint32_t> values;
  };
  // Sample i: frame first (states in order), then one draw per budget atom.
  auto draw = [&](std::uint64_t i, SampleScratch& sc) {
    SplitMix64 rng = SplitMix64::for_sample(mode.seed, i);
    if (space) {
      space->sample(rng, sc.nbhd);
    } else {
      sample_unrestricted(rng, sc.nbhd);
    }
    for (std::size_t a = 0; a < k; ++a) {
      sc.budget_values[a] = static_cast<std::uint32_t>(rng.next()) & full;
    }
    for (std::size_t a = 0; a < ev.atoms().size(); ++a) {
      sc.values[a] = sc.budget_values[budget.lookup[a]];
    }
    return ev.extension_bits(sc.nbhd, sc.values);
  };
  std::function<SampleScratch()> make = [&] {
    return SampleScratch{NeighborhoodFunction(n), std::vector<std::uint32_t>(k),
                         std::vector<std::uint32_t>(ev.atoms().size())};
  };
  std::function<bool(std::uint64_t, SampleScratch&)> pred = [&](std::uint64_t i,
                                                                SampleScratch& sc) {
    return draw(i, sc) != full;
  };

  Verdict verdict;
  verdict.max_states = n;
  verdict.sampled = true;
  verdict.samples = mode.count;
  verdict.seed = mode.seed;
  auto hit = parallel_find_first<SampleScratch>(mode.count, options.jobs, make, pred);
  if (hit) {
    SampleScratch sc = make();
    const std::uint32_t ext = draw(*hit, sc);
    verdict.countermodel = build_countermodel(sc.nbhd, budget, sc.budget_values, ext);
    self_check(*verdict.countermodel, f, options.force);
  }
  return verdict;
}

}  // namespace

Verdict find_countermodel(const Formula& f, const ClassSpec& cls, const SearchMode& mode,
                          const SearchOptions& options) {
  if (cls.max_states < 1 || cls.max_states > kMaxStates) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_states must be between 1 and " + std::to_string(kMaxStates));
  }
  Evaluator ev(f);
  if (ev.has_announcement() && !options.force && !requires_monotone(cls.properties)) {
    throw Error(ErrorCode::kPrecondition,
                "announcements need a class with (m); pass force to evaluate anyway");
  }
  Budget budget = make_budget(ev, cls.atoms);
  if (const auto* sampled = std::get_if<Sampled>(&mode)) {
    return sampled_search(f, ev, budget, cls, *sampled, options);
  }
  if (cls.max_states > kMaxExhaustiveStates) {
    throw Error(ErrorCode::kTooLarge, "exhaustive search supports up to " +
                                          std::to_string(kMaxExhaustiveStates) +
                                          " states; use sampling");
  }
  return exhaustive_search(f, ev, budget, cls, options);
}

Fragment parse_fragment(std::string_view id) {
  if (id == "bullet" || id == "U") return Fragment::kBullet;
  if (id == "wrong" || id == "w" || id == "W") return Fragment::kWrong;
  if (id == "full") return Fragment::kFull;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown fragment '" + std::string(id) + "' (expected bullet, wrong or full)");
}

std::vector<Op> fragment_modalities(Fragment fragment) {
  switch (fragment) {
    case Fragment::kBullet: return {Op::kBullet};
    case Fragment::kWrong: return {Op::kWrong};
    case Fragment::kFull: return {Op::kBullet, Op::kWrong, Op::kCirc, Op::kBox};
  }
  return {};
}

FormulaEnumerator::FormulaEnumerator(std::vector<NeighborhoodModel> models, Fragment fragment,
                                     std::vector<std::string> atoms, int depth,
                                     std::size_t max_classes)
    : models_(std::move(models)),
      fragment_(fragment),
      atoms_(std::move(atoms)),
      depth_(depth),
      max_classes_(max_classes) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool FormulaEnumerator::add(Formula f, std::vector<std::uint32_t> ext, int depth,
                            const Callback& on_new) {
  if (index_.contains(ext)) return false;
  if (classes_.size() >= max_classes_) {
    throw Error(ErrorCode::kTooLarge,
                "formula enumeration exceeded " + std::to_string(max_classes_) + " classes");
  }
  index_.emplace(ext, classes_.size());
  classes_.push_back(FormulaClass{std::move(f), std::move(ext), depth});
  if (on_new && on_new(classes_.back())) {
    stopper_ = classes_.back();
    return true;
  }
  return false;
}

bool FormulaEnumerator::close(const Callback& on_new) {
  // Every class below closed_ has had its negation and its conjunctions
  // with all earlier classes added.
  for (; closed_ < classes_.size(); ++closed_) {
    const std::size_t i = closed_;
    std::vector<std::uint32_t> ext(models_.size());
    for (std::size_t m = 0; m < models_.size(); ++m) {
      ext[m] = StateSet::full_bits(models_[m].size()) & ~classes_[i].extensions[m];
    }
    if (add(neg(classes_[i].formula), ext, classes_[i].depth, on_new)) return true;
    for (std::size_t j = 0; j < i; ++j) {
      for (std::size_t m = 0; m < models_.size(); ++m) {
        ext[m] = classes_[j].extensions[m] & classes_[i].extensions[m];
      }
      if (add(conj(classes_[j].formula, classes_[i].formula), ext,
              std::max(classes_[j].depth, classes_[i].depth), on_new)) {
        return true;
      }
    }
  }
  return false;
}

std::optional<FormulaClass> FormulaEnumerator::run(const Callback& on_new) {
  classes_.clear();
  index_.clear();
  closed_ = 0;
  stopper_.reset();

  auto run_all = [&]() -> bool {
    std::vector<std::uint32_t> ext(models_.size());
    for (const auto& a : atoms_) {
      for (std::size_t m = 0; m < models_.size(); ++m) ext[m] = models_[m].valuation_of(a).bits();
      if (add(atom(a), ext, 0, on_new)) return true;
    }
    for (std::size_t m = 0; m < models_.size(); ++m) ext[m] = StateSet::full_bits(models_[m].size());
    if (add(top(), ext, 0, on_new)) return true;
    if (close(on_new)) return true;

    const auto modalities = fragment_modalities(fragment_);
    for (int d = 1; d <= depth_; ++d) {
      const std::size_t layer = classes_.size();
      for (std::size_t i = 0; i < layer; ++i) {
        for (Op op : modalities) {
          for (std::size_t m = 0; m < models_.size(); ++m) {
            ext[m] = modal_image(op, models_[m].nbhd(), classes_[i].extensions[m]);
          }
          if (add(make_formula(op, {}, &classes_[i].formula, nullptr), ext, d, on_new)) {
            return true;
          }
        }
      }
      if (close(on_new)) return true;
    }
    return false;
  };
  run_all();
  return stopper_;
}

std::optional<Formula> distinguish(const PointedModel& a, const PointedModel& b,
                                   Fragment fragment, int depth) {
  std::set<std::string> atoms;
  for (const auto& [name, v] : a.model.valuation()) atoms.insert(name);
  for (const auto& [name, v] : b.model.valuation()) atoms.insert(name);
  FormulaEnumerator en({a.model, b.model}, fragment, {atoms.begin(), atoms.end()}, depth);
  auto hit = en.run([&](const FormulaClass& c) {
    return ((c.extensions[0] >> a.point) & 1u) != ((c.extensions[1] >> b.point) & 1u);
  });
  if (!hit) return std::nullopt;
  return hit->formula;
}

}  // namespace nbhd
