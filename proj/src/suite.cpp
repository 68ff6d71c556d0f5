#include "nbhd/suite.hpp"

#include <functional>
#include <sstream>

#include "nbhd/announce.hpp"
#include "nbhd/morphism.hpp"
#include "nbhd/semantics.hpp"

namespace nbhd {

namespace {

struct Fixture {
  NeighborhoodModel base;
  NeighborhoodModel perturbed;
  PerturbationMap pmap;
};

class Suite {
 public:
  Suite(std::string dir, SearchOptions options) : dir_(std::move(dir)), options_(options) {}

  // A check returns the detail to print; an empty optional means success.
  using Check = std::function<std::optional<std::string>()>;

  void row(const std::string& key, const std::string& check, const Check& fn) {
    SuiteRow r{"Prop " + key, check, false, {}};
    try {
      auto failure = fn();
      r.pass = !failure.has_value();
      if (failure) r.detail = *failure;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    rows_.push_back(std::move(r));
  }

  Fixture fixture(const std::string& name) const {
    NeighborhoodModel base = read_model_file(path(name + ".json"));
    NeighborhoodModel perturbed = read_model_file(path(name + "-perturbed.json"));
    PerturbationMap pmap = perturbation_from_json(read_json_file(path(name + ".perturb.json")),
                                                  base.frame());
    return {std::move(base), std::move(perturbed), std::move(pmap)};
  }

  std::string path(const std::string& file) const { return dir_ + "/" + file; }
  const SearchOptions& options() const { return options_; }
  std::vector<SuiteRow> take() { return std::move(rows_); }

 private:
  std::string dir_;
  SearchOptions options_;
  std::vector<SuiteRow> rows_;
};

std::optional<std::string> expect(bool ok, const std::string& detail) {
  if (ok) return std::nullopt;
  return detail;
}

std::optional<std::string> perturbation_reproduces(const Fixture& fx) {
  return expect(perturb(fx.base, fx.pmap) == fx.perturbed,
                "perturbing the base model does not give the shipped perturbed model");
}

std::optional<std::string> morphism_passes(const Fixture& fx, MorphismKind kind) {
  auto id = StateMap::identity(fx.base, fx.perturbed);
  auto check = check_morphism(id, kind);
  if (check) return std::nullopt;
  return "fails at " + describe_witness(id, *check.witness);
}

std::optional<std::string> morphism_fails_at(const Fixture& fx, MorphismKind kind,
                                             const std::string& expected) {
  auto id = StateMap::identity(fx.base, fx.perturbed);
  auto check = check_morphism(id, kind);
  if (check) return "identity unexpectedly passes";
  auto got = describe_witness(id, *check.witness);
  return expect(got == expected, "witness " + got + ", expected " + expected);
}

std::optional<std::string> distinguishes(const Fixture& fx, Fragment fragment, int depth,
                                         const std::optional<std::string>& expected) {
  auto found = distinguish(PointedModel(fx.base, 0), PointedModel(fx.perturbed, 0), fragment, depth);
  std::string got = found ? print(*found) : "none";
  return expect(got == expected.value_or("none"),
                "found " + got + ", expected " + expected.value_or("none"));
}

std::optional<std::string> has_all(const NeighborhoodModel& m,
                                   std::initializer_list<FrameProperty> props) {
  for (auto p : props) {
    if (!check_property(m.frame(), p)) return std::string("lacks (") + property_id(p) + ")";
  }
  return std::nullopt;
}

std::optional<std::string> property_split(const Fixture& fx, FrameProperty p, bool base_has) {
  bool b = check_property(fx.base.frame(), p);
  bool q = check_property(fx.perturbed.frame(), p);
  return expect(b == base_has && q == !base_has,
                std::string("(") + property_id(p) + ") base " + (b ? "yes" : "no") +
                    ", perturbed " + (q ? "yes" : "no"));
}

std::optional<std::string> no_countermodel(const std::string& formula, const std::string& cls,
                                           int max_states, const SearchOptions& options) {
  ClassSpec spec{parse_class(cls), max_states, {}};
  Verdict v = find_countermodel(parse(formula), spec, Exhaustive{}, options);
  return expect(!v.found(), describe_verdict(v));
}

std::optional<std::string> has_countermodel(const std::string& formula, const std::string& cls,
                                            int max_states, const SearchOptions& options) {
  ClassSpec spec{parse_class(cls), max_states, {}};
  Verdict v = find_countermodel(parse(formula), spec, Exhaustive{}, options);
  return expect(v.found(), describe_verdict(v));
}

void separation_rows(Suite& suite, const std::string& key, const std::string& name,
                     Fragment separating, const std::string& separator, MorphismKind blind,
                     MorphismKind seeing, const std::string& witness) {
  const Fixture fx = suite.fixture(name);
  const char* sep_id = separating == Fragment::kWrong ? "W" : "U";
  const char* blind_id = blind == MorphismKind::kBullet ? "U" : "W";
  suite.row(key, "shipped perturbed model is the perturbation of the base",
            [&] { return perturbation_reproduces(fx); });
  suite.row(key, "both models have (m), (c), (n), (r)", [&]() -> std::optional<std::string> {
    using P = FrameProperty;
    if (auto e = has_all(fx.base, {P::kMonotone, P::kIntersections, P::kUnit, P::kCore})) {
      return "base " + *e;
    }
    if (auto e = has_all(fx.perturbed, {P::kMonotone, P::kIntersections, P::kUnit, P::kCore})) {
      return "perturbed " + *e;
    }
    return std::nullopt;
  });
  suite.row(key, std::string(sep_id) + "-formula " + separator + " separates s at depth 1",
            [&] { return distinguishes(fx, separating, 1, separator); });
  suite.row(key, std::string("no ") + blind_id + "-formula up to depth 3 separates s",
            [&] {
              return distinguishes(
                  fx, blind == MorphismKind::kBullet ? Fragment::kBullet : Fragment::kWrong, 3,
                  std::nullopt);
            });
  suite.row(key, std::string("identity is a ") + blind_id + "-morphism",
            [&] { return morphism_passes(fx, blind); });
  suite.row(key, std::string("identity is not a ") + sep_id + "-morphism (" + witness + ")",
            [&] { return morphism_fails_at(fx, seeing, witness); });
}

void undefinability_rows(Suite& suite, const std::string& key, const std::string& name,
                         FrameProperty p, bool base_has, MorphismKind kind) {
  const Fixture fx = suite.fixture(name);
  const char* id = kind == MorphismKind::kBullet ? "U" : "W";
  suite.row(key, "shipped perturbed frame is the perturbation of the base",
            [&] { return perturbation_reproduces(fx); });
  suite.row(key, std::string("frames differ on (") + property_id(p) + ")",
            [&] { return property_split(fx, p, base_has); });
  suite.row(key, std::string("identity is a ") + id + "-morphism, so the frames validate the same " +
                     id + "-formulas",
            [&] { return morphism_passes(fx, kind); });
}

std::optional<std::string> reduces_to(const std::string& input, const std::string& expected) {
  auto got = print(reduce(parse(input)).result);
  return expect(got == expected, "got " + got);
}

}  // namespace

std::vector<SuiteRow> run_paper_suite(const std::string& fixture_dir, const SearchOptions& options) {
  Suite suite(fixture_dir, options);
  const auto& opts = suite.options();

  separation_rows(suite, "3.2", "wrong-sep", Fragment::kWrong, "W p", MorphismKind::kBullet,
                  MorphismKind::kWrong, "state s, subset {t}");
  separation_rows(suite, "3.3", "bullet-sep", Fragment::kBullet, "U p", MorphismKind::kWrong,
                  MorphismKind::kBullet, "state s, subset {s}");
  undefinability_rows(suite, "4.5", "bullet-c", FrameProperty::kIntersections, false,
                      MorphismKind::kBullet);
  undefinability_rows(suite, "4.6", "bullet-m", FrameProperty::kMonotone, true,
                      MorphismKind::kBullet);
  suite.row("4.7", "O true is frame-valid exactly on (n)-frames up to 2 states",
            [&]() -> std::optional<std::string> {
              const Formula f = parse("O true");
              for (int n = 1; n <= 2; ++n) {
                for (const auto& frame : enumerate_frames(n, ClassSpec{})) {
                  if (frame_valid(frame, f) != check_property(frame, FrameProperty::kUnit)) {
                    return "disagreement on a " + std::to_string(n) + "-state frame";
                  }
                }
              }
              return std::nullopt;
            });
  undefinability_rows(suite, "4.12", "wrong-m", FrameProperty::kMonotone, false,
                      MorphismKind::kWrong);
  undefinability_rows(suite, "4.13", "wrong-c", FrameProperty::kIntersections, true,
                      MorphismKind::kWrong);

  suite.row("5.2", "U p -> U U p has no countermodel over (m) up to 2 states",
            [&] { return no_countermodel("U p -> U U p", "m", 2, opts); });
  suite.row("5.12", "O p & p -> O (p | q) has no countermodel over (m) up to 2 states",
            [&] { return no_countermodel("O p & p -> O (p | q)", "m", 2, opts); });
  suite.row("5.12", "O p & p -> O (p | q) has a countermodel over all frames",
            [&] { return has_countermodel("O p & p -> O (p | q)", "all", 2, opts); });
  suite.row("5.17", "W p -> ! W W p has no countermodel over all frames up to 2 states",
            [&] { return no_countermodel("W p -> ! W W p", "all", 2, opts); });

  suite.row("6.4", "least countermodel over (m) is the shipped one-state model",
            [&]() -> std::optional<std::string> {
              NeighborhoodModel moore = read_model_file(suite.path("moore.json"));
              ClassSpec spec{parse_class("m"), 3, {}};
              Verdict v = find_countermodel(parse("U p -> ! U (U p -> p)"), spec, Exhaustive{}, opts);
              if (!v.found()) return describe_verdict(v);
              return expect(v.countermodel->model == moore && v.countermodel->point == 0,
                            verdict_to_json(v).dump());
            });
  suite.row("6.4", "U p and U (U p -> p) hold at s in that model",
            [&]() -> std::optional<std::string> {
              PointedModel pm(read_model_file(suite.path("moore.json")), 0);
              return expect(eval(pm, parse("U p")) && eval(pm, parse("U (U p -> p)")),
                            "a formula is false at s");
            });
  suite.row("6.4", "reducing [U p] ! U p takes AN, AU, AP", [&]() -> std::optional<std::string> {
    auto r = reduce(parse("[U p] ! U p"));
    std::string axioms;
    for (const auto& step : r.trace) axioms += step.axiom + " ";
    return expect(axioms == "AN AU AP " && print(r.result) == "U p -> ! (U p -> U (U p -> p))",
                  "trace " + axioms + "gives " + print(r.result));
  });
  suite.row("6.5", "[! U p] ! U p reduces to ! U p -> ! (! U p -> U (! U p -> p))",
            [&] { return reduces_to("[! U p] ! U p", "! U p -> ! (! U p -> U (! U p -> p))"); });
  suite.row("6.5", "the reduced form has no countermodel over (m) up to 3 states",
            [&] { return no_countermodel("! U p -> ! (! U p -> U (! U p -> p))", "m", 3, opts); });
  suite.row("6.6", "[W p] W p reduces to W p -> W (W p -> p)",
            [&] { return reduces_to("[W p] W p", "W p -> W (W p -> p)"); });
  suite.row("6.6", "the reduced form has no countermodel over (m) up to 3 states",
            [&] { return no_countermodel("W p -> W (W p -> p)", "m", 3, opts); });
  return suite.take();
}

std::string format_suite(const std::vector<SuiteRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string key = r.key;
    key.resize(std::max<std::size_t>(key.size(), 9), ' ');
    os << (r.pass ? "PASS  " : "FAIL  ") << key << "  " << r.check;
    if (!r.detail.empty()) os << ": " << r.detail;
    os << '\n';
  }
  return os.str();
}

}  // namespace nbhd
