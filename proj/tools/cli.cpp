#include "cli.hpp"

#include <algorithm>
#include <thread>

#include "CLI11.hpp"
#include "nbhd/announce.hpp"
#include "nbhd/error.hpp"
#include "nbhd/model_json.hpp"
#include "nbhd/morphism.hpp"
#include "nbhd/search.hpp"
#include "nbhd/semantics.hpp"
#include "nbhd/suite.hpp"

#ifndef NBHD_FIXTURE_DIR
#define NBHD_FIXTURE_DIR "data/fixtures"
#endif

namespace nbhd::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;

int state_index(const NeighborhoodModel& m, const std::string& name) {
  auto s = m.frame().index_of(name);
  if (!s) throw Error(ErrorCode::kInvalidArgument, "model has no state '" + name + "'");
  return *s;
}

void warn_force(const NeighborhoodModel& m, const Formula& f, bool force, std::ostream& err) {
  if (force && has_announcement(f) && !check_property(m.frame(), FrameProperty::kMonotone)) {
    err << "warning: evaluating announcements on a model without (m)\n";
  }
}

Json names_of(const NeighborhoodFrame& frame, StateSet x) { return set_to_json(frame, x); }

std::vector<std::string> split_atoms(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string::npos) comma = list.size();
    std::string a = list.substr(pos, comma - pos);
    if (!is_identifier(a)) throw Error(ErrorCode::kInvalidArgument, "invalid atom '" + a + "'");
    out.push_back(a);
    pos = comma + 1;
  }
  return out;
}

struct SearchArgs {
  std::string formula;
  std::string cls = "all";
  int max_states = 3;
  std::string atoms;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool force = false;
};

void add_search_flags(CLI::App* sub, SearchArgs& a) {
  sub->add_option("-f,--formula", a.formula, "Formula")->required();
  sub->add_option("--class", a.cls, "Frame class: m,c,n,r,filter,neg-suppl or all");
  sub->add_option("--max-states", a.max_states, "State bound")->check(CLI::Range(1, kMaxStates));
  sub->add_option("--atoms", a.atoms, "Atom budget, comma separated");
  sub->add_option("--samples", a.samples, "Sample this many models on --max-states states");
  sub->add_option("--seed", a.seed, "Sampling seed");
  sub->add_flag("--force", a.force, "Allow announcements outside (m)");
}

Verdict search(const SearchArgs& a, int jobs) {
  ClassSpec cls{parse_class(a.cls), a.max_states, split_atoms(a.atoms)};
  SearchMode mode = Exhaustive{};
  if (a.samples > 0) mode = Sampled{a.seed, a.samples};
  return find_countermodel(parse(a.formula), cls, mode, SearchOptions{jobs, a.force});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neighborhood models for unknown truths and false beliefs", "nbhd"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for searches")->check(CLI::Range(1, 256));

  std::string model_path, target_path, state, formula, op, map_spec, kind = "bullet";
  std::string target_state, fragment = "full", fixture_dir = NBHD_FIXTURE_DIR;
  bool force = false, desugar_first = false, simplified = false;
  int depth = 2, states = 2;
  std::string cls = "all";
  SearchArgs search_args;

  auto* check = app.add_subcommand("check", "Truth of a formula at a state");
  check->add_option("-m,--model", model_path, "Model JSON")->required();
  check->add_option("-s,--state", state, "State name")->required();
  check->add_option("-f,--formula", formula, "Formula")->required();
  check->add_flag("--force", force, "Allow announcements outside (m)");

  auto* ext = app.add_subcommand("extension", "States where a formula holds");
  ext->add_option("-m,--model", model_path, "Model JSON")->required();
  ext->add_option("-f,--formula", formula, "Formula")->required();
  ext->add_flag("--force", force, "Allow announcements outside (m)");

  auto* valid = app.add_subcommand("valid", "Bounded validity over a frame class, or on -m's frame");
  add_search_flags(valid, search_args);
  valid->add_option("-m,--model", model_path, "Check validity on this model's frame instead");

  auto* cm = app.add_subcommand("countermodel", "Least countermodel as verdict JSON");
  add_search_flags(cm, search_args);

  auto* red = app.add_subcommand("reduce", "Remove announcements with the reduction axioms");
  red->add_option("-f,--formula", formula, "Formula")->required();
  red->add_flag("--desugar", desugar_first, "Desugar to !, &, U, W first");
  red->add_flag("--simplify", simplified, "Print the result with !! and !(a & !b) folded");

  auto* des = app.add_subcommand("desugar", "Rewrite into atoms, true, !, &, U, W");
  des->add_option("-f,--formula", formula, "Formula")->required();

  auto* mor = app.add_subcommand("morphism", "Check a state map against a morphism condition");
  mor->add_option("-m,--model", model_path, "Source model JSON")->required();
  mor->add_option("--target", target_path, "Target model JSON")->required();
  mor->add_option("--kind", kind, "bullet or w")->check(CLI::IsMember({"bullet", "w"}));
  mor->add_option("--map", map_spec, "s:s,t:t (default: identity by name)");

  auto* tr = app.add_subcommand("transform", "Apply a model transformer");
  tr->add_option("-m,--model", model_path, "Model JSON")->required();
  tr->add_option("--op", op, "supplementation | tc | intersect:<formula> | perturb:<file>")
      ->required();
  tr->add_flag("--force", force, "Allow intersection submodels outside (m)");

  auto* props = app.add_subcommand("props", "Frame properties of a model");
  props->add_option("-m,--model", model_path, "Model JSON")->required();

  auto* en = app.add_subcommand("enumerate", "Count frames per state count in a class");
  en->add_option("--states", states, "Up to this many states")->check(CLI::Range(1, kMaxExhaustiveStates));
  en->add_option("--class", cls, "Frame class");

  auto* dis = app.add_subcommand("distinguish", "Find a fragment formula separating two points");
  dis->add_option("-m,--model", model_path, "First model JSON")->required();
  dis->add_option("-s,--state", state, "First state")->required();
  dis->add_option("--target", target_path, "Second model JSON")->required();
  dis->add_option("--target-state", target_state, "Second state (default: same name)");
  dis->add_option("--fragment", fragment, "bullet, wrong or full");
  dis->add_option("--depth", depth, "Modal depth bound")->check(CLI::NonNegativeNumber);

  auto* suite = app.add_subcommand("paper-suite", "Replay the shipped fixtures");
  suite->add_option("--fixtures", fixture_dir, "Fixture directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*check) {
      auto m = read_model_file(model_path);
      Formula f = parse(formula);
      warn_force(m, f, force, err);
      bool v = eval(PointedModel(m, state_index(m, state)), f, EvalOptions{force});
      out << (v ? "true" : "false") << '\n';
      return v ? kOk : kFalse;
    }
    if (*ext) {
      auto m = read_model_file(model_path);
      Formula f = parse(formula);
      warn_force(m, f, force, err);
      out << names_of(m.frame(), extension(m, f, EvalOptions{force})).dump() << '\n';
      return kOk;
    }
    if (*valid) {
      if (!model_path.empty()) {
        auto m = read_model_file(model_path);
        bool v = frame_valid(m.frame(), parse(search_args.formula), EvalOptions{search_args.force});
        out << (v ? "valid" : "invalid") << '\n';
        return v ? kOk : kFalse;
      }
      Verdict v = search(search_args, jobs);
      out << (v.found() ? "countermodel" : "no-counterexample") << '\n';
      out << describe_verdict(v) << '\n';
      if (v.found()) out << model_to_json(v.countermodel->model).dump() << '\n';
      return v.found() ? kFalse : kOk;
    }
    if (*cm) {
      Verdict v = search(search_args, jobs);
      out << verdict_to_json(v).dump() << '\n';
      return v.found() ? kFalse : kOk;
    }
    if (*red) {
      Formula f = parse(formula);
      if (desugar_first) f = desugar(f, DesugarTarget::kCoreBulletWrong);
      Reduction r = reduce(f);
      out << print(simplified ? simplify(r.result) : r.result) << '\n';
      out << format_trace(r.trace);
      return kOk;
    }
    if (*des) {
      out << print(desugar(parse(formula), DesugarTarget::kCoreBulletWrong)) << '\n';
      return kOk;
    }
    if (*mor) {
      auto src = read_model_file(model_path);
      auto tgt = read_model_file(target_path);
      StateMap f = map_spec.empty() ? StateMap::identity(src, tgt) : StateMap::parse(src, tgt, map_spec);
      auto result = check_morphism(f, kind == "w" ? MorphismKind::kWrong : MorphismKind::kBullet);
      if (result) {
        out << "morphism\n";
        return kOk;
      }
      out << "not a morphism: " << describe_witness(f, *result.witness) << '\n';
      return kFalse;
    }
    if (*tr) {
      auto m = read_model_file(model_path);
      NeighborhoodModel res = m;
      if (op == "supplementation") {
        res = supplementation(m);
      } else if (op == "tc") {
        res = transitive_closure(m);
      } else if (op.rfind("intersect:", 0) == 0) {
        Formula f = parse(op.substr(10));
        if (force && !check_property(m.frame(), FrameProperty::kMonotone)) {
          err << "warning: intersection submodel of a model without (m)\n";
        }
        res = intersection_submodel(m, extension(m, f, EvalOptions{force}), force);
      } else if (op.rfind("perturb:", 0) == 0) {
        res = perturb(m, perturbation_from_json(read_json_file(op.substr(8)), m.frame()));
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown transform '" + op + "'");
      }
      out << model_to_json(res).dump(2) << '\n';
      return kOk;
    }
    if (*props) {
      auto m = read_model_file(model_path);
      for (auto p : {FrameProperty::kMonotone, FrameProperty::kIntersections, FrameProperty::kUnit,
                     FrameProperty::kCore, FrameProperty::kFilter,
                     FrameProperty::kNegSupplemented}) {
        out << property_id(p) << ' ' << (check_property(m.frame(), p) ? "yes" : "no") << '\n';
      }
      return kOk;
    }
    if (*en) {
      ClassSpec spec{parse_class(cls), states, {}};
      for (int n = 1; n <= states; ++n) {
        out << n << ' ' << enumerate_frames(n, spec).size() << '\n';
      }
      return kOk;
    }
    if (*dis) {
      auto a = read_model_file(model_path);
      auto b = read_model_file(target_path);
      int sa = state_index(a, state);
      int sb = state_index(b, target_state.empty() ? state : target_state);
      auto f = distinguish(PointedModel(a, sa), PointedModel(b, sb), parse_fragment(fragment), depth);
      if (f) {
        out << print(*f) << '\n';
        return kOk;
      }
      out << "none up to depth " << depth << '\n';
      return kFalse;
    }
    if (*suite) {
      auto rows = run_paper_suite(fixture_dir, SearchOptions{jobs, false});
      out << format_suite(rows);
      bool all = std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.pass; });
      return all ? kOk : kFalse;
    }
  } catch (const Error& e) {
    err << "error[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace nbhd::cli
