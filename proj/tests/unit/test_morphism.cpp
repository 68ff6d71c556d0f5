#include "doctest.h"
#include "helpers.hpp"
#include "nbhd/error.hpp"
#include "nbhd/model_json.hpp"
#include "nbhd/morphism.hpp"
#include "nbhd/semantics.hpp"

using namespace nbhd;

namespace {

NeighborhoodModel fixture(const std::string& name) {
  return read_model_file(testing::kFixtureDir + "/" + name + ".json");
}

std::vector<Formula> fragment_formulas(const NeighborhoodModel& a, const NeighborhoodModel& b,
                                       Fragment fragment, int depth,
                                       const std::vector<std::string>& atoms) {
  FormulaEnumerator en({a, b}, fragment, atoms, depth);
  en.run();
  std::vector<Formula> out;
  for (const auto& c : en.classes()) out.push_back(c.formula);
  return out;
}

PerturbationMap random_legal(SplitMix64& rng, int n, PerturbationKind kind) {
  PerturbationMap pm{kind, rng.below(2) ? PerturbationSign::kAdd : PerturbationSign::kRemove,
                     NeighborhoodFunction(n)};
  for (int w = 0; w < n; ++w) {
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
      bool has_w = (x >> w) & 1u;
      if (has_w == (kind == PerturbationKind::kWrong) && rng.below(3) == 0) pm.families.insert(w, x);
    }
  }
  return pm;
}

}  // namespace

TEST_CASE("identity maps") {
  SplitMix64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto m = testing::random_model(rng, 1 + static_cast<int>(rng.below(4)), {"p"});
    auto id = StateMap::identity(m, m);
    CHECK(check_bullet_morphism(id));
    CHECK(check_w_morphism(id));
  }
}

TEST_CASE("fixture witnesses") {
  auto bsep = StateMap::identity(fixture("bullet-sep"), fixture("bullet-sep-perturbed"));
  auto b = check_bullet_morphism(bsep);
  REQUIRE_FALSE(b);
  CHECK(*b.witness == MorphismWitness{0, StateSet(2, 0b01), std::nullopt});
  CHECK(describe_witness(bsep, *b.witness) == "state s, subset {s}");
  CHECK(check_w_morphism(bsep));

  auto wsep = StateMap::identity(fixture("wrong-sep"), fixture("wrong-sep-perturbed"));
  auto w = check_w_morphism(wsep);
  REQUIRE_FALSE(w);
  CHECK(*w.witness == MorphismWitness{0, StateSet(2, 0b10), std::nullopt});
  CHECK(check_bullet_morphism(wsep));
}

TEST_CASE("valuation witnesses come after subsets") {
  NeighborhoodModel a(NeighborhoodFrame({"s"}), {{"p", StateSet(1, 1)}});
  NeighborhoodModel b(NeighborhoodFrame({"s"}), {{"p", StateSet(1, 0)}, {"q", StateSet(1, 0)}});
  auto r = check_bullet_morphism(StateMap::identity(a, b));
  REQUIRE_FALSE(r);
  CHECK(r.witness->atom == std::optional<std::string>("p"));
  CHECK_FALSE(r.witness->subset.has_value());
}

TEST_CASE("maps parse by state name") {
  auto m = fixture("wrong-sep");
  auto one = NeighborhoodModel(NeighborhoodFrame({"u"}));
  auto f = StateMap::parse(m, one, "s:u,t:u");
  CHECK(f(0) == 0);
  CHECK(f(1) == 0);
  CHECK(f.image(StateSet(2, 0b11)) == StateSet(1, 1));
  CHECK_THROWS_AS(StateMap::parse(m, one, "s:u"), Error);
  CHECK_THROWS_AS(StateMap::parse(m, one, "s:u,t:x"), Error);
  CHECK_THROWS_AS(StateMap::parse(m, one, "s:u,s:u,t:u"), Error);
  CHECK_THROWS_AS(StateMap::parse(m, one, "s-u,t:u"), Error);
  CHECK_THROWS_AS(StateMap::identity(m, one), Error);
}

TEST_CASE("perturbations give morphisms and preserve the fragment") {
  SplitMix64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    auto m = testing::random_model(rng, n, {"p", "q"});
    for (auto kind : {PerturbationKind::kBullet, PerturbationKind::kWrong}) {
      auto mp = perturb(m, random_legal(rng, n, kind));
      auto id = StateMap::identity(m, mp);
      auto mk = kind == PerturbationKind::kBullet ? MorphismKind::kBullet : MorphismKind::kWrong;
      REQUIRE(check_morphism(id, mk));
      auto formulas = fragment_formulas(m, mp, mk == MorphismKind::kBullet ? Fragment::kBullet
                                                                         : Fragment::kWrong,
                                        3, {"p", "q"});
      CHECK(verify_invariance(id, mk, formulas).ok());
    }
  }
}

TEST_CASE("transitive closure gives a W-morphism") {
  SplitMix64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    auto m = testing::random_model(rng, n, {"p"});
    auto tc = transitive_closure(m);
    auto id = StateMap::identity(m, tc);
    REQUIRE(check_w_morphism(id));
    CHECK(verify_invariance(id, MorphismKind::kWrong,
                            fragment_formulas(m, tc, Fragment::kWrong, 2, {"p"}))
              .ok());
  }
}

TEST_CASE("passing checks imply invariance on random surjective maps") {
  SplitMix64 rng(4);
  int passed = 0;
  for (int i = 0; i < 20000 && passed < 200; ++i) {
    const int n = 1 + static_cast<int>(rng.below(2));
    const int k = 1 + static_cast<int>(rng.below(2));
    auto a = testing::random_model(rng, n, {"p"});
    auto b = testing::random_model(rng, k, {"p"});
    std::vector<int> map;
    for (int s = 0; s < n; ++s) map.push_back(static_cast<int>(rng.below(k)));
    // invariance needs a surjective map: off the image, f[phi^M] and phi^M' differ
    if (std::set<int>(map.begin(), map.end()).size() != static_cast<std::size_t>(k)) continue;
    // align valuations so (Var) can hold
    std::uint32_t pb = 0;
    for (int s = 0; s < n; ++s) {
      if (a.valuation_of("p").contains(s)) pb |= 1u << map[s];
    }
    b.set_valuation("p", StateSet(k, pb));
    StateMap f(a, b, map);
    for (auto kind : {MorphismKind::kBullet, MorphismKind::kWrong}) {
      if (!check_morphism(f, kind)) continue;
      ++passed;
      auto formulas = fragment_formulas(a, b, kind == MorphismKind::kBullet ? Fragment::kBullet
                                                                            : Fragment::kWrong,
                                        3, {"p"});
      CHECK(verify_invariance(f, kind, formulas).ok());
    }
  }
  CHECK(passed >= 200);
}

TEST_CASE("composition of morphisms") {
  SplitMix64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    auto m = testing::random_model(rng, n, {"p"});
    auto kind = rng.below(2) ? PerturbationKind::kBullet : PerturbationKind::kWrong;
    auto m1 = perturb(m, random_legal(rng, n, kind));
    auto m2 = perturb(m1, random_legal(rng, n, kind));
    auto f = StateMap::identity(m, m1);
    auto g = StateMap::identity(m1, m2);
    auto mk = kind == PerturbationKind::kBullet ? MorphismKind::kBullet : MorphismKind::kWrong;
    REQUIRE(check_morphism(f, mk));
    REQUIRE(check_morphism(g, mk));
    CHECK(check_morphism(compose(g, f), mk));
  }
  auto a = fixture("wrong-sep");
  CHECK_THROWS_AS(compose(StateMap::identity(a, a), StateMap::identity(a, fixture("wrong-sep-perturbed"))),
                  Error);
}

TEST_CASE("invariance preconditions") {
  auto a = fixture("wrong-sep");
  auto b = fixture("wrong-sep-perturbed");
  auto id = StateMap::identity(a, b);
  CHECK(verify_invariance(id, MorphismKind::kBullet, {}).ok());
  CHECK_THROWS_AS(verify_invariance(id, MorphismKind::kWrong, {parse("W p")}), Error);
  CHECK_THROWS_AS(verify_invariance(id, MorphismKind::kBullet, {parse("W p")}), Error);
  CHECK(in_fragment(parse("O p -> U (p | q)"), MorphismKind::kBullet));
  CHECK_FALSE(in_fragment(parse("K p"), MorphismKind::kBullet));
  CHECK_FALSE(in_fragment(parse("[p] q"), MorphismKind::kWrong));
}

TEST_CASE("invariance can fail for a morphism that is not onto") {
  NeighborhoodModel a(NeighborhoodFrame({"s"}), {{"p", StateSet(1, 1)}});
  NeighborhoodFrame fb({"u", "v"});
  fb.nbhd().insert(0, 0b11u);
  NeighborhoodModel b(fb, {{"p", StateSet(2, 0b01)}});
  StateMap f(a, b, {0});
  REQUIRE(check_bullet_morphism(f));
  auto report = verify_invariance(f, MorphismKind::kBullet, {parse("U true")});
  CHECK(report.violations.size() == 1);
}
