#include "doctest.h"
#include "helpers.hpp"
#include "nbhd/announce.hpp"
#include "nbhd/error.hpp"
#include "nbhd/semantics.hpp"

using namespace nbhd;

TEST_CASE("single axiom steps") {
  auto r = reduce(parse("[p] q"));
  CHECK(print(r.result) == "p -> q");
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].axiom == "AP");

  CHECK(print(reduce(parse("[p] (q & r)")).result) == "(p -> q) & (p -> r)");
  CHECK(reduce(parse("[p] (q & r)")).trace[0].axiom == "AC");
  CHECK(print(reduce(parse("[p] true")).result) == "true");
  CHECK(print(reduce(parse("[p] false")).result) == "p -> false");
  auto aa = reduce(parse("[p] [q] r"));
  CHECK(aa.trace[0].axiom == "AA");
  CHECK(print(aa.trace[0].after) == "[p & [p] q] r");
}

TEST_CASE("bullet Moore sentence trace") {
  auto r = reduce(parse("[U p] ! U p"));
  CHECK(print(r.result) == "U p -> ! (U p -> U (U p -> p))");
  CHECK(format_trace(r.trace) ==
        "1. AN @ root: [U p] ! U p ==> U p -> ! [U p] U p\n"
        "2. AU @ 1.0: [U p] U p ==> U p -> U [U p] p\n"
        "3. AP @ 1.0.1.0: [U p] p ==> U p -> p\n");
}

TEST_CASE("reduced forms of the announced ignorance sentences") {
  CHECK(print(reduce(parse("[! U p] ! U p")).result) == "! U p -> ! (! U p -> U (! U p -> p))");
  auto w = reduce(parse("[W p] W p"));
  CHECK(print(w.result) == "W p -> W (W p -> p)");
  REQUIRE(w.trace.size() == 2);
  CHECK(w.trace[0].axiom == "AW");
  CHECK(w.trace[1].axiom == "AP");
}

TEST_CASE("announcement-free input is unchanged") {
  auto r = reduce(parse("U p & ! W q"));
  CHECK(r.result == parse("U p & ! W q"));
  CHECK(r.trace.empty());
}

TEST_CASE("derived connectives must be desugared first") {
  for (const char* text : {"[p] (q | r)", "[p] O q", "K p", "p -> q", "p <-> q"}) {
    CHECK_THROWS_AS(reduce(parse(text)), Error);
  }
  CHECK_NOTHROW(reduce(desugar(parse("[p] (q | K r)"), DesugarTarget::kCoreBulletWrong)));
}

TEST_CASE("positions and replay") {
  Formula f = parse("U (p & [q] W r)");
  CHECK(subformula_at(f, {0, 1}) == parse("[q] W r"));
  CHECK(replace_at(f, {0, 0}, parse("s")) == parse("U (s & [q] W r)"));
  CHECK_THROWS_AS(subformula_at(f, {1}), Error);
  CHECK(format_position({}) == "root");
  CHECK(format_position({1, 0, 1}) == "1.0.1");

  auto r = reduce(parse("[U p] ! U p"));
  CHECK(replay(parse("[U p] ! U p"), r.trace) == r.result);
  CHECK_THROWS_AS(replay(parse("[U q] ! U q"), r.trace), Error);
}

TEST_CASE("simplify folds double negation and implications") {
  CHECK(print(simplify(parse("! ! p"))) == "p");
  CHECK(print(simplify(parse("! (p & ! q)"))) == "p -> q");
  CHECK(print(simplify(parse("U ! ! p"))) == "U p");
}

TEST_CASE("reduction preserves truth on monotone models") {
  SplitMix64 rng(31);
  const std::vector<Op> modal = {Op::kBullet, Op::kWrong};
  for (int i = 0; i < 2000; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    NeighborhoodModel m(supplementation(testing::random_model(rng, n, {}).frame()));
    for (const char* a : {"p", "q"}) {
      m.set_valuation(a, StateSet(n, static_cast<std::uint32_t>(rng.next()) & StateSet::full_bits(n)));
    }
    Formula f = testing::random_formula(rng, 2, {"p", "q"}, modal, false, true, 10);
    auto r = reduce(f);
    INFO(print(f));
    CHECK_FALSE(has_announcement(r.result));
    CHECK(replay(f, r.trace) == r.result);
    CHECK(extension(m, f) == extension(m, r.result));
  }
}
