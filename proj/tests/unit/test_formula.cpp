#include "doctest.h"
#include "helpers.hpp"
#include "nbhd/error.hpp"
#include "nbhd/formula.hpp"
#include "nbhd/semantics.hpp"

using namespace nbhd;

TEST_CASE("parse builds the expected trees") {
  const Formula p = atom("p"), q = atom("q"), r = atom("r");
  CHECK(parse("U p") == bullet(p));
  CHECK(parse("[U p] ! U p") == announce(bullet(p), neg(bullet(p))));
  CHECK(parse("W p & ! q -> K r") == imp(conj(wrong(p), neg(q)), box(r)));
  CHECK(parse("O true") == circ(top()));
  CHECK(parse("false") == bot());
  CHECK(parse("p | q & r") == disj(p, conj(q, r)));
  CHECK(parse("p -> q -> r") == imp(p, imp(q, r)));
  CHECK(parse("p <-> q <-> r") == iff(iff(p, q), r));
  CHECK(parse("[p][q] r") == announce(p, announce(q, r)));
  CHECK(parse("![p] q") == neg(announce(p, q)));
  CHECK(parse("  (p)  ") == p);
  CHECK(parse("x_1 & y2") == conj(atom("x_1"), atom("y2")));
}

TEST_CASE("parse reports offset and expected tokens") {
  auto fails_at = [](const char* text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK_FALSE(e.expected().empty());
      return e.offset();
    }
    FAIL("no parse error for " << text);
    return 0;
  };
  CHECK(fails_at("") == 0);
  CHECK(fails_at("p &") == 3);
  CHECK(fails_at("(p") == 2);
  CHECK(fails_at("p q") == 2);
  CHECK(fails_at("[p q") == 3);
  CHECK(fails_at("P") == 0);
  CHECK(fails_at("p # q") == 2);
  CHECK(fails_at("U") == 1);
}

TEST_CASE("atom names are validated") {
  CHECK_THROWS_AS(atom("P"), Error);
  CHECK_THROWS_AS(atom("1p"), Error);
  CHECK_THROWS_AS(atom("true"), Error);
  CHECK_NOTHROW(atom("p_0"));
}

TEST_CASE("printer uses minimal parentheses and single spaces") {
  CHECK(print(parse("U(U p->p)")) == "U (U p -> p)");
  CHECK(print(parse("[U p]!U p")) == "[U p] ! U p");
  CHECK(print(parse("(p -> q) -> r")) == "(p -> q) -> r");
  CHECK(print(parse("p -> (q -> r)")) == "p -> q -> r");
  CHECK(print(parse("p <-> (q <-> r)")) == "p <-> (q <-> r)");
  CHECK(print(parse("(p <-> q) <-> r")) == "p <-> q <-> r");
  CHECK(print(parse("!(p & q)")) == "! (p & q)");
  CHECK(print(parse("(p | q) & r")) == "(p | q) & r");
  CHECK(print(parse("[p & q] (r | p)")) == "[p & q] (r | p)");
  CHECK(print(parse("O true & K false")) == "O true & K false");
}

TEST_CASE("parse inverts print on random formulas") {
  SplitMix64 rng(7);
  const std::vector<Op> modal = {Op::kBullet, Op::kCirc, Op::kWrong, Op::kBox};
  for (int i = 0; i < 3000; ++i) {
    Formula f = testing::random_formula(rng, 4, {"p", "q", "r"}, modal, true, true, 12);
    INFO(print(f));
    CHECK(parse(print(f)) == f);
  }
}

TEST_CASE("desugar examples") {
  const Formula p = atom("p"), q = atom("q");
  auto core = [](const Formula& f) { return desugar(f, DesugarTarget::kCoreBulletWrong); };
  CHECK(core(circ(p)) == neg(bullet(p)));
  CHECK(core(imp(p, q)) == neg(conj(p, neg(q))));
  CHECK(core(disj(p, q)) == neg(conj(neg(p), neg(q))));
  CHECK(core(bot()) == neg(top()));
  CHECK(core(top()) == top());
  // K p as W p | (O p & p)
  CHECK(core(box(p)) == neg(conj(neg(wrong(p)), neg(conj(neg(bullet(p)), p)))));
  CHECK(desugar(box(p), DesugarTarget::kFull) == box(p));
  CHECK(core(announce(circ(p), box(q))) == announce(neg(bullet(p)), core(box(q))));
}

TEST_CASE("desugar output uses only core constructors") {
  SplitMix64 rng(11);
  const std::vector<Op> modal = {Op::kBullet, Op::kCirc, Op::kWrong, Op::kBox};
  for (int i = 0; i < 1000; ++i) {
    Formula f = desugar(testing::random_formula(rng, 3, {"p", "q"}, modal, true, true, 10),
                        DesugarTarget::kCoreBulletWrong);
    for (Op op : {Op::kBot, Op::kOr, Op::kImp, Op::kIff, Op::kCirc, Op::kBox}) {
      CHECK_FALSE(contains_op(f, op));
    }
  }
}

TEST_CASE("desugar preserves truth on models up to 3 states") {
  SplitMix64 rng(13);
  const std::vector<Op> modal = {Op::kBullet, Op::kCirc, Op::kWrong, Op::kBox};
  for (int i = 0; i < 3000; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    NeighborhoodModel m = testing::random_model(rng, n, {"p", "q"});
    Formula f = testing::random_formula(rng, 2, {"p", "q"}, modal, true, false, 10);
    INFO(print(f));
    CHECK(extension(m, f) == extension(m, desugar(f, DesugarTarget::kCoreBulletWrong)));
  }
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(atom("p")) == 0);
  CHECK(modal_depth(parse("U W p")) == 2);
  CHECK(modal_depth(parse("[p] q")) == 1);
  CHECK(modal_depth(parse("[U p] W q & K O r")) == 2);
  CHECK(modal_depth(parse("[[p] U q] r")) == 3);
  CHECK(announcement_depth(parse("[[p] U q] r")) == 2);
  CHECK(announcement_depth(parse("U W p")) == 0);
}

TEST_CASE("atoms and structural queries") {
  Formula f = parse("[q] U p & W (r -> q)");
  CHECK(atoms_of(f) == std::set<std::string>{"p", "q", "r"});
  CHECK(has_announcement(f));
  CHECK(contains_op(f, Op::kImp));
  CHECK_FALSE(contains_op(f, Op::kBox));
  CHECK(parse("U p").hash() == bullet(atom("p")).hash());
}
