#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "fogbisim/eq_level.hpp"
#include "fogbisim/error.hpp"
#include "fogbisim/random_models.hpp"

using namespace fogbisim;

namespace {

const char* kZero = "grammar\nnonterminal A/0 B/0\naction a b\nrule A -a-> A\nrule A -b-> A\nrule B -a-> B\n";
const char* kOne = "grammar\nnonterminal A/0 B/0 Z/0\naction a\nrule A -a-> Z\nrule B -a-> B\n";

GameConfig cap(std::uint64_t k) {
  GameConfig cfg;
  cfg.cap = k;
  return cfg;
}

}  // namespace

TEST_CASE("levels of the two nullary fixtures") {
  auto g0 = fixtures::grammar(kZero);
  TermRef a = fixtures::term(g0, "A"), b = fixtures::term(g0, "B");
  CHECK(eq_level_bounded(g0, a, b, cap(5)) == EqLevelResult::Finite(0));
  CHECK(eq_level_bounded(g0, b, a, cap(5)) == EqLevelResult::Finite(0));
  for (std::uint64_t k = 0; k < 6; ++k) CHECK(eq_level_bounded(g0, a, a, cap(k)) == EqLevelResult::AtLeast(k));

  auto g1 = fixtures::grammar(kOne);
  TermRef a1 = fixtures::term(g1, "A"), b1 = fixtures::term(g1, "B");
  CHECK(eq_level_bounded(g1, a1, b1, cap(5)) == EqLevelResult::Finite(1));
  CHECK(eq_level_bounded(g1, a1, b1, cap(1)) == EqLevelResult::AtLeast(1));
  CHECK(eq_level_bounded(g1, a1, b1, cap(2)) == EqLevelResult::Finite(1));
}

TEST_CASE("a variable differs from any other term at level zero") {
  auto g = fixtures::grammar(kZero);
  TermRef x1 = fixtures::term(g, "x1");
  for (const char* other : {"A", "B", "x2"}) {
    CHECK(eq_level_bounded(g, x1, fixtures::term(g, other), cap(3)) == EqLevelResult::Finite(0));
  }
  // a dead term and a variable in dead mode: neither can move
  auto gz = fixtures::grammar(kOne);
  GameConfig dead = cap(3);
  dead.variable_mode = VarMode::Dead;
  auto r = eq_level_bounded(gz, fixtures::term(gz, "x1"), fixtures::term(gz, "Z"), dead);
  CHECK_FALSE(r.finite);
  CHECK(eq_level_bounded(gz, fixtures::term(gz, "x1"), fixtures::term(gz, "Z"), cap(3)) == EqLevelResult::Finite(0));
}

TEST_CASE("exploration budget is reported separately") {
  auto g = fixtures::grammar(
      "grammar\nnonterminal A/1 B/1 Z/0\naction a\nrule A(x1) -a-> A(B(x1))\nrule B(x1) -a-> x1\n");
  GameConfig cfg = cap(1000);
  cfg.budget = 50;
  CHECK_THROWS_AS(eq_level_bounded(g, fixtures::term(g, "A(Z)"), fixtures::term(g, "A(B(Z))"), cfg), BudgetExceeded);
}

TEST_CASE("stratified partitions") {
  auto g = fixtures::grammar(kOne);
  GrammarLts lts(g, VarMode::SelfLoop);
  TermRef a = fixtures::term(g, "A"), b = fixtures::term(g, "B");
  auto p0 = sim_k_partition(lts, {a, b}, 0);
  REQUIRE(p0.block.size() == 1);
  for (auto blk : p0.block[0]) CHECK(blk == 0);

  auto p = sim_k_partition(lts, {a, b}, 4);
  CHECK(p.block[1][p.index_of(a)] == p.block[1][p.index_of(b)]);
  CHECK(p.block[2][p.index_of(a)] != p.block[2][p.index_of(b)]);
  CHECK(level_from_partitions(p, a, b) == EqLevelResult::Finite(1));
}

TEST_CASE("finite-state decision") {
  auto g = fixtures::grammar("grammar\nnonterminal A/0 B/0\naction a\nrule A -a-> A\nrule B -a-> B\n");
  auto r = finite_state_decide(g, fixtures::term(g, "A"), fixtures::term(g, "B"));
  CHECK(r.decision == Decision::Bisimilar);

  auto g0 = fixtures::grammar(kZero);
  auto r0 = finite_state_decide(g0, fixtures::term(g0, "A"), fixtures::term(g0, "B"));
  CHECK(r0.decision == Decision::NotBisimilar);
  CHECK(r0.level == 0);

  auto grow = fixtures::grammar("grammar\nnonterminal A/1 Z/0\naction a\nrule A(x1) -a-> A(A(x1))\n");
  auto ri = finite_state_decide(grow, fixtures::term(grow, "A(Z)"), fixtures::term(grow, "Z"), 20);
  CHECK(ri.decision == Decision::Inconclusive);
}

TEST_CASE("spoiler certificates") {
  auto g0 = fixtures::grammar(kZero);
  auto c0 = spoiler_certificate(g0, fixtures::term(g0, "A"), fixtures::term(g0, "B"), cap(5));
  CHECK(c0->depth() == 1);
  CHECK(c0->replies.empty());
  GrammarLts l0(g0, VarMode::SelfLoop);
  CHECK(replay_certificate(l0, *c0, 1));

  auto g1 = fixtures::grammar(kOne);
  auto c1 = spoiler_certificate(g1, fixtures::term(g1, "A"), fixtures::term(g1, "B"), cap(5));
  CHECK(c1->depth() == 2);
  GrammarLts l1(g1, VarMode::SelfLoop);
  CHECK(replay_certificate(l1, *c1, 2));
  CHECK_FALSE(replay_certificate(l1, *c1, 1));
  CHECK(certificate_json(l1, *c1).find("\"action\"") != std::string::npos);

  CHECK_THROWS_AS(spoiler_certificate(g1, fixtures::term(g1, "A"), fixtures::term(g1, "A"), cap(5)),
                  PreconditionError);
}

TEST_CASE("game agrees with stratified refinement on random grammars") {
  std::mt19937_64 rng(101);
  int finite_seen = 0;
  for (int round = 0; round < 60; ++round) {
    auto g = random_grammar(rng, {4, 2, 2, 2, 2});
    GrammarLts lts(g, VarMode::SelfLoop);
    for (int pair = 0; pair < 4; ++pair) {
      TermRef e = random_term(g, rng, 2, 2), f = random_term(g, rng, 2, 2);
      const std::uint64_t k = rng() % 9;
      auto game = eq_level_bounded(g, e, f, cap(k));
      auto part = sim_k_partition(lts, {e, f}, k);
      CHECK(game == level_from_partitions(part, e, f));
      CHECK(game == eq_level_bounded(g, f, e, cap(k)));
      // partitions refine level by level
      for (std::size_t l = 1; l < part.block.size(); ++l) {
        for (std::size_t i = 0; i < part.states.size(); ++i) {
          for (std::size_t j = i + 1; j < part.states.size(); ++j) {
            if (part.block[l][i] == part.block[l][j]) CHECK(part.block[l - 1][i] == part.block[l - 1][j]);
          }
        }
      }
      if (game.finite) {
        ++finite_seen;
        auto cert = spoiler_certificate(g, e, f, cap(k));
        CHECK(cert->depth() <= game.value + 1);
        CHECK(replay_certificate(lts, *cert, game.value + 1));
      }
    }
  }
  CHECK(finite_seen > 20);
}

TEST_CASE("finite-state decision matches the bounded game") {
  std::mt19937_64 rng(202);
  for (int round = 0; round < 60; ++round) {
    auto g = random_grammar(rng, {3, 1, 2, 2, 1});
    TermRef e = random_term(g, rng, 1, 2), f = random_term(g, rng, 1, 2);
    auto d = finite_state_decide(g, e, f, 3000);
    if (d.decision == Decision::Inconclusive) continue;
    auto game = eq_level_bounded(g, e, f, cap(12));
    if (d.decision == Decision::NotBisimilar) {
      CHECK(game == EqLevelResult::Finite(d.level));
    } else {
      CHECK_FALSE(game.finite);
    }
  }
}
