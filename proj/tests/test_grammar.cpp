#include <doctest.h>

#include <deque>
#include <random>

#include "fixtures.hpp"
#include "fogbisim/error.hpp"
#include "fogbisim/grammar.hpp"
#include "fogbisim/random_models.hpp"

using namespace fogbisim;

namespace {

const char* kFigureGrammar = R"(grammar
nonterminal A/3 B/0 C/2 D/2
action a b
rule A(x1,x2,x3) -a-> C(x2, D(x2,x1))
rule A(x1,x2,x3) -b-> x2
)";

// Exhaustive path enumeration, independent of step_word.
std::set<TermRef> paths(const Grammar& g, TermRef e, const std::vector<ActionId>& w, std::size_t at = 0) {
  if (at == w.size()) return {e};
  std::set<TermRef> out;
  if (g.store().is_var(e)) return out;
  auto sigma = g.store().root_substitution(e);
  for (std::size_t r : g.rules_of(g.store().symbol(e))) {
    const Rule& rule = g.rules()[r];
    if (rule.action != w[at]) continue;
    auto rest = paths(g, g.store().apply(rule.rhs, sigma), w, at + 1);
    out.insert(rest.begin(), rest.end());
  }
  return out;
}

}  // namespace

TEST_CASE("grammar parsing accepts the figure rules and rejects bad ones") {
  auto g = fixtures::grammar(kFigureGrammar);
  CHECK(g.rules().size() == 2);
  CHECK(g.nonterminal_count() == 4);

  CHECK_THROWS_AS(fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> x2\n"), InputError);
  CHECK_THROWS_AS(fixtures::grammar("grammar\nnonterminal A/1 B/1\naction a\nrule A(x1) -a-> rec L = B(ref L)\n"),
                  InputError);
  CHECK_THROWS_AS(fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> Q(x1)\n"), InputError);
  CHECK_THROWS_AS(fixtures::grammar("grammar\nnonterminal A/2\naction a\nrule A(x1,x2) -a-> A(x1)\n"), InputError);
  try {
    fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> A(x1\n");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("grammar serialisation round trips") {
  auto g = fixtures::grammar(kFigureGrammar);
  const std::string once = serialize_grammar(g);
  auto again = parse_grammar(once);
  CHECK(serialize_grammar(again) == once);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto r = random_grammar(rng);
    auto text = serialize_grammar(r);
    CHECK(serialize_grammar(parse_grammar(text)) == text);
  }
}

TEST_CASE("grammar size sums arity, one and rhs size per rule") {
  CHECK(grammar_size(fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> x1\n")) == 3);
  CHECK(grammar_size(fixtures::grammar("grammar\nnonterminal A/1\naction a\n")) == 0);
  // two rules with the same rhs are counted twice
  auto g = fixtures::grammar(
      "grammar\nnonterminal A/1 B/2\naction a b\nrule A(x1) -a-> B(x1,x1)\nrule A(x1) -b-> B(x1,x1)\n");
  CHECK(grammar_size(g) == 2 * (1 + 1 + 2));
  CHECK(grammar_size(fixtures::grammar(kFigureGrammar)) == (3 + 1 + 4) + (3 + 1 + 1));
}

TEST_CASE("head rewriting on the figure term") {
  auto g = fixtures::grammar(kFigureGrammar);
  TermRef e1 = fixtures::term(g, "A(D(x5, C(x2, B)), x5, B)");
  auto ts = transitions(g, e1, VarMode::Dead);
  REQUIRE(ts.size() == 2);
  CHECK(g.action_label(ts[0].action) == "a");
  CHECK(ts[0].target == fixtures::term(g, "C(x5, D(x5, D(x5, C(x2, B))))"));
  CHECK(g.action_label(ts[1].action) == "b");
  CHECK(ts[1].target == fixtures::term(g, "x5"));

  TermRef x3 = fixtures::term(g, "x3");
  CHECK(transitions(g, x3, VarMode::Dead).empty());
  auto loop = transitions(g, x3, VarMode::SelfLoop);
  REQUIRE(loop.size() == 1);
  CHECK(loop[0].target == x3);
  CHECK(loop[0].action == -3);
  CHECK(g.action_label(loop[0].action) == "a[x3]");

  // terms rooted by a symbol without rules are dead ends
  CHECK(transitions(g, fixtures::term(g, "B"), VarMode::SelfLoop).empty());
}

TEST_CASE("head rewriting commutes with substitution") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    auto g = random_grammar(rng);
    auto& st = g.store();
    TermRef e = random_term(g, rng, 2, 3);
    if (st.is_var(e)) continue;
    Substitution sigma{{1, random_term(g, rng, 2, 2)}, {2, random_term(g, rng, 1, 2)}};
    auto lhs = transitions(g, st.apply(e, sigma), VarMode::Dead);
    auto rhs = transitions(g, e, VarMode::Dead);
    REQUIRE(lhs.size() == rhs.size());
    CHECK(rhs.size() == g.rules_of(st.symbol(e)).size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      CHECK(lhs[i].action == rhs[i].action);
      CHECK(lhs[i].target == st.apply(rhs[i].target, sigma));
    }
  }
}

TEST_CASE("step_word follows words exactly") {
  auto g = fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> x1\n");
  TermRef a = fixtures::term(g, "A(x1)");
  CHECK(step_word(g, a, {}) == std::set<TermRef>{a});
  CHECK(step_word(g, a, parse_word(g, "a")) == std::set<TermRef>{fixtures::term(g, "x1")});
  CHECK(parse_word(g, "eps").empty());

  auto nd = fixtures::grammar(R"(grammar
nonterminal S/0 T/1 U/0
action a b
rule S -a-> T(S)
rule S -a-> T(U)
rule S -a-> U
rule T(x1) -b-> x1
rule T(x1) -b-> T(T(x1))
rule U -a-> S
rule U -b-> U
)");
  TermRef s = fixtures::term(nd, "S");
  auto w = parse_word(nd, "a b b");
  auto got = step_word(nd, s, w);
  CHECK(got.size() > 1);
  CHECK(got == paths(nd, s, w));

  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    auto g2 = random_grammar(rng);
    TermRef e = random_term(g2, rng, 1, 2);
    std::vector<ActionId> word;
    for (int k = 0; k < 4; ++k) word.push_back(static_cast<ActionId>(rng() % 2));
    auto whole = step_word(g2, e, word);
    CHECK(whole == paths(g2, e, word));
    // step_word(uv) is the union over intermediate terms
    std::vector<ActionId> u(word.begin(), word.begin() + 2), v(word.begin() + 2, word.end());
    std::set<TermRef> split;
    for (TermRef mid : step_word(g2, e, u)) {
      auto part = step_word(g2, mid, v);
      split.insert(part.begin(), part.end());
    }
    CHECK(split == whole);
  }
}
