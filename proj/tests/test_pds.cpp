#include <doctest.h>

#include <deque>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "fogbisim/error.hpp"
#include "fogbisim/pds.hpp"
#include "fogbisim/random_models.hpp"

using namespace fogbisim;

namespace {

const char* kFig = "pds\nstates q1 q2 q3\nstack A C B\naction a\nrule q1 A -a-> q2 C A\n";

Configuration cfg(const Pds& m, const std::string& text) { return parse_configuration(m, text); }

// Silent run followed step by step; nullopt when it is still going after
// `limit` steps.
std::optional<Configuration> slow_run(const Pds& m, Configuration c, int limit = 400) {
  for (int i = 0; i < limit; ++i) {
    auto steps = pds_transitions(m, c);
    if (steps.size() != 1 || steps[0].action != kEpsilon) return c;
    c = steps[0].target;
  }
  return std::nullopt;
}

std::vector<Configuration> sample_configs(const Pds& m, std::mt19937_64& rng, int count, int max_len) {
  std::vector<Configuration> out;
  for (int i = 0; i < count; ++i) {
    Configuration c;
    c.state = static_cast<std::uint32_t>(rng() % m.states().size());
    c.stack.resize(rng() % static_cast<std::uint64_t>(max_len + 1));
    for (auto& y : c.stack) y = static_cast<std::uint32_t>(rng() % m.stack_symbols().size());
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("pds syntax and classification") {
  auto m = parse_pds(kFig);
  REQUIRE(m.rules().size() == 1);
  CHECK(m.rules()[0].push == std::vector<std::uint32_t>{1, 0});
  auto f = classify(m);
  CHECK(f.real_time);
  CHECK(f.restricted);
  CHECK(f.popping_eps);
  CHECK(serialize_pds(parse_pds(serialize_pds(m))) == serialize_pds(m));

  auto nondet = parse_pds("pds\nstates q2 q3\nstack A\naction a\nrule q2 A -eps-> q3\nrule q2 A -a-> q2\n");
  CHECK_FALSE(classify(nondet).restricted);
  CHECK_FALSE(classify(nondet).real_time);
  auto push = parse_pds("pds\nstates p\nstack A\nrule p A -eps-> p A A\n");
  CHECK(classify(push).restricted);
  CHECK_FALSE(classify(push).popping_eps);

  CHECK_THROWS_AS(parse_pds("pds\nstates p\nstack A\nrule p B -eps-> p\n"), InputError);
  CHECK_THROWS_AS(parse_pds("pds\nstates p\nstack A\nrule p A => p\n"), InputError);
  CHECK_THROWS_AS(parse_pds("grammar\n"), InputError);
  try {
    parse_pds("pds\nstates p\nstack A\naction a\nrule p A -b-> p\n");
    FAIL("accepted an unknown action");
  } catch (const InputError& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("pds transitions") {
  auto m = parse_pds(kFig);
  auto steps = pds_transitions(m, cfg(m, "q1 A C B"));
  REQUIRE(steps.size() == 1);
  CHECK(format_configuration(m, steps[0].target) == "q2 C A C B");
  CHECK(pds_transitions(m, cfg(m, "q1")).empty());
  auto two = parse_pds("pds\nstates p q\nstack A\naction a b\nrule p A -b-> q\nrule p A -a-> p A A\n");
  auto s2 = pds_transitions(two, cfg(two, "p A"));
  REQUIRE(s2.size() == 2);
  CHECK(format_configuration(two, s2[0].target) == "q");
  CHECK(format_configuration(two, s2[1].target) == "p A A");
}

TEST_CASE("removing non-popping silent rules") {
  auto cycle = parse_pds("pds\nstates p\nstack Y Z\naction a\nrule p Y -eps-> p Z\nrule p Z -eps-> p Y\n");
  auto c2 = remove_nonpopping_eps(cycle);
  CHECK(c2.rules().empty());

  auto pop3 = parse_pds("pds\nstates p q r\nstack Y B\naction a\nrule p Y -eps-> q B\nrule q B -a-> r\n");
  auto p3 = remove_nonpopping_eps(pop3);
  CHECK(serialize_pds(p3) == "pds\nstates p q r\nstack Y B\naction a\nrule q B -a-> r\nrule p Y -a-> r\n");

  auto pop2 = parse_pds("pds\nstates p q r\nstack Y B\nrule p Y -eps-> q B\nrule q B -eps-> r\n");
  auto p2 = remove_nonpopping_eps(pop2);
  CHECK(serialize_pds(p2) == "pds\nstates p q r\nstack Y B\nrule q B -eps-> r\nrule p Y -eps-> r\n");
  CHECK(classify(p2).popping_eps);

  auto popping = parse_pds("pds\nstates q2 q3\nstack A B\naction a\nrule q2 A -eps-> q3\nrule q3 B -a-> q2 A\n");
  CHECK(serialize_pds(remove_nonpopping_eps(popping)) == serialize_pds(popping));

  CHECK_THROWS_AS(remove_nonpopping_eps(parse_pds("pds\nstates p\nstack A\naction a\nrule p A -eps-> p\nrule p A -a-> p\n")),
                  PreconditionError);
}

TEST_CASE("stabilisation") {
  auto m = parse_pds("pds\nstates q1 q2 q3\nstack A B\naction a\nrule q2 A -eps-> q3\nrule q3 A -eps-> q1\nrule q3 B -a-> q3\n");
  CHECK_FALSE(is_stable(m, cfg(m, "q2 A B")));
  CHECK(format_configuration(m, stabilize(m, cfg(m, "q2 A B"))) == "q3 B");
  CHECK(format_configuration(m, stabilize(m, cfg(m, "q2 A A B"))) == "q1 B");
  CHECK(stabilize(m, cfg(m, "q1 A")) == cfg(m, "q1 A"));
  CHECK(is_stable(m, cfg(m, "q2")));
  CHECK(stabilize(m, cfg(m, "q2")) == cfg(m, "q2"));
  auto push = parse_pds("pds\nstates p\nstack A\nrule p A -eps-> p A A\n");
  CHECK_THROWS_AS(stabilize(push, cfg(push, "p A")), PreconditionError);
}

TEST_CASE("silent-run summaries agree with step-by-step runs") {
  std::mt19937_64 rng(91);
  int divergent = 0;
  for (int round = 0; round < 120; ++round) {
    auto m = random_pds(rng, {3, 3, 2, 2, 2, 0.5, false});
    EpsSummaries eps(m);
    for (const auto& c : sample_configs(m, rng, 10, 3)) {
      auto fast = eps.run(c);
      auto slow = slow_run(m, c);
      CHECK(fast == slow);
      if (!fast) ++divergent;
    }
  }
  CHECK(divergent > 0);
}

TEST_CASE("real-time translation: figure rule and T of empty stack") {
  auto m = parse_pds(kFig);
  auto pg = pds_to_grammar(m);
  auto& g = pg.grammar;
  REQUIRE(g.rules().size() == 1);
  CHECK(format_term(g.store(), g.head_term(g.rules()[0].head)) == "[q1A](x1, x2, x3)");
  CHECK(format_term(g.store(), g.rules()[0].rhs) ==
        "[q2C]([q1A](x1, x2, x3), [q2A](x1, x2, x3), [q3A](x1, x2, x3))");
  CHECK(format_term(g.store(), encode_configuration(m, pg, cfg(m, "q2"))) == "[q2]");

  auto m4 = parse_pds(std::string(kFig) + "rule q2 A -eps-> q3\n");
  auto pg4 = pds_to_grammar(m4);
  CHECK(format_term(pg4.grammar.store(), pg4.grammar.rules()[0].rhs) ==
        "[q2C]([q1A](x1, x2, x3), x3, [q3A](x1, x2, x3))");
  CHECK(pg4.head_symbol.count({1, 0}) == 0);

  auto push = parse_pds("pds\nstates p\nstack A\nrule p A -eps-> p A A\n");
  CHECK_THROWS_AS(pds_to_grammar(push), PreconditionError);
}

TEST_CASE("real-time systems: levels agree across the translation and successors stay encoded") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto m = random_pds(rng, {2 + static_cast<int>(rng() % 2), 2, 2, 2, 2, 0.0, false});
    auto pg = pds_to_grammar(m);
    const auto& g = pg.grammar;
    PdsLts lts(m);
    auto configs = sample_configs(m, rng, 6, 3);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const TermRef t = encode_configuration(m, pg, configs[i]);
      // closure: the grammar successors are exactly the encoded PDS successors
      std::set<std::pair<std::string, TermRef>> gs, ps;
      for (const auto& tr : transitions(g, t, VarMode::Dead)) gs.emplace(g.action_label(tr.action), tr.target);
      for (const auto& st : pds_transitions(m, configs[i])) {
        ps.emplace(m.action_label(st.action), encode_configuration(m, pg, st.target));
      }
      CHECK(gs == ps);
      for (std::size_t j = i; j < configs.size(); ++j) {
        const TermRef u = encode_configuration(m, pg, configs[j]);
        for (std::uint64_t k : {2u, 6u}) {
          auto pl = eq_level_bounded(lts, lts.state(configs[i]), lts.state(configs[j]), k);
          auto gl = eq_level_bounded(g, t, u, GameConfig{k, VarMode::Dead});
          CHECK(pl == gl);
        }
      }
    }
  }
}

TEST_CASE("restricted systems: saturation preserves weak levels") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 50; ++round) {
    auto m = random_pds(rng, {2, 3, 2, 2, 2, 0.4, false});
    auto m2 = remove_nonpopping_eps(m);
    auto f = classify(m2);
    CHECK(f.restricted);
    CHECK(f.popping_eps);
    for (std::uint32_t p = 0; p < m.states().size(); ++p) {
      for (std::uint32_t y = 0; y < m.stack_symbols().size(); ++y) {
        Configuration c{p, {y}};
        auto r = weak_eq_level_bounded(m, c, m2, c, 6);
        CHECK_FALSE(r.finite);
        CHECK(r.value == 6);
      }
    }
  }
}

TEST_CASE("popping-restricted systems: weak levels agree with the grammar") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    auto m = remove_nonpopping_eps(random_pds(rng, {2, 2, 2, 2, 2, 0.4, false}));
    auto pg = pds_to_grammar(m);
    auto configs = sample_configs(m, rng, 5, 3);
    WeakPdsLts weak(m);
    for (const auto& c : configs) {
      // unstable configurations are encoded as their stable end
      CHECK(encode_configuration(m, pg, c) == encode_configuration(m, pg, stabilize(m, c)));
      std::set<std::pair<std::string, TermRef>> gs, ps;
      for (const auto& tr : transitions(pg.grammar, encode_configuration(m, pg, c), VarMode::Dead)) {
        gs.emplace(pg.grammar.action_label(tr.action), tr.target);
      }
      for (const auto& mv : weak.moves(weak.state(c))) {
        ps.emplace(weak.action_name(mv.action), encode_configuration(m, pg, weak.config(mv.target)));
      }
      CHECK(gs == ps);
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
      for (std::size_t j = i + 1; j < configs.size(); ++j) {
        auto wl = weak_eq_level_bounded(m, configs[i], configs[j], 6);
        auto gl = eq_level_bounded(pg.grammar, encode_configuration(m, pg, configs[i]),
                                   encode_configuration(m, pg, configs[j]), GameConfig{6, VarMode::Dead});
        CHECK(wl == gl);
      }
    }
  }
}

TEST_CASE("a crafted non-equivalent pair keeps its level through the translation") {
  // after one a-step, one side offers b and the other c; the right side
  // first takes a pushing silent step
  auto m = parse_pds(
      "pds\nstates p q s t u\nstack Y Z\naction a b c\n"
      "rule p Y -a-> t Y\nrule t Y -b-> t\n"
      "rule q Z -eps-> s Y\nrule s Y -a-> u Y\nrule u Y -c-> u\n");
  auto py = cfg(m, "p Y"), qz = cfg(m, "q Z");
  auto wl = weak_eq_level_bounded(m, py, qz, 8);
  CHECK(wl == EqLevelResult::Finite(1));
  auto m2 = remove_nonpopping_eps(m);
  CHECK(weak_eq_level_bounded(m2, py, qz, 8) == wl);
  auto pg = pds_to_grammar(m2);
  auto gl = eq_level_bounded(pg.grammar, encode_configuration(m2, pg, py), encode_configuration(m2, pg, qz),
                             GameConfig{8, VarMode::Dead});
  CHECK(gl == wl);
}

TEST_CASE("weak equivalence rejects nondeterministic silent rules") {
  auto m = parse_pds("pds\nstates p q\nstack A\naction a\nrule p A -eps-> q\nrule p A -a-> p\n");
  CHECK_THROWS_AS(weak_eq_level_bounded(m, cfg(m, "p A"), cfg(m, "q A"), 3), PreconditionError);
}

TEST_CASE("real-time weak levels coincide with strong levels") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 20; ++round) {
    auto m = random_pds(rng, {2, 2, 2, 2, 2, 0.0, false});
    PdsLts lts(m);
    auto configs = sample_configs(m, rng, 4, 2);
    for (const auto& a : configs) {
      for (const auto& b : configs) {
        CHECK(weak_eq_level_bounded(m, a, b, 5) == eq_level_bounded(lts, lts.state(a), lts.state(b), 5));
      }
    }
  }
}

TEST_CASE("grammar to pds: figure rule") {
  auto g = fixtures::grammar("grammar\nnonterminal A/3 C/2 D/2\naction a\nrule A(x1, x2, x3) -a-> C(x2, D(x2, x1))\n");
  auto gp = grammar_to_pds(g);
  const auto& m = gp.pds;
  REQUIRE(gp.rsubs.size() == 2);
  CHECK(format_term(g.store(), gp.rsubs[0].at(1)) == "x2");
  CHECK(format_term(g.store(), gp.rsubs[0].at(2)) == "D(x2, x1)");
  CHECK(gp.rsubs[1].size() == 2);
  CHECK(format_term(g.store(), gp.rsubs[1].at(1)) == "x2");
  CHECK(format_term(g.store(), gp.rsubs[1].at(2)) == "x1");
  const std::string text = serialize_pds(m);
  CHECK(text.find("rule q1 A -a-> q1 C sigma1\n") != std::string::npos);
  CHECK(text.find("rule q1 sigma1 -eps-> q2\n") != std::string::npos);
  CHECK(text.find("rule q2 sigma1 -eps-> q1 D sigma2\n") != std::string::npos);
  CHECK(text.find("rule q3 sigma1 -eps-> q3\n") != std::string::npos);
  CHECK(m.states().size() == 3);
  auto table = encoder_table(g, gp);
  CHECK(table[0] == "A(x1, x2, x3) = q1 A");

  auto sink = fixtures::grammar("grammar\nnonterminal A/1\naction a\nrule A(x1) -a-> x1\n");
  CHECK(serialize_pds(grammar_to_pds(sink).pds) == "pds\nstates q1\nstack A\naction a\nrule q1 A -a-> q1\n");
  auto empty = fixtures::grammar("grammar\nnonterminal B/0\naction a\n");
  auto ge = grammar_to_pds(empty);
  CHECK(ge.pds.rules().empty());
  CHECK(ge.pds.states().size() == 1);
}

TEST_CASE("grammar to pds: weak agreement, determinism and stack shapes") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 50; ++round) {
    auto g = random_grammar(rng, {3, 2, 2, 2, 2});
    auto gp = grammar_to_pds(g);
    const auto& m = gp.pds;

    // silent rules are alone at their head, and a pushing one lands on a
    // head without silent rules
    for (const auto& r : m.rules()) {
      if (r.action != kEpsilon) continue;
      CHECK(m.rules_of(r.state, r.top).size() == 1);
      if (!r.push.empty()) {
        for (auto i : m.rules_of(r.target, r.push.front())) CHECK(m.rules()[i].action != kEpsilon);
      }
    }

    std::set<std::uint32_t> subs(gp.rsub_symbol.begin(), gp.rsub_symbol.end());
    std::set<std::uint32_t> nts(gp.nonterminal_symbol.begin(), gp.nonterminal_symbol.end());
    for (std::size_t a = 0; a < g.nonterminal_count(); ++a) {
      const auto sym = static_cast<SymbolId>(a);
      GrammarLts gl(g, VarMode::Dead);
      WeakPdsLts wl(m);
      UnionLts u(gl, wl);
      auto r = eq_level_bounded(u, UnionLts::left(g.head_term(sym)), UnionLts::right(wl.state(encode_head(gp, sym))), 6);
      CHECK_FALSE(r.finite);

      // reachable stacks are sigma* or, in q1, N sigma*
      std::set<Configuration> seen{encode_head(gp, sym)};
      std::deque<Configuration> queue{encode_head(gp, sym)};
      while (!queue.empty() && seen.size() < 400) {
        auto c = queue.front();
        queue.pop_front();
        std::size_t from = 0;
        if (!c.stack.empty() && nts.count(c.stack.front())) {
          CHECK(c.state == 0);
          from = 1;
        }
        for (std::size_t k = from; k < c.stack.size(); ++k) CHECK(subs.count(c.stack[k]) == 1);
        for (auto& st : pds_transitions(m, c)) {
          if (seen.insert(st.target).second) queue.push_back(st.target);
        }
      }
    }
  }
}

TEST_CASE("grammar to pds and back keeps the head levels") {
  std::mt19937_64 rng(913);
  for (int round = 0; round < 40; ++round) {
    auto g = random_grammar(rng, {3, 2, 2, 2, 2});
    auto gp = grammar_to_pds(g);
    auto saturated = remove_nonpopping_eps(gp.pds);
    auto back = pds_to_grammar(saturated);
    GrammarLts left(g, VarMode::Dead), right(back.grammar, VarMode::Dead);
    UnionLts u(left, right);
    for (std::size_t a = 0; a < g.nonterminal_count(); ++a) {
      const auto sym = static_cast<SymbolId>(a);
      TermRef t = encode_configuration(saturated, back, encode_head(gp, sym));
      auto r = eq_level_bounded(u, UnionLts::left(g.head_term(sym)), UnionLts::right(t), 4);
      CHECK_MESSAGE(!r.finite, "grammar ", round, " nonterminal ", g.name(sym));
    }
  }
}
