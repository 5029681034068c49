#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <thread>

#include "fixtures.hpp"
#include "fogbisim/error.hpp"
#include "fogbisim/term_enum.hpp"

using namespace fogbisim;

namespace {

// All labelled graphs with exactly `nodes` nodes rooted at 0, deduplicated by
// unfolding to a depth that separates any two graphs of that size.
std::set<std::string> brute_force_terms(TermStore& store, std::uint32_t j, std::uint32_t s) {
  std::vector<Tag> labels;
  for (std::size_t i = 0; i < store.alphabet().size(); ++i) labels.push_back(static_cast<Tag>(i));
  for (std::uint32_t k = 1; k <= j; ++k) labels.push_back(var_tag(k));
  std::set<std::string> out;
  for (std::uint32_t nodes = 1; nodes <= s; ++nodes) {
    TermGraph g;
    g.nodes.resize(nodes);
    std::function<void(std::uint32_t)> go = [&](std::uint32_t i) {
      if (i == nodes) {
        TermStore scratch(store.alphabet());
        TermRef t = scratch.intern(g);
        out.insert(unfold_to_depth(scratch, t, static_cast<int>(2 * s + 1)));
        return;
      }
      for (Tag tag : labels) {
        g.nodes[i].tag = tag;
        std::size_t ar = tag < 0 ? 0 : static_cast<std::size_t>(store.alphabet().at(tag).arity);
        std::vector<std::uint32_t> ch(ar, 0);
        std::function<void(std::size_t)> kids = [&](std::size_t slot) {
          if (slot == ar) {
            g.nodes[i].children = ch;
            go(i + 1);
            return;
          }
          for (std::uint32_t t = 0; t < nodes; ++t) {
            ch[slot] = t;
            kids(slot + 1);
          }
        };
        kids(0);
      }
    };
    go(0);
  }
  return out;
}

TermGraph duplicate_leaves(const TermStore& store, TermRef t) {
  // Tree-expanded copy of a finite term: every occurrence gets its own node.
  TermGraph g;
  std::function<std::uint32_t(TermRef)> go = [&](TermRef r) {
    auto idx = static_cast<std::uint32_t>(g.nodes.size());
    g.nodes.push_back({store.tag(r), {}});
    std::vector<std::uint32_t> ch;
    for (TermRef c : store.children(r)) ch.push_back(go(c));
    g.nodes[idx].children = ch;
    return idx;
  };
  g.root = go(t);
  return g;
}

TermRef random_finite(TermStore& store, std::mt19937_64& rng, int depth, std::uint32_t vars) {
  std::uniform_int_distribution<std::size_t> pick(0, store.alphabet().size() + vars - 1);
  auto k = depth <= 0 ? store.alphabet().size() + (rng() % vars) : pick(rng);
  if (k >= store.alphabet().size()) return store.var(static_cast<std::uint32_t>(k - store.alphabet().size() + 1));
  auto sym = static_cast<SymbolId>(k);
  std::vector<TermRef> ch;
  for (int i = 0; i < store.alphabet().at(sym).arity; ++i) ch.push_back(random_finite(store, rng, depth - 1, vars));
  return store.app(sym, ch);
}

}  // namespace

TEST_CASE("figure measures") {
  fixtures::Figure1 f;
  auto& s = *f.store;
  CHECK(s.size(f.e1) == 6);
  CHECK(s.size(f.e2) == 9);
  CHECK(s.size(f.e3) == 5);
  CHECK(s.size(f.e1, f.e2) == 9);
  CHECK(s.ntsize(f.e1) == 4);
  CHECK(s.height(f.e1).value() == 3);
  CHECK(s.vars(f.e1, f.e2) == std::set<std::uint32_t>{2, 5});
  CHECK_FALSE(s.is_finite(f.e3));
  CHECK_FALSE(s.height(f.e3).has_value());
  CHECK(s.is_finite(f.e1));
}

TEST_CASE("substitution reproduces the second figure term") {
  fixtures::Figure1 f;
  Substitution sigma{{2, f.e1}, {5, f.store->var(5)}};
  CHECK(f.store->apply(f.e1, sigma) == f.e2);
  CHECK(f.store->apply(f.e1, {}) == f.e1);
  CHECK(f.e1 != f.e2);
  auto a = f.term("C(x1, x2)");
  CHECK(f.store->apply(a, {{1, f.term("B")}}) == f.term("C(B, x2)"));
}

TEST_CASE("interning is idempotent and cycles are canonical") {
  fixtures::Figure1 f;
  CHECK(f.term("A(D(x5, C(x2, B)), x5, B)") == f.e1);
  CHECK(f.term("x1") == f.store->var(1));
  // One loop iteration unrolled.
  auto unrolled = f.term("rec L = A(D(x5, C(A(D(x5, C(ref L, B)), x5, B), B)), x5, B)");
  CHECK(unrolled == f.e3);
  CHECK(f.store->size(unrolled) == 5);
  CHECK(graphs_equal(f.store->to_graph(unrolled), f.store->to_graph(f.e3)));
  auto k = static_cast<int>(f.store->size(unrolled) * f.store->size(f.e3) + 1);
  CHECK(unfold_to_depth(*f.store, unrolled, k) == unfold_to_depth(*f.store, f.e3, k));
  // Let-form with two mutually recursive bindings denotes the same term.
  auto let = f.term("let a = A(ref d, x5, B); let d = D(x5, C(ref a, B))");
  CHECK(let == f.e3);
  // A subterm of a cycle is itself shared with the cycle.
  auto d = f.store->children(f.e3)[0];
  CHECK(f.store->app("A", {d, f.store->var(5), f.term("B")}) == f.e3);
  CHECK(f.term("C(x1, x1)") != f.e1);
}

TEST_CASE("minimisation merges duplicated nodes") {
  fixtures::Figure1 f;
  TermGraph g;
  g.nodes = {{0, {1, 2, 3}}, {-1, {}}, {-1, {}}, {1, {}}};  // A(x1, x1, B) with two x1 nodes
  g.root = 0;
  auto t = f.store->intern(g);
  CHECK(f.store->size(t) == 3);
  CHECK(f.store->to_graph(t).nodes.size() == 3);
  CHECK(f.term("A(x1, x1, B)") == t);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto r = random_finite(*f.store, rng, 4, 3);
    auto copy = f.store->intern(duplicate_leaves(*f.store, r));
    CHECK(copy == r);
    CHECK(f.store->size(r) == f.store->to_graph(r).nodes.size());
  }
}

TEST_CASE("distinct terms stay distinct") {
  fixtures::Figure1 f;
  CHECK_FALSE(graphs_equal(f.store->to_graph(f.e1), f.store->to_graph(f.e2)));
  CHECK(f.e1 != f.e3);
  CHECK(f.store->var(1) == f.store->var(1));
}

TEST_CASE("syntax round trips") {
  fixtures::Figure1 f;
  CHECK(format_term(*f.store, f.e1) == "A(D(x5, C(x2, B)), x5, B)");
  CHECK(format_term(*f.store, f.e3) == "rec L0 = A(D(x5, C(ref L0, B)), x5, B)");
  for (auto t : {f.e1, f.e2, f.e3}) {
    CHECK(f.term(format_term(*f.store, t)) == t);
    CHECK(f.term(format_let(*f.store, t)) == t);
  }
  CHECK(format_let(*f.store, f.e3) == "let t0 = A(ref t1, x5, B); let t1 = D(x5, ref t2); let t2 = C(ref t0, B)");
}

TEST_CASE("syntax errors") {
  fixtures::Figure1 f;
  CHECK_THROWS_AS(f.term("A(x1)"), InputError);
  CHECK_THROWS_AS(f.term("Q"), InputError);
  CHECK_THROWS_AS(f.term("C(ref L, B)"), InputError);
  CHECK_THROWS_AS(f.term("rec L = ref L"), InputError);
  CHECK_THROWS_AS(f.term("C(x1, B"), InputError);
  CHECK_THROWS_AS(f.term("let a = C(ref b, B)"), InputError);
  try {
    f.term("C(x1,\n  Q)");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("enumeration matches brute force") {
  {
    TermStore s;
    s.alphabet().add("B", 0);
    auto ts = enumerate_terms(s, 0, 1);
    REQUIRE(ts.size() == 1);
    CHECK(format_term(s, ts[0]) == "B");
  }
  {
    TermStore s;
    s.alphabet().add("A", 1);
    auto ts = enumerate_terms(s, 1, 2);
    CHECK(ts.size() == 3);
    std::set<std::string> shown;
    for (auto t : ts) shown.insert(format_term(s, t));
    CHECK(shown == std::set<std::string>{"x1", "A(x1)", "rec L0 = A(ref L0)"});
  }
  struct Case {
    std::vector<std::pair<std::string, int>> alpha;
    std::uint32_t j, s;
  };
  std::vector<Case> cases = {
      {{{"A", 2}}, 2, 2},         {{{"A", 2}}, 2, 3},           {{{"A", 1}, {"B", 0}}, 1, 3},
      {{{"A", 2}, {"B", 0}}, 1, 3}, {{{"A", 1}, {"C", 2}}, 0, 3}, {{{"B", 0}, {"C", 0}}, 2, 3},
  };
  for (const auto& c : cases) {
    TermStore s;
    for (const auto& [n, a] : c.alpha) s.alphabet().add(n, a);
    auto ts = enumerate_terms(s, c.j, c.s);
    std::set<std::string> mine;
    for (auto t : ts) {
      CHECK(s.size(t) <= c.s);
      mine.insert(unfold_to_depth(s, t, static_cast<int>(2 * c.s + 1)));
    }
    CHECK(mine.size() == ts.size());
    CHECK(mine == brute_force_terms(s, c.j, c.s));
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(canonical_less(s, ts[i - 1], ts[i]));
  }
}

TEST_CASE("substitution composition and congruence") {
  fixtures::Figure1 f;
  auto& s = *f.store;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto t = random_finite(s, rng, 4, 3);
    Substitution a{{1, random_finite(s, rng, 2, 3)}, {2, random_finite(s, rng, 2, 3)}};
    Substitution b{{1, random_finite(s, rng, 2, 3)}, {3, random_finite(s, rng, 2, 3)}};
    Substitution ab;
    for (std::uint32_t k = 1; k <= 3; ++k) {
      auto x = s.var(k);
      auto img = a.count(k) ? a.at(k) : x;
      ab[k] = s.apply(img, b);
    }
    CHECK(s.apply(s.apply(t, a), b) == s.apply(t, ab));
    CHECK(s.size(t, s.apply(t, a)) <= s.size(t) + s.size(s.apply(t, a)));
  }
  // Substituting into a cyclic term goes through the graph path.
  auto sub = s.apply(f.e3, {{5, f.term("B")}});
  CHECK(sub == f.term("rec L = A(D(B, C(ref L, B)), B, B)"));
  CHECK(s.size(sub) == 4);
}

TEST_CASE("concurrent interning yields one canonical ref") {
  fixtures::Figure1 f;
  std::vector<TermRef> got(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] {
      for (int r = 0; r < 200; ++r) {
        got[static_cast<std::size_t>(i)] =
            parse_term(*f.store, "rec Q = C(D(ref Q, x" + std::to_string(r % 7 + 1) + "), B)");
      }
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 1; i < 4; ++i) CHECK(got[static_cast<std::size_t>(i)] == got[0]);
}
