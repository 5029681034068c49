#include "fogbisim/random_models.hpp"

#include <string>

namespace fogbisim {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

TermRef term_over(TermStore& store, std::mt19937_64& rng, std::uint32_t max_var, int depth) {
  const auto& alpha = store.alphabet();
  const bool leaf = depth <= 0 || uniform(rng, 0, 2) == 0;
  if (max_var > 0 && (alpha.size() == 0 || (leaf && uniform(rng, 0, 1) == 0))) {
    return store.var(static_cast<std::uint32_t>(uniform(rng, 1, static_cast<int>(max_var))));
  }
  std::vector<SymbolId> pool;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!leaf || alpha.at(static_cast<SymbolId>(i)).arity == 0) pool.push_back(static_cast<SymbolId>(i));
  }
  if (pool.empty()) {
    if (max_var > 0) return store.var(static_cast<std::uint32_t>(uniform(rng, 1, static_cast<int>(max_var))));
    for (std::size_t i = 0; i < alpha.size(); ++i) pool.push_back(static_cast<SymbolId>(i));
  }
  SymbolId a = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
  std::vector<TermRef> kids;
  for (int k = 0; k < alpha.at(a).arity; ++k) kids.push_back(term_over(store, rng, max_var, depth - 1));
  return store.app(a, kids);
}

}  // namespace

Grammar random_grammar(std::mt19937_64& rng, const RandomGrammarSpec& spec) {
  Grammar g;
  const int count = uniform(rng, 1, spec.nonterminals);
  std::vector<SymbolId> heads;
  for (int i = 0; i < count; ++i) {
    // keep at least one nullary symbol so closed terms exist
    int arity = i == 0 ? 0 : uniform(rng, 0, spec.max_arity);
    heads.push_back(g.add_nonterminal("N" + std::to_string(i), arity));
  }
  for (int i = 0; i < spec.actions; ++i) g.add_action(std::string(1, static_cast<char>('a' + i)));
  for (SymbolId h : heads) {
    const int rules = uniform(rng, 0, spec.max_rules_per_head);
    for (int r = 0; r < rules; ++r) {
      auto act = static_cast<ActionId>(uniform(rng, 0, spec.actions - 1));
      TermRef rhs = term_over(g.store(), rng, static_cast<std::uint32_t>(g.arity(h)), spec.rhs_depth);
      g.add_rule(h, act, rhs);
    }
  }
  return g;
}

TermRef random_term(const Grammar& g, std::mt19937_64& rng, std::uint32_t max_var, int depth) {
  return term_over(g.store(), rng, max_var, depth);
}

TermRef random_regular_term(const Grammar& g, std::mt19937_64& rng, std::uint32_t max_var, int nodes) {
  auto& store = g.store();
  const auto& alpha = store.alphabet();
  TermGraph graph;
  const int n = uniform(rng, 1, std::max(1, nodes));
  graph.nodes.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& node = graph.nodes[static_cast<std::size_t>(i)];
    bool variable = max_var > 0 && (alpha.size() == 0 || uniform(rng, 0, 3) == 0);
    if (variable) {
      node.tag = var_tag(static_cast<std::uint32_t>(uniform(rng, 1, static_cast<int>(max_var))));
      continue;
    }
    auto a = static_cast<SymbolId>(uniform(rng, 0, static_cast<int>(alpha.size()) - 1));
    node.tag = a;
    for (int k = 0; k < alpha.at(a).arity; ++k) node.children.push_back(static_cast<std::uint32_t>(uniform(rng, 0, n - 1)));
  }
  graph.root = 0;
  return store.intern(graph);
}

}  // namespace fogbisim
