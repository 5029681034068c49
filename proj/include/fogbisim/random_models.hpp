#pragma once

#include <cstdint>
#include <random>

#include "fogbisim/grammar.hpp"

namespace fogbisim {

struct RandomGrammarSpec {
  int nonterminals = 3;  // at most
  int max_arity = 2;
  int actions = 2;
  int max_rules_per_head = 2;
  int rhs_depth = 2;
};

/// Random grammar; nonterminals N0.., actions a, b, c, ...
Grammar random_grammar(std::mt19937_64& rng, const RandomGrammarSpec& spec = {});

/// Random finite term over g's nonterminals with variables x1..x_max_var.
TermRef random_term(const Grammar& g, std::mt19937_64& rng, std::uint32_t max_var, int depth);

/// Random regular term with at most `nodes` graph nodes; may be cyclic.
TermRef random_regular_term(const Grammar& g, std::mt19937_64& rng, std::uint32_t max_var, int nodes);

}  // namespace fogbisim
