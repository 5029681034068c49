#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fogbisim/bigint.hpp"
#include "fogbisim/grammar.hpp"

namespace fogbisim {

/// Shortest (A,i)-sink words; pairs without any sink word are absent.
using SinkWords = std::map<std::pair<SymbolId, int>, std::vector<ActionId>>;

SinkWords sink_words(const Grammar& g);

struct GrammarConstants {
  BigInt grammar_size;  // |G|
  BigInt nonterminals;  // |N|
  BigInt rules;         // |R|
  BigInt rhs_ntsize_sum;
  BigInt m, hinc, sinc, d0, d1, d2, d3, n, s, g, d4, d5, c;
  SinkWords sink;
};

/// Throws BudgetExceeded if some constant is too large to materialise.
GrammarConstants compute_constants(const Grammar& g);

/// Ordered (name, value) list in the fixed reporting order.
std::vector<std::pair<std::string, BigInt>> constant_fields(const GrammarConstants& k);

/// "F_<n+4>" for a grammar with constant n.
std::string complexity_class_grammar(const BigInt& n);
/// "F_<|Q|+4>" for a real-time PDS with |Q| states.
std::string complexity_class_pds(const BigInt& q);
std::string complexity_class_unrestricted();

}  // namespace fogbisim
