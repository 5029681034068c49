#pragma once

#include <string>
#include <string_view>

#include "fogbisim/term.hpp"

namespace fogbisim {

struct TermParseOptions {
  /// Add unknown symbols to the alphabet with the arity they are used at.
  bool declare_unknown = false;
  /// Position of the text inside a larger document, for diagnostics.
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Parses `Name(args)`, `B`, `x<k>`, `rec L = ...`, `ref L`, or a
/// `let t0 = ...; let t1 = ...` block whose first binding is the root.
TermRef parse_term(TermStore& store, std::string_view text, const TermParseOptions& opts = {});

/// Expression form; cycles are written with `rec L<k>` / `ref L<k>`.
std::string format_term(const TermStore& store, TermRef t);

/// Canonical let-binding form of the least graph of t.
std::string format_let(const TermStore& store, TermRef t);

}  // namespace fogbisim
