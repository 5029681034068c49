#pragma once

#include <memory>
#include <string>

#include "fogbisim/grammar.hpp"
#include "fogbisim/term.hpp"
#include "fogbisim/term_syntax.hpp"

namespace fixtures {

// Alphabet and terms of the three-term figure: two finite terms and a cyclic one.
struct Figure1 {
  std::shared_ptr<fogbisim::TermStore> store = std::make_shared<fogbisim::TermStore>();
  fogbisim::TermRef e1 = 0, e2 = 0, e3 = 0;

  Figure1() {
    auto& a = store->alphabet();
    a.add("A", 3);
    a.add("B", 0);
    a.add("C", 2);
    a.add("D", 2);
    e1 = fogbisim::parse_term(*store, "A(D(x5, C(x2, B)), x5, B)");
    e2 = fogbisim::parse_term(*store, "A(D(x5, C(A(D(x5, C(x2, B)), x5, B), B)), x5, B)");
    e3 = fogbisim::parse_term(*store, "rec E3 = A(D(x5, C(ref E3, B)), x5, B)");
  }

  fogbisim::TermRef term(const std::string& text) { return fogbisim::parse_term(*store, text); }
};

inline fogbisim::Grammar grammar(const std::string& text) { return fogbisim::parse_grammar(text); }

inline fogbisim::TermRef term(const fogbisim::Grammar& g, const std::string& text) {
  return fogbisim::parse_term(g.store(), text);
}

}  // namespace fixtures
