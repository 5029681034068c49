#include "fogbisim/bound_report.hpp"

#include "fogbisim/error.hpp"
#include "fogbisim/ordinal.hpp"

namespace fogbisim {

namespace {

std::string index_of(const BigInt& n) {
  if (n < 1000) return Ordinal::omega_pow(static_cast<std::size_t>(n) + 1).to_string();
  return "w^" + to_string(n + 1);
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

}  // namespace

const std::string& BoundReport::at(const std::string& key) const {
  for (const auto& [k, v] : lines) {
    if (k == key) return v;
  }
  throw PreconditionError("no report line " + key);
}

BoundReport bound_report(const GrammarConstants& k) {
  BoundReport r;
  auto add = [&](std::string key, std::string value) { r.lines.emplace_back(std::move(key), std::move(value)); };
  const std::string G = to_string(k.grammar_size);
  add("grammar_size", G);
  add("n", to_string(k.n));
  add("s", to_string(k.s));
  add("g", to_string(k.g));
  add("c", to_string(k.c));
  const std::string idx = index_of(k.n);
  add("rank_index", idx);
  add("n0_bound", "N0 <= 2^(2^" + to_string(2 * k.n + 5) + " * " + paren(to_string(k.s)) + "^2 * " +
                      paren(to_string(k.g)) + "^2 * log(" + G + "))");
  add("iterations", "L = h_{" + idx + "}(N0)");
  add("eb_bound", "E_B <= N_L <= h^L(N0) = h^{" + idx + "}(N0)");
  std::string factor;
  try {
    factor = to_string(pow_checked(2, 2 * k.n + 6) * k.c * k.c * k.g * k.g * k.grammar_size * k.grammar_size *
                       k.grammar_size);
  } catch (const BudgetExceeded&) {
    factor = "2^" + to_string(2 * k.n + 6) + " * " + paren(to_string(k.c)) + "^2 * " + paren(to_string(k.g)) + "^2 * " +
             G + "^3";
  }
  add("control", "G_G(x) = 2^(" + factor + " * x^4)");
  add("per_pair", "el(E,F) <= " + to_string(k.c) + " * (E_B * size(E,F) + size(E,F)^2)");
  add("final", "E <= h^{w^w}(h(" + G + ")) with h(x) = H^{w^2*d}(x), d symbolic");
  add("class", complexity_class_grammar(k.n));
  add("unrestricted", complexity_class_unrestricted());
  return r;
}

BoundReport bound_report(const Grammar& g) {
  try {
    return bound_report(compute_constants(g));
  } catch (const BudgetExceeded&) {
    BoundReport r;
    r.lines = {{"grammar_size", to_string(grammar_size(g))},
               {"constants", "too large to materialise"},
               {"rank_index", "w^(n+1)"},
               {"n0_bound", "N0 <= 2^(2^(2n+5) * s^2 * g^2 * log|G|)"},
               {"iterations", "L = h_{w^(n+1)}(N0)"},
               {"eb_bound", "E_B <= N_L <= h^L(N0) = h^{w^(n+1)}(N0)"},
               {"control", "G_G(x) = 2^(2^(2n+6) * c^2 * g^2 * |G|^3 * x^4)"},
               {"per_pair", "el(E,F) <= c * (E_B * size(E,F) + size(E,F)^2)"},
               {"final", "E <= h^{w^w}(h(|G|)) with h(x) = H^{w^2*d}(x), d symbolic"},
               {"class", "F_(n+4)"},
               {"unrestricted", complexity_class_unrestricted()}};
    return r;
  }
}

}  // namespace fogbisim
