#include "fogbisim/grammar.hpp"

#include <cctype>
#include <sstream>

#include "fogbisim/error.hpp"
#include "fogbisim/term_syntax.hpp"

namespace fogbisim {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  return true;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool in_bracket = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '[') in_bracket = true;
      if (line[i] == ']') in_bracket = false;
      if (line[i] == '#' && !in_bracket) {
        line.erase(i);
        break;
      }
    }
    out.push_back({number++, line});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

// Words of a line together with their 1-based columns.
std::vector<std::pair<std::string, std::size_t>> words(const std::string& line) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.emplace_back(line.substr(s, i - s), s + 1);
  }
  return out;
}

std::size_t first_non_space(const std::string& s, std::size_t from) {
  while (from < s.size() && std::isspace(static_cast<unsigned char>(s[from]))) ++from;
  return from;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

SymbolId Grammar::add_nonterminal(const std::string& name, int arity) {
  auto& alpha = store_->alphabet();
  if (alpha.find(name)) throw InputError("nonterminal '" + name + "' declared twice");
  SymbolId id = alpha.add(name, arity);
  by_head_.resize(alpha.size());
  return id;
}

ActionId Grammar::add_action(const std::string& name) {
  if (!is_identifier(name)) throw InputError("invalid action name '" + name + "'");
  if (name == "eps") throw InputError("'eps' is reserved for silent steps");
  if (action_index_.count(name)) throw InputError("action '" + name + "' declared twice");
  auto id = static_cast<ActionId>(actions_.size());
  actions_.push_back(name);
  action_index_.emplace(name, id);
  return id;
}

std::optional<ActionId> Grammar::find_action(const std::string& name) const {
  auto it = action_index_.find(name);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

void Grammar::add_rule(SymbolId head, ActionId action, TermRef rhs) {
  if (head < 0 || static_cast<std::size_t>(head) >= store_->alphabet().size()) {
    throw InputError("unknown rule head");
  }
  if (action < 0 || static_cast<std::size_t>(action) >= actions_.size()) throw InputError("unknown action");
  if (rhs >= store_->node_count()) throw InputError("dangling right-hand side");
  if (!store_->is_finite(rhs)) throw InputError("right-hand side must be a finite term");
  const auto ar = static_cast<std::uint32_t>(arity(head));
  for (auto k : store_->vars(rhs)) {
    if (k > ar) {
      throw InputError("variable x" + std::to_string(k) + " out of range for " + name(head) + "/" +
                       std::to_string(ar));
    }
  }
  by_head_.resize(store_->alphabet().size());
  by_head_[static_cast<std::size_t>(head)].push_back(rules_.size());
  rules_.push_back({head, action, rhs});
}

const std::vector<std::size_t>& Grammar::rules_of(SymbolId head) const {
  static const std::vector<std::size_t> none;
  if (head < 0 || static_cast<std::size_t>(head) >= by_head_.size()) return none;
  return by_head_[static_cast<std::size_t>(head)];
}

TermRef Grammar::head_term(SymbolId a) const {
  std::vector<TermRef> xs;
  for (int i = 1; i <= arity(a); ++i) xs.push_back(store_->var(static_cast<std::uint32_t>(i)));
  return store_->app(a, xs);
}

std::string Grammar::action_label(ActionId a) const {
  if (a < 0) return "a[x" + std::to_string(-a) + "]";
  return actions_.at(static_cast<std::size_t>(a));
}

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  auto lines = split_lines(text);
  bool header = false;
  // Pass 1: header and declarations.
  for (const auto& ln : lines) {
    auto ws = words(ln.text);
    if (ws.empty()) continue;
    if (!header) {
      if (ws[0].first != "grammar" || ws.size() != 1) {
        throw InputError("expected header 'grammar'", ln.number, ws[0].second);
      }
      header = true;
      continue;
    }
    const auto& kw = ws[0].first;
    if (kw == "nonterminal") {
      if (ws.size() < 2) throw InputError("expected Name/arity", ln.number, ws[0].second + kw.size());
      for (std::size_t i = 1; i < ws.size(); ++i) {
        const auto& [w, col] = ws[i];
        auto slash = w.rfind('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == w.size()) {
          throw InputError("expected Name/arity, got '" + w + "'", ln.number, col);
        }
        auto digits = w.substr(slash + 1);
        if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6) {
          throw InputError("bad arity in '" + w + "'", ln.number, col + slash + 1);
        }
        try {
          g.add_nonterminal(w.substr(0, slash), std::stoi(digits));
        } catch (const InputError& e) {
          throw InputError(e.what(), ln.number, col);
        }
      }
    } else if (kw == "action") {
      if (ws.size() < 2) throw InputError("expected action name", ln.number, ws[0].second + kw.size());
      for (std::size_t i = 1; i < ws.size(); ++i) {
        try {
          g.add_action(ws[i].first);
        } catch (const InputError& e) {
          throw InputError(e.what(), ln.number, ws[i].second);
        }
      }
    } else if (kw != "rule") {
      throw InputError("unknown directive '" + kw + "'", ln.number, ws[0].second);
    }
  }
  if (!header) throw InputError("expected header 'grammar'", 1, 1);

  // Pass 2: rules.
  bool seen_header = false;
  for (const auto& ln : lines) {
    auto ws = words(ln.text);
    if (ws.empty()) continue;
    if (!seen_header) {
      seen_header = true;
      continue;
    }
    if (ws[0].first != "rule") continue;
    const std::string& s = ln.text;
    std::size_t lhs_start = first_non_space(s, ws[0].second - 1 + 4);
    std::size_t dash = std::string::npos;
    for (std::size_t i = lhs_start, depth = 0; i < s.size(); ++i) {
      if (s[i] == '[') ++depth;
      if (s[i] == ']' && depth > 0) --depth;
      if (s[i] == '-' && depth == 0) {
        dash = i;
        break;
      }
    }
    if (dash == std::string::npos) throw InputError("expected '-<action>->'", ln.number, s.size() + 1);
    auto arrow = s.find("->", dash + 1);
    if (arrow == std::string::npos) throw InputError("expected '->' after the action", ln.number, dash + 1);
    std::string lhs_text = s.substr(lhs_start, dash - lhs_start);
    std::string action = trim(std::string_view(s).substr(dash + 1, arrow - dash - 1));
    std::size_t rhs_start = first_non_space(s, arrow + 2);
    std::string rhs_text = s.substr(rhs_start);
    if (trim(lhs_text).empty()) throw InputError("missing left-hand side", ln.number, lhs_start + 1);
    if (trim(rhs_text).empty()) throw InputError("missing right-hand side", ln.number, rhs_start + 1);

    TermParseOptions lo;
    lo.line = ln.number;
    lo.column = lhs_start + 1;
    TermRef lhs = parse_term(g.store(), lhs_text, lo);
    if (g.store().is_var(lhs)) throw InputError("left-hand side must be a nonterminal", ln.number, lhs_start + 1);
    SymbolId head = g.store().symbol(lhs);
    if (lhs != g.head_term(head)) {
      throw InputError("left-hand side must be " + format_term(g.store(), g.head_term(head)), ln.number,
                       lhs_start + 1);
    }
    auto act = g.find_action(action);
    if (!act) throw InputError("unknown action '" + action + "'", ln.number, dash + 2);
    TermParseOptions ro;
    ro.line = ln.number;
    ro.column = rhs_start + 1;
    TermRef rhs = parse_term(g.store(), rhs_text, ro);
    try {
      g.add_rule(head, *act, rhs);
    } catch (const InputError& e) {
      throw InputError(e.what(), ln.number, rhs_start + 1);
    }
  }
  return g;
}

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "grammar\n";
  const auto& alpha = g.store().alphabet();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out << "nonterminal " << alpha.at(static_cast<SymbolId>(i)).name << '/' << alpha.at(static_cast<SymbolId>(i)).arity
        << '\n';
  }
  for (const auto& a : g.actions()) out << "action " << a << '\n';
  for (const auto& r : g.rules()) {
    out << "rule " << format_term(g.store(), g.head_term(r.head)) << " -" << g.action_label(r.action) << "-> "
        << format_term(g.store(), r.rhs) << '\n';
  }
  return out.str();
}

BigInt grammar_size(const Grammar& g) {
  BigInt total = 0;
  for (const auto& r : g.rules()) {
    total += g.arity(r.head) + 1 + static_cast<long long>(g.store().size(r.rhs));
  }
  return total;
}

std::vector<Transition> transitions(const Grammar& g, TermRef e, VarMode mode) {
  TermStore& store = g.store();
  if (store.is_var(e)) {
    if (mode == VarMode::Dead) return {};
    return {{-static_cast<ActionId>(store.var_index(e)), e}};
  }
  const auto& idx = g.rules_of(store.symbol(e));
  std::vector<Transition> out;
  out.reserve(idx.size());
  if (idx.empty()) return out;
  Substitution sigma = store.root_substitution(e);
  for (auto i : idx) {
    const Rule& r = g.rules()[i];
    out.push_back({r.action, store.apply(r.rhs, sigma)});
  }
  return out;
}

std::set<TermRef> step_word(const Grammar& g, TermRef e, const std::vector<ActionId>& word, VarMode mode) {
  std::set<TermRef> cur{e};
  for (ActionId a : word) {
    std::set<TermRef> next;
    for (TermRef t : cur) {
      for (const auto& tr : transitions(g, t, mode)) {
        if (tr.action == a) next.insert(tr.target);
      }
    }
    cur.swap(next);
    if (cur.empty()) break;
  }
  return cur;
}

std::vector<ActionId> parse_word(const Grammar& g, std::string_view text) {
  std::string t = trim(text);
  std::vector<ActionId> out;
  if (t.empty() || t == "eps") return out;
  if (t.find_first_of(" ,\t") != std::string::npos) {
    std::string cur;
    auto flush = [&]() {
      if (cur.empty()) return;
      auto a = g.find_action(cur);
      if (!a) throw InputError("unknown action '" + cur + "'");
      out.push_back(*a);
      cur.clear();
    };
    for (char c : t) {
      if (c == ' ' || c == ',' || c == '\t') {
        flush();
      } else {
        cur.push_back(c);
      }
    }
    flush();
    return out;
  }
  if (auto a = g.find_action(t)) return {*a};
  for (char c : t) {
    auto a = g.find_action(std::string(1, c));
    if (!a) throw InputError("unknown action '" + std::string(1, c) + "' in word '" + t + "'");
    out.push_back(*a);
  }
  return out;
}

}  // namespace fogbisim
