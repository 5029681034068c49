#include "fogbisim/pds.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "fogbisim/error.hpp"
#include "fogbisim/term_syntax.hpp"

namespace fogbisim {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty() || s[0] == '-') return false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '/') return false;
  }
  return s != "eps";
}

template <class Index>
std::uint32_t add_named(std::vector<std::string>& names, Index& index, const std::string& name, const char* what) {
  if (!valid_name(name)) throw InputError(std::string("invalid ") + what + " name '" + name + "'");
  if (index.count(name)) throw InputError(std::string(what) + " '" + name + "' declared twice");
  auto id = static_cast<std::uint32_t>(names.size());
  names.push_back(name);
  index.emplace(name, id);
  return id;
}

}  // namespace

std::uint32_t Pds::add_state(const std::string& name) { return add_named(states_, state_index_, name, "state"); }

std::uint32_t Pds::add_stack_symbol(const std::string& name) {
  return add_named(stack_, stack_index_, name, "stack symbol");
}

ActionId Pds::add_action(const std::string& name) {
  if (action_index_.count(name)) throw InputError("action '" + name + "' declared twice");
  if (!valid_name(name)) throw InputError("invalid action name '" + name + "'");
  auto id = static_cast<ActionId>(actions_.size());
  actions_.push_back(name);
  action_index_.emplace(name, id);
  return id;
}

void Pds::add_rule(const PdsRule& r) {
  if (r.state >= states_.size() || r.target >= states_.size()) throw InputError("rule with unknown state");
  if (r.top >= stack_.size()) throw InputError("rule with unknown stack symbol");
  for (auto y : r.push) {
    if (y >= stack_.size()) throw InputError("rule with unknown stack symbol");
  }
  if (r.action != kEpsilon && (r.action < 0 || static_cast<std::size_t>(r.action) >= actions_.size())) {
    throw InputError("rule with unknown action");
  }
  auto& list = by_head_[{r.state, r.top}];
  for (auto i : list) {
    const auto& o = rules_[i];
    if (o.action == r.action && o.target == r.target && o.push == r.push) return;
  }
  list.push_back(rules_.size());
  rules_.push_back(r);
}

const std::vector<std::size_t>& Pds::rules_of(std::uint32_t state, std::uint32_t top) const {
  static const std::vector<std::size_t> none;
  auto it = by_head_.find({state, top});
  return it == by_head_.end() ? none : it->second;
}

std::optional<std::uint32_t> Pds::find_state(const std::string& name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Pds::find_stack_symbol(const std::string& name) const {
  auto it = stack_index_.find(name);
  if (it == stack_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> Pds::find_action(const std::string& name) const {
  auto it = action_index_.find(name);
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- syntax

namespace {

struct Word {
  std::string text;
  std::size_t column;
};

std::vector<Word> split_words(const std::string& line) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(s, i - s), s + 1});
  }
  return out;
}

}  // namespace

Pds parse_pds(std::string_view text) {
  Pds m;
  bool header = false;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto ws = split_words(line);
    if (ws.empty()) continue;
    auto fail = [&](const std::string& msg, std::size_t col) -> InputError { return InputError(msg, number, col); };
    if (!header) {
      if (ws[0].text != "pds" || ws.size() != 1) throw fail("expected header 'pds'", ws[0].column);
      header = true;
      continue;
    }
    const auto& kw = ws[0].text;
    auto declare = [&](auto add) {
      if (ws.size() < 2) throw fail("expected at least one name", ws[0].column + kw.size());
      for (std::size_t i = 1; i < ws.size(); ++i) {
        try {
          add(ws[i].text);
        } catch (const InputError& e) {
          throw fail(e.what(), ws[i].column);
        }
      }
    };
    if (kw == "states") {
      declare([&](const std::string& s) { m.add_state(s); });
    } else if (kw == "stack") {
      declare([&](const std::string& s) { m.add_stack_symbol(s); });
    } else if (kw == "action") {
      declare([&](const std::string& s) { m.add_action(s); });
    } else if (kw == "rule") {
      if (ws.size() < 5) throw fail("expected 'rule p Y -a-> q gamma'", ws[0].column);
      PdsRule r;
      auto state = [&](const Word& w) {
        auto s = m.find_state(w.text);
        if (!s) throw fail("unknown state '" + w.text + "'", w.column);
        return *s;
      };
      auto symbol = [&](const Word& w) {
        auto s = m.find_stack_symbol(w.text);
        if (!s) throw fail("unknown stack symbol '" + w.text + "'", w.column);
        return *s;
      };
      r.state = state(ws[1]);
      r.top = symbol(ws[2]);
      const auto& arrow = ws[3].text;
      if (arrow.size() < 4 || arrow.front() != '-' || arrow.substr(arrow.size() - 2) != "->") {
        throw fail("expected an arrow '-a->' or '-eps->'", ws[3].column);
      }
      auto label = arrow.substr(1, arrow.size() - 3);
      if (label == "eps") {
        r.action = kEpsilon;
      } else {
        auto a = m.find_action(label);
        if (!a) throw fail("unknown action '" + label + "'", ws[3].column + 1);
        r.action = *a;
      }
      r.target = state(ws[4]);
      for (std::size_t i = 5; i < ws.size(); ++i) r.push.push_back(symbol(ws[i]));
      m.add_rule(r);
    } else {
      throw fail("unknown directive '" + kw + "'", ws[0].column);
    }
  }
  if (!header) throw InputError("expected header 'pds'", 1, 1);
  return m;
}

std::string serialize_pds(const Pds& m) {
  std::ostringstream out;
  out << "pds\n";
  auto list = [&](const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out << kw;
    for (const auto& n : names) out << ' ' << n;
    out << '\n';
  };
  list("states", m.states());
  list("stack", m.stack_symbols());
  list("action", m.actions());
  for (const auto& r : m.rules()) {
    out << "rule " << m.states()[r.state] << ' ' << m.stack_symbols()[r.top] << " -" << m.action_label(r.action)
        << "-> " << m.states()[r.target];
    for (auto y : r.push) out << ' ' << m.stack_symbols()[y];
    out << '\n';
  }
  return out.str();
}

PdsFlags classify(const Pds& m) {
  PdsFlags f;
  for (const auto& r : m.rules()) {
    if (r.action != kEpsilon) continue;
    f.real_time = false;
    if (!r.push.empty()) f.popping_eps = false;
    if (m.rules_of(r.state, r.top).size() > 1) f.restricted = false;
  }
  return f;
}

Configuration parse_configuration(const Pds& m, std::string_view text) {
  auto ws = split_words(std::string(text));
  if (ws.empty()) throw InputError("empty configuration");
  Configuration c;
  auto s = m.find_state(ws[0].text);
  if (!s) throw InputError("unknown state '" + ws[0].text + "'", 1, ws[0].column);
  c.state = *s;
  for (std::size_t i = 1; i < ws.size(); ++i) {
    auto y = m.find_stack_symbol(ws[i].text);
    if (!y) throw InputError("unknown stack symbol '" + ws[i].text + "'", 1, ws[i].column);
    c.stack.push_back(*y);
  }
  return c;
}

std::string format_configuration(const Pds& m, const Configuration& c) {
  std::string out = m.states().at(c.state);
  for (auto y : c.stack) out += " " + m.stack_symbols().at(y);
  return out;
}

// ---------------------------------------------------------------- semantics

namespace {

Configuration apply_rule(const PdsRule& r, const Configuration& c) {
  Configuration t;
  t.state = r.target;
  t.stack.reserve(r.push.size() + c.stack.size() - 1);
  t.stack.insert(t.stack.end(), r.push.begin(), r.push.end());
  t.stack.insert(t.stack.end(), c.stack.begin() + 1, c.stack.end());
  return t;
}

const PdsRule* eps_rule(const Pds& m, std::uint32_t state, std::uint32_t top) {
  for (auto i : m.rules_of(state, top)) {
    if (m.rules()[i].action == kEpsilon) return &m.rules()[i];
  }
  return nullptr;
}

void require_restricted(const Pds& m, const char* op) {
  if (!classify(m).restricted) {
    throw PreconditionError(std::string(op) + ": silent rules must be deterministic");
  }
}

}  // namespace

std::vector<PdsStep> pds_transitions(const Pds& m, const Configuration& c) {
  std::vector<PdsStep> out;
  if (c.stack.empty()) return out;
  for (auto i : m.rules_of(c.state, c.stack.front())) {
    const auto& r = m.rules()[i];
    out.push_back({r.action, apply_rule(r, c)});
  }
  return out;
}

bool is_stable(const Pds& m, const Configuration& c) {
  return c.stack.empty() || eps_rule(m, c.state, c.stack.front()) == nullptr;
}

EpsSummaries::EpsSummaries(const Pds& m) : stack_count_(m.stack_symbols().size()) {
  require_restricted(m, "silent-run summaries");
  const std::size_t heads = m.states().size() * stack_count_;
  table_.resize(heads);
  enum Mark : std::uint8_t { Todo, Active, Done };
  std::vector<Mark> mark(heads, Todo);
  auto key = [&](std::uint32_t p, std::uint32_t y) { return static_cast<std::size_t>(p) * stack_count_ + y; };

  // A head met again while its own run is still open repeats itself on a
  // stack that never shrank below it, so that run never stops.
  std::function<const EpsSummary&(std::uint32_t, std::uint32_t)> solve = [&](std::uint32_t p,
                                                                             std::uint32_t y) -> const EpsSummary& {
    const auto k = key(p, y);
    static const EpsSummary diverges{EpsSummary::Diverges, 0, {}};
    if (mark[k] == Done) return table_[k];
    if (mark[k] == Active) return diverges;
    mark[k] = Active;
    EpsSummary out;
    const PdsRule* r = eps_rule(m, p, y);
    if (!r) {
      out = {EpsSummary::Stops, p, {y}};
    } else {
      std::uint32_t state = r->target;
      std::vector<std::uint32_t> rest = r->push;  // top first
      std::size_t pos = 0;
      out = {EpsSummary::Pops, state, {}};
      while (pos < rest.size()) {
        const EpsSummary& sub = solve(state, rest[pos]);
        if (sub.kind == EpsSummary::Diverges) {
          out = diverges;
          break;
        }
        if (sub.kind == EpsSummary::Stops) {
          out.kind = EpsSummary::Stops;
          out.state = sub.state;
          out.word = sub.word;
          out.word.insert(out.word.end(), rest.begin() + static_cast<std::ptrdiff_t>(pos) + 1, rest.end());
          break;
        }
        state = sub.state;
        ++pos;
        out.state = state;
      }
    }
    table_[k] = std::move(out);
    mark[k] = Done;
    return table_[k];
  };
  for (std::uint32_t p = 0; p < m.states().size(); ++p) {
    for (std::uint32_t y = 0; y < stack_count_; ++y) solve(p, y);
  }
}

const EpsSummary& EpsSummaries::of(std::uint32_t state, std::uint32_t top) const {
  return table_.at(static_cast<std::size_t>(state) * stack_count_ + top);
}

std::optional<Configuration> EpsSummaries::run(const Configuration& c) const {
  Configuration cur = c;
  std::size_t pos = 0;
  while (pos < cur.stack.size()) {
    const auto& s = of(cur.state, cur.stack[pos]);
    if (s.kind == EpsSummary::Diverges) return std::nullopt;
    if (s.kind == EpsSummary::Stops) {
      Configuration out;
      out.state = s.state;
      out.stack = s.word;
      out.stack.insert(out.stack.end(), cur.stack.begin() + static_cast<std::ptrdiff_t>(pos) + 1, cur.stack.end());
      return out;
    }
    cur.state = s.state;
    ++pos;
  }
  return Configuration{cur.state, {}};
}

Pds remove_nonpopping_eps(const Pds& m) {
  EpsSummaries eps(m);
  Pds out;
  for (const auto& s : m.states()) out.add_state(s);
  for (const auto& y : m.stack_symbols()) out.add_stack_symbol(y);
  for (const auto& a : m.actions()) out.add_action(a);
  for (const auto& r : m.rules()) {
    if (r.action != kEpsilon || r.push.empty()) out.add_rule(r);
  }
  for (const auto& r : m.rules()) {
    if (r.action != kEpsilon || r.push.empty()) continue;
    const auto& s = eps.of(r.state, r.top);
    switch (s.kind) {
      case EpsSummary::Diverges:
        break;  // the head becomes stable and dead
      case EpsSummary::Pops:
        out.add_rule({r.state, r.top, kEpsilon, s.state, {}});
        break;
      case EpsSummary::Stops: {
        // visible rules at the head where the run stops, continued with the
        // rest of the stack it leaves behind
        for (auto i : m.rules_of(s.state, s.word.front())) {
          const auto& v = m.rules()[i];
          if (v.action == kEpsilon) continue;
          PdsRule add{r.state, r.top, v.action, v.target, v.push};
          add.push.insert(add.push.end(), s.word.begin() + 1, s.word.end());
          out.add_rule(add);
        }
        break;
      }
    }
  }
  return out;
}

Configuration stabilize(const Pds& m, const Configuration& c) {
  Configuration cur = c;
  // each silent step pops, so the loop runs at most |stack| times
  while (!cur.stack.empty()) {
    const auto& rules = m.rules_of(cur.state, cur.stack.front());
    const PdsRule* r = eps_rule(m, cur.state, cur.stack.front());
    if (!r) break;
    if (rules.size() > 1) throw PreconditionError("stabilize: nondeterministic silent rule");
    if (!r->push.empty()) throw PreconditionError("stabilize: non-popping silent rule");
    cur = apply_rule(*r, cur);
  }
  return cur;
}

StateId ConfigTable::id(const Configuration& c) {
  auto [it, fresh] = index_.emplace(c, static_cast<StateId>(configs_.size()));
  if (fresh) configs_.push_back(c);
  return it->second;
}

const std::vector<Move>& PdsLts::moves(StateId s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  std::vector<Move> out;
  const auto eps = static_cast<ActionId>(m_.actions().size());
  for (auto& step : pds_transitions(m_, table_.at(s))) {
    out.push_back({step.action == kEpsilon ? eps : step.action, table_.id(step.target)});
  }
  return cache_.emplace(s, std::move(out)).first->second;
}

std::string PdsLts::action_name(ActionId a) const {
  return static_cast<std::size_t>(a) == m_.actions().size() ? "eps" : m_.action_label(a);
}

WeakPdsLts::WeakPdsLts(const Pds& m) : m_(m), eps_(m) {}

StateId WeakPdsLts::state(const Configuration& c) {
  auto end = eps_.run(c);
  return end ? table_.id(*end) : kDivergent;
}

const std::vector<Move>& WeakPdsLts::moves(StateId s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  std::vector<Move> out;
  if (s != kDivergent) {
    const Configuration c = table_.at(s);
    for (auto& step : pds_transitions(m_, c)) {
      if (step.action == kEpsilon) continue;
      out.push_back({step.action, state(step.target)});
    }
  }
  return cache_.emplace(s, std::move(out)).first->second;
}

std::string WeakPdsLts::describe(StateId s) const {
  return s == kDivergent ? "<divergent>" : format_configuration(m_, table_.at(s));
}

EqLevelResult weak_eq_level_bounded(const Pds& m, const Configuration& c1, const Configuration& c2,
                                    std::uint64_t cap, std::uint64_t budget) {
  require_restricted(m, "weak equivalence");
  WeakPdsLts lts(m);
  const StateId a = lts.state(c1), b = lts.state(c2);
  return eq_level_bounded(lts, a, b, cap, budget);
}

EqLevelResult weak_eq_level_bounded(const Pds& m1, const Configuration& c1, const Pds& m2,
                                    const Configuration& c2, std::uint64_t cap, std::uint64_t budget) {
  require_restricted(m1, "weak equivalence");
  require_restricted(m2, "weak equivalence");
  WeakPdsLts l1(m1), l2(m2);
  UnionLts u(l1, l2);
  const StateId a = UnionLts::left(l1.state(c1)), b = UnionLts::right(l2.state(c2));
  return eq_level_bounded(u, a, b, cap, budget);
}

// ---------------------------------------------------------------- PDS -> grammar

namespace {

// T(q gamma tail) where tail[i] stands for T(q_i tail).
TermRef encode_word(const Pds& m, const PdsGrammar& pg, std::uint32_t state, const std::vector<std::uint32_t>& word,
                    const std::vector<TermRef>& tail) {
  TermStore& store = pg.grammar.store();
  const std::size_t nq = m.states().size();
  // below[q] = T(q word[k..] tail), filled from the bottom of the word up
  std::vector<TermRef> below = tail;
  for (std::size_t k = word.size(); k-- > 0;) {
    std::vector<TermRef> next(nq);
    // stable heads first; unstable ones then copy the state they pop to
    for (std::uint32_t q = 0; q < nq; ++q) {
      auto it = pg.head_symbol.find({q, word[k]});
      if (it != pg.head_symbol.end()) next[q] = store.app(it->second, below);
    }
    for (std::uint32_t q = 0; q < nq; ++q) {
      if (pg.head_symbol.count({q, word[k]})) continue;
      const PdsRule* r = eps_rule(m, q, word[k]);
      next[q] = below[r->target];
    }
    below = std::move(next);
  }
  return below[state];
}

bool bracket_safe(const std::string& s) { return s.find(']') == std::string::npos; }

}  // namespace

PdsGrammar pds_to_grammar(const Pds& m) {
  const auto flags = classify(m);
  if (!flags.restricted || !flags.popping_eps) {
    throw PreconditionError("pds_to_grammar: silent rules must be deterministic and popping");
  }
  PdsGrammar pg;
  Grammar& g = pg.grammar;
  const int arity = static_cast<int>(m.states().size());
  for (const auto& a : m.actions()) g.add_action(a);
  for (const auto& n : m.states()) {
    if (!bracket_safe(n)) throw PreconditionError("state name contains ']'");
  }
  for (const auto& n : m.stack_symbols()) {
    if (!bracket_safe(n)) throw PreconditionError("stack symbol name contains ']'");
  }
  // [pY] is ambiguous when names run together; fall back to a separator
  std::set<std::string> names;
  bool ambiguous = false;
  for (const auto& p : m.states()) ambiguous |= !names.insert("[" + p + "]").second;
  for (const auto& p : m.states()) {
    for (const auto& y : m.stack_symbols()) ambiguous |= !names.insert("[" + p + y + "]").second;
  }
  const std::string sep = ambiguous ? "|" : "";
  for (const auto& p : m.states()) pg.state_symbol.push_back(g.add_nonterminal("[" + p + "]", 0));
  for (std::uint32_t p = 0; p < m.states().size(); ++p) {
    for (std::uint32_t y = 0; y < m.stack_symbols().size(); ++y) {
      if (eps_rule(m, p, y)) continue;
      pg.head_symbol[{p, y}] = g.add_nonterminal("[" + m.states()[p] + sep + m.stack_symbols()[y] + "]", arity);
    }
  }
  std::vector<TermRef> vars;
  for (int i = 1; i <= arity; ++i) vars.push_back(g.store().var(static_cast<std::uint32_t>(i)));
  for (const auto& [head, sym] : pg.head_symbol) {
    for (auto i : m.rules_of(head.first, head.second)) {
      const auto& r = m.rules()[i];
      g.add_rule(sym, r.action, encode_word(m, pg, r.target, r.push, vars));
    }
  }
  return pg;
}

TermRef encode_configuration(const Pds& m, const PdsGrammar& pg, const Configuration& c) {
  std::vector<TermRef> tail;
  for (auto s : pg.state_symbol) tail.push_back(pg.grammar.store().app(s, {}));
  return encode_word(m, pg, c.state, c.stack, tail);
}

std::vector<std::string> encoder_table(const Pds& m, const PdsGrammar& pg) {
  std::vector<std::string> out;
  for (std::uint32_t p = 0; p < pg.state_symbol.size(); ++p) {
    out.push_back(pg.grammar.name(pg.state_symbol[p]) + " = T(" + m.states()[p] + ")");
  }
  for (const auto& [head, sym] : pg.head_symbol) {
    out.push_back(pg.grammar.name(sym) + " = T(" + m.states()[head.first] + " " + m.stack_symbols()[head.second] +
                  " x)");
  }
  for (std::uint32_t p = 0; p < m.states().size(); ++p) {
    for (std::uint32_t y = 0; y < m.stack_symbols().size(); ++y) {
      if (const PdsRule* r = eps_rule(m, p, y)) {
        out.push_back("T(" + m.states()[p] + " " + m.stack_symbols()[y] + " x) = T(" + m.states()[r->target] + " x)");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- grammar -> PDS

std::vector<Substitution> rhs_substitutions(const Grammar& g) {
  TermStore& store = g.store();
  std::vector<Substitution> out;
  std::set<Substitution> seen;
  std::function<void(TermRef)> visit = [&](TermRef t) {
    if (store.is_var(t)) return;
    auto sigma = store.root_substitution(t);
    if (seen.insert(sigma).second) out.push_back(sigma);
    for (TermRef c : store.children(t)) visit(c);
  };
  for (const auto& r : g.rules()) visit(r.rhs);
  return out;
}

namespace {

std::string unique_name(std::string base, const std::set<std::string>& taken) {
  for (char& c : base) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '/') c = '_';
  }
  if (base.empty() || base[0] == '-' || base == "eps") base = "_" + base;
  while (taken.count(base)) base += "'";
  return base;
}

TermRef image(TermStore& store, const Substitution& sigma, std::uint32_t i) {
  auto it = sigma.find(i);
  return it == sigma.end() ? store.var(i) : it->second;
}

}  // namespace

GrammarPds grammar_to_pds(const Grammar& g) {
  GrammarPds gp;
  Pds& m = gp.pds;
  TermStore& store = g.store();
  const auto mm = static_cast<std::uint32_t>(std::max(1, g.max_arity()));
  for (std::uint32_t i = 1; i <= mm; ++i) m.add_state("q" + std::to_string(i));
  for (const auto& a : g.actions()) m.add_action(a);

  std::set<std::string> taken;
  for (std::size_t a = 0; a < g.nonterminal_count(); ++a) {
    auto name = unique_name(g.name(static_cast<SymbolId>(a)), taken);
    taken.insert(name);
    gp.nonterminal_symbol.push_back(m.add_stack_symbol(name));
  }
  gp.rsubs = rhs_substitutions(g);
  std::map<Substitution, std::uint32_t> rsub_index;
  for (std::size_t k = 0; k < gp.rsubs.size(); ++k) {
    auto name = unique_name("sigma" + std::to_string(k + 1), taken);
    taken.insert(name);
    gp.rsub_symbol.push_back(m.add_stack_symbol(name));
    rsub_index.emplace(gp.rsubs[k], gp.rsub_symbol.back());
  }
  auto sub_symbol = [&](TermRef t) { return rsub_index.at(store.root_substitution(t)); };

  for (const auto& r : g.rules()) {
    const std::uint32_t top = gp.nonterminal_symbol[static_cast<std::size_t>(r.head)];
    if (store.is_var(r.rhs)) {
      m.add_rule({0, top, r.action, store.var_index(r.rhs) - 1, {}});
    } else {
      m.add_rule({0, top, r.action, 0,
                  {gp.nonterminal_symbol[static_cast<std::size_t>(store.symbol(r.rhs))], sub_symbol(r.rhs)}});
    }
  }
  for (std::size_t k = 0; k < gp.rsubs.size(); ++k) {
    for (std::uint32_t i = 1; i <= mm; ++i) {
      TermRef t = image(store, gp.rsubs[k], i);
      if (store.is_var(t)) {
        m.add_rule({i - 1, gp.rsub_symbol[k], kEpsilon, store.var_index(t) - 1, {}});
      } else {
        m.add_rule({i - 1, gp.rsub_symbol[k], kEpsilon, 0,
                    {gp.nonterminal_symbol[static_cast<std::size_t>(store.symbol(t))], sub_symbol(t)}});
      }
    }
  }

  if (!classify(m).restricted) throw std::logic_error("grammar_to_pds: silent rules not deterministic");
  for (const auto& r : m.rules()) {
    if (r.action != kEpsilon || r.push.empty()) continue;
    if (eps_rule(m, r.target, r.push.front())) {
      throw std::logic_error("grammar_to_pds: non-popping silent step followed by a silent step");
    }
  }
  return gp;
}

Configuration encode_head(const GrammarPds& gp, SymbolId a) {
  return Configuration{0, {gp.nonterminal_symbol.at(static_cast<std::size_t>(a))}};
}

std::vector<std::string> encoder_table(const Grammar& g, const GrammarPds& gp) {
  std::vector<std::string> out;
  const auto& names = gp.pds.stack_symbols();
  for (std::size_t a = 0; a < gp.nonterminal_symbol.size(); ++a) {
    auto sym = static_cast<SymbolId>(a);
    out.push_back(format_term(g.store(), g.head_term(sym)) + " = q1 " + names[gp.nonterminal_symbol[a]]);
  }
  for (std::size_t k = 0; k < gp.rsubs.size(); ++k) {
    std::string line = names[gp.rsub_symbol[k]] + " = {";
    bool first = true;
    for (const auto& [i, t] : gp.rsubs[k]) {
      if (!first) line += ", ";
      first = false;
      line += "x" + std::to_string(i) + " -> " + format_term(g.store(), t);
    }
    out.push_back(line + "}");
  }
  return out;
}

// ---------------------------------------------------------------- random systems

Pds random_pds(std::mt19937_64& rng, const RandomPdsSpec& spec) {
  Pds m;
  auto pick = [&](int n) { return static_cast<std::uint32_t>(rng() % static_cast<std::uint64_t>(n)); };
  for (int i = 0; i < spec.states; ++i) m.add_state("p" + std::to_string(i));
  for (int i = 0; i < spec.stack_symbols; ++i) {
    m.add_stack_symbol(i < 26 ? std::string(1, static_cast<char>('A' + i)) : "Y" + std::to_string(i));
  }
  for (int i = 0; i < spec.actions; ++i) {
    m.add_action(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto word = [&](int max_len) {
    std::vector<std::uint32_t> w(pick(max_len + 1));
    for (auto& y : w) y = pick(spec.stack_symbols);
    return w;
  };
  for (std::uint32_t p = 0; p < static_cast<std::uint32_t>(spec.states); ++p) {
    for (std::uint32_t y = 0; y < static_cast<std::uint32_t>(spec.stack_symbols); ++y) {
      if (coin(rng) < spec.eps_heads) {
        m.add_rule({p, y, kEpsilon, pick(spec.states), spec.popping_only ? std::vector<std::uint32_t>{} : word(spec.max_push)});
        continue;
      }
      const int count = static_cast<int>(pick(spec.max_rules_per_head + 1));
      for (int k = 0; k < count; ++k) {
        m.add_rule({p, y, static_cast<ActionId>(pick(spec.actions)), pick(spec.states), word(spec.max_push)});
      }
    }
  }
  return m;
}

}  // namespace fogbisim
