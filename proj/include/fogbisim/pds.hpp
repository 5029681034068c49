#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fogbisim/eq_level.hpp"
#include "fogbisim/grammar.hpp"
#include "fogbisim/lts.hpp"

namespace fogbisim {

/// Action of a silent rule.
inline constexpr ActionId kEpsilon = -1;

struct PdsRule {
  std::uint32_t state = 0;
  std::uint32_t top = 0;
  ActionId action = kEpsilon;
  std::uint32_t target = 0;
  std::vector<std::uint32_t> push;  // top first
};

class Pds {
 public:
  std::uint32_t add_state(const std::string& name);
  std::uint32_t add_stack_symbol(const std::string& name);
  ActionId add_action(const std::string& name);
  /// Validates ids; duplicate rules are ignored.
  void add_rule(const PdsRule& r);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& stack_symbols() const { return stack_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<PdsRule>& rules() const { return rules_; }
  /// Indices into rules(), in rule order.
  const std::vector<std::size_t>& rules_of(std::uint32_t state, std::uint32_t top) const;

  std::optional<std::uint32_t> find_state(const std::string& name) const;
  std::optional<std::uint32_t> find_stack_symbol(const std::string& name) const;
  std::optional<ActionId> find_action(const std::string& name) const;
  std::string action_label(ActionId a) const { return a == kEpsilon ? "eps" : actions_.at(static_cast<std::size_t>(a)); }

 private:
  std::vector<std::string> states_, stack_, actions_;
  std::unordered_map<std::string, std::uint32_t> state_index_, stack_index_;
  std::unordered_map<std::string, ActionId> action_index_;
  std::vector<PdsRule> rules_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::size_t>> by_head_;
};

Pds parse_pds(std::string_view text);
std::string serialize_pds(const Pds& m);

struct PdsFlags {
  bool real_time = true;    // no silent rules
  bool restricted = true;   // every silent rule is the only rule of its head
  bool popping_eps = true;  // every silent rule pops
};

PdsFlags classify(const Pds& m);

struct Configuration {
  std::uint32_t state = 0;
  std::vector<std::uint32_t> stack;  // top first
  auto operator<=>(const Configuration&) const = default;
};

/// "p A C B" (top first) or a bare state name.
Configuration parse_configuration(const Pds& m, std::string_view text);
std::string format_configuration(const Pds& m, const Configuration& c);

struct PdsStep {
  ActionId action = kEpsilon;
  Configuration target;
};

/// One step per applicable rule, in rule order.
std::vector<PdsStep> pds_transitions(const Pds& m, const Configuration& c);

bool is_stable(const Pds& m, const Configuration& c);

/// Outcome of the deterministic silent run from a head pY with Y alone on
/// the stack.
struct EpsSummary {
  enum Kind { Pops, Stops, Diverges } kind = Stops;
  std::uint32_t state = 0;
  std::vector<std::uint32_t> word;  // stack at the stable stop, top first
};

/// Summaries of every head, computed by memoised recursion over heads.
/// Requires a restricted system.
class EpsSummaries {
 public:
  explicit EpsSummaries(const Pds& m);
  const EpsSummary& of(std::uint32_t state, std::uint32_t top) const;
  /// End of the silent run from c; nullopt if it never stops.
  std::optional<Configuration> run(const Configuration& c) const;

 private:
  std::size_t stack_count_;
  std::vector<EpsSummary> table_;
};

/// Removes non-popping silent rules (saturation over heads). Requires a
/// restricted system; the result has only deterministic popping silent rules.
Pds remove_nonpopping_eps(const Pds& m);

/// Exhausts silent pops. Requires deterministic popping silent rules only.
Configuration stabilize(const Pds& m, const Configuration& c);

/// Configurations interned as state ids.
class ConfigTable {
 public:
  StateId id(const Configuration& c);
  const Configuration& at(StateId s) const { return configs_.at(static_cast<std::size_t>(s)); }
  std::size_t size() const { return configs_.size(); }

 private:
  std::map<Configuration, StateId> index_;
  std::vector<Configuration> configs_;
};

/// Strong semantics; silent steps carry the action "eps".
class PdsLts : public Lts {
 public:
  explicit PdsLts(const Pds& m) : m_(m) {}
  StateId state(const Configuration& c) { return table_.id(c); }
  const Configuration& config(StateId s) const { return table_.at(s); }
  const std::vector<Move>& moves(StateId s) override;
  std::string describe(StateId s) const override { return format_configuration(m_, table_.at(s)); }
  std::string action_name(ActionId a) const override;

 private:
  const Pds& m_;
  ConfigTable table_;
  std::unordered_map<StateId, std::vector<Move>> cache_;
};

/// Weak semantics of a restricted system over the ends of silent runs: a
/// move is a visible step followed by the complete silent run. Runs that
/// never stop lead to a single dead state.
class WeakPdsLts : public Lts {
 public:
  explicit WeakPdsLts(const Pds& m);
  /// The state reached by the silent run from c.
  StateId state(const Configuration& c);
  bool is_divergent(StateId s) const { return s == kDivergent; }
  const Configuration& config(StateId s) const { return table_.at(s); }
  const std::vector<Move>& moves(StateId s) override;
  std::string describe(StateId s) const override;
  std::string action_name(ActionId a) const override { return m_.action_label(a); }

 private:
  static constexpr StateId kDivergent = ~StateId{0} >> 1;
  const Pds& m_;
  EpsSummaries eps_;
  ConfigTable table_;
  std::unordered_map<StateId, std::vector<Move>> cache_;
};

/// Bounded weak equivalence level. Rejects systems that are not restricted.
EqLevelResult weak_eq_level_bounded(const Pds& m, const Configuration& c1, const Configuration& c2,
                                    std::uint64_t cap, std::uint64_t budget = kDefaultBudget);
/// Same, for configurations of two systems compared in their disjoint union.
EqLevelResult weak_eq_level_bounded(const Pds& m1, const Configuration& c1, const Pds& m2,
                                    const Configuration& c2, std::uint64_t cap,
                                    std::uint64_t budget = kDefaultBudget);

/// Grammar of a real-time or popping-restricted system, with its encoder.
struct PdsGrammar {
  Grammar grammar;
  std::vector<SymbolId> state_symbol;                                    // [p]
  std::map<std::pair<std::uint32_t, std::uint32_t>, SymbolId> head_symbol;  // [pY], stable heads only
};

PdsGrammar pds_to_grammar(const Pds& m);
/// T(p gamma); unstable heads are resolved by their popping rule.
TermRef encode_configuration(const Pds& m, const PdsGrammar& pg, const Configuration& c);

/// The system M_G with its stack alphabet split into nonterminals and
/// rhs-substitutions.
struct GrammarPds {
  Pds pds;
  std::vector<std::uint32_t> nonterminal_symbol;  // by SymbolId
  std::vector<Substitution> rsubs;
  std::vector<std::uint32_t> rsub_symbol;
};

/// Distinct root-substitutions of non-variable subterms of right-hand sides,
/// in order of first occurrence.
std::vector<Substitution> rhs_substitutions(const Grammar& g);

GrammarPds grammar_to_pds(const Grammar& g);
/// (q1, A) for A(x1, ..., x_ar(A)).
Configuration encode_head(const GrammarPds& gp, SymbolId a);
/// Encoder table lines "name = description".
std::vector<std::string> encoder_table(const Grammar& g, const GrammarPds& gp);
std::vector<std::string> encoder_table(const Pds& m, const PdsGrammar& pg);

struct RandomPdsSpec {
  int states = 2;
  int stack_symbols = 2;
  int actions = 2;
  int max_rules_per_head = 2;
  int max_push = 2;
  /// Heads that get a single silent rule instead of visible ones.
  double eps_heads = 0.0;
  bool popping_only = false;
};

/// Random system; states p0.., stack symbols A, B, ..., actions a, b, ...
Pds random_pds(std::mt19937_64& rng, const RandomPdsSpec& spec = {});

}  // namespace fogbisim
