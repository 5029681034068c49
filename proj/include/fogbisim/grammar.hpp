#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fogbisim/bigint.hpp"
#include "fogbisim/term.hpp"

namespace fogbisim {

/// Action id: >= 0 indexes the grammar's actions; -k is the private action
/// of variable x_k in self-loop mode.
using ActionId = std::int32_t;

enum class VarMode { Dead, SelfLoop };

struct Rule {
  SymbolId head = 0;
  ActionId action = 0;
  TermRef rhs = 0;
};

struct Transition {
  ActionId action = 0;
  TermRef target = 0;
};

class Grammar {
 public:
  Grammar() : store_(std::make_shared<TermStore>()) {}
  explicit Grammar(std::shared_ptr<TermStore> store) : store_(std::move(store)) {}

  TermStore& store() const { return *store_; }
  std::shared_ptr<TermStore> store_ptr() const { return store_; }

  SymbolId add_nonterminal(const std::string& name, int arity);
  ActionId add_action(const std::string& name);
  /// Validates: finite rhs, variables within x1..x_ar(head).
  void add_rule(SymbolId head, ActionId action, TermRef rhs);

  std::size_t nonterminal_count() const { return store_->alphabet().size(); }
  const std::vector<std::string>& actions() const { return actions_; }
  std::optional<ActionId> find_action(const std::string& name) const;
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<std::size_t>& rules_of(SymbolId head) const;
  int arity(SymbolId a) const { return store_->alphabet().at(a).arity; }
  const std::string& name(SymbolId a) const { return store_->alphabet().at(a).name; }
  int max_arity() const { return store_->alphabet().max_arity(); }

  /// A(x1, ..., x_ar(A)).
  TermRef head_term(SymbolId a) const;

  std::string action_label(ActionId a) const;

 private:
  std::shared_ptr<TermStore> store_;
  std::vector<std::string> actions_;
  std::unordered_map<std::string, ActionId> action_index_;
  std::vector<Rule> rules_;
  std::vector<std::vector<std::size_t>> by_head_;
};

Grammar parse_grammar(std::string_view text);
std::string serialize_grammar(const Grammar& g);

/// Sum over rules of ar(A) + 1 + size(rhs).
BigInt grammar_size(const Grammar& g);

/// Head-rewriting successors of E, in rule order.
std::vector<Transition> transitions(const Grammar& g, TermRef e, VarMode mode);

/// All terms reachable from E by exactly the word w.
std::set<TermRef> step_word(const Grammar& g, TermRef e, const std::vector<ActionId>& word,
                            VarMode mode = VarMode::Dead);

/// Parses a word given as action names separated by spaces or commas, or as
/// a string of single-letter actions.
std::vector<ActionId> parse_word(const Grammar& g, std::string_view text);

}  // namespace fogbisim
