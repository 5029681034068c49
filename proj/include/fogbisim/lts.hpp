#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fogbisim/grammar.hpp"

namespace fogbisim {

using StateId = std::uint64_t;

struct Move {
  ActionId action = 0;
  StateId target = 0;
};

/// Image-finite labelled transition system explored on demand.
class Lts {
 public:
  virtual ~Lts() = default;
  /// Successors in a deterministic order; the reference stays valid for the
  /// lifetime of the Lts.
  virtual const std::vector<Move>& moves(StateId s) = 0;
  virtual std::string describe(StateId s) const = 0;
  virtual std::string action_name(ActionId a) const = 0;
};

/// Head-rewriting semantics of a grammar; states are TermRefs.
class GrammarLts : public Lts {
 public:
  GrammarLts(const Grammar& g, VarMode mode) : g_(g), mode_(mode) {}
  const std::vector<Move>& moves(StateId s) override;
  std::string describe(StateId s) const override;
  std::string action_name(ActionId a) const override { return g_.action_label(a); }
  const Grammar& grammar() const { return g_; }

 private:
  const Grammar& g_;
  VarMode mode_;
  std::unordered_map<StateId, std::vector<Move>> cache_;
};

/// Disjoint union of two systems; actions are identified by name. The side
/// is stored in the top bit of the state id.
class UnionLts : public Lts {
 public:
  UnionLts(Lts& left, Lts& right) : left_(left), right_(right) {}
  static StateId left(StateId s) { return s; }
  static StateId right(StateId s) { return s | kRightBit; }
  const std::vector<Move>& moves(StateId s) override;
  std::string describe(StateId s) const override;
  std::string action_name(ActionId a) const override { return names_.at(static_cast<std::size_t>(a)); }

 private:
  static constexpr StateId kRightBit = StateId{1} << 63;
  ActionId unify(const std::string& name);

  Lts& left_;
  Lts& right_;
  std::vector<std::string> names_;
  std::map<std::string, ActionId> index_;
  std::unordered_map<StateId, std::vector<Move>> cache_;
};

}  // namespace fogbisim
