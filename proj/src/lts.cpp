#include "fogbisim/lts.hpp"

#include "fogbisim/term_syntax.hpp"

namespace fogbisim {

const std::vector<Move>& GrammarLts::moves(StateId s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  std::vector<Move> out;
  for (const auto& t : transitions(g_, static_cast<TermRef>(s), mode_)) out.push_back({t.action, t.target});
  return cache_.emplace(s, std::move(out)).first->second;
}

std::string GrammarLts::describe(StateId s) const { return format_term(g_.store(), static_cast<TermRef>(s)); }

ActionId UnionLts::unify(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  auto id = static_cast<ActionId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

const std::vector<Move>& UnionLts::moves(StateId s) {
  auto it = cache_.find(s);
  if (it != cache_.end()) return it->second;
  const bool right = (s & kRightBit) != 0;
  Lts& side = right ? right_ : left_;
  const StateId inner = s & ~kRightBit;
  std::vector<Move> out;
  for (const auto& m : side.moves(inner)) {
    out.push_back({unify(side.action_name(m.action)), right ? (m.target | kRightBit) : m.target});
  }
  return cache_.emplace(s, std::move(out)).first->second;
}

std::string UnionLts::describe(StateId s) const {
  if (s & kRightBit) return right_.describe(s & ~kRightBit);
  return left_.describe(s);
}

}  // namespace fogbisim
