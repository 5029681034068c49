#include "fogbisim/eq_level.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "fogbisim/error.hpp"

namespace fogbisim {

namespace {

struct PairKey {
  StateId a, b;
  bool operator==(const PairKey&) const = default;
};
struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    return std::hash<StateId>{}(k.a * 0x9e3779b97f4a7c15ULL ^ (k.b + 0x632be59bd9b4e019ULL));
  }
};

PairKey key_of(StateId u, StateId v) { return u < v ? PairKey{u, v} : PairKey{v, u}; }

class GameGraph {
 public:
  GameGraph(Lts& lts, std::uint64_t cap, std::uint64_t budget) : lts_(lts), cap_(cap), budget_(budget) {}

  void explore(StateId s, StateId t) {
    id_of(s, t, 0);
    for (std::size_t qi = 0; qi < pairs_.size(); ++qi) {
      Pair& p = pairs_[qi];
      if (p.a == p.b) continue;
      if (p.depth >= cap_) {
        closed_ = false;
        continue;
      }
      const auto depth = p.depth;
      const StateId a = p.a, b = p.b;
      std::vector<std::vector<std::uint32_t>> options;
      auto side = [&](StateId from, StateId other) {
        const auto& mf = lts_.moves(from);
        const auto& mo = lts_.moves(other);
        for (const auto& m : mf) {
          std::vector<std::uint32_t> replies;
          for (const auto& r : mo) {
            if (r.action == m.action) replies.push_back(id_of(m.target, r.target, depth + 1));
          }
          options.push_back(std::move(replies));
        }
      };
      side(a, b);
      side(b, a);
      pairs_[qi].options = std::move(options);
      pairs_[qi].expanded = true;
    }
  }

  void solve() {
    value_.assign(pairs_.size(), cap_);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = pairs_.size(); i-- > 0;) {
        const Pair& p = pairs_[i];
        if (!p.expanded) continue;
        std::uint64_t best = cap_;
        for (const auto& opt : p.options) {
          std::uint64_t cand = 0;
          for (auto q : opt) cand = std::max(cand, value_[q] + 1);
          best = std::min(best, cand);
          if (best == 0) break;
        }
        if (best < value_[i]) {
          value_[i] = best;
          changed = true;
        }
      }
    }
  }

  std::uint64_t value(StateId u, StateId v) const {
    auto it = index_.find(key_of(u, v));
    return it == index_.end() ? cap_ : value_[it->second];
  }
  std::uint64_t root_value() const { return value_[0]; }
  bool closed() const { return closed_; }
  std::size_t size() const { return pairs_.size(); }

  std::unique_ptr<Certificate> certificate(StateId l, StateId r) {
    const auto k = value(l, r);
    auto cert = std::make_unique<Certificate>();
    cert->left = l;
    cert->right = r;
    auto attempt = [&](StateId from, StateId other, bool right_side) {
      for (const auto& m : lts_.moves(from)) {
        std::uint64_t worst = 0;
        std::vector<StateId> replies;
        for (const auto& rep : lts_.moves(other)) {
          if (rep.action != m.action) continue;
          replies.push_back(rep.target);
          worst = std::max(worst, value(m.target, rep.target) + 1);
        }
        if (worst > k) continue;
        cert->spoiler_right = right_side;
        cert->action = m.action;
        cert->target = m.target;
        for (StateId rt : replies) {
          Certificate::Reply reply;
          reply.target = rt;
          reply.next = right_side ? certificate(rt, m.target) : certificate(m.target, rt);
          cert->replies.push_back(std::move(reply));
        }
        return true;
      }
      return false;
    };
    if (!attempt(l, r, false) && !attempt(r, l, true)) {
      throw std::logic_error("certificate: no winning Spoiler move");
    }
    return cert;
  }

 private:
  struct Pair {
    StateId a, b;
    std::uint64_t depth;
    bool expanded = false;
    std::vector<std::vector<std::uint32_t>> options;
  };

  std::uint32_t id_of(StateId u, StateId v, std::uint64_t depth) {
    auto key = key_of(u, v);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (pairs_.size() >= budget_) {
      throw BudgetExceeded("game exploration exceeded " + std::to_string(budget_) + " pairs");
    }
    auto id = static_cast<std::uint32_t>(pairs_.size());
    pairs_.push_back({key.a, key.b, depth, false, {}});
    index_.emplace(key, id);
    return id;
  }

  Lts& lts_;
  std::uint64_t cap_;
  std::uint64_t budget_;
  bool closed_ = true;
  std::vector<Pair> pairs_;
  std::unordered_map<PairKey, std::uint32_t, PairKeyHash> index_;
  std::vector<std::uint64_t> value_;
};

nlohmann::ordered_json cert_to_json(Lts& lts, const Certificate& c) {
  nlohmann::ordered_json j;
  j["left"] = lts.describe(c.left);
  j["right"] = lts.describe(c.right);
  j["spoiler"] = c.spoiler_right ? "right" : "left";
  j["action"] = lts.action_name(c.action);
  j["target"] = lts.describe(c.target);
  j["replies"] = nlohmann::ordered_json::array();
  for (const auto& r : c.replies) {
    nlohmann::ordered_json rj;
    rj["reply"] = lts.describe(r.target);
    rj["next"] = cert_to_json(lts, *r.next);
    j["replies"].push_back(std::move(rj));
  }
  return j;
}

}  // namespace

std::string to_string(const EqLevelResult& r) {
  return r.finite ? "Finite(" + std::to_string(r.value) + ")" : "AtLeast(" + std::to_string(r.value) + ")";
}

std::size_t Certificate::depth() const {
  std::size_t d = 0;
  for (const auto& r : replies) d = std::max(d, r.next->depth());
  return d + 1;
}

EqLevelResult eq_level_bounded(Lts& lts, StateId s, StateId t, std::uint64_t cap, std::uint64_t budget,
                               std::unique_ptr<Certificate>* certificate) {
  cap = std::min(cap, kMaxCap);
  if (s == t) {
    EqLevelResult r = EqLevelResult::AtLeast(cap);
    r.closed = true;
    r.pairs = 1;
    return r;
  }
  if (cap == 0) return EqLevelResult::AtLeast(0);
  GameGraph game(lts, cap, budget);
  game.explore(s, t);
  game.solve();
  EqLevelResult r;
  const auto v = game.root_value();
  r.finite = v < cap;
  r.value = v;
  r.closed = game.closed();
  r.pairs = game.size();
  if (r.finite && certificate) *certificate = game.certificate(s, t);
  return r;
}

EqLevelResult eq_level_bounded(const Grammar& g, TermRef e, TermRef f, const GameConfig& cfg,
                               std::unique_ptr<Certificate>* certificate) {
  GrammarLts lts(g, cfg.variable_mode);
  return eq_level_bounded(lts, e, f, cfg.cap, cfg.budget, certificate);
}

std::unique_ptr<Certificate> spoiler_certificate(const Grammar& g, TermRef e, TermRef f, const GameConfig& cfg) {
  std::unique_ptr<Certificate> cert;
  auto r = eq_level_bounded(g, e, f, cfg, &cert);
  if (!r.finite) throw PreconditionError("no Spoiler certificate: result is " + to_string(r));
  return cert;
}

bool replay_certificate(Lts& lts, const Certificate& c, std::uint64_t rounds) {
  if (rounds == 0) return false;
  const StateId from = c.spoiler_right ? c.right : c.left;
  const StateId other = c.spoiler_right ? c.left : c.right;
  const auto& own = lts.moves(from);
  bool legal = std::any_of(own.begin(), own.end(), [&](const Move& m) {
    return m.action == c.action && m.target == c.target;
  });
  if (!legal) return false;
  std::multiset<StateId> expected;
  for (const auto& m : lts.moves(other)) {
    if (m.action == c.action) expected.insert(m.target);
  }
  std::multiset<StateId> given;
  for (const auto& r : c.replies) given.insert(r.target);
  if (std::set<StateId>(expected.begin(), expected.end()) != std::set<StateId>(given.begin(), given.end())) {
    return false;
  }
  for (const auto& r : c.replies) {
    if (!r.next) return false;
    const StateId nl = c.spoiler_right ? r.target : c.target;
    const StateId nr = c.spoiler_right ? c.target : r.target;
    if (r.next->left != nl || r.next->right != nr) return false;
    if (!replay_certificate(lts, *r.next, rounds - 1)) return false;
  }
  return true;
}

std::string certificate_json(Lts& lts, const Certificate& cert) { return cert_to_json(lts, cert).dump(2); }

std::uint32_t SimPartitions::index_of(StateId s) const {
  auto it = std::find(states.begin(), states.end(), s);
  if (it == states.end()) throw PreconditionError("state not in the explored space");
  return static_cast<std::uint32_t>(it - states.begin());
}

SimPartitions sim_k_partition(Lts& lts, const std::vector<StateId>& seeds, std::uint64_t k, std::uint64_t budget) {
  SimPartitions out;
  std::unordered_map<StateId, std::uint32_t> index;
  std::vector<std::uint64_t> depth;
  for (StateId s : seeds) {
    if (index.emplace(s, static_cast<std::uint32_t>(out.states.size())).second) {
      out.states.push_back(s);
      depth.push_back(0);
    }
  }
  // Successor lists; outside targets are encoded as -1 - (outside index).
  std::vector<std::vector<std::pair<ActionId, std::int64_t>>> succ;
  std::unordered_map<StateId, std::int64_t> outside;
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    std::vector<std::pair<ActionId, std::int64_t>> row;
    for (const auto& m : lts.moves(out.states[i])) {
      auto it = index.find(m.target);
      if (it != index.end()) {
        row.emplace_back(m.action, it->second);
        continue;
      }
      if (depth[i] < k) {
        if (out.states.size() >= budget) throw BudgetExceeded("state space exceeded " + std::to_string(budget));
        auto id = static_cast<std::uint32_t>(out.states.size());
        index.emplace(m.target, id);
        out.states.push_back(m.target);
        depth.push_back(depth[i] + 1);
        row.emplace_back(m.action, id);
      } else {
        auto [oi, fresh] = outside.emplace(m.target, static_cast<std::int64_t>(outside.size()));
        row.emplace_back(m.action, -1 - oi->second);
      }
    }
    succ.push_back(std::move(row));
  }
  const std::size_t n = out.states.size();
  out.block.assign(1, std::vector<std::uint32_t>(n, 0));
  for (std::uint64_t level = 0; level < k; ++level) {
    const auto& prev = out.block.back();
    std::map<std::pair<std::uint32_t, std::set<std::pair<ActionId, std::int64_t>>>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::pair<ActionId, std::int64_t>> sig;
      for (auto [a, tgt] : succ[i]) {
        std::int64_t b = tgt >= 0 ? prev[static_cast<std::size_t>(tgt)] : (level == 0 ? 0 : tgt);
        sig.emplace(a, b);
      }
      auto [it, fresh] = ids.emplace(std::make_pair(prev[i], std::move(sig)), static_cast<std::uint32_t>(ids.size()));
      next[i] = it->second;
    }
    out.block.push_back(std::move(next));
  }
  return out;
}

EqLevelResult level_from_partitions(const SimPartitions& p, StateId s, StateId t) {
  const auto i = p.index_of(s);
  const auto j = p.index_of(t);
  for (std::size_t level = 0; level < p.block.size(); ++level) {
    if (p.block[level][i] != p.block[level][j]) return EqLevelResult::Finite(level - 1);
  }
  return EqLevelResult::AtLeast(p.block.size() - 1);
}

DecideResult finite_state_decide(Lts& lts, StateId s, StateId t, std::uint64_t budget) {
  DecideResult res;
  std::unordered_map<StateId, std::uint32_t> index;
  std::vector<StateId> states;
  std::deque<StateId> queue;
  for (StateId x : {s, t}) {
    if (index.emplace(x, static_cast<std::uint32_t>(states.size())).second) {
      states.push_back(x);
      queue.push_back(x);
    }
  }
  std::vector<std::vector<std::pair<ActionId, std::uint32_t>>> succ;
  while (!queue.empty()) {
    StateId x = queue.front();
    queue.pop_front();
    std::vector<std::pair<ActionId, std::uint32_t>> row;
    for (const auto& m : lts.moves(x)) {
      auto it = index.find(m.target);
      if (it == index.end()) {
        if (states.size() >= budget) {
          res.states = states.size();
          return res;
        }
        it = index.emplace(m.target, static_cast<std::uint32_t>(states.size())).first;
        states.push_back(m.target);
        queue.push_back(m.target);
      }
      row.emplace_back(m.action, it->second);
    }
    succ.push_back(std::move(row));
  }
  res.states = states.size();
  const std::size_t n = states.size();
  const auto is = index.at(s), it = index.at(t);
  std::vector<std::uint32_t> block(n, 0);
  std::size_t count = 1;
  for (std::uint64_t level = 1;; ++level) {
    std::map<std::pair<std::uint32_t, std::set<std::pair<ActionId, std::uint32_t>>>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::pair<ActionId, std::uint32_t>> sig;
      for (auto [a, tgt] : succ[i]) sig.emplace(a, block[tgt]);
      auto [pos, fresh] = ids.emplace(std::make_pair(block[i], std::move(sig)), static_cast<std::uint32_t>(ids.size()));
      next[i] = pos->second;
    }
    block.swap(next);
    if (block[is] != block[it]) {
      res.decision = Decision::NotBisimilar;
      res.level = level - 1;
      return res;
    }
    if (ids.size() == count) {
      res.decision = Decision::Bisimilar;
      return res;
    }
    count = ids.size();
  }
}

DecideResult finite_state_decide(const Grammar& g, TermRef e, TermRef f, std::uint64_t budget, VarMode mode) {
  GrammarLts lts(g, mode);
  return finite_state_decide(lts, e, f, budget);
}

}  // namespace fogbisim
