#include "fogbisim/candidate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fogbisim/error.hpp"
#include "fogbisim/term_enum.hpp"
#include "fogbisim/term_syntax.hpp"

namespace fogbisim {

namespace {

bool vars_are_prefix(const std::set<std::uint32_t>& v) {
  std::uint32_t expect = 1;
  for (auto k : v) {
    if (k != expect++) return false;
  }
  return true;
}

BigInt max_of(const BigInt& a, const BigInt& b) { return a < b ? b : a; }

// Level oracle with a per-pair cache. In effective mode the cache keeps the
// exact level once known, or a lower bound from a game that hit its cap.
class LevelOracle {
 public:
  LevelOracle(const Grammar& g, const CandidateParams& p, const CandidateOptions& o) : g_(g), p_(p), opt_(o) {}

  std::optional<std::uint64_t> level(const TermPair& pr, const BigInt& bound) {
    auto& memo = cache_[pr];
    if (memo.exact) return memo.level;
    if (opt_.oracle == OracleKind::Exact) {
      auto d = finite_state_decide(g_, pr.first, pr.second, opt_.budget);
      if (d.decision == Decision::Inconclusive) {
        throw BudgetExceeded("exact oracle inconclusive on pair " + format_pair(g_, pr) + " within " +
                             std::to_string(opt_.budget) + " states");
      }
      memo.exact = true;
      if (d.decision == Decision::NotBisimilar) memo.level = d.level;
      return memo.level;
    }
    const std::size_t size = g_.store().size(pr.first, pr.second);
    const BigInt threshold = p_.c * (bound * size + BigInt(size) * size);
    if (memo.lower > threshold) return std::nullopt;
    BigInt cap = threshold + 1;
    if (cap > BigInt(kMaxCap)) cap = BigInt(kMaxCap);
    GameConfig cfg;
    cfg.cap = static_cast<std::uint64_t>(cap);
    cfg.budget = opt_.budget;
    auto r = eq_level_bounded(g_, pr.first, pr.second, cfg);
    if (r.finite) {
      memo.exact = true;
      memo.level = r.value;
      return r.value;
    }
    if (r.closed) {
      memo.exact = true;
      memo.level.reset();
      return std::nullopt;
    }
    memo.lower = BigInt(r.value);
    return std::nullopt;
  }

  std::optional<std::uint64_t> level_or_omega(const TermPair& pr, const BigInt& bound) {
    auto l = level(pr, bound);
    if (!l) return l;
    if (opt_.oracle == OracleKind::Effective) {
      const std::size_t size = g_.store().size(pr.first, pr.second);
      if (BigInt(*l) > p_.c * (bound * size + BigInt(size) * size)) return std::nullopt;
    }
    return l;
  }

 private:
  struct Memo {
    bool exact = false;
    std::optional<std::uint64_t> level;
    BigInt lower = 0;
  };
  const Grammar& g_;
  const CandidateParams& p_;
  const CandidateOptions& opt_;
  std::map<TermPair, Memo> cache_;
};

class PairsCache {
 public:
  PairsCache(const Grammar& g, std::uint64_t budget) : g_(g), budget_(budget) {}
  const std::vector<TermPair>& get(std::size_t i, const BigInt& s) {
    auto key = std::make_pair(i, s);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, pairs_set(g_, i, s, budget_)).first;
    return it->second;
  }

 private:
  const Grammar& g_;
  std::uint64_t budget_;
  std::map<std::pair<std::size_t, BigInt>, std::vector<TermPair>> cache_;
};

std::vector<TermPair> subtract(const std::vector<TermPair>& from, const std::set<TermPair>& minus) {
  std::vector<TermPair> out;
  for (const auto& p : from) {
    if (!minus.count(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

BigInt pairs_bound(const Grammar& g, std::size_t i, const BigInt& s_i) {
  const BigInt m = g.max_arity();
  const BigInt base = (BigInt(static_cast<long long>(g.nonterminal_count())) + BigInt(static_cast<long long>(i))) *
                      pow_checked(s_i, m);
  return pow_checked(base, s_i) * s_i * s_i;
}

std::vector<TermPair> pairs_set(const Grammar& g, std::size_t i, const BigInt& s_i, std::uint64_t pairs_budget) {
  if (s_i < 1) throw PreconditionError("pairs need a size bound of at least 1");
  const BigInt limit(pairs_budget);
  // the bound is monotone in s, so compare before materialising large powers
  if (s_i > BigInt(64) || pairs_bound(g, i, s_i) > limit) {
    throw BudgetExceeded("pairs_" + std::to_string(i) + " with s=" + to_string(s_i) +
                         " exceeds the enumeration budget " + std::to_string(pairs_budget));
  }
  const auto s = static_cast<std::uint32_t>(s_i);
  auto& store = g.store();
  auto terms = enumerate_terms(store, static_cast<std::uint32_t>(i), s);
  std::vector<std::vector<TermRef>> reach;
  reach.reserve(terms.size());
  for (TermRef t : terms) {
    auto r = store.reachable({t});
    std::sort(r.begin(), r.end());
    reach.push_back(std::move(r));
  }
  std::vector<TermPair> out;
  std::vector<TermRef> merged;
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = 0; b < terms.size(); ++b) {
      if (reach[a].size() + reach[b].size() > s) {
        merged.clear();
        std::set_union(reach[a].begin(), reach[a].end(), reach[b].begin(), reach[b].end(), std::back_inserter(merged));
        if (merged.size() > s) continue;
      }
      if (!vars_are_prefix(store.vars(terms[a], terms[b]))) continue;
      out.emplace_back(terms[a], terms[b]);
    }
  }
  return out;
}

BigInt size_increase(const Grammar& g) {
  BigInt best = 0;
  for (const auto& r : g.rules()) best = max_of(best, BigInt(static_cast<long long>(g.store().ntsize(r.rhs))));
  return best;
}

std::optional<std::uint64_t> eq_level_effective(const Grammar& g, const BigInt& bound, const BigInt& c, TermRef e,
                                                TermRef f, std::uint64_t budget) {
  CandidateParams p;
  p.c = c;
  CandidateOptions o;
  o.oracle = OracleKind::Effective;
  o.budget = budget;
  LevelOracle oracle(g, p, o);
  return oracle.level_or_omega({e, f}, bound);
}

Ordinal rank(const CandidateState& st) {
  std::vector<BigInt> coeff;
  for (const auto& w : st.worklists) coeff.emplace_back(static_cast<long long>(w.size()));
  return Ordinal::from_coefficients(std::move(coeff));
}

BigInt control_value(const CandidateState& st, std::size_t n) {
  BigInt v = max_of(BigInt(static_cast<long long>(n)) + 1, st.bound);
  for (const auto& s : st.s_arr) v = max_of(v, s);
  for (const auto& w : st.worklists) v = max_of(v, BigInt(static_cast<long long>(w.size())));
  return v;
}

std::vector<std::string> check_candidate_invariant(const Grammar& g, const CandidateParams& p,
                                                   const CandidateState& st) {
  std::vector<std::string> bad;
  const auto& store = g.store();
  const std::size_t n = p.n;
  const BigInt sinc = size_increase(g);
  if (st.s_arr.size() != n + 1 || st.e_arr.size() != n + 1) return {"arrays have the wrong length"};
  if (st.s_arr[n] != p.s) bad.push_back("s_n differs from s");
  for (std::size_t i = n; i >= 1; --i) {
    if (st.s_arr[i - 1] != 2 * st.s_arr[i] + p.g + st.e_arr[i] * (sinc + p.g)) {
      bad.push_back("s_" + std::to_string(i - 1) + " does not follow from s_" + std::to_string(i));
    }
  }
  BigInt total = BigInt(static_cast<long long>(n)) + 1;
  for (std::size_t i = 0; i <= n; ++i) {
    BigInt e = 0;
    for (const auto& [pr, lvl] : st.basis) {
      if (BigInt(static_cast<long long>(store.size(pr.first, pr.second))) <= st.s_arr[i]) e = max_of(e, BigInt(lvl));
    }
    if (e != st.e_arr[i]) bad.push_back("e_" + std::to_string(i) + " is not the maximal stored level");
    total += st.e_arr[i];
  }
  if (total != st.bound) bad.push_back("E_B differs from n+1+sum e_i");
  for (const auto& [pr, lvl] : st.basis) {
    auto v = store.vars(pr.first, pr.second);
    const std::size_t sz = store.size(pr.first, pr.second);
    if (!vars_are_prefix(v) || v.size() > n || BigInt(static_cast<long long>(sz)) > st.s_arr[v.size()]) {
      bad.push_back("basis pair " + format_pair(g, pr) + " violates the shape condition");
    }
  }
  return bad;
}

CandidateResult candidate_bound(const Grammar& g, const CandidateParams& p, const CandidateOptions& opt) {
  if (p.s < 1) throw PreconditionError("s must be at least 1");
  const std::size_t n = p.n;
  const BigInt sinc = size_increase(g);
  const auto& store = g.store();
  LevelOracle oracle(g, p, opt);
  PairsCache pairs(g, opt.pairs_budget);

  CandidateResult res;
  CandidateState& st = res.state;
  st.e_arr.assign(n + 1, 0);
  st.s_arr.assign(n + 1, 0);
  st.s_arr[n] = p.s;
  for (std::size_t i = n; i-- > 0;) st.s_arr[i] = 2 * st.s_arr[i + 1] + p.g;
  st.bound = BigInt(static_cast<long long>(n)) + 1;
  st.worklists.assign(n + 1, {});
  {
    std::set<TermPair> above;
    for (std::size_t i = n + 1; i-- > 0;) {
      st.worklists[i] = subtract(pairs.get(i, st.s_arr[i]), above);
      above.insert(st.worklists[i].begin(), st.worklists[i].end());
    }
  }

  for (std::uint64_t iter = 0;; ++iter) {
    if (opt.check_invariants) {
      for (auto& v : check_candidate_invariant(g, p, st)) res.violations.push_back("iter " + std::to_string(iter) + ": " + v);
    }
    TraceEntry entry;
    entry.iter = iter;
    entry.rank = rank(st);
    entry.control = control_value(st, n);
    entry.s_arr = st.s_arr;
    entry.e_arr = st.e_arr;
    entry.bound = st.bound;

    std::optional<std::size_t> chosen_i;
    std::size_t chosen_pos = 0;
    std::uint64_t e = 0;
    for (std::size_t i = n + 1; i-- > 0 && !chosen_i;) {
      const auto& w = st.worklists[i];
      for (std::size_t k = 0; k < w.size(); ++k) {
        auto l = oracle.level_or_omega(w[k], st.bound);
        if (l) {
          chosen_i = i;
          chosen_pos = k;
          e = *l;
          break;
        }
      }
    }
    if (!chosen_i) {
      res.trace.push_back(std::move(entry));
      break;
    }
    const std::size_t i = *chosen_i;
    const TermPair pr = st.worklists[i][chosen_pos];
    entry.pair = pr;
    entry.level = e;
    res.trace.push_back(std::move(entry));

    st.worklists[i].erase(st.worklists[i].begin() + static_cast<std::ptrdiff_t>(chosen_pos));
    st.basis.emplace(pr, e);
    if (BigInt(e) > st.e_arr[i]) {
      st.e_arr[i] = e;
      for (std::size_t j = i; j-- > 0;) {
        st.s_arr[j] = 2 * st.s_arr[j + 1] + p.g + st.e_arr[j + 1] * (sinc + p.g);
        BigInt ej = 0;
        for (const auto& [bp, lvl] : st.basis) {
          if (BigInt(static_cast<long long>(store.size(bp.first, bp.second))) <= st.s_arr[j]) ej = max_of(ej, BigInt(lvl));
        }
        st.e_arr[j] = ej;
        std::set<TermPair> minus;
        for (const auto& [bp, lvl] : st.basis) minus.insert(bp);
        for (std::size_t k = (opt.subtract_above_j ? j : i) + 1; k <= n; ++k) {
          minus.insert(st.worklists[k].begin(), st.worklists[k].end());
        }
        st.worklists[j] = subtract(pairs.get(j, st.s_arr[j]), minus);
      }
      st.bound = BigInt(static_cast<long long>(n)) + 1;
      for (const auto& x : st.e_arr) st.bound += x;
    }
  }
  res.bound = st.bound;
  return res;
}

bool is_full(const Grammar& g, const CandidateParams& p, const CandidateState& st, std::uint64_t budget,
             std::uint64_t pairs_budget) {
  for (std::size_t i = 0; i <= p.n; ++i) {
    for (const auto& pr : pairs_set(g, i, st.s_arr.at(i), pairs_budget)) {
      if (st.basis.count(pr)) continue;
      auto d = finite_state_decide(g, pr.first, pr.second, budget);
      if (d.decision == Decision::Inconclusive) {
        throw BudgetExceeded("exact oracle inconclusive on pair " + format_pair(g, pr));
      }
      if (d.decision == Decision::NotBisimilar) return false;
    }
  }
  return true;
}

bool is_complete(const Grammar& g, const CandidateParams& p, const CandidateState& st, std::uint64_t budget,
                 std::uint64_t pairs_budget) {
  for (std::size_t i = 0; i <= p.n; ++i) {
    for (const auto& pr : pairs_set(g, i, st.s_arr.at(i), pairs_budget)) {
      if (st.basis.count(pr)) continue;
      if (eq_level_effective(g, st.bound, p.c, pr.first, pr.second, budget)) return false;
    }
  }
  return true;
}

BigInt control_factor(const CandidateParams& p, const BigInt& grammar_size) {
  // a grammar without rules has size 0; count it as 1 so the bound stays positive
  const BigInt gs = grammar_size < 1 ? BigInt(1) : grammar_size;
  return pow_checked(2, 2 * BigInt(static_cast<long long>(p.n)) + 6) * p.c * p.c * p.g * p.g * gs * gs * gs;
}

bool control_step_ok(const BigInt& next, const BigInt& cur, const BigInt& factor) {
  return leq_pow2(next, factor * cur * cur * cur * cur);
}

std::string format_pair(const Grammar& g, const TermPair& p) {
  return format_term(g.store(), p.first) + "|" + format_term(g.store(), p.second);
}

std::string format_trace_line(const Grammar& g, const TraceEntry& t) {
  std::ostringstream out;
  out << "iter=" << t.iter << " rank=" << t.rank.to_string() << " pair=";
  if (t.pair) {
    out << format_pair(g, *t.pair) << " level=" << t.level;
  } else {
    out << "- level=-";
  }
  out << " N=" << to_string(t.control);
  return out.str();
}

}  // namespace fogbisim
