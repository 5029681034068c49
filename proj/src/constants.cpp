#include "fogbisim/constants.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace fogbisim {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

class SinkSolver {
 public:
  explicit SinkSolver(const Grammar& g) : g_(g), store_(g.store()) {
    const std::size_t nt = g.nonterminal_count();
    dist_.resize(nt);
    for (std::size_t a = 0; a < nt; ++a) {
      dist_[a].assign(static_cast<std::size_t>(g.arity(static_cast<SymbolId>(a))) + 1, kInf);
    }
    // Relax until stable; each round can only lower finite distances.
    bool changed = true;
    while (changed) {
      changed = false;
      memo_.clear();
      for (const Rule& r : g.rules()) {
        auto& row = dist_[static_cast<std::size_t>(r.head)];
        for (std::size_t i = 1; i < row.size(); ++i) {
          auto d = term_dist(r.rhs, static_cast<int>(i));
          if (d < kInf && d + 1 < row[i]) {
            row[i] = d + 1;
            changed = true;
          }
        }
      }
    }
    memo_.clear();
  }

  SinkWords words() {
    SinkWords out;
    for (std::size_t a = 0; a < dist_.size(); ++a) {
      for (std::size_t i = 1; i < dist_[a].size(); ++i) {
        if (dist_[a][i] >= kInf) continue;
        out[{static_cast<SymbolId>(a), static_cast<int>(i)}] = word(static_cast<SymbolId>(a), static_cast<int>(i));
      }
    }
    return out;
  }

 private:
  std::int64_t term_dist(TermRef e, int i) {
    if (store_.is_var(e)) return store_.var_index(e) == static_cast<std::uint32_t>(i) ? 0 : kInf;
    auto key = std::make_pair(e, i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const auto& row = dist_[static_cast<std::size_t>(store_.symbol(e))];
    const auto& ch = store_.children(e);
    std::int64_t best = kInf;
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (row[j + 1] >= kInf) continue;
      auto rest = term_dist(ch[j], i);
      if (rest < kInf) best = std::min(best, row[j + 1] + rest);
    }
    memo_.emplace(key, best);
    return best;
  }

  std::vector<ActionId> word(SymbolId a, int i) {
    auto key = std::make_pair(a, i);
    auto it = words_.find(key);
    if (it != words_.end()) return it->second;
    const auto target = dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
    const Rule* best = nullptr;
    for (auto idx : g_.rules_of(a)) {
      const Rule& r = g_.rules()[idx];
      if (term_dist(r.rhs, i) + 1 != target) continue;
      if (!best || r.action < best->action) best = &r;  // rule order breaks the remaining ties
    }
    std::vector<ActionId> w{best->action};
    append_term_word(best->rhs, i, w);
    words_.emplace(key, w);
    return w;
  }

  void append_term_word(TermRef e, int i, std::vector<ActionId>& w) {
    if (store_.is_var(e)) return;
    const auto target = term_dist(e, i);
    const auto& row = dist_[static_cast<std::size_t>(store_.symbol(e))];
    const auto& ch = store_.children(e);
    for (std::size_t j = 0; j < ch.size(); ++j) {
      if (row[j + 1] >= kInf) continue;
      auto rest = term_dist(ch[j], i);
      if (rest >= kInf || row[j + 1] + rest != target) continue;
      auto head = word(store_.symbol(e), static_cast<int>(j + 1));
      w.insert(w.end(), head.begin(), head.end());
      append_term_word(ch[j], i, w);
      return;
    }
  }

  struct PairHash {
    std::size_t operator()(const std::pair<TermRef, int>& p) const {
      return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(p.first) << 20) ^ static_cast<std::uint64_t>(p.second));
    }
  };

  const Grammar& g_;
  TermStore& store_;
  std::vector<std::vector<std::int64_t>> dist_;
  std::unordered_map<std::pair<TermRef, int>, std::int64_t, PairHash> memo_;
  std::map<std::pair<SymbolId, int>, std::vector<ActionId>> words_;
};

BigInt max_of(const BigInt& a, const BigInt& b) { return a < b ? b : a; }

}  // namespace

SinkWords sink_words(const Grammar& g) {
  SinkSolver solver(g);
  return solver.words();
}

GrammarConstants compute_constants(const Grammar& gr) {
  GrammarConstants k;
  const TermStore& store = gr.store();
  k.grammar_size = grammar_size(gr);
  k.nonterminals = static_cast<long long>(gr.nonterminal_count());
  k.rules = static_cast<long long>(gr.rules().size());
  k.m = gr.max_arity();

  std::set<TermRef> rhs;
  for (const auto& r : gr.rules()) rhs.insert(r.rhs);
  BigInt max_height = 0;
  k.sinc = 0;
  k.rhs_ntsize_sum = 0;
  for (TermRef e : rhs) {
    max_height = max_of(max_height, BigInt(*store.height(e)));
    BigInt nts = static_cast<long long>(store.ntsize(e));
    k.sinc = max_of(k.sinc, nts);
    k.rhs_ntsize_sum += nts;
  }
  k.hinc = max_height - 1;

  k.sink = sink_words(gr);
  std::size_t longest = 0;
  for (const auto& [key, w] : k.sink) longest = std::max(longest, w.size());
  k.d0 = 1 + BigInt(longest);

  const BigInt base = max_of(k.d0, pow_checked(k.rules, k.d0));
  k.d1 = 2 * k.nonterminals * pow_checked(base, k.m + 2);
  k.d2 = k.d0 + (1 + k.d0 * k.hinc) * (k.d0 - 1);
  k.d3 = base * base;
  k.n = pow_checked(k.m, k.d0);
  const BigInt span = k.d2 + k.d0 - 1;
  k.s = pow_checked(k.m, k.d0 + 1) + (k.m + 2) * k.d0 * k.sinc + span * k.sinc;
  k.g = span * k.sinc;
  k.d4 = k.d1 * pow_checked(1 + k.rhs_ntsize_sum, span < 0 ? BigInt(0) : span);
  k.d5 = span * (1 + (k.d0 - 1) * k.hinc);
  k.c = max_of(k.d3, 2 * k.d4 * k.d5);
  return k;
}

std::vector<std::pair<std::string, BigInt>> constant_fields(const GrammarConstants& k) {
  return {{"size", k.grammar_size}, {"nonterminals", k.nonterminals}, {"rules", k.rules}, {"m", k.m},
          {"hinc", k.hinc},         {"sinc", k.sinc},                 {"d0", k.d0},       {"d1", k.d1},
          {"d2", k.d2},             {"d3", k.d3},                     {"s", k.s},         {"g", k.g},
          {"d4", k.d4},             {"d5", k.d5},                     {"c", k.c},         {"n", k.n}};
}

std::string complexity_class_grammar(const BigInt& n) { return "F_" + to_string(n + 4); }

std::string complexity_class_pds(const BigInt& q) { return "F_" + to_string(q + 4); }

std::string complexity_class_unrestricted() { return "ACKERMANN = F_\xCF\x89"; }

}  // namespace fogbisim
