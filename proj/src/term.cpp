#include "fogbisim/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "fogbisim/error.hpp"

namespace fogbisim {

namespace {

bool is_var_spelling(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == '[') {
    if (s.size() < 3 || s.back() != ']') return false;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      char c = s[i];
      if (c == '[' || c == ']' || std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
  }
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  }
  if (s == "rec" || s == "ref" || s == "let") return false;
  return !is_var_spelling(s);
}

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

SymbolId RankedAlphabet::add(const std::string& name, int arity) {
  if (!is_valid_name(name)) throw InputError("invalid symbol name '" + name + "'");
  if (arity < 0) throw InputError("negative arity for '" + name + "'");
  auto it = index_.find(name);
  if (it != index_.end()) {
    if (symbols_[static_cast<std::size_t>(it->second)].arity != arity) {
      throw InputError("symbol '" + name + "' redeclared with arity " + std::to_string(arity));
    }
    return it->second;
  }
  auto id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back({name, arity});
  index_.emplace(name, id);
  return id;
}

std::optional<SymbolId> RankedAlphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int RankedAlphabet::max_arity() const {
  int m = 0;
  for (const auto& s : symbols_) m = std::max(m, s.arity);
  return m;
}

std::size_t TermStore::KeyHash::operator()(const Key& k) const {
  std::size_t seed = std::hash<std::int32_t>{}(k.tag);
  for (TermRef c : k.children) hash_mix(seed, c);
  return seed;
}

std::size_t TermStore::CodeHash::operator()(const std::vector<std::int64_t>& v) const {
  std::size_t seed = v.size();
  for (auto x : v) hash_mix(seed, std::hash<std::int64_t>{}(x));
  return seed;
}

TermStore::~TermStore() {
  for (auto& c : chunks_) delete[] c.load(std::memory_order_relaxed);
}

TermRef TermStore::allocate_locked(Tag tag) {
  const std::size_t id = count_.load(std::memory_order_relaxed);
  const std::size_t chunk = id >> kChunkBits;
  if (chunk >= kMaxChunks) throw BudgetExceeded("term store capacity exhausted");
  if (chunks_[chunk].load(std::memory_order_relaxed) == nullptr) {
    chunks_[chunk].store(new Node[kChunkSize], std::memory_order_release);
  }
  auto ref = static_cast<TermRef>(id);
  mutable_node(ref).tag = tag;
  return ref;
}

void TermStore::publish_locked(TermRef upto) {
  count_.store(static_cast<std::size_t>(upto) + 1, std::memory_order_release);
}

void TermStore::check_symbol(SymbolId symbol, std::size_t nchildren) const {
  if (symbol < 0 || static_cast<std::size_t>(symbol) >= alphabet_.size()) {
    throw InputError("unknown symbol id " + std::to_string(symbol));
  }
  const auto& s = alphabet_.at(symbol);
  if (static_cast<std::size_t>(s.arity) != nchildren) {
    throw InputError("symbol '" + s.name + "' has arity " + std::to_string(s.arity) + " but got " +
                     std::to_string(nchildren) + " argument(s)");
  }
}

TermRef TermStore::var(std::uint32_t k) {
  if (k == 0) throw InputError("variable indices start at 1");
  std::lock_guard<std::mutex> lock(mutex_);
  return app_locked(var_tag(k), {});
}

TermRef TermStore::app(SymbolId symbol, const std::vector<TermRef>& children) {
  check_symbol(symbol, children.size());
  const std::size_t n = node_count();
  for (TermRef c : children) {
    if (c >= n) throw InputError("dangling term reference");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  return app_locked(symbol, children);
}

TermRef TermStore::app(const std::string& name, const std::vector<TermRef>& children) {
  auto id = alphabet_.find(name);
  if (!id) throw InputError("unknown symbol '" + name + "'");
  return app(*id, children);
}

TermRef TermStore::app_locked(Tag tag, const std::vector<TermRef>& children) {
  Key key{tag, children};
  auto it = finite_table_.find(key);
  if (it != finite_table_.end()) return it->second;
  std::int64_t h = 0;
  for (TermRef c : children) {
    const auto ch = node(c).height;
    if (ch < 0) {
      h = -1;
      break;
    }
    h = std::max(h, ch + 1);
  }
  TermRef ref = allocate_locked(tag);
  Node& nd = mutable_node(ref);
  nd.children = children;
  nd.height = h;
  publish_locked(ref);
  finite_table_.emplace(std::move(key), ref);
  return ref;
}

void TermStore::validate(const TermGraph& g) const {
  if (g.nodes.empty()) throw InputError("empty term graph");
  if (g.root >= g.nodes.size()) throw InputError("term graph root out of range");
  for (const auto& nd : g.nodes) {
    if (nd.tag < 0) {
      if (!nd.children.empty()) throw InputError("variable node with children");
    } else {
      check_symbol(nd.tag, nd.children.size());
    }
    for (auto c : nd.children) {
      if (c >= g.nodes.size()) throw InputError("term graph edge out of range");
    }
  }
}

TermRef TermStore::intern(const TermGraph& graph) {
  validate(graph);
  std::lock_guard<std::mutex> lock(mutex_);
  return intern_locked(graph);
}

TermRef TermStore::intern_locked(const TermGraph& g) {
  // Restrict to the part reachable from the root.
  std::vector<std::int64_t> local(g.nodes.size(), -1);
  std::vector<std::uint32_t> order;
  {
    std::vector<std::uint32_t> stack{g.root};
    local[g.root] = 0;
    order.push_back(g.root);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto c : g.nodes[v].children) {
        if (local[c] < 0) {
          local[c] = static_cast<std::int64_t>(order.size());
          order.push_back(c);
          stack.push_back(c);
        }
      }
    }
  }
  const std::size_t n = order.size();
  std::vector<Tag> tags(n);
  std::vector<std::vector<std::uint32_t>> kids(n);
  for (std::size_t i = 0; i < n; ++i) {
    tags[i] = g.nodes[order[i]].tag;
    for (auto c : g.nodes[order[i]].children) kids[i].push_back(static_cast<std::uint32_t>(local[c]));
  }

  // Moore refinement to the coarsest stable partition.
  std::vector<std::uint32_t> block(n);
  std::size_t nblocks = 0;
  {
    std::map<Tag, std::uint32_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
      auto [it, fresh] = ids.emplace(tags[i], static_cast<std::uint32_t>(ids.size()));
      block[i] = it->second;
    }
    nblocks = ids.size();
  }
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> sig;
      sig.reserve(kids[i].size() + 1);
      sig.push_back(block[i]);
      for (auto c : kids[i]) sig.push_back(block[c]);
      auto [it, fresh] = ids.emplace(std::move(sig), static_cast<std::uint32_t>(ids.size()));
      next[i] = it->second;
    }
    block.swap(next);
    if (ids.size() == nblocks) break;
    nblocks = ids.size();
  }

  // Quotient graph.
  std::vector<Tag> qtag(nblocks);
  std::vector<std::vector<std::uint32_t>> qkids(nblocks);
  std::vector<bool> seen(nblocks, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto b = block[i];
    if (seen[b]) continue;
    seen[b] = true;
    qtag[b] = tags[i];
    for (auto c : kids[i]) qkids[b].push_back(block[c]);
  }

  // Tarjan, iterative; components come out children-first.
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> index(nblocks, kUnset), low(nblocks, 0), comp(nblocks, kUnset);
  std::vector<bool> on_stack(nblocks, false);
  std::vector<std::uint32_t> tstack;
  std::vector<std::vector<std::uint32_t>> components;
  std::uint32_t counter = 0;
  for (std::uint32_t s = 0; s < nblocks; ++s) {
    if (index[s] != kUnset) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> call{{s, 0}};
    index[s] = low[s] = counter++;
    tstack.push_back(s);
    on_stack[s] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < qkids[v].size()) {
        auto w = qkids[v][pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          tstack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> scc;
        std::uint32_t w;
        do {
          w = tstack.back();
          tstack.pop_back();
          on_stack[w] = false;
          comp[w] = static_cast<std::uint32_t>(components.size());
          scc.push_back(w);
        } while (w != v);
        components.push_back(std::move(scc));
      }
      auto done = v;
      call.pop_back();
      if (!call.empty()) {
        auto parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  std::vector<TermRef> ref_of(nblocks, 0);
  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    const auto& scc = components[ci];
    const std::uint32_t v0 = scc[0];
    bool cyclic = scc.size() > 1 ||
                  std::find(qkids[v0].begin(), qkids[v0].end(), v0) != qkids[v0].end();
    if (!cyclic) {
      std::vector<TermRef> ch;
      for (auto c : qkids[v0]) ch.push_back(ref_of[c]);
      ref_of[v0] = app_locked(qtag[v0], ch);
      continue;
    }
    // Canonical code of each member: BFS inside the component, outside
    // children encoded by their (canonical) store ref.
    auto code_of = [&](std::uint32_t start) {
      std::vector<std::int64_t> code;
      std::unordered_map<std::uint32_t, std::int64_t> num{{start, 0}};
      std::vector<std::uint32_t> queue{start};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        auto v = queue[qi];
        code.push_back(qtag[v]);
        code.push_back(static_cast<std::int64_t>(qkids[v].size()));
        for (auto c : qkids[v]) {
          if (comp[c] != ci) {
            code.push_back(-1 - static_cast<std::int64_t>(ref_of[c]));
            continue;
          }
          auto it = num.find(c);
          if (it == num.end()) {
            it = num.emplace(c, static_cast<std::int64_t>(queue.size())).first;
            queue.push_back(c);
          }
          code.push_back(it->second);
        }
      }
      return code;
    };
    std::vector<std::vector<std::int64_t>> codes;
    std::size_t found = 0;
    for (auto v : scc) {
      codes.push_back(code_of(v));
      auto it = cyclic_table_.find(codes.back());
      if (it != cyclic_table_.end()) {
        ref_of[v] = it->second;
        ++found;
      }
    }
    if (found == scc.size()) continue;
    if (found != 0) throw std::logic_error("term store: partially stored cyclic component");
    for (auto v : scc) {
      ref_of[v] = allocate_locked(qtag[v]);
      publish_locked(ref_of[v]);
    }
    for (std::size_t k = 0; k < scc.size(); ++k) {
      auto v = scc[k];
      Node& nd = mutable_node(ref_of[v]);
      nd.height = -1;
      for (auto c : qkids[v]) nd.children.push_back(ref_of[c]);
      cyclic_table_.emplace(codes[k], ref_of[v]);
      finite_table_.emplace(Key{nd.tag, nd.children}, ref_of[v]);
    }
  }
  return ref_of[block[0]];
}

TermGraph TermStore::to_graph(TermRef t) const {
  TermGraph g;
  std::unordered_map<TermRef, std::uint32_t> num{{t, 0}};
  std::vector<TermRef> queue{t};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const Node& nd = node(queue[qi]);
    TermGraph::Node out;
    out.tag = nd.tag;
    for (TermRef c : nd.children) {
      auto it = num.find(c);
      if (it == num.end()) {
        it = num.emplace(c, static_cast<std::uint32_t>(queue.size())).first;
        queue.push_back(c);
      }
      out.children.push_back(it->second);
    }
    g.nodes.push_back(std::move(out));
  }
  g.root = 0;
  return g;
}

std::vector<std::int64_t> TermStore::canonical_code(TermRef t) const {
  TermGraph g = to_graph(t);
  std::vector<std::int64_t> code{static_cast<std::int64_t>(g.nodes.size())};
  for (const auto& nd : g.nodes) {
    code.push_back(nd.tag);
    for (auto c : nd.children) code.push_back(c);
  }
  return code;
}

std::vector<TermRef> TermStore::reachable(const std::vector<TermRef>& roots) const {
  std::vector<TermRef> out;
  std::unordered_set<TermRef> seen;
  std::vector<TermRef> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.push_back(*it);
  while (!stack.empty()) {
    TermRef v = stack.back();
    stack.pop_back();
    if (!seen.insert(v).second) continue;
    out.push_back(v);
    const auto& ch = node(v).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      if (!seen.count(*it)) stack.push_back(*it);
    }
  }
  return out;
}

std::size_t TermStore::size(TermRef t) const { return reachable({t}).size(); }

std::size_t TermStore::size(TermRef a, TermRef b) const { return reachable({a, b}).size(); }

std::size_t TermStore::ntsize(TermRef t) const {
  std::size_t k = 0;
  for (TermRef v : reachable({t})) k += node(v).tag >= 0 ? 1 : 0;
  return k;
}

std::optional<std::int64_t> TermStore::height(TermRef t) const {
  auto h = node(t).height;
  if (h < 0) return std::nullopt;
  return h;
}

std::set<std::uint32_t> TermStore::vars(TermRef t) const {
  std::set<std::uint32_t> out;
  for (TermRef v : reachable({t})) {
    if (node(v).tag < 0) out.insert(static_cast<std::uint32_t>(-node(v).tag));
  }
  return out;
}

std::set<std::uint32_t> TermStore::vars(TermRef a, TermRef b) const {
  auto out = vars(a);
  auto more = vars(b);
  out.insert(more.begin(), more.end());
  return out;
}

Substitution TermStore::root_substitution(TermRef t) const {
  const Node& nd = node(t);
  if (nd.tag < 0) throw PreconditionError("root-substitution of a variable");
  Substitution sigma;
  for (std::size_t i = 0; i < nd.children.size(); ++i) {
    const Node& c = node(nd.children[i]);
    if (c.tag == var_tag(static_cast<std::uint32_t>(i + 1))) continue;
    sigma[static_cast<std::uint32_t>(i + 1)] = nd.children[i];
  }
  return sigma;
}

void TermStore::import(TermRef t, TermGraph& g, std::unordered_map<TermRef, std::uint32_t>& memo,
                       const Substitution* sigma) const {
  // Two namespaces: nodes of t (variables rewritten by sigma) and nodes of
  // substituted terms (kept verbatim).
  std::unordered_map<TermRef, std::uint32_t> plain;
  std::function<std::uint32_t(TermRef, bool)> visit = [&](TermRef r, bool substituting) -> std::uint32_t {
    auto& table = substituting ? memo : plain;
    auto it = table.find(r);
    if (it != table.end()) return it->second;
    const Node& nd = node(r);
    if (substituting && sigma && nd.tag < 0) {
      auto s = sigma->find(static_cast<std::uint32_t>(-nd.tag));
      if (s != sigma->end()) {
        auto idx = visit(s->second, false);
        table.emplace(r, idx);
        return idx;
      }
    }
    auto idx = static_cast<std::uint32_t>(g.nodes.size());
    table.emplace(r, idx);
    g.nodes.push_back({nd.tag, {}});
    std::vector<std::uint32_t> ch;
    for (TermRef c : nd.children) ch.push_back(visit(c, substituting));
    g.nodes[idx].children = std::move(ch);
    return idx;
  };
  g.root = visit(t, true);
}

TermRef TermStore::apply(TermRef t, const Substitution& sigma) {
  if (sigma.empty()) return t;
  if (is_finite(t)) {
    std::unordered_map<TermRef, TermRef> memo;
    std::function<TermRef(TermRef)> go = [&](TermRef r) -> TermRef {
      auto it = memo.find(r);
      if (it != memo.end()) return it->second;
      const Node& nd = node(r);
      TermRef out;
      if (nd.tag < 0) {
        auto s = sigma.find(static_cast<std::uint32_t>(-nd.tag));
        out = s == sigma.end() ? r : s->second;
      } else if (nd.children.empty()) {
        out = r;
      } else {
        std::vector<TermRef> ch;
        ch.reserve(nd.children.size());
        for (TermRef c : nd.children) ch.push_back(go(c));
        out = ch == nd.children ? r : app(nd.tag, ch);
      }
      memo.emplace(r, out);
      return out;
    };
    return go(t);
  }
  TermGraph g;
  std::unordered_map<TermRef, std::uint32_t> memo;
  import(t, g, memo, &sigma);
  return intern(g);
}

bool graphs_equal(const TermGraph& a, const TermGraph& b) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{a.root, b.root}};
  while (!work.empty()) {
    auto [u, v] = work.back();
    work.pop_back();
    if (!seen.insert({u, v}).second) continue;
    const auto& nu = a.nodes.at(u);
    const auto& nv = b.nodes.at(v);
    if (nu.tag != nv.tag || nu.children.size() != nv.children.size()) return false;
    for (std::size_t i = 0; i < nu.children.size(); ++i) work.emplace_back(nu.children[i], nv.children[i]);
  }
  return true;
}

std::string unfold_to_depth(const TermStore& store, TermRef t, int depth) {
  std::ostringstream out;
  std::function<void(TermRef, int)> go = [&](TermRef r, int d) {
    if (d == 0) {
      out << '_';
      return;
    }
    if (store.is_var(r)) {
      out << 'x' << store.var_index(r);
      return;
    }
    out << store.alphabet().at(store.symbol(r)).name;
    const auto& ch = store.children(r);
    if (ch.empty()) return;
    out << '(';
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (i) out << ',';
      go(ch[i], d - 1);
    }
    out << ')';
  };
  go(t, depth);
  return out.str();
}

}  // namespace fogbisim
