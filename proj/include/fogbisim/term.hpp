#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace fogbisim {

/// Index into a TermStore. Two refs of the same store are equal iff they
/// denote the same (possibly infinite) regular term.
using TermRef = std::uint32_t;
using SymbolId = std::int32_t;

struct Symbol {
  std::string name;
  int arity = 0;
};

/// Ordered list of (name, arity) pairs; names are unique.
class RankedAlphabet {
 public:
  /// Adds the symbol or returns the existing id; throws InputError on an
  /// arity conflict or an invalid name.
  SymbolId add(const std::string& name, int arity);
  std::optional<SymbolId> find(const std::string& name) const;
  const Symbol& at(SymbolId id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  int max_arity() const;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

/// Node tag: a symbol id (>= 0) or -k for the variable x_k.
using Tag = std::int32_t;
inline constexpr Tag var_tag(std::uint32_t k) { return -static_cast<Tag>(k); }

/// A finite graph description of a regular term; children are local indices.
struct TermGraph {
  struct Node {
    Tag tag = 0;
    std::vector<std::uint32_t> children;
  };
  std::vector<Node> nodes;
  std::uint32_t root = 0;
};

/// Substitution: variable index -> term; identity outside its support.
using Substitution = std::map<std::uint32_t, TermRef>;

/// Hash-consed store of regular terms with maximal sharing.
///
/// Every stored node is the unique representative of its unfolding: finite
/// nodes are hash-consed on (tag, children), nodes on cycles are keyed by the
/// canonical code of their strongly connected component. Interning is
/// serialised by an internal mutex; node reads need no locking.
class TermStore {
 public:
  TermStore() = default;
  explicit TermStore(RankedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}
  TermStore(const TermStore&) = delete;
  TermStore& operator=(const TermStore&) = delete;
  ~TermStore();

  RankedAlphabet& alphabet() { return alphabet_; }
  const RankedAlphabet& alphabet() const { return alphabet_; }

  TermRef var(std::uint32_t k);
  TermRef app(SymbolId symbol, const std::vector<TermRef>& children);
  TermRef app(const std::string& name, const std::vector<TermRef>& children);

  /// Minimises and stores an arbitrary (possibly cyclic) graph.
  TermRef intern(const TermGraph& graph);

  /// Canonical (BFS from the root) least graph of t.
  TermGraph to_graph(TermRef t) const;
  /// Flattened canonical graph; equal codes iff equal terms.
  std::vector<std::int64_t> canonical_code(TermRef t) const;

  Tag tag(TermRef t) const { return node(t).tag; }
  bool is_var(TermRef t) const { return node(t).tag < 0; }
  std::uint32_t var_index(TermRef t) const { return static_cast<std::uint32_t>(-node(t).tag); }
  SymbolId symbol(TermRef t) const { return node(t).tag; }
  const std::vector<TermRef>& children(TermRef t) const { return node(t).children; }
  std::size_t node_count() const { return count_.load(std::memory_order_acquire); }

  /// Distinct subterms reachable from the given roots, in DFS preorder.
  std::vector<TermRef> reachable(const std::vector<TermRef>& roots) const;

  std::size_t size(TermRef t) const;
  std::size_t size(TermRef a, TermRef b) const;
  std::size_t ntsize(TermRef t) const;
  /// Nullopt for infinite terms.
  std::optional<std::int64_t> height(TermRef t) const;
  bool is_finite(TermRef t) const { return node(t).height >= 0; }
  std::set<std::uint32_t> vars(TermRef t) const;
  std::set<std::uint32_t> vars(TermRef a, TermRef b) const;

  TermRef apply(TermRef t, const Substitution& sigma);

  /// Root-substitution of a non-variable term: x_i -> i-th child.
  Substitution root_substitution(TermRef t) const;

 private:
  struct Node {
    Tag tag = 0;
    std::vector<TermRef> children;
    std::int64_t height = 0;  // -1: infinite
  };
  struct Key {
    Tag tag;
    std::vector<TermRef> children;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct CodeHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const;
  };

  static constexpr std::uint32_t kChunkBits = 14;
  static constexpr std::uint32_t kChunkSize = 1u << kChunkBits;
  static constexpr std::uint32_t kMaxChunks = 1u << 16;

  const Node& node(TermRef t) const {
    return chunks_[t >> kChunkBits].load(std::memory_order_acquire)[t & (kChunkSize - 1)];
  }
  Node& mutable_node(TermRef t) {
    return chunks_[t >> kChunkBits].load(std::memory_order_relaxed)[t & (kChunkSize - 1)];
  }
  TermRef allocate_locked(Tag tag);
  void publish_locked(TermRef upto);
  TermRef app_locked(Tag tag, const std::vector<TermRef>& children);
  TermRef intern_locked(const TermGraph& graph);
  void validate(const TermGraph& graph) const;
  void check_symbol(SymbolId symbol, std::size_t nchildren) const;
  void import(TermRef t, TermGraph& g, std::unordered_map<TermRef, std::uint32_t>& memo,
              const Substitution* sigma) const;

  RankedAlphabet alphabet_;
  mutable std::mutex mutex_;
  std::array<std::atomic<Node*>, kMaxChunks> chunks_{};
  std::atomic<std::size_t> count_{0};
  std::unordered_map<Key, TermRef, KeyHash> finite_table_;
  std::unordered_map<std::vector<std::int64_t>, TermRef, CodeHash> cyclic_table_;
};

/// Independent structural check on two graphs (bisimulation of their nodes);
/// does not consult any store.
bool graphs_equal(const TermGraph& a, const TermGraph& b);

/// Unfolding of t truncated at the given depth, as a string; used as an oracle.
std::string unfold_to_depth(const TermStore& store, TermRef t, int depth);

}  // namespace fogbisim
