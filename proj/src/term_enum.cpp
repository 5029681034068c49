#include "fogbisim/term_enum.hpp"

#include <algorithm>
#include <functional>

#include "fogbisim/error.hpp"

namespace fogbisim {

bool canonical_less(const TermStore& store, TermRef a, TermRef b) {
  auto sa = store.size(a);
  auto sb = store.size(b);
  if (sa != sb) return sa < sb;
  return store.canonical_code(a) < store.canonical_code(b);
}

std::vector<TermRef> enumerate_terms(TermStore& store, std::uint32_t j, std::uint32_t s, std::uint64_t budget) {
  if (s == 0) return {};
  std::vector<Tag> labels;
  for (std::size_t i = 0; i < store.alphabet().size(); ++i) labels.push_back(static_cast<Tag>(i));
  for (std::uint32_t k = 1; k <= j; ++k) labels.push_back(var_tag(k));

  // Graphs are built in BFS order: node i is labelled when reached, and each
  // child slot either points at an existing node or opens the next one.
  TermGraph g;
  g.nodes.push_back({});
  std::vector<TermRef> found;
  std::uint64_t built = 0;

  std::function<void(std::uint32_t, std::size_t)> fill;
  std::function<void(std::uint32_t)> label_node = [&](std::uint32_t i) {
    if (i == g.nodes.size()) {
      if (++built > budget) throw BudgetExceeded("term enumeration budget exceeded");
      TermRef t = store.intern(g);
      if (store.size(t) == g.nodes.size()) found.push_back(t);
      return;
    }
    for (Tag tag : labels) {
      g.nodes[i].tag = tag;
      std::size_t arity = tag < 0 ? 0 : static_cast<std::size_t>(store.alphabet().at(tag).arity);
      g.nodes[i].children.assign(arity, 0);
      fill(i, 0);
    }
    g.nodes[i].children.clear();
  };
  fill = [&](std::uint32_t i, std::size_t slot) {
    if (slot == g.nodes[i].children.size()) {
      label_node(i + 1);
      return;
    }
    const auto allocated = static_cast<std::uint32_t>(g.nodes.size());
    for (std::uint32_t target = 0; target < allocated; ++target) {
      g.nodes[i].children[slot] = target;
      fill(i, slot + 1);
    }
    if (allocated < s) {
      g.nodes[i].children[slot] = allocated;
      g.nodes.push_back({});
      fill(i, slot + 1);
      g.nodes.pop_back();
    }
  };
  label_node(0);

  std::sort(found.begin(), found.end(), [&](TermRef a, TermRef b) { return canonical_less(store, a, b); });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

}  // namespace fogbisim
