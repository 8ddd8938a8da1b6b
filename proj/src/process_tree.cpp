#include "causaltree/process_tree.hpp"

#include <algorithm>
#include <sstream>

#include "causaltree/error.hpp"

namespace causaltree {

ProcessTree::ProcessTree(std::size_t node_count, std::size_t root,
                         std::vector<std::size_t> parent, bool directed, double score)
    : root_(root), parent_(std::move(parent)), directed_(directed), score_(score) {
  if (node_count == 0) throw InvalidTree("tree needs at least one node");
  if (parent_.size() != node_count) throw InvalidTree("parent array size differs from node count");
  if (root_ >= node_count) throw InvalidTree("root out of range");
  if (parent_[root_] != kNoParent) throw InvalidTree("root must not have a parent");
  for (std::size_t v = 0; v < node_count; ++v) {
    if (v == root_) continue;
    if (parent_[v] == kNoParent || parent_[v] >= node_count || parent_[v] == v) {
      std::ostringstream os;
      os << "node " << v << " has no valid parent";
      throw InvalidTree(os.str());
    }
  }
  // Every node must reach the root by following parent links.
  std::vector<int> state(node_count, 0);  // 0 unknown, 1 on stack, 2 reaches root
  state[root_] = 2;
  for (std::size_t v = 0; v < node_count; ++v) {
    std::vector<std::size_t> path;
    std::size_t u = v;
    while (state[u] == 0) {
      state[u] = 1;
      path.push_back(u);
      u = parent_[u];
    }
    if (state[u] == 1) throw InvalidTree("parent links contain a cycle");
    for (std::size_t w : path) state[w] = 2;
  }
}

ProcessTree ProcessTree::from_edges(std::size_t node_count, const std::vector<Edge>& edges,
                                    bool directed, std::optional<std::size_t> root,
                                    double score) {
  if (node_count == 0) throw InvalidTree("tree needs at least one node");
  if (edges.size() + 1 != node_count) {
    std::ostringstream os;
    os << "a spanning tree on " << node_count << " nodes needs " << node_count - 1
       << " edges, got " << edges.size();
    throw InvalidTree(os.str());
  }
  for (const auto& [a, b] : edges)
    if (a >= node_count || b >= node_count || a == b) throw InvalidTree("edge endpoint out of range");
  if (directed) {
    if (!root) throw InvalidTree("directed tree requires a root");
    std::vector<std::size_t> parent(node_count, kNoParent);
    for (const auto& [p, c] : edges) {
      if (parent[c] != kNoParent) throw InvalidTree("node has in-degree greater than one");
      parent[c] = p;
    }
    return ProcessTree(node_count, *root, std::move(parent), true, score);
  }
  const std::size_t r = root.value_or(0);
  if (r >= node_count) throw InvalidTree("root out of range");
  std::vector<std::vector<std::size_t>> adj(node_count);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::size_t> parent(node_count, kNoParent);
  std::vector<bool> seen(node_count, false);
  std::vector<std::size_t> queue{r};
  seen[r] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    std::sort(adj[u].begin(), adj[u].end());
    for (std::size_t w : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = u;
      queue.push_back(w);
    }
  }
  if (queue.size() != node_count) throw InvalidTree("undirected edges do not connect all nodes");
  return ProcessTree(node_count, r, std::move(parent), false, score);
}

std::vector<ProcessTree::Edge> ProcessTree::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < parent_.size(); ++v)
    if (parent_[v] != kNoParent) out.emplace_back(parent_[v], v);
  return out;
}

std::vector<ProcessTree::Edge> ProcessTree::undirected_edges() const {
  std::vector<Edge> out;
  for (const auto& [p, c] : edges()) out.emplace_back(std::min(p, c), std::max(p, c));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> ProcessTree::topological_order() const {
  const std::size_t n = parent_.size();
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t v = 0; v < n; ++v)
    if (parent_[v] != kNoParent) children[parent_[v]].push_back(v);
  std::vector<std::size_t> order{root_};
  order.reserve(n);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::size_t c : children[order[head]]) order.push_back(c);
  return order;
}

bool ProcessTree::same_structure(const ProcessTree& other) const {
  if (node_count() != other.node_count() || directed_ != other.directed_) return false;
  if (directed_) return root_ == other.root_ && parent_ == other.parent_;
  return undirected_edges() == other.undirected_edges();
}

}  // namespace causaltree
