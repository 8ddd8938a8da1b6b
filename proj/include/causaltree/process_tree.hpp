#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace causaltree {

/// Spanning tree over processes (directed, rooted arborescence) or over
/// variables/processes (undirected). Undirected trees are stored rooted at
/// root() for traversal; the root carries no meaning for them.
///
/// A topological order of a directed tree is a valid permutation π for the
/// chain-rule factorization with each node conditioned on its parent.
class ProcessTree {
 public:
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
  using Edge = std::pair<std::size_t, std::size_t>;  // (parent, child)

  ProcessTree() = default;
  /// Throws InvalidTree if parent links do not form a spanning tree rooted at root.
  ProcessTree(std::size_t node_count, std::size_t root, std::vector<std::size_t> parent,
              bool directed, double score = 0.0);

  /// Builds from an edge list. Directed edges are (parent, child) and root is
  /// required; undirected trees are rooted at `root` or node 0.
  static ProcessTree from_edges(std::size_t node_count, const std::vector<Edge>& edges,
                                bool directed, std::optional<std::size_t> root,
                                double score = 0.0);

  std::size_t node_count() const { return parent_.size(); }
  std::size_t root() const { return root_; }
  bool directed() const { return directed_; }
  double score() const { return score_; }
  void set_score(double s) { score_ = s; }

  std::size_t parent(std::size_t v) const { return parent_[v]; }
  const std::vector<std::size_t>& parents() const { return parent_; }

  /// (parent, child) pairs ordered by child.
  std::vector<Edge> edges() const;
  /// (min, max) pairs, sorted.
  std::vector<Edge> undirected_edges() const;
  /// Breadth-first order from the root, children visited in index order.
  std::vector<std::size_t> topological_order() const;

  /// Sum of weights[parent][child] over edges.
  template <typename WeightFn>
  double sum_weights(WeightFn&& w) const {
    double s = 0.0;
    for (std::size_t v = 0; v < parent_.size(); ++v)
      if (parent_[v] != kNoParent) s += w(parent_[v], v);
    return s;
  }

  /// Same edge set and orientation (undirected: same skeleton).
  bool same_structure(const ProcessTree& other) const;

 private:
  std::size_t root_ = 0;
  std::vector<std::size_t> parent_;
  bool directed_ = true;
  double score_ = 0.0;
};

}  // namespace causaltree
