#pragma once

// Maximum-weight spanning structures over a weight matrix:
//  - undirected maximum spanning tree (Kruskal) for mutual-information weights,
//  - maximum-weight arborescence (Chu-Liu/Edmonds) for directed-information
//    weights, run once per root and maximized over roots,
//  - exhaustive enumeration of rooted labeled trees as a test oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "causaltree/info.hpp"
#include "causaltree/linalg.hpp"
#include "causaltree/process_tree.hpp"

namespace causaltree::trees {

// Weights below -kNegativeTolerance are rejected; smaller negatives count as 0.
inline constexpr double kNegativeTolerance = 1e-9;

/// Maximum-weight undirected spanning tree over the upper triangle of w.
/// Ties are broken by the lexicographically smaller edge (min(a,b), max(a,b)).
/// The result is rooted at node 0.
ProcessTree kruskal_max_tree(const linalg::Matrix& w);
/// Requires a symmetric kind (MI or MIvar); throws KindMismatch otherwise.
ProcessTree kruskal_max_tree(const info::WeightMatrix& w);

/// Maximum-weight spanning arborescence rooted at `root`, maximizing
/// Σ w[parent][child]. Equal-weight candidate in-edges are resolved in favour
/// of the smaller source index, then the smaller target index.
ProcessTree edmonds_max_arborescence(const linalg::Matrix& w, std::size_t root);
ProcessTree edmonds_max_arborescence(const info::WeightMatrix& w, std::size_t root);

/// Best arborescence over all roots; equal scores go to the smallest root.
ProcessTree best_causal_tree(const linalg::Matrix& w);
/// Requires DI weights; throws KindMismatch otherwise.
ProcessTree best_causal_tree(const info::WeightMatrix& w);

inline constexpr std::size_t kMaxEnumerationNodes = 7;

/// Calls fn once for each of the m^(m-1) rooted labeled trees on m nodes
/// (roots ascending). Throws TooLarge for m > kMaxEnumerationNodes.
void for_each_causal_tree(std::size_t m, const std::function<void(const ProcessTree&)>& fn);
std::vector<ProcessTree> enumerate_causal_trees(std::size_t m);

enum class DependencyKind {
  kFull,        // every pair of variables
  kChowLiuVar,  // tree over the mn variables
  kCausal,      // causal dependence tree: complete within each process plus
                // each conditioned variable to the parent's current and past
};

std::uint64_t count_dependencies(std::size_t m, std::size_t n, DependencyKind kind);

}  // namespace causaltree::trees
