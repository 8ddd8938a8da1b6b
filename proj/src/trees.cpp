#include "causaltree/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "causaltree/error.hpp"

namespace causaltree::trees {

namespace {

// Copy of w with the diagonal zeroed and tiny negatives clamped.
linalg::Matrix checked_weights(const linalg::Matrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0) throw DataError("weight matrix must be square and non-empty");
  linalg::Matrix out = w;
  for (std::size_t a = 0; a < w.rows(); ++a)
    for (std::size_t b = 0; b < w.cols(); ++b) {
      double& v = out(a, b);
      if (a == b) {
        v = 0.0;
        continue;
      }
      if (!std::isfinite(v)) throw DataError("weight matrix has a non-finite entry");
      if (v < -kNegativeTolerance) {
        std::ostringstream os;
        os << "negative weight " << v << " at (" << a << "," << b << ")";
        throw DataError(os.str());
      }
      if (v < 0.0) v = 0.0;
    }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ProcessTree kruskal_max_tree(const linalg::Matrix& raw) {
  const linalg::Matrix w = checked_weights(raw);
  const std::size_t n = w.rows();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(w(a, b) - w(b, a)) > 1e-9) throw KindMismatch("Kruskal needs a symmetric weight matrix");

  struct Candidate {
    double weight;
    std::size_t a, b;
  };
  std::vector<Candidate> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.push_back({w(a, b), a, b});
  std::sort(edges.begin(), edges.end(), [](const Candidate& x, const Candidate& y) {
    if (x.weight != y.weight) return x.weight > y.weight;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  DisjointSets sets(n);
  std::vector<ProcessTree::Edge> chosen;
  double score = 0.0;
  for (const Candidate& e : edges) {
    if (chosen.size() + 1 == n) break;
    if (sets.unite(e.a, e.b)) {
      chosen.emplace_back(e.a, e.b);
      score += e.weight;
    }
  }
  return ProcessTree::from_edges(n, chosen, false, 0, score);
}

ProcessTree kruskal_max_tree(const info::WeightMatrix& w) {
  if (!info::is_symmetric_kind(w.kind))
    throw KindMismatch("Chow-Liu tree needs MI or MIvar weights, got " +
                       std::string(info::kind_name(w.kind)));
  return kruskal_max_tree(w.weights);
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// A candidate edge between two current super-nodes, remembered by the
// original edge that realizes it and its (possibly reduced) weight.
struct Candidate {
  double weight = 0.0;
  std::size_t src = kNone;
  std::size_t dst = kNone;

  bool valid() const { return src != kNone; }
  bool beats(const Candidate& o) const {
    if (!o.valid()) return valid();
    if (!valid()) return false;
    if (weight != o.weight) return weight > o.weight;
    if (src != o.src) return src < o.src;
    return dst < o.dst;
  }
};

// Dense Chu-Liu/Edmonds. Super-nodes live in "slots" (one per original node);
// contracting a cycle merges its slots into the smallest one, so the candidate
// matrix never grows. Each contraction costs O(|cycle|·n) and the slots shrink
// by |cycle|−1, which bounds the total work by O(n²) for one root.
class Arborescence {
 public:
  Arborescence(const linalg::Matrix& w, std::size_t root)
      : n_(w.rows()),
        root_(root),
        cand_(n_ * n_),
        active_(n_, true),
        slot_id_(n_),
        in_(n_),
        in_slot_(n_, kNone),
        forest_parent_(2 * n_, kNone),
        cycle_in_(2 * n_) {
    for (std::size_t s = 0; s < n_; ++s) {
      slot_id_[s] = s;
      for (std::size_t t = 0; t < n_; ++t)
        if (s != t && t != root_) at(s, t) = {w(s, t), s, t};
    }
    next_id_ = n_;
  }

  std::vector<std::size_t> solve() {
    for (std::size_t t = 0; t < n_; ++t)
      if (t != root_) pick_in(t);
    for (;;) {
      const std::vector<std::size_t> cycle = find_cycle();
      if (cycle.empty()) break;
      contract(cycle);
    }
    return expand();
  }

 private:
  Candidate& at(std::size_t s, std::size_t t) { return cand_[s * n_ + t]; }

  void pick_in(std::size_t t) {
    Candidate best;
    std::size_t best_slot = kNone;
    for (std::size_t s = 0; s < n_; ++s) {
      if (!active_[s] || s == t) continue;
      if (at(s, t).beats(best)) {
        best = at(s, t);
        best_slot = s;
      }
    }
    in_[t] = best;
    in_slot_[t] = best_slot;
  }

  // Some cycle of the chosen in-edges among active slots, or empty.
  std::vector<std::size_t> find_cycle() const {
    std::vector<int> mark(n_, 0);  // 0 unvisited, 1 on current walk, 2 finished
    mark[root_] = 2;
    for (std::size_t start = 0; start < n_; ++start) {
      if (!active_[start] || mark[start] != 0) continue;
      std::vector<std::size_t> walk;
      std::size_t u = start;
      while (mark[u] == 0) {
        mark[u] = 1;
        walk.push_back(u);
        u = in_slot_[u];
      }
      if (mark[u] == 1) {
        auto first = std::find(walk.begin(), walk.end(), u);
        return {first, walk.end()};
      }
      for (std::size_t v : walk) mark[v] = 2;
    }
    return {};
  }

  void contract(const std::vector<std::size_t>& cycle) {
    const std::size_t rep = *std::min_element(cycle.begin(), cycle.end());
    const std::size_t id = next_id_++;
    std::vector<bool> in_cycle(n_, false);
    for (std::size_t y : cycle) {
      in_cycle[y] = true;
      forest_parent_[slot_id_[y]] = id;
      cycle_in_[slot_id_[y]] = in_[y];
    }
    for (std::size_t x = 0; x < n_; ++x) {
      if (!active_[x] || in_cycle[x]) continue;
      Candidate into, out;
      for (std::size_t y : cycle) {
        Candidate e = at(x, y);
        if (e.valid()) {
          e.weight -= in_[y].weight;
          if (e.beats(into)) into = e;
        }
        if (at(y, x).beats(out)) out = at(y, x);
      }
      at(x, rep) = into;
      at(rep, x) = out;
      if (x != root_ && in_cycle[in_slot_[x]]) in_slot_[x] = rep;
    }
    for (std::size_t y : cycle)
      if (y != rep) active_[y] = false;
    slot_id_[rep] = id;
    pick_in(rep);
  }

  std::vector<std::size_t> expand() {
    std::vector<Candidate> final_in(next_id_);
    for (std::size_t s = 0; s < n_; ++s)
      if (active_[s] && s != root_) final_in[slot_id_[s]] = in_[s];
    // Unfold contractions newest first: the member containing the entry
    // point takes the external edge, the rest keep their cycle edges.
    for (std::size_t id = next_id_; id-- > n_;) {
      const Candidate entry = final_in[id];
      std::size_t member = entry.dst;
      while (forest_parent_[member] != id) member = forest_parent_[member];
      for (std::size_t v = 0; v < next_id_; ++v)
        if (forest_parent_[v] == id) final_in[v] = (v == member) ? entry : cycle_in_[v];
    }
    std::vector<std::size_t> parent(n_, ProcessTree::kNoParent);
    for (std::size_t v = 0; v < n_; ++v)
      if (v != root_) parent[v] = final_in[v].src;
    return parent;
  }

  std::size_t n_;
  std::size_t root_;
  std::vector<Candidate> cand_;
  std::vector<bool> active_;
  std::vector<std::size_t> slot_id_;
  std::vector<Candidate> in_;
  std::vector<std::size_t> in_slot_;
  std::vector<std::size_t> forest_parent_;
  std::vector<Candidate> cycle_in_;
  std::size_t next_id_ = 0;
};

}  // namespace

ProcessTree edmonds_max_arborescence(const linalg::Matrix& raw, std::size_t root) {
  const linalg::Matrix w = checked_weights(raw);
  const std::size_t n = w.rows();
  if (root >= n) throw IndexOutOfRange("arborescence root out of range");
  std::vector<std::size_t> parent = Arborescence(w, root).solve();
  ProcessTree tree(n, root, std::move(parent), true);
  tree.set_score(tree.sum_weights([&](std::size_t p, std::size_t c) { return w(p, c); }));
  return tree;
}

ProcessTree edmonds_max_arborescence(const info::WeightMatrix& w, std::size_t root) {
  return edmonds_max_arborescence(w.weights, root);
}

ProcessTree best_causal_tree(const linalg::Matrix& raw) {
  const linalg::Matrix w = checked_weights(raw);
  ProcessTree best = edmonds_max_arborescence(w, 0);
  for (std::size_t r = 1; r < w.rows(); ++r) {
    ProcessTree t = edmonds_max_arborescence(w, r);
    if (t.score() > best.score() + 1e-12 * std::max(1.0, std::abs(best.score())))
      best = std::move(t);
  }
  return best;
}

ProcessTree best_causal_tree(const info::WeightMatrix& w) {
  if (w.kind != info::WeightKind::kDI)
    throw KindMismatch("causal tree needs DI weights, got " + std::string(info::kind_name(w.kind)));
  return best_causal_tree(w.weights);
}

void for_each_causal_tree(std::size_t m, const std::function<void(const ProcessTree&)>& fn) {
  if (m == 0) throw DataError("tree enumeration needs at least one node");
  if (m > kMaxEnumerationNodes) {
    std::ostringstream os;
    os << "refusing to enumerate " << m << "^" << m - 1 << " trees (limit m <= "
       << kMaxEnumerationNodes << ")";
    throw TooLarge(os.str());
  }
  std::vector<std::size_t> parent(m);
  std::vector<int> mark(m);
  for (std::size_t root = 0; root < m; ++root) {
    // Odometer over parent choices; each non-root picks any other node.
    std::vector<std::size_t> digit(m, 0);
    for (;;) {
      for (std::size_t v = 0; v < m; ++v) {
        if (v == root) {
          parent[v] = ProcessTree::kNoParent;
          continue;
        }
        parent[v] = digit[v] < v ? digit[v] : digit[v] + 1;
      }
      // Acyclic iff every node reaches the root.
      std::fill(mark.begin(), mark.end(), 0);
      mark[root] = 2;
      bool ok = true;
      for (std::size_t v = 0; v < m && ok; ++v) {
        std::size_t u = v;
        std::vector<std::size_t> path;
        while (mark[u] == 0) {
          mark[u] = 1;
          path.push_back(u);
          u = parent[u];
        }
        if (mark[u] == 1) ok = false;
        for (std::size_t x : path) mark[x] = 2;
      }
      if (ok) fn(ProcessTree(m, root, parent, true));

      std::size_t v = 0;
      for (; v < m; ++v) {
        if (v == root) continue;
        if (++digit[v] < m - 1) break;
        digit[v] = 0;
      }
      if (v == m) break;
    }
  }
}

std::vector<ProcessTree> enumerate_causal_trees(std::size_t m) {
  std::vector<ProcessTree> out;
  for_each_causal_tree(m, [&](const ProcessTree& t) { out.push_back(t); });
  return out;
}

std::uint64_t count_dependencies(std::size_t m, std::size_t n, DependencyKind kind) {
  if (m == 0 || n == 0) throw DataError("dependency counts need m >= 1 and n >= 1");
  const std::uint64_t mm = m;
  const std::uint64_t nn = n;
  const std::uint64_t d = mm * nn;
  switch (kind) {
    case DependencyKind::kFull:
      return d * (d - 1) / 2;
    case DependencyKind::kChowLiuVar:
      return d - 1;
    case DependencyKind::kCausal:
      // m complete graphs on n variables, plus (m−1) conditioned processes
      // whose k-th variable links to the parent's first k variables.
      return mm * nn * (nn - 1) / 2 + (mm - 1) * nn * (nn + 1) / 2;
  }
  return 0;
}

}  // namespace causaltree::trees
