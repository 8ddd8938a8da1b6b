#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "causaltree/error.hpp"
#include "causaltree/io.hpp"
#include "causaltree/trees.hpp"
#include "oracles.hpp"

using namespace causaltree;
using linalg::Matrix;

namespace {

Matrix weights(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, double>> entries,
               bool symmetric) {
  Matrix w(n, n);
  for (auto [a, b, v] : entries) {
    w(a, b) = v;
    if (symmetric) w(b, a) = v;
  }
  return w;
}

void check_invariants(const ProcessTree& t) {
  // The constructor validates; rebuild from edges to double-check reachability.
  CHECK(t.edges().size() + 1 == t.node_count());
  const auto again = ProcessTree::from_edges(t.node_count(), t.edges(), t.directed(),
                                             t.directed() ? std::optional(t.root()) : std::nullopt);
  CHECK(again.same_structure(t));
}

}  // namespace

TEST_CASE("kruskal picks the forced edges") {
  const auto t = trees::kruskal_max_tree(weights(3, {{0, 1, 1.0}, {0, 2, 0.5}, {1, 2, 0.1}}, true));
  CHECK(t.undirected_edges() == std::vector<ProcessTree::Edge>{{0, 1}, {0, 2}});
  CHECK(t.score() == doctest::Approx(1.5));
  CHECK(!t.directed());
}

TEST_CASE("kruskal breaks ties lexicographically") {
  Matrix w(4, 4, 0.3);
  const auto t = trees::kruskal_max_tree(w);
  CHECK(t.undirected_edges() == std::vector<ProcessTree::Edge>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("kruskal matches exhaustive enumeration") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 5;
    const Matrix w = oracle::random_weights(rng, m, true);
    const auto t = trees::kruskal_max_tree(w);
    check_invariants(t);
    const auto bf = oracle::brute_force_tree(w, false);
    CHECK(std::abs(t.score() - bf.best) < 1e-12);
    if (bf.best - bf.second > 1e-9) CHECK(t.same_structure(bf.argmax));
  }
}

TEST_CASE("kruskal rejects asymmetric or directed input") {
  CHECK_THROWS_AS(trees::kruskal_max_tree(weights(2, {{0, 1, 0.9}, {1, 0, 0.2}}, false)), KindMismatch);
  info::WeightMatrix di;
  di.kind = info::WeightKind::kDI;
  di.layout = model::ProcessLayout(2, 1);
  di.weights = Matrix(2, 2);
  CHECK_THROWS_AS(trees::kruskal_max_tree(di), KindMismatch);
}

TEST_CASE("edmonds on two nodes") {
  const Matrix w = weights(2, {{0, 1, 0.7}, {1, 0, 0.2}}, false);
  const auto t = trees::edmonds_max_arborescence(w, 0);
  CHECK(t.parent(1) == 0);
  CHECK(t.score() == doctest::Approx(0.7));
  CHECK(trees::edmonds_max_arborescence(w, 1).score() == doctest::Approx(0.2));
}

TEST_CASE("edmonds contracts a heavy two-cycle") {
  // 1 <-> 2 is heavy; root 0 reaches them weakly.
  const Matrix w = weights(4, {{0, 1, 0.1}, {0, 2, 0.3}, {0, 3, 0.05}, {1, 2, 5.0}, {2, 1, 4.0},
                               {1, 3, 1.0}, {2, 3, 0.5}, {3, 1, 0.2}},
                           false);
  const auto t = trees::edmonds_max_arborescence(w, 0);
  // Entering the cycle at 1 keeps the heavier 1 -> 2 arc.
  CHECK(t.parent(1) == 0);
  CHECK(t.parent(2) == 1);
  CHECK(t.parent(3) == 1);
  CHECK(t.score() == doctest::Approx(0.1 + 5.0 + 1.0));
  double best = -1.0;
  trees::for_each_causal_tree(4, [&](const ProcessTree& c) {
    if (c.root() == 0) best = std::max(best, c.sum_weights([&](auto p, auto ch) { return w(p, ch); }));
  });
  CHECK(t.score() == doctest::Approx(best));
}

TEST_CASE("edmonds on zero weights returns the first arborescence") {
  const auto t = trees::edmonds_max_arborescence(Matrix(5, 5), 0);
  CHECK(t.score() == 0.0);
  for (std::size_t v = 1; v < 5; ++v) CHECK(t.parent(v) == 0);
  for (std::size_t r = 1; r < 5; ++r) {
    const auto tr = trees::edmonds_max_arborescence(Matrix(5, 5), r);
    CHECK(tr.root() == r);
    check_invariants(tr);
  }
}

TEST_CASE("edmonds matches enumeration for every root") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 2 + trial % 4;
    const Matrix w = oracle::random_weights(rng, m, false);
    for (std::size_t r = 0; r < m; ++r) {
      const auto t = trees::edmonds_max_arborescence(w, r);
      check_invariants(t);
      double best = -1.0;
      trees::for_each_causal_tree(m, [&](const ProcessTree& c) {
        if (c.root() == r) best = std::max(best, c.sum_weights([&](auto p, auto ch) { return w(p, ch); }));
      });
      CHECK(std::abs(t.score() - best) < 1e-12);
    }
  }
}

TEST_CASE("edmonds with many equal weights stays optimal") {
  // Weights drawn from {0, 1, 2} produce many ties and cycles.
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 3 + trial % 4;
    Matrix w(m, m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (a != b) w(a, b) = pick(rng);
    const auto bf = oracle::brute_force_tree(w, true);
    CHECK(trees::best_causal_tree(w).score() == doctest::Approx(bf.best));
  }
}

TEST_CASE("best_causal_tree examples") {
  const auto t = trees::best_causal_tree(weights(2, {{0, 1, 0.9}, {1, 0, 0.2}}, false));
  CHECK(t.root() == 0);
  CHECK(t.parent(1) == 0);
  CHECK(t.score() == doctest::Approx(0.9));
  // Equal scores from different roots resolve to the smallest root.
  const auto sym = trees::best_causal_tree(weights(3, {{0, 1, 1.0}, {1, 2, 1.0}}, true));
  CHECK(sym.root() == 0);
}

TEST_CASE("best_causal_tree matches enumeration") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 3 + trial % 3;
    const Matrix w = oracle::random_weights(rng, m, false);
    const auto t = trees::best_causal_tree(w);
    check_invariants(t);
    const auto bf = oracle::brute_force_tree(w, true);
    CHECK(std::abs(t.score() - bf.best) < 1e-12);
    if (bf.best - bf.second > 1e-9) CHECK(t.same_structure(bf.argmax));
  }
}

TEST_CASE("argmax is invariant under positive scaling and deterministic") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 3 + trial % 6;
    const Matrix w = oracle::random_weights(rng, m, false);
    const Matrix ws = oracle::random_weights(rng, m, true);
    const auto t = trees::best_causal_tree(w);
    const auto k = trees::kruskal_max_tree(ws);
    for (double c : {0.25, 3.0, 1000.0}) {
      Matrix sw = w, sws = ws;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          sw(a, b) *= c;
          sws(a, b) *= c;
        }
      CHECK(trees::best_causal_tree(sw).same_structure(t));
      CHECK(trees::kruskal_max_tree(sws).same_structure(k));
    }
    CHECK(trees::best_causal_tree(w).parents() == t.parents());
  }
}

TEST_CASE("weight guards") {
  CHECK_THROWS_AS(trees::best_causal_tree(weights(2, {{0, 1, -0.1}}, false)), DataError);
  const auto t = trees::best_causal_tree(weights(2, {{0, 1, -1e-10}, {1, 0, 0.3}}, false));
  CHECK(t.root() == 1);
  info::WeightMatrix mi;
  mi.kind = info::WeightKind::kMI;
  mi.layout = model::ProcessLayout(2, 1);
  mi.weights = Matrix(2, 2);
  CHECK_THROWS_AS(trees::best_causal_tree(mi), KindMismatch);
  CHECK_THROWS_AS(trees::edmonds_max_arborescence(Matrix(3, 3), 3), IndexOutOfRange);
}

TEST_CASE("enumeration emits each rooted tree once") {
  for (std::size_t m = 1; m <= 6; ++m) {
    std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;
    std::size_t count = 0;
    trees::for_each_causal_tree(m, [&](const ProcessTree& t) {
      ++count;
      seen.emplace(t.root(), t.parents());
    });
    CHECK(count == static_cast<std::size_t>(std::pow(m, m - 1)));
    CHECK(seen.size() == count);
  }
  const auto two = trees::enumerate_causal_trees(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].root() == 0);
  CHECK(two[0].parent(1) == 0);
  CHECK(two[1].root() == 1);
  CHECK(two[1].parent(0) == 1);
  CHECK(trees::enumerate_causal_trees(3).size() == 9);
  CHECK(trees::enumerate_causal_trees(4).size() == 64);
  CHECK_THROWS_AS(trees::enumerate_causal_trees(8), TooLarge);
}

TEST_CASE("dependency counts") {
  using trees::DependencyKind;
  CHECK(trees::count_dependencies(6, 10, DependencyKind::kFull) == 1770);
  CHECK(trees::count_dependencies(6, 10, DependencyKind::kChowLiuVar) == 59);
  CHECK(trees::count_dependencies(6, 10, DependencyKind::kCausal) == 6 * 45 + 5 * 55);
  CHECK(trees::count_dependencies(6, 10, DependencyKind::kCausal) == 545);
  // n = 1: a causal tree is a tree over m variables.
  CHECK(trees::count_dependencies(5, 1, DependencyKind::kCausal) == 4);
  CHECK_THROWS_AS(trees::count_dependencies(0, 3, DependencyKind::kFull), DataError);
}

TEST_CASE("learned trees on the shipped networks follow the generative arrows") {
  for (const char* name : {"h0.json", "h1.json"}) {
    const auto m = io::read_model(std::string(CAUSALTREE_DATA_DIR) + "/" + name);
    const auto k = model::build_covariance(m);
    const auto t = trees::best_causal_tree(info::build_weights(k, info::WeightKind::kDI));
    CAPTURE(name);
    for (const auto& [p, c] : t.edges()) {
      bool arrow = false;
      for (std::size_t time = 1; time < k.layout.timesteps(); ++time)
        arrow = arrow || m.coeff({c, time}, {p, time - 1}) != 0.0;
      CHECK(arrow);
    }
  }
}
