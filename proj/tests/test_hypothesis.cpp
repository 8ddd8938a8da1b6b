#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "causaltree/error.hpp"
#include "causaltree/hypothesis.hpp"
#include "causaltree/io.hpp"
#include "oracles.hpp"

using namespace causaltree;
using namespace causaltree::hypothesis;
using linalg::Matrix;
using linalg::SymMatrix;

namespace {

CovarianceMatrix cov(SymMatrix s) {
  const std::size_t d = s.dim();
  return {model::ProcessLayout(d, 1), std::move(s)};
}

std::vector<std::pair<double, double>> rates(const RocCurve& c) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : c.points) out.emplace_back(p.fpr, p.tpr);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_roc_invariants(const RocCurve& c) {
  REQUIRE(c.points.size() >= 2);
  CHECK(c.points.front().fpr == 1.0);
  CHECK(c.points.front().tpr == 1.0);
  CHECK(c.points.back().fpr == 0.0);
  CHECK(c.points.back().tpr == 0.0);
  for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
    CHECK(c.points[k].threshold < c.points[k + 1].threshold);
    CHECK(c.points[k].fpr >= c.points[k + 1].fpr);
    CHECK(c.points[k].tpr >= c.points[k + 1].tpr);
  }
  CHECK(c.auc >= 0.0);
  CHECK(c.auc <= 1.0);
  CHECK(c.auc == doctest::Approx(trapezoid_auc(c.points)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("loglik examples") {
  const double x0[] = {0.0};
  CHECK(loglik(cov(SymMatrix::identity(1)), x0) == doctest::Approx(-0.9189385332).epsilon(1e-10));
  const double x1[] = {1.0, -1.0};
  CHECK(loglik(cov(SymMatrix::identity(2)), x1) ==
        doctest::Approx(-1.0 - std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK_THROWS_AS(loglik(cov(SymMatrix::identity(2)), x0), DataError);
}

TEST_CASE("loglik matches the explicit inverse") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 8;
    const SymMatrix k = oracle::random_spd(rng, d);
    std::vector<double> x(d);
    for (auto& v : x) v = g(rng);
    const double expect = oracle::log_density(oracle::to_dense(k), x);
    CHECK(loglik(cov(k), x) == doctest::Approx(expect).epsilon(1e-10));
    CHECK(GaussianDensity(k).loglik(x) == loglik(cov(k), x));
  }
}

TEST_CASE("llr properties") {
  const double x[] = {0.0};
  CHECK(llr(x, cov(SymMatrix::identity(1)), cov(SymMatrix::identity(1).scaled(4.0))) ==
        doctest::Approx(-0.5 * std::log(4.0)).epsilon(1e-12));
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const auto k0 = cov(oracle::random_spd(rng, d));
    const auto k1 = cov(oracle::random_spd(rng, d));
    std::vector<double> y(d);
    for (auto& v : y) v = g(rng);
    CHECK(llr(y, k0, k0) == 0.0);
    CHECK(llr(y, k0, k1) == doctest::Approx(-llr(y, k1, k0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(llr(x, cov(SymMatrix::identity(1)), cov(SymMatrix::identity(2))), DataError);
}

TEST_CASE("roc curve on a small score set") {
  const std::vector<double> h0 = {0.1, 0.4, 0.35, 0.8};
  const std::vector<double> h1 = {0.9, 0.4, 0.6, 0.7};
  const auto c = roc_curve("x", h0, h1);
  check_roc_invariants(c);
  // Distinct thresholds 0.1 0.35 0.4 0.6 0.7 0.8 0.9 plus the sentinels.
  CHECK(c.points.size() == 9);
  CHECK(std::isinf(c.points.front().threshold));
  CHECK(c.points[3].threshold == 0.4);
  CHECK(c.points[3].fpr == 0.25);
  CHECK(c.points[3].tpr == 0.75);
  // Mann-Whitney statistic with half credit for ties.
  double wins = 0.0;
  for (double a : h1)
    for (double b : h0) wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  CHECK(c.auc == doctest::Approx(wins / 16.0).epsilon(1e-12));
  CHECK(tpr_at(c, 0.0) == 0.25);
  CHECK(tpr_at(c, 1.0) == 1.0);
  CHECK_THROWS_AS(roc_curve("x", {}, h1), DataError);
}

TEST_CASE("swapping labels and negating scores reflects the curve") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> h0(200), h1(150);
    // Rounded scores produce ties.
    for (auto& v : h0) v = std::round(g(rng) * 8.0) / 8.0;
    for (auto& v : h1) v = std::round((g(rng) + 0.7) * 8.0) / 8.0;
    std::vector<double> n0(h0.size()), n1(h1.size());
    std::transform(h0.begin(), h0.end(), n0.begin(), [](double v) { return -v; });
    std::transform(h1.begin(), h1.end(), n1.begin(), [](double v) { return -v; });
    const auto c = roc_curve("a", h0, h1);
    const auto s = roc_curve("b", n1, n0);
    check_roc_invariants(s);
    auto reflected = rates(s);
    for (auto& [f, t] : reflected) std::tie(f, t) = std::pair(1.0 - t, 1.0 - f);
    std::sort(reflected.begin(), reflected.end());
    const auto original = rates(c);
    REQUIRE(reflected.size() == original.size());
    for (std::size_t k = 0; k < original.size(); ++k) {
      CHECK(reflected[k].first == doctest::Approx(original[k].first).epsilon(1e-12));
      CHECK(reflected[k].second == doctest::Approx(original[k].second).epsilon(1e-12));
    }
    CHECK(s.auc == doctest::Approx(c.auc).epsilon(1e-12));
  }
}

TEST_CASE("identical hypotheses give chance-level curves") {
  std::mt19937_64 rng(14);
  const auto m = oracle::random_model(rng, 3, 3);
  const auto r = run_experiment(m, m, 10000, 7);
  // Identical laws make every LLR zero, so the curve is the diagonal.
  CHECK(r.full.auc == doctest::Approx(0.5));
  CHECK(r.full.auc >= 0.48);
  CHECK(r.full.auc <= 0.52);
  CHECK(r.causal.auc >= 0.48);
  CHECK(r.causal.auc <= 0.52);
  CHECK(r.chowliu.auc >= 0.48);
  CHECK(r.chowliu.auc <= 0.52);
}

TEST_CASE("experiment on the shipped networks") {
  const auto h0 = io::read_model(std::string(CAUSALTREE_DATA_DIR) + "/h0.json");
  const auto h1 = io::read_model(std::string(CAUSALTREE_DATA_DIR) + "/h1.json");
  const auto r = run_experiment(h0, h1, 2000, 3);
  for (const auto* c : {&r.full, &r.causal, &r.chowliu}) check_roc_invariants(*c);
  CHECK(r.full.scorer == "full");
  CHECK(r.causal.scorer == "causal");
  CHECK(r.chowliu.scorer == "chowliu");
  CHECK(r.causal_tree0.directed());
  CHECK(!r.chowliu_tree0.directed());
  CHECK(r.chowliu_tree0.node_count() == 60);
  // The exact likelihood ratio dominates both approximations.
  for (double f = 0.0; f <= 1.0; f += 0.05) {
    CHECK(tpr_at(r.full, f) >= tpr_at(r.causal, f) - 0.02);
    CHECK(tpr_at(r.full, f) >= tpr_at(r.chowliu, f) - 0.02);
  }
  const auto again = run_experiment(h0, h1, 2000, 3);
  CHECK(again.full.auc == r.full.auc);
  CHECK(again.causal.auc == r.causal.auc);
  CHECK(again.chowliu.auc == r.chowliu.auc);
  CHECK(run_experiment(h0, h1, 2000, 4).full.auc != r.full.auc);
}

TEST_CASE("experiment argument checks") {
  std::mt19937_64 rng(15);
  const auto a = oracle::random_model(rng, 2, 2);
  const auto b = oracle::random_model(rng, 3, 2);
  CHECK_THROWS_AS(run_experiment(a, a, 0, 0), DataError);
  CHECK_THROWS_AS(run_experiment(a, b, 10, 0), DataError);
}
