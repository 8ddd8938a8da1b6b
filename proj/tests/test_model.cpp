#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "causaltree/error.hpp"
#include "causaltree/model.hpp"
#include "oracles.hpp"

using namespace causaltree;
using model::Coordinate;
using model::GenerativeModel;
using model::ProcessLayout;

namespace {

linalg::Matrix empirical_covariance(const linalg::Matrix& x) {
  const std::size_t d = x.cols();
  linalg::Matrix c(d, d);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) c(i, j) += x(r, i) * x(r, j);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c(i, j) /= static_cast<double>(x.rows());
  return c;
}

GenerativeModel chain(double a) {
  GenerativeModel m{ProcessLayout(1, 2)};
  m.set_coeff({0, 1}, {0, 0}, a);
  return m;
}

}  // namespace

TEST_CASE("layout is a time-major bijection") {
  const ProcessLayout L(4, 5);
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t t = 0; t < 5; ++t) {
      const std::size_t k = L.flat(i, t);
      CHECK(k < L.size());
      CHECK(L.coordinate(k) == Coordinate{i, t});
      seen.insert(k);
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t s = t + 1; s < 5; ++s) CHECK(k < L.flat(j, s));
    }
  CHECK(seen.size() == 20);
  CHECK(L.variable_label(L.flat(2, 3)) == "p2_t3");
  CHECK_THROWS_AS(ProcessLayout(0, 3), InvalidModel);
}

TEST_CASE("build_covariance of independent unit noise is the identity") {
  const auto k = model::build_covariance(GenerativeModel{ProcessLayout(2, 3)});
  CHECK(k.sigma == linalg::SymMatrix::identity(6));
}

TEST_CASE("build_covariance of a scalar chain") {
  for (double a : {0.3, -0.8, 2.0}) {
    const auto k = model::build_covariance(chain(a));
    CHECK(k.sigma(0, 0) == doctest::Approx(1.0));
    CHECK(k.sigma(0, 1) == doctest::Approx(a));
    CHECK(k.sigma(1, 1) == doctest::Approx(1.0 + a * a));
  }
}

TEST_CASE("build_covariance rejects non-causal coefficients") {
  GenerativeModel m{ProcessLayout(2, 2)};
  m.set_coeff({0, 1}, {1, 1}, 0.5);
  CHECK_THROWS_AS(model::build_covariance(m), NotStrictlyCausal);
  GenerativeModel noisy{ProcessLayout(2, 2)};
  noisy.set_noise_var({1, 0}, 0.0);
  CHECK_THROWS_AS(model::build_covariance(noisy), InvalidModel);
}

TEST_CASE("validate reports every violation with coordinates") {
  GenerativeModel ok{ProcessLayout(3, 3)};
  ok.set_coeff({0, 2}, {1, 0}, 0.4);
  CHECK(ok.validate().ok());

  GenerativeModel same_time{ProcessLayout(3, 3)};
  same_time.set_coeff({2, 1}, {0, 1}, 0.5);
  auto r = same_time.validate();
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == model::Violation::Kind::kNotStrictlyCausal);
  CHECK(r.violations[0].to == Coordinate{2, 1});
  CHECK(r.violations[0].from == Coordinate{0, 1});

  GenerativeModel future{ProcessLayout(3, 3)};
  future.set_coeff({1, 0}, {1, 2}, 0.5);
  future.set_noise_var({2, 2}, -1.0);
  r = future.validate();
  REQUIRE(r.violations.size() == 2);
  CHECK(r.violations[0].from == Coordinate{1, 2});
  CHECK(r.violations[1].kind == model::Violation::Kind::kNonPositiveNoise);
  CHECK(r.violations[1].to == Coordinate{2, 2});
  CHECK(r.summary().find("process 2, time 2") != std::string::npos);
}

TEST_CASE("coefficient insertion order does not matter") {
  GenerativeModel a{ProcessLayout(3, 3)}, b{ProcessLayout(3, 3)};
  a.set_coeff({0, 1}, {1, 0}, 0.5);
  a.set_coeff({2, 2}, {0, 1}, -0.7);
  b.set_coeff({2, 2}, {0, 1}, -0.7);
  b.set_coeff({0, 1}, {1, 0}, 0.5);
  CHECK(model::build_covariance(a).sigma == model::build_covariance(b).sigma);
}

TEST_CASE("strict causality keeps forward substitution exact") {
  // det(I − A) = 1: the covariance log-determinant equals Σ log noise.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = oracle::random_model(rng, 3, 4);
    double expect = 0.0;
    for (double v : m.noise_vars()) expect += std::log(v);
    CHECK(linalg::log_det(model::build_covariance(m).sigma) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("LinearNetwork accepts any topological order") {
  // x1 = N1, x0 = 0.5·x1 + N0 with order (1, 0).
  model::LinearNetwork net;
  net.order = {1, 0};
  net.parents = {{1}, {}};
  net.weights = {{0.5}, {}};
  net.noise_vars = {1.0, 2.0};
  const auto s = net.covariance();
  CHECK(s(1, 1) == doctest::Approx(2.0));
  CHECK(s(0, 1) == doctest::Approx(1.0));
  CHECK(s(0, 0) == doctest::Approx(1.5));
  net.order = {0, 1};
  CHECK_THROWS_AS(net.covariance(), std::invalid_argument);
}

TEST_CASE("sampling is deterministic per seed and index") {
  std::mt19937_64 rng(4);
  const auto m = oracle::random_model(rng, 2, 3);
  const auto a = model::sample(m, 17, 5);
  const auto b = model::sample(m, 17, 5);
  CHECK(a == b);
  const auto c = model::sample(m, 18, 5);
  CHECK(!(a == c));
  // Draw k is independent of how many draws are requested.
  const auto one = model::sample_one(m, 17, 3);
  for (std::size_t j = 0; j < one.size(); ++j) CHECK(one[j] == a(3, j));
}

TEST_CASE("independent unit noise has unit variance") {
  const GenerativeModel m{ProcessLayout(2, 2)};
  const auto x = model::sample(m, 1, 100000);
  const auto c = empirical_covariance(x);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c(i, i) >= 0.97);
    CHECK(c(i, i) <= 1.03);
  }
}

TEST_CASE("scalar chain has the predicted correlation") {
  const double a = 0.8;
  const auto x = model::sample(chain(a), 2, 100000);
  const auto c = empirical_covariance(x);
  const double corr = c(0, 1) / std::sqrt(c(0, 0) * c(1, 1));
  CHECK(std::abs(corr - a / std::sqrt(1 + a * a)) < 0.02);
}

TEST_CASE("sample covariance converges to build_covariance") {
  std::mt19937_64 rng(8);
  const auto m = oracle::random_model(rng, 2, 3, 0.6, 0.3, 0.9);
  const auto k = model::build_covariance(m);
  const auto c = empirical_covariance(model::sample(m, 99, 1000000));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (std::abs(k.sigma(i, j)) > 0.1) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(std::abs(c(i, j) - k.sigma(i, j)) <= 0.02 * std::abs(k.sigma(i, j)));
      }
}
