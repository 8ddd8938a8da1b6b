#pragma once

// Binary hypothesis testing between two Gaussian process models with
// log-likelihood-ratio scores, under the exact laws and under their causal
// dependence tree and Chow-Liu tree approximations.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "causaltree/linalg.hpp"
#include "causaltree/model.hpp"
#include "causaltree/process_tree.hpp"

namespace causaltree::hypothesis {

using model::CovarianceMatrix;

/// Zero-mean Gaussian log-density with the Cholesky factor cached.
class GaussianDensity {
 public:
  explicit GaussianDensity(const linalg::SymMatrix& k);

  std::size_t dim() const { return chol_.dim(); }
  /// −½(xᵀK⁻¹x + log|K| + d·log 2π)
  double loglik(std::span<const double> x) const;

 private:
  linalg::Cholesky chol_;
  double log_norm_;
};

double loglik(const CovarianceMatrix& k, std::span<const double> x);

/// log p1(x) − log p0(x); H1 is chosen when the score exceeds the threshold.
double llr(std::span<const double> x, const CovarianceMatrix& k0, const CovarianceMatrix& k1);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

struct RocCurve {
  std::string scorer;
  // Thresholds ascending from -inf to +inf; fpr and tpr non-increasing.
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Empirical ROC: one point per distinct observed score plus ±inf sentinels,
/// with fpr(τ) = #{h0 > τ}/N0 and tpr(τ) = #{h1 > τ}/N1.
RocCurve roc_curve(std::string scorer, std::span<const double> h0_scores,
                   std::span<const double> h1_scores);

/// Trapezoid area under the piecewise-linear curve through the points.
double trapezoid_auc(const std::vector<RocPoint>& points);

/// TPR of the piecewise-linear curve at the given FPR (upper envelope at
/// vertical segments).
double tpr_at(const RocCurve& curve, double fpr);

struct ExperimentResult {
  RocCurve full;
  RocCurve causal;
  RocCurve chowliu;
  ProcessTree causal_tree0, causal_tree1;
  ProcessTree chowliu_tree0, chowliu_tree1;
};

inline constexpr std::size_t kDefaultTrials = 10000;

/// Learns each hypothesis's causal tree (DI weights) and variable-level
/// Chow-Liu tree (MIvar weights) from its own exact covariance, draws `trials`
/// samples under each model (seeds derived from `seed` with salts 0 and 1),
/// and sweeps the LLR threshold for the exact, causal-tree and Chow-Liu scorers.
ExperimentResult run_experiment(const model::GenerativeModel& model0,
                                const model::GenerativeModel& model1, std::size_t trials,
                                std::uint64_t seed);

}  // namespace causaltree::hypothesis
