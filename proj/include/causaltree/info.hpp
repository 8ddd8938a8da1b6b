#pragma once

// Closed-form information measures for jointly Gaussian processes, in nats,
// and the Gaussian law of a tree approximation.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "causaltree/linalg.hpp"
#include "causaltree/model.hpp"
#include "causaltree/process_tree.hpp"

namespace causaltree::info {

using model::CovarianceMatrix;

// Values in [-kClampTolerance, 0) are rounded to 0; anything more negative
// raises NumericalInconsistency.
inline constexpr double kClampTolerance = 1e-9;

double clamp_information(double raw, std::string_view what);

enum class WeightKind {
  kMI,     // mutual information between whole processes (m x m, symmetric)
  kDI,     // directed information, weights[src][dst] = I(src -> dst) (m x m)
  kMIVar,  // mutual information between single variables (mn x mn, symmetric)
};

std::string_view kind_name(WeightKind kind);  // "MI", "DI", "MIvar"
WeightKind parse_kind(std::string_view name);  // accepts either case
inline bool is_symmetric_kind(WeightKind k) { return k != WeightKind::kDI; }

struct WeightMatrix {
  WeightKind kind = WeightKind::kDI;
  model::ProcessLayout layout;
  linalg::Matrix weights;  // diagonal is zero

  std::size_t size() const { return weights.rows(); }
  double operator()(std::size_t a, std::size_t b) const { return weights(a, b); }
  std::vector<std::string> labels() const;
};

/// I(X_a ; X_b) over whole processes:
/// ½(log|K_a| + log|K_b| − log|K_ab|).
double gaussian_mi(const CovarianceMatrix& k, std::size_t a, std::size_t b);

/// I(X_src → X_dst) = Σ_t I(Y_t ; X^t | Y^{t−1}) with X = src, Y = dst,
/// evaluated as ½log|K_{Y^n}| − Σ_t ½log(|K_{Y^t,X^t}| / |K_{Y^{t−1},X^t}|).
double gaussian_di(const CovarianceMatrix& k, std::size_t src, std::size_t dst);

/// Mutual information between two single variables (flat indices).
double gaussian_variable_mi(const CovarianceMatrix& k, std::size_t u, std::size_t v);

WeightMatrix build_weights(const CovarianceMatrix& k, WeightKind kind);

/// Covariance of the tree approximation of the law with covariance k.
///
/// Directed tree over the m processes (causal dependence tree): variable
/// (i, t) is regressed on its own past (i, 0..t−1) and on the parent process's
/// past and present (p, 0..t). Variables are generated time-major, parents
/// before children within a timestep.
///
/// Undirected tree over the mn variables (Chow-Liu): each variable is
/// regressed on its single tree neighbour towards the root.
///
/// Undirected tree over the m processes (n > 1): each process vector is
/// conditioned on the whole vector of its neighbour towards the root.
CovarianceMatrix tree_to_gaussian(const CovarianceMatrix& k, const ProcessTree& tree);

/// D(N(0, k_true) ‖ N(0, k_approx)) = ½(tr(k_approx⁻¹ k_true) − d + log|k_approx| − log|k_true|).
double gaussian_kl(const CovarianceMatrix& k_true, const CovarianceMatrix& k_approx);

}  // namespace causaltree::info
