#include "causaltree/info.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "causaltree/error.hpp"

namespace causaltree::info {

using linalg::Cholesky;
using linalg::SymMatrix;

double clamp_information(double raw, std::string_view what) {
  if (!std::isfinite(raw)) throw NumericalInconsistency(std::string(what) + " is not finite");
  if (raw < -kClampTolerance) {
    std::ostringstream os;
    os << what << " evaluated to " << raw << " nats, below the clamp tolerance";
    throw NumericalInconsistency(os.str());
  }
  return raw < 0.0 ? 0.0 : raw;
}

std::string_view kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::kMI:
      return "MI";
    case WeightKind::kDI:
      return "DI";
    case WeightKind::kMIVar:
      return "MIvar";
  }
  return "?";
}

WeightKind parse_kind(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "mi") return WeightKind::kMI;
  if (lower == "di") return WeightKind::kDI;
  if (lower == "mivar") return WeightKind::kMIVar;
  throw ParseError("unknown weight kind '" + std::string(name) + "'");
}

std::vector<std::string> WeightMatrix::labels() const {
  std::vector<std::string> out;
  if (kind == WeightKind::kMIVar) {
    for (std::size_t v = 0; v < layout.size(); ++v) out.push_back(layout.variable_label(v));
  } else {
    for (std::size_t p = 0; p < layout.processes(); ++p) out.push_back(layout.process_label(p));
  }
  return out;
}

namespace {

void check_pair(const CovarianceMatrix& k, std::size_t a, std::size_t b) {
  const std::size_t m = k.layout.processes();
  if (a >= m || b >= m) throw IndexOutOfRange("process index out of range");
  if (a == b) throw DataError("information between a process and itself");
}

std::vector<std::size_t> concat(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

double gaussian_mi(const CovarianceMatrix& k, std::size_t a, std::size_t b) {
  check_pair(k, a, b);
  const std::size_t n = k.layout.timesteps();
  const auto ia = k.layout.history(a, n);
  const auto ib = k.layout.history(b, n);
  const double raw = 0.5 * (linalg::log_det(linalg::submatrix(k.sigma, ia)) +
                            linalg::log_det(linalg::submatrix(k.sigma, ib)) -
                            linalg::log_det(linalg::submatrix(k.sigma, concat(ia, ib))));
  return clamp_information(raw, "mutual information");
}

double gaussian_di(const CovarianceMatrix& k, std::size_t src, std::size_t dst) {
  check_pair(k, src, dst);
  const std::size_t n = k.layout.timesteps();
  // Interleave X_1, Y_1, X_2, Y_2, ...: the sets {Y^{t-1}, X^t} and {Y^t, X^t}
  // are leading prefixes, and the log-determinant of a leading principal block
  // is the prefix sum of 2·log L_jj of one Cholesky factor.
  std::vector<std::size_t> order;
  order.reserve(2 * n);
  for (std::size_t t = 0; t < n; ++t) {
    order.push_back(k.layout.flat(src, t));
    order.push_back(k.layout.flat(dst, t));
  }
  const Cholesky joint(linalg::submatrix(k.sigma, order));
  double sum_ratios = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    // log|K_{Y^t,X^t}| − log|K_{Y^{t−1},X^t}| = 2·log L at the Y_t pivot.
    const std::size_t y_pivot = 2 * t + 1;
    sum_ratios += std::log(joint.lower()(y_pivot, y_pivot));
  }
  const double log_det_y = linalg::log_det(linalg::submatrix(k.sigma, k.layout.history(dst, n)));
  return clamp_information(0.5 * log_det_y - sum_ratios, "directed information");
}

double gaussian_variable_mi(const CovarianceMatrix& k, std::size_t u, std::size_t v) {
  const std::size_t d = k.layout.size();
  if (u >= d || v >= d) throw IndexOutOfRange("variable index out of range");
  if (u == v) throw DataError("information between a variable and itself");
  const double kuu = k.sigma(u, u);
  const double kvv = k.sigma(v, v);
  const double kuv = k.sigma(u, v);
  const double r2 = kuv * kuv / (kuu * kvv);
  if (!(r2 < 1.0)) throw NotPositiveDefinite("variable pair is perfectly correlated");
  return clamp_information(-0.5 * std::log1p(-r2), "variable mutual information");
}

WeightMatrix build_weights(const CovarianceMatrix& k, WeightKind kind) {
  WeightMatrix w;
  w.kind = kind;
  w.layout = k.layout;
  const std::size_t m = k.layout.processes();
  switch (kind) {
    case WeightKind::kDI:
      w.weights = linalg::Matrix(m, m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          if (a != b) w.weights(a, b) = gaussian_di(k, a, b);
      break;
    case WeightKind::kMI:
      w.weights = linalg::Matrix(m, m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
          const double v = gaussian_mi(k, a, b);
          w.weights(a, b) = v;
          w.weights(b, a) = v;
        }
      break;
    case WeightKind::kMIVar: {
      const std::size_t d = k.layout.size();
      w.weights = linalg::Matrix(d, d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
          const double v = gaussian_variable_mi(k, a, b);
          w.weights(a, b) = v;
          w.weights(b, a) = v;
        }
      break;
    }
  }
  return w;
}

namespace {

// Regression of variable v on `parents` read off the true covariance. Fills
// the network's entry for v.
void add_conditional(const SymMatrix& sigma, std::size_t v, std::vector<std::size_t> parents,
                     model::LinearNetwork& net) {
  double resid = sigma(v, v);
  std::vector<double> beta;
  if (!parents.empty()) {
    const Cholesky kpp(linalg::submatrix(sigma, parents));
    std::vector<double> kpv(parents.size());
    for (std::size_t a = 0; a < parents.size(); ++a) kpv[a] = sigma(parents[a], v);
    beta = kpp.solve(kpv);
    for (std::size_t a = 0; a < parents.size(); ++a) resid -= kpv[a] * beta[a];
  }
  if (!(resid > Cholesky::kPivotFloor)) {
    std::ostringstream os;
    os << "residual variance " << resid << " of variable " << v << " is not positive";
    throw NotPositiveDefinite(os.str());
  }
  net.order.push_back(v);
  net.parents[v] = std::move(parents);
  net.weights[v] = std::move(beta);
  net.noise_vars[v] = resid;
}

}  // namespace

CovarianceMatrix tree_to_gaussian(const CovarianceMatrix& k, const ProcessTree& tree) {
  const model::ProcessLayout& layout = k.layout;
  const std::size_t m = layout.processes();
  const std::size_t n = layout.timesteps();
  const std::size_t d = layout.size();

  model::LinearNetwork net;
  net.parents.resize(d);
  net.weights.resize(d);
  net.noise_vars.resize(d);
  const std::vector<std::size_t> order = tree.topological_order();

  if (tree.directed()) {
    if (tree.node_count() != m) {
      std::ostringstream os;
      os << "directed tree has " << tree.node_count() << " nodes but the layout has " << m
         << " processes";
      throw InvalidTree(os.str());
    }
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t i : order) {
        std::vector<std::size_t> parents = layout.history(i, t);
        if (const std::size_t p = tree.parent(i); p != ProcessTree::kNoParent)
          parents = concat(std::move(parents), layout.history(p, t + 1));
        add_conditional(k.sigma, layout.flat(i, t), std::move(parents), net);
      }
  } else if (tree.node_count() == d) {
    for (std::size_t v : order) {
      std::vector<std::size_t> parents;
      if (const std::size_t p = tree.parent(v); p != ProcessTree::kNoParent) parents.push_back(p);
      add_conditional(k.sigma, v, std::move(parents), net);
    }
  } else if (tree.node_count() == m) {
    for (std::size_t i : order) {
      const std::size_t p = tree.parent(i);
      for (std::size_t t = 0; t < n; ++t) {
        std::vector<std::size_t> parents = layout.history(i, t);
        if (p != ProcessTree::kNoParent) parents = concat(std::move(parents), layout.history(p, n));
        add_conditional(k.sigma, layout.flat(i, t), std::move(parents), net);
      }
    }
  } else {
    std::ostringstream os;
    os << "undirected tree has " << tree.node_count() << " nodes; expected " << d
       << " variables or " << m << " processes";
    throw InvalidTree(os.str());
  }
  return CovarianceMatrix{layout, net.covariance()};
}

double gaussian_kl(const CovarianceMatrix& k_true, const CovarianceMatrix& k_approx) {
  const std::size_t d = k_true.sigma.dim();
  if (k_approx.sigma.dim() != d) throw DataError("gaussian_kl: covariance dimensions differ");
  const Cholesky lt(k_true.sigma);
  const Cholesky la(k_approx.sigma);
  // tr(K_a⁻¹ K_t) = ||L_a⁻¹ L_t||_F².
  const linalg::Matrix lt_cols = lt.lower().transpose();
  double trace = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const std::vector<double> y = la.solve_lower(lt_cols.row(c));
    for (double v : y) trace += v * v;
  }
  const double raw = 0.5 * (trace - static_cast<double>(d) + la.log_det() - lt.log_det());
  return clamp_information(raw, "KL divergence");
}

}  // namespace causaltree::info
