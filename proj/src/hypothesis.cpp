#include "causaltree/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "causaltree/error.hpp"
#include "causaltree/info.hpp"
#include "causaltree/trees.hpp"

namespace causaltree::hypothesis {

GaussianDensity::GaussianDensity(const linalg::SymMatrix& k)
    : chol_(k),
      log_norm_(-0.5 * (chol_.log_det() +
                        static_cast<double>(k.dim()) * std::log(2.0 * std::numbers::pi))) {}

double GaussianDensity::loglik(std::span<const double> x) const {
  if (x.size() != dim()) throw DataError("sample length does not match covariance dimension");
  return log_norm_ - 0.5 * chol_.quadratic_form(x);
}

double loglik(const CovarianceMatrix& k, std::span<const double> x) {
  return GaussianDensity(k.sigma).loglik(x);
}

double llr(std::span<const double> x, const CovarianceMatrix& k0, const CovarianceMatrix& k1) {
  if (k0.sigma.dim() != k1.sigma.dim()) throw DataError("hypotheses have different dimensions");
  return loglik(k1, x) - loglik(k0, x);
}

double trapezoid_auc(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k)
    area += (points[k].fpr - points[k + 1].fpr) * 0.5 * (points[k].tpr + points[k + 1].tpr);
  return area;
}

RocCurve roc_curve(std::string scorer, std::span<const double> h0_scores,
                   std::span<const double> h1_scores) {
  if (h0_scores.empty() || h1_scores.empty()) throw DataError("ROC needs scores under both hypotheses");
  std::vector<double> s0(h0_scores.begin(), h0_scores.end());
  std::vector<double> s1(h1_scores.begin(), h1_scores.end());
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  std::vector<double> thresholds;
  thresholds.reserve(s0.size() + s1.size());
  std::merge(s0.begin(), s0.end(), s1.begin(), s1.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double n0 = static_cast<double>(s0.size());
  const double n1 = static_cast<double>(s1.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  RocCurve curve;
  curve.scorer = std::move(scorer);
  curve.points.reserve(thresholds.size() + 2);
  curve.points.push_back({-kInf, 1.0, 1.0});
  // Both sorted lists are swept once as the threshold rises.
  std::size_t i0 = 0, i1 = 0;
  for (double tau : thresholds) {
    while (i0 < s0.size() && s0[i0] <= tau) ++i0;
    while (i1 < s1.size() && s1[i1] <= tau) ++i1;
    curve.points.push_back({tau, static_cast<double>(s0.size() - i0) / n0,
                            static_cast<double>(s1.size() - i1) / n1});
  }
  curve.points.push_back({kInf, 0.0, 0.0});
  curve.auc = trapezoid_auc(curve.points);
  return curve;
}

double tpr_at(const RocCurve& curve, double fpr) {
  double best = 0.0;
  const auto& p = curve.points;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double hi = p[k].fpr, lo = p[k + 1].fpr;
    if (fpr > hi || fpr < lo) continue;
    double t;
    if (hi == lo) {
      t = std::max(p[k].tpr, p[k + 1].tpr);
    } else {
      const double a = (fpr - lo) / (hi - lo);
      t = p[k + 1].tpr + a * (p[k].tpr - p[k + 1].tpr);
    }
    best = std::max(best, t);
  }
  return best;
}

namespace {

struct Scorer {
  GaussianDensity h0;
  GaussianDensity h1;
  double operator()(std::span<const double> x) const { return h1.loglik(x) - h0.loglik(x); }
};

}  // namespace

ExperimentResult run_experiment(const model::GenerativeModel& model0,
                                const model::GenerativeModel& model1, std::size_t trials,
                                std::uint64_t seed) {
  if (trials == 0) throw DataError("trials must be at least 1");
  if (!(model0.layout() == model1.layout())) throw DataError("hypotheses have different layouts");

  const CovarianceMatrix k0 = model::build_covariance(model0);
  const CovarianceMatrix k1 = model::build_covariance(model1);

  ExperimentResult out;
  out.causal_tree0 = trees::best_causal_tree(info::build_weights(k0, info::WeightKind::kDI));
  out.causal_tree1 = trees::best_causal_tree(info::build_weights(k1, info::WeightKind::kDI));
  out.chowliu_tree0 = trees::kruskal_max_tree(info::build_weights(k0, info::WeightKind::kMIVar));
  out.chowliu_tree1 = trees::kruskal_max_tree(info::build_weights(k1, info::WeightKind::kMIVar));

  const Scorer full{GaussianDensity(k0.sigma), GaussianDensity(k1.sigma)};
  const Scorer causal{GaussianDensity(info::tree_to_gaussian(k0, out.causal_tree0).sigma),
                      GaussianDensity(info::tree_to_gaussian(k1, out.causal_tree1).sigma)};
  const Scorer chowliu{GaussianDensity(info::tree_to_gaussian(k0, out.chowliu_tree0).sigma),
                       GaussianDensity(info::tree_to_gaussian(k1, out.chowliu_tree1).sigma)};

  const std::uint64_t seed0 = model::derive_seed(seed, 0);
  const std::uint64_t seed1 = model::derive_seed(seed, 1);
  std::vector<double> full0(trials), full1(trials), causal0(trials), causal1(trials),
      cl0(trials), cl1(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    const std::vector<double> x0 = model::sample_one(model0, seed0, k);
    const std::vector<double> x1 = model::sample_one(model1, seed1, k);
    full0[k] = full(x0);
    full1[k] = full(x1);
    causal0[k] = causal(x0);
    causal1[k] = causal(x1);
    cl0[k] = chowliu(x0);
    cl1[k] = chowliu(x1);
  }
  out.full = roc_curve("full", full0, full1);
  out.causal = roc_curve("causal", causal0, causal1);
  out.chowliu = roc_curve("chowliu", cl0, cl1);
  return out;
}

}  // namespace causaltree::hypothesis
