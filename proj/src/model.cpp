#include "causaltree/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "causaltree/error.hpp"
#include "causaltree/simd.hpp"

namespace causaltree::model {

ProcessLayout::ProcessLayout(std::size_t m, std::size_t n) : m_(m), n_(n) {
  if (m == 0 || n == 0) throw InvalidModel("layout needs m >= 1 and n >= 1");
}

std::vector<std::size_t> ProcessLayout::history(std::size_t process, std::size_t end_time) const {
  std::vector<std::size_t> out;
  out.reserve(end_time);
  for (std::size_t t = 0; t < end_time; ++t) out.push_back(flat(process, t));
  return out;
}

std::string ProcessLayout::process_label(std::size_t process) const {
  return "p" + std::to_string(process);
}

std::string ProcessLayout::variable_label(std::size_t flat_index) const {
  const Coordinate c = coordinate(flat_index);
  return "p" + std::to_string(c.process) + "_t" + std::to_string(c.time);
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kNotStrictlyCausal:
      os << "coefficient into (process " << to.process << ", time " << to.time
         << ") from (process " << from.process << ", time " << from.time << ") = " << value
         << " is not strictly causal";
      break;
    case Kind::kNonPositiveNoise:
      os << "noise variance at (process " << to.process << ", time " << to.time
         << ") = " << value << " is not positive";
      break;
  }
  return os.str();
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) os << "; ";
    os << violations[k].describe();
  }
  return os.str();
}

GenerativeModel::GenerativeModel(ProcessLayout layout)
    : layout_(layout), coeffs_(layout.size(), layout.size()), noise_vars_(layout.size(), 1.0) {}

GenerativeModel::GenerativeModel(ProcessLayout layout, linalg::Matrix coeffs,
                                 std::vector<double> noise_vars)
    : layout_(layout), coeffs_(std::move(coeffs)), noise_vars_(std::move(noise_vars)) {
  if (coeffs_.rows() != layout_.size() || coeffs_.cols() != layout_.size())
    throw InvalidModel("coefficient matrix must be mn x mn");
  if (noise_vars_.size() != layout_.size()) throw InvalidModel("noise_vars must have mn entries");
}

void GenerativeModel::set_coeff(Coordinate to, Coordinate from, double value) {
  for (Coordinate c : {to, from})
    if (c.process >= layout_.processes() || c.time >= layout_.timesteps())
      throw IndexOutOfRange("coordinate outside the process layout");
  coeffs_(layout_.flat(to), layout_.flat(from)) = value;
}

double GenerativeModel::coeff(Coordinate to, Coordinate from) const {
  return coeffs_(layout_.flat(to), layout_.flat(from));
}

void GenerativeModel::set_noise_var(Coordinate c, double var) {
  if (c.process >= layout_.processes() || c.time >= layout_.timesteps())
    throw IndexOutOfRange("coordinate outside the process layout");
  noise_vars_[layout_.flat(c)] = var;
}

ValidationReport GenerativeModel::validate() const {
  ValidationReport report;
  const std::size_t d = layout_.size();
  for (std::size_t u = 0; u < d; ++u) {
    const Coordinate to = layout_.coordinate(u);
    for (std::size_t v = 0; v < d; ++v) {
      const double a = coeffs_(u, v);
      if (a == 0.0) continue;
      const Coordinate from = layout_.coordinate(v);
      if (!(from.time < to.time) || !std::isfinite(a))
        report.violations.push_back({Violation::Kind::kNotStrictlyCausal, to, from, a});
    }
    if (!(noise_vars_[u] > 0.0) || !std::isfinite(noise_vars_[u]))
      report.violations.push_back({Violation::Kind::kNonPositiveNoise, to, to, noise_vars_[u]});
  }
  return report;
}

linalg::SymMatrix LinearNetwork::covariance() const {
  const std::size_t d = order.size();
  if (parents.size() != d || weights.size() != d || noise_vars.size() != d)
    throw std::invalid_argument("LinearNetwork: inconsistent sizes");
  // Row v of T = (I − B)⁻¹ is e_v + Σ_p β_vp · (row p of T).
  linalg::Matrix t(d, d);
  std::vector<bool> done(d, false);
  for (std::size_t v : order) {
    if (v >= d || done[v]) throw std::invalid_argument("LinearNetwork: order is not a permutation");
    t(v, v) = 1.0;
    if (parents[v].size() != weights[v].size())
      throw std::invalid_argument("LinearNetwork: parents/weights size mismatch");
    for (std::size_t k = 0; k < parents[v].size(); ++k) {
      const std::size_t p = parents[v][k];
      if (p >= d || !done[p])
        throw std::invalid_argument("LinearNetwork: parent does not precede child");
      simd::axpy(weights[v][k], t.row(p), t.row(v));
    }
    done[v] = true;
  }
  linalg::Matrix td = t;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) td(r, c) *= noise_vars[c];
  linalg::Matrix sigma(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c <= r; ++c) {
      const double s = simd::dot(td.row(r), t.row(c));
      sigma(r, c) = s;
      sigma(c, r) = s;
    }
  return linalg::SymMatrix(sigma);
}

CovarianceMatrix build_covariance(const GenerativeModel& model) {
  const ValidationReport report = model.validate();
  if (!report.ok()) {
    for (const Violation& v : report.violations)
      if (v.kind == Violation::Kind::kNotStrictlyCausal) throw NotStrictlyCausal(report.summary());
    throw InvalidModel(report.summary());
  }
  const std::size_t d = model.layout().size();
  LinearNetwork net;
  net.order.resize(d);
  net.parents.resize(d);
  net.weights.resize(d);
  net.noise_vars = model.noise_vars();
  for (std::size_t u = 0; u < d; ++u) {
    net.order[u] = u;
    for (std::size_t v = 0; v < u; ++v) {
      const double a = model.coeffs()(u, v);
      if (a != 0.0) {
        net.parents[u].push_back(v);
        net.weights[u].push_back(a);
      }
    }
  }
  CovarianceMatrix cov{model.layout(), net.covariance()};
  linalg::Cholesky check(cov.sigma);
  return cov;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(~salt));
}

std::vector<double> sample_one(const GenerativeModel& model, std::uint64_t seed,
                               std::uint64_t index) {
  const std::size_t d = model.layout().size();
  std::mt19937_64 rng = substream(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(d);
  for (std::size_t u = 0; u < d; ++u) {
    const double noise = std::sqrt(model.noise_vars()[u]) * normal(rng);
    // Strictly causal: only entries before u in the row can be nonzero.
    x[u] = noise + simd::dot(model.coeffs().row(u).first(u), std::span<const double>(x).first(u));
  }
  return x;
}

linalg::Matrix sample(const GenerativeModel& model, std::uint64_t seed, std::size_t count) {
  const ValidationReport report = model.validate();
  if (!report.ok()) throw InvalidModel(report.summary());
  const std::size_t d = model.layout().size();
  linalg::Matrix out(count, d);
  for (std::size_t k = 0; k < count; ++k) {
    const std::vector<double> x = sample_one(model, seed, k);
    std::copy(x.begin(), x.end(), out.row(k).begin());
  }
  return out;
}

}  // namespace causaltree::model
