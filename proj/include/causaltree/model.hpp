#pragma once

// Strictly causal linear Gaussian generative model over m processes observed
// for n timesteps:  X = A·X + N,  N ~ independent normals.
//
// Variables are laid out time-major, flat(i, t) = t·m + i, so every variable
// at an earlier time precedes every variable at a later time and strict
// causality is the same as strict lower-triangularity of A.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causaltree/linalg.hpp"

namespace causaltree::model {

struct Coordinate {
  std::size_t process = 0;
  std::size_t time = 0;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

class ProcessLayout {
 public:
  ProcessLayout() = default;
  ProcessLayout(std::size_t m, std::size_t n);

  std::size_t processes() const { return m_; }
  std::size_t timesteps() const { return n_; }
  std::size_t size() const { return m_ * n_; }

  std::size_t flat(std::size_t process, std::size_t time) const { return time * m_ + process; }
  std::size_t flat(Coordinate c) const { return flat(c.process, c.time); }
  Coordinate coordinate(std::size_t flat_index) const {
    return {flat_index % m_, flat_index / m_};
  }

  // Flat indices of process i at times [0, end_time), in time order.
  std::vector<std::size_t> history(std::size_t process, std::size_t end_time) const;

  std::string process_label(std::size_t process) const;
  std::string variable_label(std::size_t flat_index) const;

  friend bool operator==(const ProcessLayout&, const ProcessLayout&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
};

struct Violation {
  enum class Kind { kNotStrictlyCausal, kNonPositiveNoise };
  Kind kind;
  Coordinate to;
  Coordinate from;  // unused for kNonPositiveNoise
  double value;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

class GenerativeModel {
 public:
  GenerativeModel() = default;
  // Zero coefficients; noise_vars defaults to unit variance.
  explicit GenerativeModel(ProcessLayout layout);
  GenerativeModel(ProcessLayout layout, linalg::Matrix coeffs, std::vector<double> noise_vars);

  const ProcessLayout& layout() const { return layout_; }
  const linalg::Matrix& coeffs() const { return coeffs_; }
  const std::vector<double>& noise_vars() const { return noise_vars_; }

  // Gain from variable `from` into variable `to`.
  void set_coeff(Coordinate to, Coordinate from, double value);
  double coeff(Coordinate to, Coordinate from) const;
  void set_noise_var(Coordinate c, double var);

  ValidationReport validate() const;

  friend bool operator==(const GenerativeModel&, const GenerativeModel&) = default;

 private:
  ProcessLayout layout_;
  linalg::Matrix coeffs_;
  std::vector<double> noise_vars_;
};

struct CovarianceMatrix {
  ProcessLayout layout;
  linalg::SymMatrix sigma;
};

/// Linear Gaussian network given in a topological order: each variable is a
/// weighted sum of its parents (all earlier in `order`) plus independent noise.
struct LinearNetwork {
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<std::vector<double>> weights;
  std::vector<double> noise_vars;

  /// Σ = (I − B)⁻¹ · diag(noise_vars) · (I − B)⁻ᵀ
  linalg::SymMatrix covariance() const;
};

/// Throws NotStrictlyCausal / InvalidModel when validate() reports problems,
/// NotPositiveDefinite if the result is numerically degenerate.
CovarianceMatrix build_covariance(const GenerativeModel& model);

/// Seeded substream for one draw. Substream k of seed s is an mt19937_64
/// seeded with splitmix64(splitmix64(s) ^ k), so draw k does not depend on how
/// many other draws are made or in which order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Derives an independent seed for a named sub-experiment (e.g. per hypothesis).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// Draw `index` of the model under `seed`: noise from substream(seed, index),
/// then forward substitution of (I − A)x = N in time-major order.
std::vector<double> sample_one(const GenerativeModel& model, std::uint64_t seed,
                               std::uint64_t index);

/// `count` draws, row k equal to sample_one(model, seed, k).
linalg::Matrix sample(const GenerativeModel& model, std::uint64_t seed, std::size_t count);

}  // namespace causaltree::model
