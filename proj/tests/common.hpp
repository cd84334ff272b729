#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rkm/rkm.hpp"

namespace rkm::testing {

inline Matrix make_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix random_symmetric(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.next_uniform(lo, hi);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// a sample set with prescribed rows, for tests that need exact geometry
inline SampleSet fixed_samples(Matrix data) {
  DistributionSpec spec = DistributionSpec::standard_normal(data.cols());
  return SampleSet{std::move(data), spec, 0};
}

// ridge objective in representer form, scaled so the closed-form coefficient
// vector is its exact minimizer: (||y - K a||^2 + lambda a^T K a) / n
inline double ridge_objective(const Matrix& k, std::span<const double> y,
                              std::span<const double> alpha, double lambda) {
  std::vector<double> ka = matvec(k, alpha);
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - ka[i];
    loss += r * r;
  }
  const double penalty = lambda * dot(alpha, ka);
  return (loss + penalty) / static_cast<double>(y.size());
}

// drops the trailing wall_time_s column from every CSV line
inline std::string strip_wall_time(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const std::string line = csv.substr(start, end - start);
    const std::size_t comma = line.rfind(',');
    out += comma == std::string::npos ? line : line.substr(0, comma);
    out += '\n';
    start = end + 1;
  }
  return out;
}

// solve (K + lambda I) x = y through the Jacobi eigendecomposition; test
// oracle independent of the production solver
inline std::vector<double> eig_solve_oracle(const Matrix& k, double lambda,
                                            std::span<const double> y) {
  Matrix shifted = k;
  for (std::size_t i = 0; i < k.rows(); ++i) shifted(i, i) += lambda;
  const JacobiResult jr = jacobi_diagonalize(shifted);
  const std::size_t n = k.rows();
  std::vector<double> coeffs(n, 0.0), x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double qty = 0.0;
    for (std::size_t i = 0; i < n; ++i) qty += jr.eigenvectors(i, j) * y[i];
    coeffs[j] = qty / jr.eigenvalues[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x[i] += jr.eigenvectors(i, j) * coeffs[j];
  return x;
}

}  // namespace rkm::testing
