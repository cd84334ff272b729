#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rkm/matrix.hpp"
#include "rkm/parallel.hpp"
#include "rkm/sampling.hpp"

namespace rkm {

enum class KernelFamily { polynomial, gaussian, laplacian };

inline const char* family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::polynomial: return "poly";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::laplacian: return "laplacian";
  }
  return "?";
}

// polynomial: (a<x,y> + b)^p, gaussian: exp(-a||x-y||^2),
// laplacian: exp(-a||x-y||_1)
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double a = 1.0;
  double b = 0.0;  // polynomial only
  int degree = 1;  // polynomial only

  static KernelSpec polynomial(double a, double b, int p) {
    if (p < 1) throw std::invalid_argument("polynomial kernel: degree must be >= 1");
    return {KernelFamily::polynomial, a, b, p};
  }
  static KernelSpec gaussian(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("gaussian kernel: a must be > 0");
    return {KernelFamily::gaussian, a, 0.0, 1};
  }
  static KernelSpec laplacian(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("laplacian kernel: a must be > 0");
    return {KernelFamily::laplacian, a, 0.0, 1};
  }
};

// Integer power by repeated squaring; p >= 0.
inline double pow_int(double base, int p) {
  double result = 1.0;
  double acc = base;
  for (int e = p; e > 0; e >>= 1) {
    if (e & 1) result *= acc;
    acc *= acc;
  }
  return result;
}

namespace detail {

inline double kernel_eval_unchecked(const KernelSpec& spec, std::span<const double> x,
                                    std::span<const double> y) {
  switch (spec.family) {
    case KernelFamily::polynomial:
      return pow_int(spec.a * dot(x, y) + spec.b, spec.degree);
    case KernelFamily::gaussian: {
      double sq = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        sq += diff * diff;
      }
      return std::exp(-spec.a * sq);
    }
    case KernelFamily::laplacian: {
      double l1 = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) l1 += std::abs(x[k] - y[k]);
      return std::exp(-spec.a * l1);
    }
  }
  return 0.0;
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

inline double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  if (!detail::all_finite(x) || !detail::all_finite(y))
    throw std::invalid_argument("kernel_eval: non-finite input");
  return detail::kernel_eval_unchecked(spec, x, y);
}

// Symmetric kernel matrix together with the spec and sample set it came from.
struct KernelMatrix {
  Matrix entries;  // n x n; (i,j) and (j,i) hold the same stored value
  KernelSpec spec;
  SampleSet source;

  std::size_t size() const { return entries.rows(); }
};

// Evaluates the upper triangle plus diagonal once and mirrors; O(n^2 d).
inline KernelMatrix build_kernel_matrix(const SampleSet& samples, const KernelSpec& spec,
                                        unsigned threads = 1) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("build_kernel_matrix: empty sample set");
  if (!samples.data.all_finite())
    throw std::invalid_argument("build_kernel_matrix: non-finite sample entries");
  Matrix k(n, n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto xi = samples.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const double v = detail::kernel_eval_unchecked(spec, xi, samples.row(j));
      k(i, j) = v;
      k(j, i) = v;
    }
  });
  return KernelMatrix{std::move(k), spec, samples};
}

// K = D + W with diag(W) = 0.
inline std::pair<std::vector<double>, Matrix> split_diagonal(const Matrix& k) {
  const std::size_t n = k.rows();
  std::vector<double> diag(n);
  Matrix off = k;
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = k(i, i);
    off(i, i) = 0.0;
  }
  return {std::move(diag), std::move(off)};
}

inline std::pair<std::vector<double>, Matrix> split_diagonal(const KernelMatrix& k) {
  return split_diagonal(k.entries);
}

}  // namespace rkm
