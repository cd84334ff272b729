#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rkm/kernels.hpp"
#include "rkm/matrix.hpp"

namespace rkm {

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// alpha = (K + lambda I)^{-1} y over the support set.
struct RidgeModel {
  double lambda = 0.0;
  std::vector<double> alpha;
  SampleSet support;
  KernelSpec spec;
};

namespace detail {

constexpr double kFitTolerance = 1e-10;  // relative residual guaranteed by fit

// In-place lower Cholesky; returns false on a non-positive pivot.
inline bool cholesky_inplace(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  return true;
}

inline void cholesky_solve(const Matrix& l, std::span<const double> b, std::span<double> x) {
  const std::size_t n = l.rows();
  // L z = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  // L^T x = z
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
}

// out = (K + lambda I) v
inline void shifted_matvec(const Matrix& k, double lambda, std::span<const double> v,
                           std::span<double> out) {
  matvec(k, v, out);
  axpy(lambda, v, out);
}

// MINRES for the symmetric (possibly indefinite) system (K + lambda I) x = y.
// Plain three-term Lanczos with a Givens QR of the tridiagonal.
inline std::vector<double> minres(const Matrix& k, double lambda, std::span<const double> y,
                                  double rel_tol, std::size_t max_iters) {
  const std::size_t n = k.rows();
  std::vector<double> x(n, 0.0);
  const double ynorm = norm2(y);
  if (ynorm == 0.0) return x;

  std::vector<double> v_prev(n, 0.0), v(y.begin(), y.end()), p(n);
  double beta = ynorm;
  scale(1.0 / beta, v);

  double c_prev2 = 1.0, s_prev2 = 0.0;  // rotation k-2
  double c_prev1 = 1.0, s_prev1 = 0.0;  // rotation k-1
  std::vector<double> d_prev1(n, 0.0), d_prev2(n, 0.0);
  double phi_bar = beta;

  std::vector<double> best_x = x;
  double best_res = ynorm;

  for (std::size_t it = 0; it < max_iters; ++it) {
    shifted_matvec(k, lambda, v, p);
    axpy(-beta, v_prev, p);
    const double alpha = dot(p, v);
    axpy(-alpha, v, p);
    const double beta_next = norm2(p);

    // apply the two previous rotations to the new column (beta, alpha)
    const double eps_k = s_prev2 * beta;
    const double delta_tmp = c_prev2 * beta;
    const double delta_k = c_prev1 * delta_tmp + s_prev1 * alpha;
    const double gamma_tmp = -s_prev1 * delta_tmp + c_prev1 * alpha;

    // new rotation annihilating beta_next
    const double gamma_k = std::hypot(gamma_tmp, beta_next);
    if (gamma_k == 0.0) break;  // singular leading block; keep best iterate
    const double c_k = gamma_tmp / gamma_k;
    const double s_k = beta_next / gamma_k;

    const double phi = c_k * phi_bar;
    phi_bar = -s_k * phi_bar;

    // direction d_k = (v - delta_k d_{k-1} - eps_k d_{k-2}) / gamma_k
    std::vector<double> d = v;
    axpy(-delta_k, d_prev1, d);
    axpy(-eps_k, d_prev2, d);
    scale(1.0 / gamma_k, d);
    axpy(phi, d, x);
    d_prev2 = std::move(d_prev1);
    d_prev1 = std::move(d);

    const double rel = std::abs(phi_bar) / ynorm;
    if (rel < best_res) {
      best_res = rel;
      best_x = x;
    }
    if (rel <= rel_tol) return x;
    if (beta_next == 0.0) break;  // Krylov space exhausted

    v_prev = v;
    v = p;
    scale(1.0 / beta_next, v);
    beta = beta_next;
    c_prev2 = c_prev1;
    s_prev2 = s_prev1;
    c_prev1 = c_k;
    s_prev1 = s_k;
  }
  return best_x;
}

}  // namespace detail

// Solves (K + lambda I) alpha = y. Cholesky with iterative refinement when
// the shifted matrix is positive definite, MINRES otherwise. Guarantees a
// relative residual <= 1e-10 or throws SolverFailure.
inline RidgeModel fit(const KernelMatrix& k, std::span<const double> y, double lambda) {
  const std::size_t n = k.size();
  if (!(lambda > 0.0)) throw std::invalid_argument("fit: lambda must be > 0");
  if (y.size() != n) throw std::invalid_argument("fit: label length must match sample count");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite label");

  RidgeModel model{lambda, std::vector<double>(n, 0.0), k.source, k.spec};
  const double ynorm = norm2(y);
  if (ynorm == 0.0) return model;  // homogeneous system

  std::vector<double>& x = model.alpha;
  std::vector<double> r(n), correction(n);
  auto residual_norm = [&] {
    detail::shifted_matvec(k.entries, lambda, x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - r[i];
    return norm2(r);
  };

  Matrix chol = k.entries;
  for (std::size_t i = 0; i < n; ++i) chol(i, i) += lambda;
  if (detail::cholesky_inplace(chol)) {
    detail::cholesky_solve(chol, y, x);
    for (int refine = 0; refine < 4; ++refine) {
      if (residual_norm() <= 0.01 * detail::kFitTolerance * ynorm) break;
      detail::cholesky_solve(chol, r, correction);
      axpy(1.0, correction, x);
    }
  }

  double res = residual_norm();
  if (res > detail::kFitTolerance * ynorm) {
    // indefinite shift or refinement stall
    x = detail::minres(k.entries, lambda, y, 0.01 * detail::kFitTolerance, 50 * n + 100);
    res = residual_norm();
  }
  if (res > detail::kFitTolerance * ynorm)
    throw SolverFailure("fit: solver stalled above residual tolerance", res / ynorm);
  return model;
}

inline RidgeModel fit(const SampleSet& samples, std::span<const double> y,
                      const KernelSpec& spec, double lambda, unsigned threads = 1) {
  return fit(build_kernel_matrix(samples, spec, threads), y, lambda);
}

// f(x) = sum_i alpha_i kappa(x, x_i)
inline double predict(const RidgeModel& model, std::span<const double> x) {
  if (x.size() != model.support.dim())
    throw std::invalid_argument("predict: dimension mismatch");
  if (!detail::all_finite(x)) throw std::invalid_argument("predict: non-finite input");
  double s = 0.0;
  for (std::size_t i = 0; i < model.support.size(); ++i)
    s += model.alpha[i] * detail::kernel_eval_unchecked(model.spec, x, model.support.row(i));
  return s;
}

}  // namespace rkm
