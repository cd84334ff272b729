#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rkm/kernels.hpp"
#include "rkm/matrix.hpp"
#include "rkm/prng.hpp"

namespace rkm {

struct SpectralResult {
  double spectral_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||K v - theta v|| for the returned Ritz pair
};

struct SpectralOptions {
  double tolerance = 1e-9;      // relative
  int max_iterations = 0;       // 0 -> 10 * n
  std::uint64_t start_seed = 0x5eedu;
};

// sqrt(sum of squares), Kahan-compensated.
inline double frobenius_norm(const Matrix& m) {
  double sum = 0.0, comp = 0.0;
  for (double v : m.data()) {
    const double term = v * v - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return std::sqrt(sum);
}

inline double frobenius_norm(const KernelMatrix& k) { return frobenius_norm(k.entries); }

namespace detail {

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) strictly
// below x, via the Sturm / LDL^T sign count.
inline int tridiag_count_below(std::span<const double> alpha, std::span<const double> beta,
                               double x) {
  const double tiny = std::numeric_limits<double>::min();
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double off = i == 0 ? 0.0 : beta[i - 1];
    d = alpha[i] - x - (i == 0 ? 0.0 : off * off / d);
    if (std::abs(d) < tiny) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

// Extreme eigenvalues of the tridiagonal by bisection on the Sturm count.
inline std::pair<double, double> tridiag_extremes(std::span<const double> alpha,
                                                  std::span<const double> beta) {
  const int m = static_cast<int>(alpha.size());
  double lo = alpha[0], hi = alpha[0];
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                     (i + 1 < m ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  const double span = hi - lo;
  const double width_tol =
      std::max(4.0 * std::numeric_limits<double>::epsilon() *
                   std::max({std::abs(lo), std::abs(hi), 1e-300}),
               1e-300);
  auto bisect = [&](bool largest) {
    double a = lo, b = hi + span * 1e-12 + width_tol;
    for (int it = 0; it < 200 && b - a > width_tol; ++it) {
      const double mid = 0.5 * (a + b);
      const int below = tridiag_count_below(alpha, beta, mid);
      const bool go_left = largest ? (below == m) : (below >= 1);
      if (go_left)
        b = mid;
      else
        a = mid;
    }
    return 0.5 * (a + b);
  };
  return {bisect(false), bisect(true)};
}

// Unit eigenvector of the tridiagonal for eigenvalue theta, by inverse
// iteration. Pivots are floored rather than pivoted; any growth from a
// near-singular shift lands along the wanted eigenvector.
inline std::vector<double> tridiag_eigvec(std::span<const double> alpha,
                                          std::span<const double> beta, double theta) {
  const std::size_t m = alpha.size();
  if (m == 1) return {1.0};
  std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
  double scale_bound = 1.0;
  for (std::size_t i = 0; i < m; ++i) scale_bound = std::max(scale_bound, std::abs(alpha[i]));
  for (std::size_t i = 0; i + 1 < m; ++i) scale_bound = std::max(scale_bound, std::abs(beta[i]));
  const double pivot_floor = scale_bound * std::numeric_limits<double>::epsilon() * 1e-3;
  auto floored = [&](double piv) {
    return std::abs(piv) < pivot_floor ? (piv < 0 ? -pivot_floor : pivot_floor) : piv;
  };

  std::vector<double> dd(m), rhs(m);
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i < m; ++i) {
      dd[i] = alpha[i] - theta;
      rhs[i] = v[i];
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double l = beta[i] / floored(dd[i]);
      dd[i + 1] -= l * beta[i];
      rhs[i + 1] -= l * rhs[i];
    }
    v[m - 1] = rhs[m - 1] / floored(dd[m - 1]);
    for (std::size_t ii = m - 1; ii-- > 0;)
      v[ii] = (rhs[ii] - beta[ii] * v[ii + 1]) / floored(dd[ii]);
    const double nrm = norm2(v);
    if (nrm == 0.0 || !std::isfinite(nrm)) {
      std::fill(v.begin(), v.end(), 0.0);
      v[m - 1] = 1.0;
      continue;
    }
    scale(1.0 / nrm, v);
  }
  return v;
}

}  // namespace detail

// Largest-magnitude eigenvalue of a symmetric matrix by Lanczos with full
// reorthogonalization; deterministic given the start seed. Tracks both ends
// of the Ritz spectrum so indefinite matrices report max|lambda|.
// Non-convergence is reported in the result, not thrown.
inline SpectralResult spectral_norm(const Matrix& k, const SpectralOptions& opt = {}) {
  const std::size_t n = k.rows();
  if (n == 0 || k.cols() != n) throw std::invalid_argument("spectral_norm: matrix must be square");
  if (!(opt.tolerance > 0.0)) throw std::invalid_argument("spectral_norm: tolerance must be > 0");
  if (!k.all_finite()) throw std::invalid_argument("spectral_norm: non-finite matrix entry");

  if (n == 1) return {std::abs(k(0, 0)), 0, true, 0.0};

  const std::size_t cap = std::min<std::size_t>(
      n, opt.max_iterations > 0 ? static_cast<std::size_t>(opt.max_iterations) : 10 * n);

  // deterministic unit start vector
  std::vector<std::vector<double>> basis;
  {
    Rng rng(opt.start_seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_normal();
    scale(1.0 / norm2(v), v);
    basis.push_back(std::move(v));
  }

  std::vector<double> alpha, beta;
  std::vector<double> w(n);
  const double eps = std::numeric_limits<double>::epsilon();
  bool exhausted = false;
  std::size_t steps = 0;

  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j < cap; ++j) {
    steps = j + 1;
    matvec(k, basis[j], w);
    const double a = dot(w, basis[j]);
    alpha.push_back(a);
    axpy(-a, basis[j], w);
    if (j > 0) axpy(-beta[j - 1], basis[j - 1], w);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) axpy(-dot(w, q), q, w);
    const double b = norm2(w);

    std::tie(lo, hi) = detail::tridiag_extremes(alpha, beta);
    const double scale_t = std::max(std::abs(lo), std::abs(hi));

    if (b <= 16.0 * eps * std::max(scale_t, 1e-300) * static_cast<double>(n)) {
      exhausted = true;  // invariant subspace: Ritz values are exact
      break;
    }

    // residual estimate beta * |bottom of Ritz vector|, for both ends so the
    // non-dominant extreme is also located to tolerance * scale
    {
      const auto s_hi = detail::tridiag_eigvec(alpha, beta, hi);
      const auto s_lo = detail::tridiag_eigvec(alpha, beta, lo);
      const double res_hi = b * std::abs(s_hi.back());
      const double res_lo = b * std::abs(s_lo.back());
      if (std::max(res_hi, res_lo) <= opt.tolerance * std::max(scale_t, 1e-300)) break;
    }
    if (j + 1 == cap) break;
    beta.push_back(b);
    basis.emplace_back(w);
    scale(1.0 / b, basis.back());
  }

  // assemble the Ritz pair for the dominant-magnitude end
  const double theta_t = std::abs(hi) >= std::abs(lo) ? hi : lo;
  const auto s = detail::tridiag_eigvec(alpha, beta, theta_t);
  std::vector<double> ritz(n, 0.0);
  for (std::size_t i = 0; i < s.size() && i < basis.size(); ++i) axpy(s[i], basis[i], ritz);
  const double rn = norm2(ritz);
  double theta = theta_t;
  double residual = 0.0;
  if (rn > 0.0) {
    scale(1.0 / rn, ritz);
    matvec(k, ritz, w);
    theta = dot(w, ritz);  // Rayleigh quotient refinement
    axpy(-theta, ritz, w);
    residual = norm2(w);
  }
  double norm_est = std::abs(theta);
  // the other tridiagonal end can exceed the refined Rayleigh value
  norm_est = std::max(norm_est, std::max(std::abs(lo), std::abs(hi)));
  const bool converged =
      exhausted || residual <= opt.tolerance * std::max(norm_est, 1e-300);
  return {norm_est, static_cast<int>(steps), converged, residual};
}

inline SpectralResult spectral_norm(const KernelMatrix& k, const SpectralOptions& opt = {}) {
  return spectral_norm(k.entries, opt);
}

struct JacobiResult {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]
  double offdiag_norm = 0.0;        // Frobenius mass left off the diagonal
  int sweeps = 0;
};

// Cyclic Jacobi diagonalization of a symmetric matrix. Classical, O(n^3)
// per sweep; intended as the small-n oracle, not a production path.
inline JacobiResult jacobi_diagonalize(Matrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n)
    throw std::invalid_argument("jacobi_diagonalize: matrix must be square");
  if (!a.all_finite()) throw std::invalid_argument("jacobi_diagonalize: non-finite entry");

  Matrix v = Matrix::identity(n);
  const double fro = frobenius_norm(a);
  auto offdiag = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  double off = offdiag();
  const double target = std::max(1e-14 * fro, 1e-300);
  while (off > target && sweep < max_sweeps) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t kk = 0; kk < n; ++kk) {
          const double akp = a(kk, p), akq = a(kk, q);
          a(kk, p) = c * akp - s * akq;
          a(kk, q) = s * akp + c * akq;
        }
        for (std::size_t kk = 0; kk < n; ++kk) {
          const double apk = a(p, kk), aqk = a(q, kk);
          a(p, kk) = c * apk - s * aqk;
          a(q, kk) = s * apk + c * aqk;
        }
        for (std::size_t kk = 0; kk < n; ++kk) {
          const double vkp = v(kk, p), vkq = v(kk, q);
          v(kk, p) = c * vkp - s * vkq;
          v(kk, q) = s * vkp + c * vkq;
        }
      }
    }
    off = offdiag();
  }

  JacobiResult res;
  res.offdiag_norm = off;
  res.sweeps = sweep;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  res.eigenvalues.resize(n);
  res.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, j) = v(i, order[j]);
  }
  return res;
}

// All eigenvalues of a small symmetric matrix, sorted descending. Test
// oracle; deliberately capped at n <= 64.
inline std::vector<double> dense_eig_oracle(const Matrix& k) {
  if (k.rows() > 64) throw std::invalid_argument("dense_eig_oracle: n must be <= 64");
  return jacobi_diagonalize(k).eigenvalues;
}

}  // namespace rkm
