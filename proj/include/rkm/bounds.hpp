#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "rkm/kernels.hpp"

namespace rkm {

// Absolute constants of the spectral-norm bounds. The defaults are
// empirical: C0 = 1 reproduces the polynomial-kernel envelope for
// standard-normal data up to calibration, delta = 1 matches the
// a = 3 log(n)/d threshold used in the Gaussian experiments, and
// c1_threshold / c0_lower are conservative choices for the small-a regime.
struct BoundConfig {
  double C0 = 1.0;
  double C0_refined = 1.0;
  double c0_lower = 0.5;      // lower-regime margin: norm >= c0_lower * n
  double c1_threshold = 0.01; // small-a regime: a < c1_threshold / d
  double delta = 1.0;         // upper-regime slack

  void validate() const {
    if (!(C0 > 0.0) || !(C0_refined > 0.0))
      throw std::invalid_argument("BoundConfig: C0 constants must be > 0");
    if (!(c0_lower > 0.0) || c0_lower > 1.0)
      throw std::invalid_argument("BoundConfig: c0_lower must be in (0, 1]");
    if (!(c1_threshold > 0.0))
      throw std::invalid_argument("BoundConfig: c1_threshold must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("BoundConfig: delta must be > 0");
  }
};

// C0^p |a|^p d^p n + 2^(p+1) |b|^p n. Overflow is returned as infinity.
inline double poly_bound(const BoundConfig& cfg, double a, double b, int p, std::size_t d,
                         std::size_t n) {
  cfg.validate();
  if (p < 1 || d < 1 || n < 1)
    throw std::invalid_argument("poly_bound: p, d, n must be >= 1");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double a_term = pow_int(cfg.C0 * std::abs(a) * dd, p) * dn;
  const double b_term = pow_int(2.0, p + 1) * pow_int(std::abs(b), p) * dn;
  return a_term + b_term;
}

// Sharper envelope C0^p |a|^p (d^p + d^(p/2) n) + 2^(p+1) n |b|^p.
inline double poly_bound_refined(const BoundConfig& cfg, double a, double b, int p,
                                 std::size_t d, std::size_t n) {
  cfg.validate();
  if (p < 1 || d < 1 || n < 1)
    throw std::invalid_argument("poly_bound_refined: p, d, n must be >= 1");
  const double dn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double a_fac = pow_int(cfg.C0_refined * std::abs(a), p);
  const double a_term = a_fac * (pow_int(dd, p) + std::pow(dd, 0.5 * p) * dn);
  const double b_term = pow_int(2.0, p + 1) * pow_int(std::abs(b), p) * dn;
  return a_term + b_term;
}

// Smallest a for which the O(1) Gaussian-kernel regime is asserted:
// (2 + delta) ln(n) / d.
inline double gaussian_upper_threshold(std::size_t d, std::size_t n, double delta) {
  if (n < 2) throw std::invalid_argument("gaussian_upper_threshold: n must be >= 2");
  if (d < 1) throw std::invalid_argument("gaussian_upper_threshold: d must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("gaussian_upper_threshold: delta must be > 0");
  return (2.0 + delta) * std::log(static_cast<double>(n)) / static_cast<double>(d);
}

enum class Regime {
  lower_theta_n,   // a < c1/d: norm is Theta(n) with high probability
  trivial_upper_n, // only the unconditional norm <= n bound applies
  upper_le_2,      // a >= (2+delta) ln(n)/d: norm <= 2 with high probability
};

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::lower_theta_n: return "lower-theta-n";
    case Regime::trivial_upper_n: return "trivial-le-n";
    case Regime::upper_le_2: return "upper-le-2";
  }
  return "?";
}

inline Regime regime_classify(const KernelSpec& spec, std::size_t d, std::size_t n,
                              const BoundConfig& cfg) {
  cfg.validate();
  if (spec.family != KernelFamily::gaussian)
    throw std::invalid_argument("regime_classify: gaussian kernel required");
  if (d < 1 || n < 1) throw std::invalid_argument("regime_classify: d, n must be >= 1");
  if (spec.a < cfg.c1_threshold / static_cast<double>(d)) return Regime::lower_theta_n;
  // an n = 1 matrix is [1]; the constant regime holds vacuously
  if (n == 1 || spec.a >= gaussian_upper_threshold(d, n, cfg.delta)) return Regime::upper_le_2;
  return Regime::trivial_upper_n;
}

}  // namespace rkm
