#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rkm/bounds.hpp"
#include "rkm/kernels.hpp"
#include "rkm/krr.hpp"
#include "rkm/matrix.hpp"
#include "rkm/prng.hpp"

namespace rkm {

enum class NoiseFamily { uniform_inf, gaussian_iid, laplace_iid, explicit_vector };

// uniform_inf draws every coordinate uniformly from [-beta, beta], so the
// released vector always satisfies ||e||_inf <= beta.
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::uniform_inf;
  double magnitude = 0.0;       // beta | sigma | scale
  std::vector<double> values;   // explicit_vector only
  std::uint64_t seed = 0;

  static NoiseSpec uniform_inf(double beta, std::uint64_t seed) {
    check_nonneg(beta);
    return {NoiseFamily::uniform_inf, beta, {}, seed};
  }
  static NoiseSpec gaussian_iid(double sigma, std::uint64_t seed) {
    check_nonneg(sigma);
    return {NoiseFamily::gaussian_iid, sigma, {}, seed};
  }
  static NoiseSpec laplace_iid(double scale, std::uint64_t seed) {
    check_nonneg(scale);
    return {NoiseFamily::laplace_iid, scale, {}, seed};
  }
  static NoiseSpec explicit_vector(std::vector<double> e) {
    return {NoiseFamily::explicit_vector, 0.0, std::move(e), 0};
  }

 private:
  static void check_nonneg(double v) {
    if (!(v >= 0.0)) throw std::invalid_argument("noise magnitude must be >= 0");
  }
};

inline std::vector<double> draw_noise(const NoiseSpec& noise, std::size_t n) {
  std::vector<double> e(n, 0.0);
  Rng rng(noise.seed);
  switch (noise.family) {
    case NoiseFamily::uniform_inf:
      for (double& v : e) v = noise.magnitude * (2.0 * rng.next_unit() - 1.0);
      break;
    case NoiseFamily::gaussian_iid:
      for (double& v : e) v = noise.magnitude * rng.next_normal();
      break;
    case NoiseFamily::laplace_iid:
      if (noise.magnitude > 0.0)
        for (double& v : e) v = rng.next_laplace(noise.magnitude);
      break;
    case NoiseFamily::explicit_vector:
      if (noise.values.size() != n)
        throw std::invalid_argument("explicit noise vector has wrong length");
      e = noise.values;
      break;
  }
  return e;
}

// alpha_tilde = alpha* + e; the noisy release the attacker observes.
inline std::vector<double> release_noisy(const RidgeModel& model, const NoiseSpec& noise) {
  std::vector<double> out = model.alpha;
  const std::vector<double> e = draw_noise(noise, out.size());
  axpy(1.0, e, out);
  return out;
}

// z = (K + lambda I) alpha_tilde; entry < 1/2 decodes to 0, otherwise 1.
// One matrix-vector product; building K dominates the attack's cost.
inline std::vector<int> reconstruct(const Matrix& k, double lambda,
                                    std::span<const double> alpha_tilde) {
  if (!(lambda > 0.0)) throw std::invalid_argument("reconstruct: lambda must be > 0");
  if (alpha_tilde.size() != k.rows())
    throw std::invalid_argument("reconstruct: coefficient length mismatch");
  std::vector<double> z(k.rows());
  detail::shifted_matvec(k, lambda, alpha_tilde, z);
  std::vector<int> y_hat(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) y_hat[i] = z[i] < 0.5 ? 0 : 1;
  return y_hat;
}

inline std::vector<int> reconstruct(const KernelMatrix& k, double lambda,
                                    std::span<const double> alpha_tilde) {
  return reconstruct(k.entries, lambda, alpha_tilde);
}

struct AttackOutcome {
  std::vector<int> y_hat;
  std::size_t hamming = 0;
  double recovered_fraction = 0.0;
  std::optional<double> lemma_bound;  // 4 (||K|| + lambda)^2 beta^2 n when beta is known
  std::size_t theta = 0;              // reconstruction radius achieved; equals hamming
};

inline AttackOutcome score(std::span<const int> y, std::span<const int> y_hat, double k_norm,
                           double lambda, std::optional<double> beta = std::nullopt) {
  if (y.size() != y_hat.size()) throw std::invalid_argument("score: length mismatch");
  if (y.empty()) throw std::invalid_argument("score: empty vectors");
  for (std::size_t i = 0; i < y.size(); ++i)
    if ((y[i] != 0 && y[i] != 1) || (y_hat[i] != 0 && y_hat[i] != 1))
      throw std::invalid_argument("score: entries must be 0 or 1");
  AttackOutcome out;
  out.y_hat.assign(y_hat.begin(), y_hat.end());
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != y_hat[i]) ++out.hamming;
  const double n = static_cast<double>(y.size());
  out.recovered_fraction = 1.0 - static_cast<double>(out.hamming) / n;
  out.theta = out.hamming;
  if (beta) {
    const double m = (k_norm + lambda) * *beta;
    out.lemma_bound = 4.0 * m * m * n;
  }
  return out;
}

// Per-coordinate noise level below which the attack recovers 1 - o(1) of y:
// safety / (poly bound + lambda) for polynomial kernels and
// safety / (2 + lambda) for Gaussian kernels in the constant-norm regime.
inline double noise_threshold(const KernelSpec& kernel, std::size_t d, std::size_t n,
                              double lambda, const BoundConfig& cfg, double safety = 0.1) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("noise_threshold: lambda must be >= 0");
  if (!(safety > 0.0)) throw std::invalid_argument("noise_threshold: safety must be > 0");
  switch (kernel.family) {
    case KernelFamily::polynomial:
      return safety / (poly_bound(cfg, kernel.a, kernel.b, kernel.degree, d, n) + lambda);
    case KernelFamily::gaussian:
      return safety / (2.0 + lambda);
    case KernelFamily::laplacian:
      throw std::invalid_argument("noise_threshold: no bound available for laplacian kernel");
  }
  return 0.0;
}

}  // namespace rkm
