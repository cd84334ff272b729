#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "rkm/matrix.hpp"
#include "rkm/parallel.hpp"
#include "rkm/prng.hpp"

namespace rkm {

// All families are centered. The mixture draws the zero vector with
// probability 1/2 and a uniform point on the sphere of radius 2*sqrt(d)
// otherwise; it is the adversarial input for the Gaussian-kernel
// experiments.
enum class DistFamily {
  standard_normal,
  rademacher,
  uniform_sphere,
  bounded_uniform,
  zero_or_sphere_mixture,
};

inline const char* family_name(DistFamily f) {
  switch (f) {
    case DistFamily::standard_normal: return "normal";
    case DistFamily::rademacher: return "rademacher";
    case DistFamily::uniform_sphere: return "sphere";
    case DistFamily::bounded_uniform: return "bounded";
    case DistFamily::zero_or_sphere_mixture: return "mixture";
  }
  return "?";
}

struct DistributionSpec {
  DistFamily family = DistFamily::standard_normal;
  std::size_t dimension = 1;
  double radius = 1.0;      // uniform_sphere only
  double half_width = 1.0;  // bounded_uniform only

  static DistributionSpec standard_normal(std::size_t d) {
    check_dim(d);
    return {DistFamily::standard_normal, d, 0.0, 0.0};
  }
  static DistributionSpec rademacher(std::size_t d) {
    check_dim(d);
    return {DistFamily::rademacher, d, 0.0, 0.0};
  }
  static DistributionSpec uniform_sphere(std::size_t d, double radius) {
    check_dim(d);
    if (!(radius > 0.0)) throw std::invalid_argument("uniform_sphere: radius must be > 0");
    return {DistFamily::uniform_sphere, d, radius, 0.0};
  }
  static DistributionSpec bounded_uniform(std::size_t d, double half_width) {
    check_dim(d);
    if (!(half_width > 0.0))
      throw std::invalid_argument("bounded_uniform: half-width must be > 0");
    return {DistFamily::bounded_uniform, d, 0.0, half_width};
  }
  static DistributionSpec zero_or_sphere_mixture(std::size_t d) {
    check_dim(d);
    return {DistFamily::zero_or_sphere_mixture, d, 0.0, 0.0};
  }

  DistributionSpec with_dimension(std::size_t d) const {
    DistributionSpec out = *this;
    check_dim(d);
    out.dimension = d;
    return out;
  }

  void validate() const {
    check_dim(dimension);
    if (family == DistFamily::uniform_sphere && !(radius > 0.0))
      throw std::invalid_argument("uniform_sphere: radius must be > 0");
    if (family == DistFamily::bounded_uniform && !(half_width > 0.0))
      throw std::invalid_argument("bounded_uniform: half-width must be > 0");
  }

 private:
  static void check_dim(std::size_t d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  }
};

// n draws in rows; regenerating from (spec, seed, n) is bit-identical.
struct SampleSet {
  Matrix data;  // n x d, row i is the i-th draw
  DistributionSpec spec;
  std::uint64_t seed = 0;

  std::size_t size() const { return data.rows(); }
  std::size_t dim() const { return data.cols(); }
  std::span<const double> row(std::size_t i) const { return data.row(i); }
};

namespace detail {

inline void fill_sphere(std::span<double> row, double radius, Rng& rng) {
  double nrm = 0.0;
  do {
    for (double& v : row) v = rng.next_normal();
    nrm = norm2(row);
  } while (nrm < 1e-154);  // astronomically unlikely; keeps the scale finite
  scale(radius / nrm, row);
}

inline void fill_row(std::span<double> row, const DistributionSpec& spec, Rng& rng) {
  switch (spec.family) {
    case DistFamily::standard_normal:
      for (double& v : row) v = rng.next_normal();
      break;
    case DistFamily::rademacher:
      for (double& v : row) v = rng.next_sign();
      break;
    case DistFamily::uniform_sphere:
      fill_sphere(row, spec.radius, rng);
      break;
    case DistFamily::bounded_uniform:
      for (double& v : row) v = rng.next_uniform(-spec.half_width, spec.half_width);
      break;
    case DistFamily::zero_or_sphere_mixture:
      if (rng.next_unit() < 0.5) {
        for (double& v : row) v = 0.0;
      } else {
        fill_sphere(row, 2.0 * std::sqrt(static_cast<double>(row.size())), rng);
      }
      break;
  }
}

}  // namespace detail

// Row i is drawn from stream i of the seed, so the output does not depend on
// the degree of parallelism.
inline SampleSet sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed,
                        unsigned threads = 1) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Matrix data(n, spec.dimension);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(seed, i);
    detail::fill_row(data.row(i), spec, rng);
  });
  return SampleSet{std::move(data), spec, seed};
}

// Fraction of rows with ||x_i|| >= c * sqrt(d).
inline double empirical_norm_tail(const SampleSet& samples, double c) {
  if (samples.size() == 0) throw std::invalid_argument("empirical_norm_tail: empty sample set");
  if (!(c > 0.0)) throw std::invalid_argument("empirical_norm_tail: c must be > 0");
  const double threshold = c * std::sqrt(static_cast<double>(samples.dim()));
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (norm2(samples.row(i)) >= threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

}  // namespace rkm
