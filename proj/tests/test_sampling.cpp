#include <cmath>
#include <random>

#include "common.hpp"
#include "doctest.h"
#include "rkm/rkm.hpp"

using namespace rkm;

TEST_CASE("sample is bit-identical for a fixed (spec, n, seed)") {
  const auto spec = DistributionSpec::standard_normal(16);
  const SampleSet a = sample(spec, 10, 42);
  const SampleSet b = sample(spec, 10, 42);
  REQUIRE(a.data.rows() == 10);
  for (std::size_t i = 0; i < a.data.data().size(); ++i)
    CHECK(a.data.data()[i] == b.data.data()[i]);

  const SampleSet c = sample(spec, 10, 43);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.data.data().size(); ++i)
    any_diff |= (a.data.data()[i] != c.data.data()[i]);
  CHECK(any_diff);
}

TEST_CASE("sample is independent of the thread count") {
  const auto spec = DistributionSpec::zero_or_sphere_mixture(12);
  const SampleSet serial = sample(spec, 64, 7, 1);
  const SampleSet parallel = sample(spec, 64, 7, 4);
  for (std::size_t i = 0; i < serial.data.data().size(); ++i)
    CHECK(serial.data.data()[i] == parallel.data.data()[i]);
}

TEST_CASE("rademacher draws take values in {-1, +1}") {
  const SampleSet s = sample(DistributionSpec::rademacher(3), 2, 99);
  for (double v : s.data.data()) CHECK((v == 1.0 || v == -1.0));
}

TEST_CASE("sphere draws sit on the sphere") {
  const double radius = 2.0 * std::sqrt(100.0);
  const SampleSet s = sample(DistributionSpec::uniform_sphere(100, radius), 5, 3);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(norm2(s.row(i)) == doctest::Approx(20.0).epsilon(1e-10));

  const SampleSet t = sample(DistributionSpec::uniform_sphere(13, 3.7), 50, 4);
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(norm2(t.row(i)) == doctest::Approx(3.7).epsilon(1e-10));
}

TEST_CASE("bounded uniform stays inside the box") {
  const SampleSet s = sample(DistributionSpec::bounded_uniform(8, 2.5), 200, 5);
  for (double v : s.data.data()) CHECK(std::abs(v) <= 2.5);
}

TEST_CASE("componentwise mean of many draws is near zero") {
  const std::size_t n = 100000, d = 8;
  const double budget = 3.0 * std::sqrt(static_cast<double>(d)) / std::sqrt(static_cast<double>(n));
  for (auto spec : {DistributionSpec::standard_normal(d), DistributionSpec::rademacher(d)}) {
    const SampleSet s = sample(spec, n, 11);
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(1.0 / n, s.row(i), mean);
    CHECK(norm2(mean) <= budget);
  }
}

TEST_CASE("mixture draws the zero vector about half the time") {
  const SampleSet s = sample(DistributionSpec::zero_or_sphere_mixture(10), 10000, 21);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (norm2(s.row(i)) == 0.0) ++zeros;
  const double freq = static_cast<double>(zeros) / 10000.0;
  CHECK(freq >= 0.47);
  CHECK(freq <= 0.53);
}

TEST_CASE("norm tail of standard normal draws is far below the threshold rate") {
  // Oracle: direct Monte-Carlo estimate of Pr[chi_100 >= 2 sqrt(100)] using
  // the standard library generator, independent of rkm's sampling path.
  std::mt19937_64 gen(1234);
  std::normal_distribution<double> normal;
  std::size_t oracle_hits = 0;
  const std::size_t oracle_n = 10000;
  for (std::size_t i = 0; i < oracle_n; ++i) {
    double sq = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double z = normal(gen);
      sq += z * z;
    }
    if (std::sqrt(sq) >= 20.0) ++oracle_hits;
  }
  CHECK(static_cast<double>(oracle_hits) / oracle_n <= 1e-3);

  const SampleSet s = sample(DistributionSpec::standard_normal(100), 10000, 6);
  CHECK(empirical_norm_tail(s, 2.0) <= 1e-3);
}

TEST_CASE("norm tail edge cases") {
  const std::size_t d = 64;
  const SampleSet sphere =
      sample(DistributionSpec::uniform_sphere(d, std::sqrt(static_cast<double>(d))), 100, 8);
  CHECK(empirical_norm_tail(sphere, 2.0) == 0.0);

  const SampleSet mix = sample(DistributionSpec::zero_or_sphere_mixture(100), 1000, 9);
  const double frac = empirical_norm_tail(mix, 1.0);
  CHECK(frac >= 0.45);
  CHECK(frac <= 0.55);

  // all sphere norms equal sqrt(d); any threshold below that catches them all
  CHECK(empirical_norm_tail(sphere, 0.99) == 1.0);
}

TEST_CASE("sampling rejects bad arguments") {
  CHECK_THROWS_AS(sample(DistributionSpec::standard_normal(4), 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::standard_normal(0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::uniform_sphere(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::uniform_sphere(4, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistributionSpec::bounded_uniform(4, 0.0), std::invalid_argument);
  const SampleSet s = sample(DistributionSpec::standard_normal(4), 3, 1);
  CHECK_THROWS_AS(empirical_norm_tail(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_norm_tail(s, -2.0), std::invalid_argument);
}
