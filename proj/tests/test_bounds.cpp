#include <cmath>

#include "common.hpp"
#include "doctest.h"
#include "rkm/rkm.hpp"

using namespace rkm;

TEST_CASE("poly_bound hand values") {
  BoundConfig cfg;  // C0 = 1
  CHECK(poly_bound(cfg, 1, 0, 1, 10, 5) == doctest::Approx(50.0));
  CHECK(poly_bound(cfg, 0, 1, 2, 37, 3) == doctest::Approx(24.0));
  CHECK(poly_bound(cfg, 1, 1, 4, 100, 100) == doctest::Approx(10000003200.0));
}

TEST_CASE("poly_bound_refined hand values") {
  BoundConfig cfg;
  CHECK(poly_bound_refined(cfg, 1, 0, 2, 4, 10) == doctest::Approx(56.0));
  CHECK(poly_bound_refined(cfg, 0, 1, 1, 12, 7) == doctest::Approx(28.0));
  CHECK(poly_bound_refined(cfg, 1, 0, 2, 1, 1) == doctest::Approx(2.0));
}

TEST_CASE("poly_bound validation and overflow") {
  BoundConfig cfg;
  CHECK_THROWS_AS(poly_bound(cfg, 1, 1, 0, 10, 10), std::invalid_argument);
  CHECK_THROWS_AS(poly_bound(cfg, 1, 1, 1, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(poly_bound(cfg, 1, 1, 1, 10, 0), std::invalid_argument);
  CHECK(std::isinf(poly_bound(cfg, 1e200, 0, 4, 1000, 1000)));
}

TEST_CASE("poly_bound is monotone in every argument") {
  BoundConfig cfg;
  cfg.C0 = 1.0;
  for (double a : {1.0, 2.0})
    for (double b : {0.5, 1.5})
      for (std::size_t d : {2u, 5u, 9u})
        for (std::size_t n : {1u, 6u, 40u})
          for (int p : {1, 2, 3}) {
            const double base = poly_bound(cfg, a, b, p, d, n);
            CHECK(poly_bound(cfg, a + 0.5, b, p, d, n) >= base);
            CHECK(poly_bound(cfg, a, b + 0.5, p, d, n) >= base);
            CHECK(poly_bound(cfg, a, b, p, d + 1, n) >= base);
            CHECK(poly_bound(cfg, a, b, p, d, n + 1) >= base);
            if (cfg.C0 * a * static_cast<double>(d) >= 1.0 && b >= 1.0)
              CHECK(poly_bound(cfg, a, b, p + 1, d, n) >= base);
          }
}

TEST_CASE("refined bound never exceeds the basic bound when 2 <= d <= n") {
  // at d = 1 the refined a-term is 1 + n > n, so d >= 2 is required
  BoundConfig cfg;  // C0 = C0_refined = 1
  for (std::size_t d : {2u, 3u, 8u})
    for (std::size_t n : {8u, 20u, 100u})
      for (int p : {1, 2, 4})
        for (double a : {0.5, 1.0, 3.0})
          for (double b : {0.0, 1.0}) {
            REQUIRE(d <= n);
            CHECK(poly_bound_refined(cfg, a, b, p, d, n) <=
                  poly_bound(cfg, a, b, p, d, n) * (1.0 + 1e-12));
          }
}

TEST_CASE("gaussian upper threshold") {
  CHECK(gaussian_upper_threshold(100, 100, 1.0) ==
        doctest::Approx(0.13815510557964274).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_upper_threshold(100, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_upper_threshold(0, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_upper_threshold(10, 10, 0.0), std::invalid_argument);

  // algebraic identity: threshold * d / ln(n) == 2 + delta
  for (std::size_t d : {3u, 50u, 1000u})
    for (std::size_t n : {2u, 64u, 4096u})
      for (double delta : {0.1, 1.0, 5.0}) {
        const double t = gaussian_upper_threshold(d, n, delta);
        CHECK(t * static_cast<double>(d) / std::log(static_cast<double>(n)) ==
              doctest::Approx(2.0 + delta).epsilon(1e-12));
      }

  // monotone decreasing toward the delta -> 0 limit
  const double t1 = gaussian_upper_threshold(100, 50, 1.0);
  const double t2 = gaussian_upper_threshold(100, 50, 0.5);
  const double t3 = gaussian_upper_threshold(100, 50, 0.01);
  CHECK(t1 > t2);
  CHECK(t2 > t3);
  CHECK(t3 > 2.0 * std::log(50.0) / 100.0);
}

TEST_CASE("regime classification") {
  BoundConfig cfg;  // c1 = 0.01, delta = 1
  const std::size_t d = 100, n = 100;
  CHECK(regime_classify(KernelSpec::gaussian(0.001 / d), d, n, cfg) == Regime::lower_theta_n);
  const double at = 3.0 * std::log(100.0) / 100.0;
  CHECK(regime_classify(KernelSpec::gaussian(at), d, n, cfg) == Regime::upper_le_2);
  CHECK(regime_classify(KernelSpec::gaussian(1.0 / d), d, n, cfg) == Regime::trivial_upper_n);
  CHECK_THROWS_AS(regime_classify(KernelSpec::polynomial(1, 1, 2), d, n, cfg),
                  std::invalid_argument);
}

TEST_CASE("regimes are disjoint whenever c1 < (2 + delta) ln(n)") {
  BoundConfig cfg;
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % 300);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 3000);
    REQUIRE(cfg.c1_threshold < (2.0 + cfg.delta) * std::log(static_cast<double>(n)));
    const double a = std::exp(rng.next_uniform(-10.0, 2.0));
    const Regime r = regime_classify(KernelSpec::gaussian(a), d, n, cfg);
    const double lower_cut = cfg.c1_threshold / static_cast<double>(d);
    const double upper_cut = gaussian_upper_threshold(d, n, cfg.delta);
    if (r == Regime::lower_theta_n) CHECK(a < lower_cut);
    if (r == Regime::upper_le_2) CHECK(a >= upper_cut);
    if (r == Regime::trivial_upper_n) {
      CHECK(a >= lower_cut);
      CHECK(a < upper_cut);
    }
  }
}

TEST_CASE("bound config validation") {
  BoundConfig bad;
  bad.C0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = BoundConfig{};
  bad.delta = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = BoundConfig{};
  bad.c0_lower = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_NOTHROW(BoundConfig{}.validate());
}
