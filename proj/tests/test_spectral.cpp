#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rcheat/spectral.hpp"

using namespace rcheat;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = 0.0071 / kPi;

BathSpec bath(double t, double gamma = kGamma, double cutoff = 1000.0) {
  return {t, {gamma, cutoff}, Contact::L};
}

}  // namespace

TEST_CASE("brownian density") {
  BrownianSpectrum s{0.01, 10.0, kGamma};
  CHECK(j_brownian(0.0, s) == 0.0);
  // At the peak the detuning vanishes: J = 4 g W^3 l^2 / (2 pi g W^2)^2.
  const double peak = s.lambda * s.lambda / (kPi * kPi * s.gamma * s.omega0);
  CHECK(j_brownian(10.0, s) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(peak == doctest::Approx(4.483e-4).epsilon(1e-3));

  const double w = 1e5;
  CHECK(j_brownian(w, s) == doctest::Approx(4 * s.gamma * 100 * 1e-4 / (w * w * w)).epsilon(1e-6));

  double best = 0.0, arg = 0.0;
  for (double x = 5.0; x <= 15.0; x += 0.01) {
    if (j_brownian(x, s) > best) {
      best = j_brownian(x, s);
      arg = x;
    }
  }
  CHECK(std::abs(arg - 10.0) <= 0.011);
}

TEST_CASE("ohmic density") {
  OhmicSpectrum s{kGamma, 1000.0};
  CHECK(j_ohmic(0.0, s) == 0.0);
  CHECK(j_ohmic(1.0, s) == doctest::Approx(2.2577e-3).epsilon(1e-4));
  CHECK(j_ohmic(1000.0, s) == doctest::Approx(kGamma * 1000.0 / std::numbers::e).epsilon(1e-14));
}

TEST_CASE("bose occupation") {
  CHECK(bose_occupation(1.0, 1.0) == doctest::Approx(0.58198).epsilon(1e-5));
  CHECK(bose_occupation(-1.0, 1.0) == doctest::Approx(-1.58198).epsilon(1e-5));
  CHECK(bose_occupation(800.0, 1.0) == 0.0);
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bose_occupation(1.0, 0.0), std::domain_error);
}

TEST_CASE("rate values") {
  CHECK(rate_gamma(0.0, bath(1.0)) == doctest::Approx(0.0071).epsilon(1e-14));
  CHECK(rate_gamma(1.0, bath(0.5)) / rate_gamma(-1.0, bath(0.5)) ==
        doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(rate_gamma(-1.0, bath(1e-3)) == 0.0);

  const double w = 0.3, t = 0.7;
  const double j = kGamma * w * std::exp(-w / 1000.0);
  const double n = 1.0 / (std::exp(w / t) - 1.0);
  CHECK(rate_gamma(w, bath(t)) == doctest::Approx(kPi * j * (n + 1)).epsilon(1e-13));
  CHECK(rate_gamma(-w, bath(t)) == doctest::Approx(kPi * j * n).epsilon(1e-13));
}

TEST_CASE("rate continuity at zero") {
  for (double t : {0.1, 0.5, 1.0, 7.0}) {
    const double g0 = rate_gamma(0.0, bath(t));
    CHECK(std::abs(rate_gamma(1e-8, bath(t)) - g0) <= 1e-4 * g0);
    CHECK(std::abs(rate_gamma(-1e-8, bath(t)) - g0) <= 1e-4 * g0);
  }
  BrownianSpectrum s{0.1, 10.0, kGamma};
  const double g0 = rate_gamma(0.0, 1.0, s);
  CHECK(g0 == doctest::Approx(kPi * 4 * kGamma * 0.01 / 100.0).epsilon(1e-14));
  CHECK(std::abs(rate_gamma(1e-8, 1.0, s) - g0) <= 1e-4 * g0);
}

TEST_CASE("rates are positive and satisfy detailed balance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lw(-3.0, 3.0), lt(-2.0, 1.0), lg(-4.0, 0.0);
  for (int i = 0; i < 2000; ++i) {
    const double t = std::pow(10.0, lt(rng));
    const double w = t * std::pow(10.0, lw(rng));
    const BathSpec b = bath(t, std::pow(10.0, lg(rng)), 1000.0);
    CHECK(rate_gamma(w, b) >= 0.0);
    CHECK(rate_gamma(-w, b) >= 0.0);
    const double log_ratio = log_rate_gamma(w, b) - log_rate_gamma(-w, b);
    CHECK(std::abs(log_ratio - w / t) <= 1e-12 * std::max(1.0, w / t));
  }
}

TEST_CASE("log rate agrees with rate where both are finite") {
  for (double w : {-5.0, -0.2, 0.0, 0.2, 5.0}) {
    const BathSpec b = bath(0.5);
    CHECK(std::exp(log_rate_gamma(w, b)) == doctest::Approx(rate_gamma(w, b)).epsilon(1e-12));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((BrownianSpectrum{-1.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((BrownianSpectrum{1.0, 0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OhmicSpectrum{0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((bath(0.0).validate()), std::invalid_argument);
  CHECK_NOTHROW(bath(1.0).validate());
  CHECK(to_string(Contact::L) == "L");
  CHECK(to_string(Contact::R) == "R");
}
