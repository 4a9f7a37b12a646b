#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "rcheat/baseline.hpp"

using namespace rcheat;

namespace {

constexpr double kGamma = 0.0071 / std::numbers::pi;

BareLadderBaths default_baths(double th = 1.0, double tc = 0.5) {
  BareLadderBaths b;
  b.t_hot = th;
  b.t_cold = tc;
  b.hot = {0.1, 10.0, kGamma};
  b.cold = {0.1, 10.0, kGamma};
  return b;
}

// Stationary populations from the kernel of the 3x3 rate matrix.
std::array<double, 3> nullspace_populations(const LadderRates& k) {
  Eigen::Matrix3d w = Eigen::Matrix3d::Zero();
  w(1, 0) = k.k01_cold;
  w(0, 1) = k.k10_cold;
  w(2, 1) = k.k12_hot;
  w(1, 2) = k.k21_hot;
  for (int i = 0; i < 3; ++i) w(i, i) = -w.col(i).sum();
  Eigen::FullPivLU<Eigen::Matrix3d> lu(w);
  const Eigen::Vector3d p = lu.kernel().col(0);
  const double s = p.sum();
  return {p(0) / s, p(1) / s, p(2) / s};
}

}  // namespace

TEST_CASE("rates follow the brownian density at the bare frequencies") {
  const std::array<double, 3> eps{0.0, 0.5, 1.0};
  const auto b = default_baths();
  const LadderRates k = ladder_rates(eps, b);
  CHECK(k.k01_cold / k.k10_cold == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(k.k01_cold / k.k10_cold == doctest::Approx(0.3679).epsilon(1e-4));
  CHECK(k.k12_hot / k.k21_hot == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));

  const double w = 0.5, o = 10.0, lam = 0.1;
  const double jb = 4 * kGamma * w * o * o * lam * lam /
                    (std::pow(w * w - o * o, 2) + std::pow(2 * std::numbers::pi * kGamma * o * w, 2));
  const double n = 1.0 / (std::exp(w / 0.5) - 1.0);
  CHECK(k.k01_cold == doctest::Approx(2 * std::numbers::pi * jb * n).epsilon(1e-13));
  CHECK(k.k10_cold == doctest::Approx(2 * std::numbers::pi * jb * (n + 1)).epsilon(1e-13));
  CHECK(k.max() == std::max({k.k01_cold, k.k10_cold, k.k12_hot, k.k21_hot}));

  CHECK(ladder_rates(eps, default_baths(1.0, 1e-3)).k01_cold < 1e-200);
  CHECK(ladder_rates(eps, default_baths(1.0, 1e-4)).k01_cold == 0.0);
  CHECK_THROWS_AS(ladder_rates({0.0, 1.2, 1.0}, b), std::invalid_argument);
}

TEST_CASE("closed-form populations") {
  CHECK_THROWS_AS(baseline_steady_populations(LadderRates{}), std::domain_error);
  const auto eq = baseline_steady_populations({1.0, 1.0, 1.0, 1.0});
  for (double p : eq) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto cut = baseline_steady_populations({0.3, 0.9, 1e-300, 0.5});
  CHECK(cut[2] < 1e-299);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lg(-4.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const LadderRates k{std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)),
                        std::pow(10.0, lg(rng))};
    const auto p = baseline_steady_populations(k);
    const auto q = nullspace_populations(k);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(p[j] - q[j]) <= 1e-12);
  }
}

TEST_CASE("current at the steady state vanishes") {
  const std::array<double, 3> eps{0.0, 0.5, 1.0};
  const LadderRates k = ladder_rates(eps, default_baths());
  const auto p = baseline_steady_populations(k);
  CHECK(std::abs(baseline_current(k, p, eps)) <= 1e-14);
  CHECK(baseline_current(k, {1.0, 0.0, 0.0}, eps) == doctest::Approx(k.k01_cold * 0.5));

  // p0 k01 = p1 k10 = k10 k21 k01 / psi
  const double psi = k.k01_cold * k.k12_hot + k.k01_cold * k.k21_hot + k.k10_cold * k.k21_hot;
  CHECK(p[0] * k.k01_cold == doctest::Approx(k.k10_cold * k.k21_hot * k.k01_cold / psi));
  CHECK(p[1] * k.k10_cold == doctest::Approx(k.k10_cold * k.k21_hot * k.k01_cold / psi));
}

TEST_CASE("zero current for random rate sets") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lg(-6.0, 2.0), u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const LadderRates k{std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)),
                        std::pow(10.0, lg(rng))};
    const double e1 = 0.05 + 0.9 * u(rng);
    const std::array<double, 3> eps{0.0, e1, 1.0};
    const auto p = baseline_steady_populations(k);
    CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0).epsilon(1e-15));
    for (double x : p) CHECK((x >= 0.0 && x <= 1.0));
    CHECK(std::abs(baseline_current(k, p, eps)) <= 1e-14 * k.max() * e1);
  }
}

TEST_CASE("equal temperatures give the Gibbs distribution") {
  for (double t : {0.2, 0.5, 1.0, 3.0}) {
    const std::array<double, 3> eps{0.0, 0.3, 1.0};
    const auto p = baseline_steady_populations(ladder_rates(eps, default_baths(t, t)));
    double z = 0.0;
    for (double e : eps) z += std::exp(-e / t);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - std::exp(-eps[i] / t) / z) <= 1e-12);
  }
}
