#include "rcheat/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rcheat {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Shared by both spectral families: `j_abs` is J(|omega|), `slope` is
// lim J(w)/w at the origin.
double half_fourier_rate(double omega, double temperature, double j_abs, double slope) {
  if (omega == 0.0) return kPi * slope * temperature;
  const double x = std::abs(omega) / temperature;
  const double n = 1.0 / std::expm1(x);
  return omega > 0.0 ? kPi * j_abs * (n + 1.0) : kPi * j_abs * n;
}

}  // namespace

void BrownianSpectrum::validate() const {
  require(lambda >= 0.0, "BrownianSpectrum: lambda must be >= 0");
  require(omega0 > 0.0, "BrownianSpectrum: omega0 must be > 0");
  require(gamma > 0.0, "BrownianSpectrum: gamma must be > 0");
}

double BrownianSpectrum::zero_frequency_slope() const {
  return 4.0 * gamma * lambda * lambda / (omega0 * omega0);
}

void OhmicSpectrum::validate() const {
  require(gamma > 0.0, "OhmicSpectrum: gamma must be > 0");
  require(cutoff > 0.0, "OhmicSpectrum: cutoff must be > 0");
}

std::string_view to_string(Contact c) { return c == Contact::L ? "L" : "R"; }

void BathSpec::validate() const {
  require(temperature > 0.0, "BathSpec: temperature must be > 0");
  residual.validate();
}

double j_brownian(double omega, const BrownianSpectrum& s) {
  const double w2 = omega * omega;
  const double o2 = s.omega0 * s.omega0;
  const double detuning = w2 - o2;
  const double width = 2.0 * kPi * s.gamma * s.omega0 * omega;
  return 4.0 * s.gamma * omega * o2 * s.lambda * s.lambda / (detuning * detuning + width * width);
}

double j_ohmic(double omega, const OhmicSpectrum& s) {
  return s.gamma * omega * std::exp(-std::abs(omega) / s.cutoff);
}

double bose_occupation(double omega, double temperature) {
  if (!(temperature > 0.0)) throw std::domain_error("bose_occupation: temperature must be > 0");
  if (omega == 0.0) throw std::domain_error("bose_occupation: omega == 0 is singular");
  return 1.0 / std::expm1(omega / temperature);
}

double rate_gamma(double omega, const BathSpec& bath) {
  return half_fourier_rate(omega, bath.temperature, j_ohmic(std::abs(omega), bath.residual),
                           bath.residual.zero_frequency_slope());
}

double rate_gamma(double omega, double temperature, const BrownianSpectrum& s) {
  return half_fourier_rate(omega, temperature, j_brownian(std::abs(omega), s),
                           s.zero_frequency_slope());
}

double log_rate_gamma(double omega, const BathSpec& bath) {
  const double t = bath.temperature;
  if (omega == 0.0) return std::log(kPi * bath.residual.gamma * t);
  const double w = std::abs(omega);
  const double x = w / t;
  const double log_j = std::log(kPi * bath.residual.gamma * w) - w / bath.residual.cutoff;
  // log(n+1) = -log(1 - e^-x), log n = -x - log(1 - e^-x)
  const double log_one_minus = std::log(-std::expm1(-x));
  return omega > 0.0 ? log_j - log_one_minus : log_j - x - log_one_minus;
}

}  // namespace rcheat
