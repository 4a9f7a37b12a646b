#include "rcheat/baseline.hpp"

#include <algorithm>
#include <stdexcept>

namespace rcheat {

double LadderRates::max() const { return std::max({k01_cold, k10_cold, k12_hot, k21_hot}); }

LadderRates ladder_rates(const std::array<double, 3>& eps, const BareLadderBaths& baths) {
  if (!(eps[0] <= eps[1] && eps[1] <= eps[2]))
    throw std::invalid_argument("ladder_rates: levels must be ordered eps0 <= eps1 <= eps2");
  baths.hot.validate();
  baths.cold.validate();
  if (!(baths.t_hot > 0.0) || !(baths.t_cold > 0.0))
    throw std::invalid_argument("ladder_rates: temperatures must be > 0");
  const double w10 = eps[1] - eps[0];
  const double w21 = eps[2] - eps[1];
  // Each R-tensor term pairs with its conjugate, giving twice the one-sided rate.
  LadderRates k;
  k.k01_cold = 2.0 * rate_gamma(-w10, baths.t_cold, baths.cold);
  k.k10_cold = 2.0 * rate_gamma(w10, baths.t_cold, baths.cold);
  k.k12_hot = 2.0 * rate_gamma(-w21, baths.t_hot, baths.hot);
  k.k21_hot = 2.0 * rate_gamma(w21, baths.t_hot, baths.hot);
  return k;
}

std::array<double, 3> baseline_steady_populations(const LadderRates& k) {
  const double a = k.k10_cold * k.k21_hot;
  const double b = k.k01_cold * k.k21_hot;
  const double c = k.k01_cold * k.k12_hot;
  const double psi = a + b + c;
  if (!(psi > 0.0)) throw std::domain_error("baseline_steady_populations: rates give no normalization");
  return {a / psi, b / psi, c / psi};
}

double baseline_current(const LadderRates& k, const std::array<double, 3>& p,
                        const std::array<double, 3>& eps) {
  return (p[0] * k.k01_cold - p[1] * k.k10_cold) * (eps[1] - eps[0]);
}

}  // namespace rcheat
