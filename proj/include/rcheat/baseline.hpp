#pragma once

#include <array>

#include "rcheat/spectral.hpp"

namespace rcheat {

// Second-order population rate equation for the bare three-level ladder
// (no reaction coordinates). The hot bath drives 1 <-> 2, the cold bath 0 <-> 1.

/// Transition rates k_{i->j}, all >= 0.
struct LadderRates {
  double k01_cold = 0.0;
  double k10_cold = 0.0;
  double k12_hot = 0.0;
  double k21_hot = 0.0;

  double max() const;
};

struct BareLadderBaths {
  double t_hot = 1.0;
  double t_cold = 0.5;
  BrownianSpectrum hot;
  BrownianSpectrum cold;
};

/// k_{i->j} = 2 Gamma(E_i - E_j) with the Brownian density at the bare
/// transition frequency. Throws std::invalid_argument for non-monotone levels.
LadderRates ladder_rates(const std::array<double, 3>& eps, const BareLadderBaths& baths);

/// Closed-form stationary populations (p0, p1, p2). Throws
/// std::domain_error when the normalization vanishes.
std::array<double, 3> baseline_steady_populations(const LadderRates& k);

/// Cold-contact current (p0 k01 - p1 k10)(eps1 - eps0).
double baseline_current(const LadderRates& k, const std::array<double, 3>& p,
                        const std::array<double, 3>& eps);

}  // namespace rcheat
