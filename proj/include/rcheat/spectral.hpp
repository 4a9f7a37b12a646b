#pragma once

#include <string_view>

namespace rcheat {

/// Brownian (pre-mapping) spectral density, peaked at omega0 with width set
/// by the dimensionless gamma.
struct BrownianSpectrum {
  double lambda = 0.0;
  double omega0 = 1.0;
  double gamma = 1.0;

  void validate() const;
  /// lim_{w->0} J(w)/w, used for the zero-frequency rate.
  double zero_frequency_slope() const;
};

/// Ohmic spectral density with exponential cutoff, J(w) = gamma w exp(-|w|/cutoff).
struct OhmicSpectrum {
  double gamma = 1.0;
  double cutoff = 1.0;

  void validate() const;
  double zero_frequency_slope() const { return gamma; }
};

/// Contact index. Doubles as the identifier of the extended-system operator
/// the residual bath couples to.
enum class Contact { L = 0, R = 1 };

std::string_view to_string(Contact c);

struct BathSpec {
  double temperature = 1.0;
  OhmicSpectrum residual;
  Contact contact = Contact::L;

  void validate() const;
};

double j_brownian(double omega, const BrownianSpectrum& s);
double j_ohmic(double omega, const OhmicSpectrum& s);

/// 1/(exp(omega/T) - 1). Negative omega returns the same formula, so that
/// n(-w) = -(1 + n(w)). Throws std::domain_error for omega == 0 or T <= 0.
double bose_occupation(double omega, double temperature);

// Rate convention used throughout the library. The bath correlation
// C(t) = <B(t)B> has full Fourier transform 2 pi J(w)[n(w)+1] (w > 0) and
// 2 pi J(|w|) n(|w|) (w < 0). The one-sided rate is half of it:
//
//   Gamma(w) = pi J(w) [n(w)+1]     w > 0   (system loses energy w)
//   Gamma(w) = pi J(|w|) n(|w|)     w < 0   (system gains energy |w|)
//   Gamma(0) = pi T lim J(w)/w
//
// The principal-value (Lamb shift) part is not computed.

double rate_gamma(double omega, const BathSpec& bath);

/// Same convention with the Brownian density; used by the bare-ladder
/// rate equation.
double rate_gamma(double omega, double temperature, const BrownianSpectrum& s);

/// log Gamma(omega), evaluated without forming exp(omega/T). Finite
/// wherever Gamma > 0, including |omega|/T beyond the double exponent range.
double log_rate_gamma(double omega, const BathSpec& bath);

}  // namespace rcheat
