#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rcheat/spectral.hpp"

namespace rcheat {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Dense complex square matrix that is Hermitian to an absolute tolerance.
/// Construction checks the invariant; the entries are stored exactly as given.
class HermitianOperator {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  HermitianOperator() = default;
  explicit HermitianOperator(CMatrix entries, double tolerance = kDefaultTolerance);

  const CMatrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  CMatrix entries_;
};

/// Largest |A - A^dagger| entry.
double hermiticity_defect(const CMatrix& a);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

namespace pauli {
CMatrix x();
CMatrix y();
CMatrix z();
/// sigma_z cos(theta) + sigma_x sin(theta)
CMatrix theta(double angle);
}  // namespace pauli

struct LadderOperators {
  CMatrix annihilation;
  CMatrix creation;
};

/// Truncated bosonic operators on `levels` Fock states, <n-1|a|n> = sqrt(n).
LadderOperators boson_ladder(int levels);

struct SpinBoson {
  double delta = 0.1;
  /// Angle of the cold-bath spin operator, restricted to [0, pi/2].
  double theta = 0.0;
};

struct Ladder {
  /// Level energies (eps0, eps1, eps2); eps1 plays the role of the splitting.
  std::array<double, 3> eps{0.0, 0.5, 1.0};
};

struct ReactionCoordinates {
  double lambda_L = 0.0;
  double lambda_R = 0.0;
  double omega_L = 10.0;
  double omega_R = 10.0;
  /// Fock levels kept per reaction coordinate.
  int levels = 4;
};

struct ModelSpec {
  std::variant<SpinBoson, Ladder> system;
  ReactionCoordinates rc;

  void validate() const;
  bool is_spin_boson() const { return std::holds_alternative<SpinBoson>(system); }
  int system_dim() const { return is_spin_boson() ? 2 : 3; }
  int dim() const { return system_dim() * rc.levels * rc.levels; }
};

// Tensor-factor order of the extended system: system (x) RC_L (x) RC_R.
// A product state |s, n_L, n_R> sits at index (s * M + n_L) * M + n_R.
constexpr Eigen::Index product_index(int s, int n_left, int n_right, int levels) {
  return (static_cast<Eigen::Index>(s) * levels + n_left) * levels + n_right;
}

struct Eigenbasis {
  RVector energies;  // ascending
  CMatrix vectors;   // columns are eigenvectors
  std::array<HermitianOperator, 2> coupling;  // V^dagger S_alpha V
};

/// System (x) reaction coordinates, with the operators that couple to the
/// residual baths. Immutable once diagonalized.
class ExtendedSystem {
 public:
  ExtendedSystem(ModelSpec spec, HermitianOperator hamiltonian,
                 std::array<HermitianOperator, 2> coupling);

  const ModelSpec& spec() const { return spec_; }
  const HermitianOperator& hamiltonian() const { return hamiltonian_; }
  const HermitianOperator& coupling(Contact c) const;
  Eigen::Index dim() const { return hamiltonian_.dim(); }

  bool diagonalized() const { return basis_.has_value(); }
  /// The accessors below throw std::logic_error before diagonalize().
  const RVector& energies() const;
  const CMatrix& eigenvectors() const;
  const HermitianOperator& coupling_eigen(Contact c) const;

 private:
  friend ExtendedSystem diagonalize(ExtendedSystem ext);
  const Eigenbasis& basis() const;

  ModelSpec spec_;
  HermitianOperator hamiltonian_;
  std::array<HermitianOperator, 2> coupling_;
  std::optional<Eigenbasis> basis_;
};

/// Spin + two reaction coordinates. The hot (L) RC couples through sigma_x,
/// the cold (R) RC through sigma_theta. Residual coupling operators are
/// (a + a^dagger) on each RC.
ExtendedSystem build_sb_rc(const ModelSpec& spec);

/// Three-level ladder + two reaction coordinates. The hot RC couples through
/// |1><2| + h.c., the cold RC through |0><1| + h.c.; the lambda^2/Omega S^2
/// terms are part of the extended system.
ExtendedSystem build_ladder_rc(const ModelSpec& spec);

/// Dispatches on the model variant.
ExtendedSystem build_extended_system(const ModelSpec& spec);

/// Fills the ascending eigenvalues, eigenvectors, and the coupling operators
/// in the eigenbasis. Throws std::runtime_error if the eigensolver fails.
ExtendedSystem diagonalize(ExtendedSystem ext);

struct PolaronParams {
  /// exp(-lambda^2 / 2 Omega^2) for L and R.
  std::array<double, 2> dressing{1.0, 1.0};
  /// Splitting dressed by both RCs (theta = pi/2 frame).
  double renorm_delta_both = 0.0;
  /// Splitting dressed by the L RC only (theta = 0 frame).
  double renorm_delta_left = 0.0;
  /// Effective RC-RC coupling lambda_L lambda_R / Omega_L.
  double superexchange = 0.0;
};

PolaronParams polaron_params(const ModelSpec& spec);

struct SpectrumRecord {
  int n = 0;
  double energy = 0.0;
};

std::vector<SpectrumRecord> export_spectrum(const ExtendedSystem& ext);

constexpr double kCouplingMapFloor = -30.0;

/// log10 |<n|S^D|m>|, with entries below 1e-30 reported as -30.
RMatrix export_coupling_map(const ExtendedSystem& ext, Contact c);

}  // namespace rcheat
