#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcheat/hamiltonian.hpp"
#include "rcheat/spectral.hpp"

namespace rcheat {

/// Non-secular Redfield dissipator of one residual bath, in the eigenbasis of
/// the extended system:
///
///   D(rho) = -[S, Lambda rho - rho Lambda^dagger],  Lambda_jk = S_jk Gamma(E_k - E_j)
///
/// which is the four-term R-tensor form with R_{mn,jk}(w) = S_mn S_jk Gamma(w).
class Dissipator {
 public:
  /// `rates(j, k)` must hold Gamma(E_k - E_j).
  Dissipator(Contact contact, CMatrix coupling, const RMatrix& rates);

  Contact contact() const { return contact_; }
  Eigen::Index dim() const { return s_.rows(); }
  const CMatrix& coupling() const { return s_; }
  const CMatrix& lambda() const { return lambda_; }
  /// S Lambda and Lambda^dagger S.
  const CMatrix& left_product() const { return s_lambda_; }
  const CMatrix& right_product() const { return lambda_dag_s_; }

  CMatrix apply(const CMatrix& rho) const;

 private:
  Contact contact_;
  CMatrix s_;
  CMatrix lambda_;
  CMatrix s_lambda_;
  CMatrix lambda_dag_s_;
};

/// Throws std::invalid_argument if `ext` is not diagonalized.
Dissipator build_dissipator(const ExtendedSystem& ext, const BathSpec& bath);

/// Real coordinates of a Hermitian D x D matrix, laid out on the D x D grid
/// (column-major, index m + n D): the diagonal holds rho_mm, the strict upper
/// triangle Re rho_mn and the strict lower triangle Im rho_nm.
RVector to_hermitian_coords(const CMatrix& rho);
CMatrix from_hermitian_coords(const RVector& x, Eigen::Index dim);

/// Redfield generator L = -i[H^D, .] + sum_alpha D_alpha.
class Liouvillian {
 public:
  Liouvillian(RVector energies, std::vector<Dissipator> dissipators);

  Eigen::Index dim() const { return energies_.size(); }
  const RVector& energies() const { return energies_; }
  const std::vector<Dissipator>& dissipators() const { return dissipators_; }

  /// Matrix-free action, O(D^3).
  CMatrix apply(const CMatrix& rho) const;
  /// Action evaluated in long double; used for residuals.
  Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic> apply_extended(
      const CMatrix& rho) const;

  /// Complex D^2 x D^2 matrix acting on column-major vec(rho).
  CMatrix dense() const;
  /// Real D^2 x D^2 matrix acting on Hermitian coordinates. L preserves
  /// Hermiticity, so this is an exact representation on Hermitian inputs.
  RMatrix hermitian_form() const;

 private:
  RVector energies_;
  std::vector<Dissipator> dissipators_;
  CMatrix left_sum_;   // sum_alpha S Lambda
  CMatrix right_sum_;  // sum_alpha Lambda^dagger S
};

Liouvillian build_liouvillian(const ExtendedSystem& ext, std::span<const BathSpec> baths);

struct SolverOptions {
  /// Reciprocal-condition threshold below which the solve is treated as
  /// ill-conditioned and refined in extended precision.
  double fallback_rcond = 1e-12;
  /// Below this the bordered system is singular: the kernel is analysed.
  double singular_rcond = 1e-17;
  /// Relative singular-value threshold used to count the kernel dimension.
  double kernel_tolerance = 1e-13;
  /// Required ||L rho|| / ||L||.
  double residual_tolerance = 1e-10;
  int max_refinement_steps = 6;
};

struct SolverMeta {
  std::string method;
  double rcond = 0.0;
  int refinement_steps = 0;
  bool ill_conditioned = false;
  Eigen::Index unknowns = 0;
};

struct SteadyState {
  CMatrix rho;  // eigenbasis
  std::vector<Contact> contacts;
  std::vector<double> currents;  // positive when flowing from the bath into the system
  double residual_norm = 0.0;    // ||L rho||_F
  double generator_norm = 0.0;   // induced 1-norm of the Hermitian-coordinate generator
  double asymmetry_norm = 0.0;   // ||rho - rho^dagger||_F before symmetrization
  double min_eigenvalue = 0.0;   // smallest eigenvalue of rho
  SolverMeta meta;

  double current(Contact c) const;
};

/// Steady state has more than one independent solution.
class DegenerateSteadyStateError : public std::runtime_error {
 public:
  DegenerateSteadyStateError(Eigen::Index kernel_dim, RMatrix kernel_basis);
  Eigen::Index kernel_dim() const { return kernel_dim_; }
  /// Orthonormal kernel vectors in Hermitian coordinates.
  const RMatrix& kernel_basis() const { return basis_; }

 private:
  Eigen::Index kernel_dim_;
  RMatrix basis_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double residual, double bound);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Solves L rho = 0 with Tr rho = 1: one population equation of the real
/// Hermitian-coordinate system is replaced by the trace functional and the
/// result is LU-solved, then refined against the long-double residual.
/// Fills rho and the diagnostics; currents are left empty.
SteadyState solve_steady_state(const Liouvillian& l, const SolverOptions& options = {});

/// j_alpha = Tr[D_alpha(rho) H^D], one entry per dissipator of `l`.
std::vector<double> heat_currents(const Liouvillian& l, const CMatrix& rho);

/// Build, solve and evaluate currents for a diagonalized extended system.
SteadyState solve_transport(const ExtendedSystem& ext, std::span<const BathSpec> baths,
                            const SolverOptions& options = {});

/// Currents on a degenerate kernel, if they are the same for every trace-one
/// kernel state (within `tolerance` absolute). Empty otherwise.
std::vector<double> kernel_currents(const Liouvillian& l, const RMatrix& kernel_basis,
                                    double tolerance = 1e-14);

struct ConservationReport {
  double sum = 0.0;       // sum_alpha j_alpha
  double max_abs = 0.0;   // max_alpha |j_alpha|
  double relative = 0.0;  // |sum| / max_abs (0 when all currents vanish)
  bool conserved = false; // |sum| <= 1e-6 max_abs + 1e-14
};

ConservationReport conservation_check(std::span<const double> currents);
ConservationReport conservation_check(const SteadyState& ss);

}  // namespace rcheat
