#include "rcheat/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rcheat {

namespace {

using cdouble = std::complex<double>;

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

// Embed (system op) (x) (left RC op) (x) (right RC op).
CMatrix embed(const CMatrix& sys, const CMatrix& left, const CMatrix& right) {
  return kron(sys, kron(left, right));
}

CMatrix projector(int dim, int i, int j) {
  CMatrix p = CMatrix::Zero(dim, dim);
  p(i, j) = 1.0;
  return p;
}

}  // namespace

HermitianOperator::HermitianOperator(CMatrix entries, double tolerance)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("HermitianOperator: matrix is not square");
  const double defect = hermiticity_defect(entries_);
  if (defect > tolerance)
    throw std::invalid_argument("HermitianOperator: matrix not Hermitian (defect " +
                                std::to_string(defect) + ")");
}

double hermiticity_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace pauli {

CMatrix x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix y() {
  CMatrix m(2, 2);
  m << 0.0, cdouble(0.0, -1.0), cdouble(0.0, 1.0), 0.0;
  return m;
}

CMatrix z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix theta(double angle) { return std::cos(angle) * z() + std::sin(angle) * x(); }

}  // namespace pauli

LadderOperators boson_ladder(int levels) {
  if (levels < 2) throw std::invalid_argument("boson_ladder: need at least 2 levels");
  CMatrix a = CMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix adag = a.transpose();
  return {std::move(a), std::move(adag)};
}

void ModelSpec::validate() const {
  if (rc.levels < 2) throw std::invalid_argument("ModelSpec: levels (M) must be >= 2");
  if (!(rc.omega_L > 0.0) || !(rc.omega_R > 0.0))
    throw std::invalid_argument("ModelSpec: RC frequencies must be > 0");
  if (!(rc.lambda_L >= 0.0) || !(rc.lambda_R >= 0.0))
    throw std::invalid_argument("ModelSpec: RC couplings must be >= 0");
  if (const auto* sb = std::get_if<SpinBoson>(&system)) {
    if (!(sb->theta >= 0.0 && sb->theta <= std::numbers::pi / 2.0))
      throw std::invalid_argument("ModelSpec: theta must lie in [0, pi/2]");
    if (!std::isfinite(sb->delta)) throw std::invalid_argument("ModelSpec: delta must be finite");
  } else {
    const auto& eps = std::get<Ladder>(system).eps;
    if (!(eps[0] <= eps[1] && eps[1] <= eps[2]))
      throw std::invalid_argument("ModelSpec: ladder levels must satisfy eps0 <= eps1 <= eps2");
  }
}

ExtendedSystem::ExtendedSystem(ModelSpec spec, HermitianOperator hamiltonian,
                               std::array<HermitianOperator, 2> coupling)
    : spec_(std::move(spec)), hamiltonian_(std::move(hamiltonian)), coupling_(std::move(coupling)) {
  for (const auto& s : coupling_)
    if (s.dim() != hamiltonian_.dim())
      throw std::invalid_argument("ExtendedSystem: coupling operator dimension mismatch");
}

const HermitianOperator& ExtendedSystem::coupling(Contact c) const {
  return coupling_[static_cast<int>(c)];
}

const Eigenbasis& ExtendedSystem::basis() const {
  if (!basis_) throw std::logic_error("ExtendedSystem: not diagonalized");
  return *basis_;
}

const RVector& ExtendedSystem::energies() const { return basis().energies; }
const CMatrix& ExtendedSystem::eigenvectors() const { return basis().vectors; }
const HermitianOperator& ExtendedSystem::coupling_eigen(Contact c) const {
  return basis().coupling[static_cast<int>(c)];
}

ExtendedSystem build_sb_rc(const ModelSpec& spec) {
  spec.validate();
  const auto& sb = std::get<SpinBoson>(spec.system);
  const auto& rc = spec.rc;
  const int m = rc.levels;
  const auto [a, adag] = boson_ladder(m);
  const CMatrix number = adag * a;
  const CMatrix position = adag + a;
  const CMatrix i2 = identity(2), im = identity(m);

  CMatrix h = 0.5 * sb.delta * embed(pauli::z(), im, im);
  h += rc.omega_L * embed(i2, number, im);
  h += rc.omega_R * embed(i2, im, number);
  h += rc.lambda_L * embed(pauli::x(), position, im);
  h += rc.lambda_R * embed(pauli::theta(sb.theta), im, position);

  return ExtendedSystem(spec, HermitianOperator(std::move(h)),
                        {HermitianOperator(embed(i2, position, im)),
                         HermitianOperator(embed(i2, im, position))});
}

ExtendedSystem build_ladder_rc(const ModelSpec& spec) {
  spec.validate();
  const auto& eps = std::get<Ladder>(spec.system).eps;
  const auto& rc = spec.rc;
  const int m = rc.levels;
  const auto [a, adag] = boson_ladder(m);
  const CMatrix number = adag * a;
  const CMatrix position = adag + a;
  const CMatrix i3 = identity(3), im = identity(m);

  CMatrix levels = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) levels(i, i) = eps[i];
  const CMatrix s_hot = projector(3, 1, 2) + projector(3, 2, 1);
  const CMatrix s_cold = projector(3, 0, 1) + projector(3, 1, 0);

  CMatrix sys = levels;
  sys += (rc.lambda_L * rc.lambda_L / rc.omega_L) * s_hot * s_hot;
  sys += (rc.lambda_R * rc.lambda_R / rc.omega_R) * s_cold * s_cold;

  CMatrix h = embed(sys, im, im);
  h += rc.omega_L * embed(i3, number, im);
  h += rc.omega_R * embed(i3, im, number);
  h += rc.lambda_L * embed(s_hot, position, im);
  h += rc.lambda_R * embed(s_cold, im, position);

  return ExtendedSystem(spec, HermitianOperator(std::move(h)),
                        {HermitianOperator(embed(i3, position, im)),
                         HermitianOperator(embed(i3, im, position))});
}

ExtendedSystem build_extended_system(const ModelSpec& spec) {
  return spec.is_spin_boson() ? build_sb_rc(spec) : build_ladder_rc(spec);
}

ExtendedSystem diagonalize(ExtendedSystem ext) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(ext.hamiltonian().matrix());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("diagonalize: eigensolver failed to converge");
  Eigenbasis basis;
  basis.energies = solver.eigenvalues();
  basis.vectors = solver.eigenvectors();
  for (int c = 0; c < 2; ++c) {
    CMatrix s = basis.vectors.adjoint() * ext.coupling_[c].matrix() * basis.vectors;
    // Remove the rounding-level anti-Hermitian part left by the two products.
    s = 0.5 * (s + s.adjoint()).eval();
    basis.coupling[c] = HermitianOperator(std::move(s));
  }
  ext.basis_ = std::move(basis);
  return ext;
}

PolaronParams polaron_params(const ModelSpec& spec) {
  const auto* sb = std::get_if<SpinBoson>(&spec.system);
  if (sb == nullptr) throw std::invalid_argument("polaron_params: spin-boson model required");
  const auto& rc = spec.rc;
  PolaronParams p;
  p.dressing[0] = std::exp(-rc.lambda_L * rc.lambda_L / (2.0 * rc.omega_L * rc.omega_L));
  p.dressing[1] = std::exp(-rc.lambda_R * rc.lambda_R / (2.0 * rc.omega_R * rc.omega_R));
  p.renorm_delta_both = sb->delta * p.dressing[0] * p.dressing[1];
  p.renorm_delta_left = sb->delta * p.dressing[0];
  p.superexchange = rc.lambda_L * rc.lambda_R / rc.omega_L;
  return p;
}

std::vector<SpectrumRecord> export_spectrum(const ExtendedSystem& ext) {
  const RVector& e = ext.energies();
  std::vector<SpectrumRecord> out;
  out.reserve(static_cast<std::size_t>(e.size()));
  for (Eigen::Index n = 0; n < e.size(); ++n) out.push_back({static_cast<int>(n), e(n)});
  return out;
}

RMatrix export_coupling_map(const ExtendedSystem& ext, Contact c) {
  const CMatrix& s = ext.coupling_eigen(c).matrix();
  RMatrix out(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.cols(); ++j)
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      const double v = std::abs(s(i, j));
      out(i, j) = v < 1e-30 ? kCouplingMapFloor : std::log10(v);
    }
  return out;
}

}  // namespace rcheat
