#include "rcheat/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace rcheat {

namespace {

using cdouble = std::complex<double>;
using cldouble = std::complex<long double>;
using CMatrixL = Eigen::Matrix<cldouble, Eigen::Dynamic, Eigen::Dynamic>;
using RVectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr double kConservationRelative = 1e-6;
constexpr double kConservationAbsolute = 1e-14;

template <typename Matrix>
auto coords_of(const Matrix& rho) {
  using Real = typename Matrix::Scalar::value_type;
  const Eigen::Index d = rho.rows();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> x(d * d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m) {
      if (m == n)
        x(m + n * d) = rho(m, m).real();
      else if (m < n)
        x(m + n * d) = rho(m, n).real();
      else
        x(m + n * d) = rho(n, m).imag();
    }
  return x;
}

std::string describe_degenerate(Eigen::Index k) {
  std::ostringstream os;
  os << "steady state is not unique: generator kernel has dimension " << k;
  return os.str();
}

std::string describe_convergence(double residual, double bound) {
  std::ostringstream os;
  os << "steady-state residual " << residual << " exceeds bound " << bound;
  return os.str();
}

// Orthonormal kernel of the Hermitian-coordinate generator `a` of `l`. The
// singular vectors are polished against the long-double residual with the
// pseudo-inverse, which brings ||L x|| from ~eps ||L|| / gap down to ~eps.
RMatrix kernel_of(const Liouvillian& l, const RMatrix& a, double tolerance) {
  Eigen::BDCSVD<RMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double cut = tolerance * sv(0);
  Eigen::Index k = 0;
  while (k < sv.size() && sv(sv.size() - 1 - k) <= cut) ++k;
  if (k == 0) return RMatrix(a.rows(), 0);
  svd.setThreshold(tolerance);
  RMatrix basis = svd.matrixV().rightCols(k);
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index i = 0; i < k; ++i) {
      const RVector r = coords_of(l.apply_extended(from_hermitian_coords(basis.col(i), l.dim())))
                            .template cast<double>();
      basis.col(i) -= svd.solve(r);
    }
  Eigen::HouseholderQR<RMatrix> qr(basis);
  return qr.householderQ() * RMatrix::Identity(basis.rows(), k);
}

}  // namespace

Dissipator::Dissipator(Contact contact, CMatrix coupling, const RMatrix& rates)
    : contact_(contact), s_(std::move(coupling)) {
  if (s_.rows() != s_.cols() || rates.rows() != s_.rows() || rates.cols() != s_.cols())
    throw std::invalid_argument("Dissipator: dimension mismatch between coupling and rates");
  lambda_ = s_.cwiseProduct(rates.cast<cdouble>());
  s_lambda_ = s_ * lambda_;
  lambda_dag_s_ = lambda_.adjoint() * s_;
}

CMatrix Dissipator::apply(const CMatrix& rho) const {
  // -S Lambda rho + Lambda rho S + S rho Lambda^dagger - rho Lambda^dagger S
  const CMatrix lr = lambda_ * rho;
  const CMatrix rl = rho * lambda_.adjoint();
  return -s_lambda_ * rho + lr * s_ + s_ * rl - rho * lambda_dag_s_;
}

Dissipator build_dissipator(const ExtendedSystem& ext, const BathSpec& bath) {
  if (!ext.diagonalized())
    throw std::invalid_argument("build_dissipator: extended system is not diagonalized");
  bath.validate();
  const RVector& e = ext.energies();
  const Eigen::Index d = e.size();
  RMatrix rates(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < d; ++j) rates(j, k) = rate_gamma(e(k) - e(j), bath);
  return Dissipator(bath.contact, ext.coupling_eigen(bath.contact).matrix(), rates);
}

RVector to_hermitian_coords(const CMatrix& rho) { return coords_of(rho); }

CMatrix from_hermitian_coords(const RVector& x, Eigen::Index dim) {
  if (x.size() != dim * dim) throw std::invalid_argument("from_hermitian_coords: size mismatch");
  CMatrix rho(dim, dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    rho(n, n) = x(n + n * dim);
    for (Eigen::Index m = 0; m < n; ++m) {
      const cdouble v(x(m + n * dim), x(n + m * dim));
      rho(m, n) = v;
      rho(n, m) = std::conj(v);
    }
  }
  return rho;
}

Liouvillian::Liouvillian(RVector energies, std::vector<Dissipator> dissipators)
    : energies_(std::move(energies)), dissipators_(std::move(dissipators)) {
  const Eigen::Index d = energies_.size();
  left_sum_ = CMatrix::Zero(d, d);
  right_sum_ = CMatrix::Zero(d, d);
  for (const auto& diss : dissipators_) {
    if (diss.dim() != d) throw std::invalid_argument("Liouvillian: dissipator dimension mismatch");
    left_sum_ += diss.left_product();
    right_sum_ += diss.right_product();
  }
}

CMatrix Liouvillian::apply(const CMatrix& rho) const {
  const Eigen::Index d = dim();
  CMatrix out(d, d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m)
      out(m, n) = cdouble(0.0, -(energies_(m) - energies_(n))) * rho(m, n);
  for (const auto& diss : dissipators_) out += diss.apply(rho);
  return out;
}

CMatrixL Liouvillian::apply_extended(const CMatrix& rho_in) const {
  const Eigen::Index d = dim();
  const CMatrixL rho = rho_in.cast<cldouble>();
  CMatrixL out(d, d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m)
      out(m, n) = cldouble(0.0L, -(static_cast<long double>(energies_(m)) -
                                   static_cast<long double>(energies_(n)))) *
                  rho(m, n);
  for (const auto& diss : dissipators_) {
    const CMatrixL s = diss.coupling().cast<cldouble>();
    const CMatrixL lam = diss.lambda().cast<cldouble>();
    const CMatrixL lam_dag = lam.adjoint();
    const CMatrixL lr = lam * rho;
    const CMatrixL rl = rho * lam_dag;
    out += -s * lr + lr * s + s * rl - rl * s;
  }
  return out;
}

CMatrix Liouvillian::dense() const {
  const Eigen::Index d = dim();
  const Eigen::Index n2 = d * d;
  CMatrix out = CMatrix::Zero(n2, n2);
  // vec(A rho B) = (B^T (x) A) vec(rho), column-major vec.
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < d; ++j) {
      const Eigen::Index col = j + k * d;
      for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m) {
          cdouble v = 0.0;
          for (const auto& diss : dissipators_) {
            const CMatrix& s = diss.coupling();
            const CMatrix& lam = diss.lambda();
            v += lam(m, j) * s(k, n) + s(m, j) * std::conj(lam(n, k));
          }
          if (n == k) v -= left_sum_(m, j);
          if (m == j) v -= right_sum_(k, n);
          if (m == j && n == k) v += cdouble(0.0, -(energies_(m) - energies_(n)));
          out(m + n * d, col) = v;
        }
    }
  return out;
}

RMatrix Liouvillian::hermitian_form() const {
  const Eigen::Index d = dim();
  const Eigen::Index n2 = d * d;
  RMatrix out(n2, n2);
  const auto nb = dissipators_.size();

  // K(pq, jk) = L(|j><k|)_pq, needed only for p <= q.
  std::vector<cdouble> forward(static_cast<std::size_t>(n2));
  std::vector<cdouble> backward(static_cast<std::size_t>(n2));
  std::vector<cdouble> s_kq(nb), lamc_qk(nb), s_jq(nb), lamc_qj(nb);

  auto element_pair = [&](Eigen::Index j, Eigen::Index k) {
    // forward = K(., jk), backward = K(., kj)
    for (Eigen::Index q = 0; q < d; ++q) {
      for (std::size_t a = 0; a < nb; ++a) {
        const CMatrix& s = dissipators_[a].coupling();
        const CMatrix& lam = dissipators_[a].lambda();
        s_kq[a] = s(k, q);
        lamc_qk[a] = std::conj(lam(q, k));
        s_jq[a] = s(j, q);
        lamc_qj[a] = std::conj(lam(q, j));
      }
      for (Eigen::Index p = 0; p <= q; ++p) {
        cdouble f = 0.0, b = 0.0;
        for (std::size_t a = 0; a < nb; ++a) {
          const CMatrix& s = dissipators_[a].coupling();
          const CMatrix& lam = dissipators_[a].lambda();
          f += lam(p, j) * s_kq[a] + s(p, j) * lamc_qk[a];
          b += lam(p, k) * s_jq[a] + s(p, k) * lamc_qj[a];
        }
        if (q == k) f -= left_sum_(p, j);
        if (p == j) f -= right_sum_(k, q);
        if (p == j && q == k) f += cdouble(0.0, -(energies_(p) - energies_(q)));
        if (q == j) b -= left_sum_(p, k);
        if (p == k) b -= right_sum_(j, q);
        if (p == k && q == j) b += cdouble(0.0, -(energies_(p) - energies_(q)));
        forward[static_cast<std::size_t>(p + q * d)] = f;
        backward[static_cast<std::size_t>(p + q * d)] = b;
      }
    }
  };

  auto write_column = [&](Eigen::Index col, auto&& value) {
    for (Eigen::Index q = 0; q < d; ++q)
      for (Eigen::Index p = 0; p <= q; ++p) {
        const cdouble v = value(static_cast<std::size_t>(p + q * d));
        if (p == q) {
          out(p + q * d, col) = v.real();
        } else {
          out(p + q * d, col) = v.real();
          out(q + p * d, col) = v.imag();
        }
      }
  };

  for (Eigen::Index j = 0; j < d; ++j) {
    element_pair(j, j);
    write_column(j + j * d, [&](std::size_t i) { return forward[i]; });
    for (Eigen::Index k = j + 1; k < d; ++k) {
      element_pair(j, k);
      // |j><k| + |k><j|
      write_column(j + k * d, [&](std::size_t i) { return forward[i] + backward[i]; });
      // i|j><k| - i|k><j|  (coordinate Im rho_jk lives at k + j d)
      write_column(k + j * d, [&](std::size_t i) {
        return cdouble(0.0, 1.0) * (forward[i] - backward[i]);
      });
    }
  }
  return out;
}

Liouvillian build_liouvillian(const ExtendedSystem& ext, std::span<const BathSpec> baths) {
  if (baths.empty()) throw std::invalid_argument("build_liouvillian: at least one bath required");
  std::vector<Dissipator> diss;
  diss.reserve(baths.size());
  for (const auto& b : baths) diss.push_back(build_dissipator(ext, b));
  return Liouvillian(ext.energies(), std::move(diss));
}

double SteadyState::current(Contact c) const {
  for (std::size_t i = 0; i < contacts.size(); ++i)
    if (contacts[i] == c) return currents.at(i);
  throw std::out_of_range("SteadyState: no bath attached at contact " + std::string(to_string(c)));
}

DegenerateSteadyStateError::DegenerateSteadyStateError(Eigen::Index kernel_dim, RMatrix kernel_basis)
    : std::runtime_error(describe_degenerate(kernel_dim)),
      kernel_dim_(kernel_dim),
      basis_(std::move(kernel_basis)) {}

ConvergenceError::ConvergenceError(double residual, double bound)
    : std::runtime_error(describe_convergence(residual, bound)), residual_(residual) {}

SteadyState solve_steady_state(const Liouvillian& l, const SolverOptions& options) {
  const Eigen::Index d = l.dim();
  const Eigen::Index n2 = d * d;

  RMatrix a = l.hermitian_form();
  SteadyState ss;
  ss.generator_norm = a.cwiseAbs().colwise().sum().maxCoeff();

  // Trace functional in place of the rho_00 equation. The population rows of
  // L sum to zero, so one of them is redundant.
  a.row(0).setZero();
  for (Eigen::Index j = 0; j < d; ++j) a(0, j + j * d) = 1.0;

  Eigen::PartialPivLU<Eigen::Ref<RMatrix>> lu(a);
  ss.meta.rcond = lu.rcond();
  ss.meta.unknowns = n2;
  ss.meta.method = "lu-trace-row";
  if (!(ss.meta.rcond >= options.singular_rcond)) {
    RMatrix kernel = kernel_of(l, l.hermitian_form(), options.kernel_tolerance);
    const Eigen::Index dim = kernel.cols();
    if (dim != 1) throw DegenerateSteadyStateError(dim, std::move(kernel));
  }
  ss.meta.ill_conditioned = ss.meta.rcond < options.fallback_rcond;

  RVector rhs = RVector::Zero(n2);
  rhs(0) = 1.0;
  RVector x = lu.solve(rhs);

  // Iterative refinement with the residual evaluated matrix-free in long
  // double. Converges as long as cond(A) * eps_double < 1.
  double last_step = std::numeric_limits<double>::infinity();
  for (int step = 0; step < options.max_refinement_steps; ++step) {
    const CMatrixL lrho = l.apply_extended(from_hermitian_coords(x, d));
    RVectorL r = -coords_of(lrho);
    long double trace = 0.0L;
    for (Eigen::Index j = 0; j < d; ++j) trace += static_cast<long double>(x(j + j * d));
    r(0) = 1.0L - trace;
    const RVector dx = lu.solve(r.cast<double>());
    x += dx;
    ++ss.meta.refinement_steps;
    const double size = dx.lpNorm<Eigen::Infinity>();
    if (size <= 4.0 * std::numeric_limits<double>::epsilon() * x.lpNorm<Eigen::Infinity>() ||
        size >= 0.5 * last_step)
      break;
    last_step = size;
  }
  if (ss.meta.ill_conditioned) ss.meta.method = "lu-trace-row+extended-refinement";

  CMatrix rho = from_hermitian_coords(x, d);
  ss.asymmetry_norm = (rho - rho.adjoint()).norm();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  ss.rho = std::move(rho);

  ss.residual_norm = std::sqrt(static_cast<double>(l.apply_extended(ss.rho).cwiseAbs2().sum()));
  ss.min_eigenvalue = Eigen::SelfAdjointEigenSolver<CMatrix>(ss.rho, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();

  const double bound = options.residual_tolerance * ss.generator_norm;
  if (!(ss.residual_norm <= bound)) throw ConvergenceError(ss.residual_norm, bound);
  return ss;
}

std::vector<double> heat_currents(const Liouvillian& l, const CMatrix& rho) {
  const RVector& e = l.energies();
  std::vector<double> out;
  out.reserve(l.dissipators().size());
  for (const auto& diss : l.dissipators()) {
    const CMatrix dr = diss.apply(rho);
    // Tr D(rho) = 0, so the energy origin is free; E_0 keeps terms small.
    double j = 0.0;
    for (Eigen::Index n = 0; n < e.size(); ++n) j += (e(n) - e(0)) * dr(n, n).real();
    out.push_back(j);
  }
  return out;
}

SteadyState solve_transport(const ExtendedSystem& ext, std::span<const BathSpec> baths,
                            const SolverOptions& options) {
  const Liouvillian l = build_liouvillian(ext, baths);
  SteadyState ss = solve_steady_state(l, options);
  ss.currents = heat_currents(l, ss.rho);
  for (const auto& b : baths) ss.contacts.push_back(b.contact);
  return ss;
}

std::vector<double> kernel_currents(const Liouvillian& l, const RMatrix& kernel_basis,
                                    double tolerance) {
  const Eigen::Index d = l.dim();
  std::vector<CMatrix> states;
  std::vector<double> traces;
  Eigen::Index pivot = -1;
  for (Eigen::Index i = 0; i < kernel_basis.cols(); ++i) {
    states.push_back(from_hermitian_coords(kernel_basis.col(i), d));
    traces.push_back(states.back().trace().real());
    if (pivot < 0 || std::abs(traces.back()) > std::abs(traces[static_cast<std::size_t>(pivot)]))
      pivot = i;
  }
  if (pivot < 0 || std::abs(traces[static_cast<std::size_t>(pivot)]) < 1e-12) return {};
  const auto p = static_cast<std::size_t>(pivot);
  std::vector<double> reference = heat_currents(l, states[p] / traces[p]);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::vector<double> ji = heat_currents(l, states[i]);
    for (std::size_t a = 0; a < ji.size(); ++a)
      if (std::abs(ji[a] - traces[i] * reference[a]) > tolerance) return {};
  }
  return reference;
}

ConservationReport conservation_check(std::span<const double> currents) {
  ConservationReport r;
  for (double j : currents) {
    r.sum += j;
    r.max_abs = std::max(r.max_abs, std::abs(j));
  }
  r.relative = r.max_abs > 0.0 ? std::abs(r.sum) / r.max_abs : 0.0;
  r.conserved = std::abs(r.sum) <= kConservationRelative * r.max_abs + kConservationAbsolute;
  return r;
}

ConservationReport conservation_check(const SteadyState& ss) {
  return conservation_check(std::span<const double>(ss.currents));
}

}  // namespace rcheat
