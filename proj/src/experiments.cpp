#include "rcheat/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rcheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepRecord failed(double axis_value, int levels, std::string what) {
  SweepRecord r;
  r.axis_value = axis_value;
  r.levels = levels;
  r.j_L = r.j_R = r.residual = kNaN;
  r.error = std::move(what);
  return r;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::Delta: return "delta";
    case SweepAxis::Omega: return "omega";
    case SweepAxis::Theta: return "theta";
    case SweepAxis::Levels: return "M";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::Lambda, SweepAxis::Delta, SweepAxis::Omega, SweepAxis::Theta,
                 SweepAxis::Levels})
    if (name == to_string(a)) return a;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

void BathParams::validate() const {
  if (!(t_hot > 0.0) || !(t_cold > 0.0))
    throw std::invalid_argument("BathParams: temperatures must be > 0");
  OhmicSpectrum{gamma, cutoff}.validate();
}

std::vector<BathSpec> make_baths(const BathParams& p) {
  p.validate();
  const OhmicSpectrum residual{p.gamma, p.cutoff};
  return {BathSpec{p.t_hot, residual, Contact::L}, BathSpec{p.t_cold, residual, Contact::R}};
}

ModelSpec with_axis_value(ModelSpec model, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::Lambda:
      model.rc.lambda_L = model.rc.lambda_R = value;
      break;
    case SweepAxis::Omega:
      model.rc.omega_L = model.rc.omega_R = value;
      break;
    case SweepAxis::Levels:
      if (value != std::floor(value)) throw std::invalid_argument("M grid values must be integers");
      model.rc.levels = static_cast<int>(value);
      break;
    case SweepAxis::Delta:
      if (auto* sb = std::get_if<SpinBoson>(&model.system))
        sb->delta = value;
      else
        std::get<Ladder>(model.system).eps[1] = value;
      break;
    case SweepAxis::Theta:
      if (auto* sb = std::get_if<SpinBoson>(&model.system))
        sb->theta = value;
      else
        throw std::invalid_argument("theta axis requires the spin-boson model");
      break;
  }
  return model;
}

void SweepConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("SweepConfig: grid is empty");
  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    increasing = increasing && grid[i] > grid[i - 1];
    decreasing = decreasing && grid[i] < grid[i - 1];
  }
  if (grid.size() > 1 && !increasing && !decreasing)
    throw std::invalid_argument("SweepConfig: grid must be strictly monotone");
  for (double v : grid) with_axis_value(model, axis, v).validate();
  baths.validate();
}

SweepRecord evaluate_point(const ModelSpec& model, const BathParams& baths,
                           const SolverOptions& solver, double axis_value) {
  try {
    const ExtendedSystem ext = diagonalize(build_extended_system(model));
    const auto specs = make_baths(baths);
    const Liouvillian l = build_liouvillian(ext, specs);
    SweepRecord r;
    r.axis_value = axis_value;
    r.levels = model.rc.levels;
    try {
      const SteadyState ss = solve_steady_state(l, solver);
      const auto j = heat_currents(l, ss.rho);
      r.j_L = j[0];
      r.j_R = j[1];
      r.residual = ss.residual_norm;
    } catch (const DegenerateSteadyStateError& e) {
      const auto j = kernel_currents(l, e.kernel_basis());
      if (j.empty()) return failed(axis_value, model.rc.levels, e.what());
      r.j_L = j[0];
      r.j_R = j[1];
      r.residual = 0.0;
      r.note = std::string(e.what()) + "; currents identical on the kernel";
    }
    return r;
  } catch (const std::exception& e) {
    return failed(axis_value, model.rc.levels, e.what());
  }
}

SweepResult run_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  SweepResult result;
  result.records.resize(cfg.grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.grid.size(); i = next++) {
      const double v = cfg.grid[i];
      result.records[i] = evaluate_point(with_axis_value(cfg.model, cfg.axis, v), cfg.baths,
                                         cfg.solver, v);
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(n, cfg.grid.size()); ++t) pool.emplace_back(work);
  }
  return result;
}

ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  if (x.size() < 4) throw std::invalid_argument("fit_loglog: need at least 4 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("fit_loglog: non-positive value in window");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    sx += lx.back();
    sy += ly.back();
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.window_lo = *std::min_element(x.begin(), x.end());
  fit.window_hi = *std::max_element(x.begin(), x.end());
  fit.points = x.size();
  return fit;
}

ScalingFit fit_scaling_exponent(const SweepResult& result, double lo, double hi) {
  std::vector<double> x, y;
  for (const auto& r : result.records) {
    if (r.axis_value < lo || r.axis_value > hi) continue;
    if (!r.ok())
      throw std::invalid_argument("fit_scaling_exponent: failed point in window: " + r.error);
    x.push_back(r.axis_value);
    y.push_back(r.current());
  }
  ScalingFit fit = fit_loglog(x, y);
  fit.window_lo = lo;
  fit.window_hi = hi;
  return fit;
}

bool ConvergenceStudy::all_converged() const {
  for (const auto& p : points)
    if (!p.converged) return false;
  return !points.empty();
}

ConvergenceStudy convergence_study(const SweepConfig& cfg, const std::vector<int>& levels,
                                   int workers) {
  if (levels.empty()) throw std::invalid_argument("convergence_study: empty level grid");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("convergence_study: level grid must be ascending");

  ConvergenceStudy study;
  study.levels = levels;
  study.points.resize(cfg.grid.size());
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) study.points[i].axis_value = cfg.grid[i];

  for (int m : levels) {
    SweepConfig at_m = cfg;
    at_m.model.rc.levels = m;
    const SweepResult res = run_sweep(at_m, workers);
    for (std::size_t i = 0; i < res.records.size(); ++i)
      study.points[i].per_level.push_back(res.records[i]);
  }
  for (auto& p : study.points) {
    if (p.per_level.size() < 2) continue;
    const auto& last = p.per_level.back();
    const auto& prev = p.per_level[p.per_level.size() - 2];
    p.converged = last.ok() && prev.ok() &&
                  std::abs(last.current() - prev.current()) <=
                      kConvergenceTolerance * std::abs(last.current()) + kConvergenceFloor;
  }
  return study;
}

PeakEstimate omega_sweep_peak(const SweepResult& result) {
  const auto& recs = result.records;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (!recs[i].ok()) continue;
    if (!best || std::abs(recs[i].current()) > std::abs(recs[*best].current())) best = i;
  }
  if (!best) throw std::invalid_argument("omega_sweep_peak: no successful records");
  const std::size_t i = *best;
  PeakEstimate peak{recs[i].axis_value, std::abs(recs[i].current()), i, false};
  if (i == 0 || i + 1 == recs.size() || !recs[i - 1].ok() || !recs[i + 1].ok()) {
    peak.at_boundary = i == 0 || i + 1 == recs.size();
    return peak;
  }
  const double x0 = recs[i - 1].axis_value, x1 = recs[i].axis_value, x2 = recs[i + 1].axis_value;
  const double y0 = std::abs(recs[i - 1].current()), y1 = peak.current,
               y2 = std::abs(recs[i + 1].current());
  // Vertex of the interpolating parabola (non-uniform abscissae).
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (!(curvature < 0.0)) return peak;
  const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
  peak.axis_value = xv;
  peak.current = y0 + d01 * (xv - x0) + curvature * (xv - x0) * (xv - x1);
  return peak;
}

}  // namespace rcheat
