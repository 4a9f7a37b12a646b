#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcheat/hamiltonian.hpp"
#include "rcheat/redfield.hpp"

namespace rcheat {

enum class SweepAxis { Lambda, Delta, Omega, Theta, Levels };

std::string_view to_string(SweepAxis axis);
/// Throws std::invalid_argument for unknown names.
SweepAxis parse_sweep_axis(std::string_view name);

/// Residual baths shared by both contacts; L is hot, R is cold.
struct BathParams {
  double t_hot = 1.0;
  double t_cold = 0.5;
  double gamma = 0.0071 / std::numbers::pi;
  double cutoff = 1000.0;

  void validate() const;
};

std::vector<BathSpec> make_baths(const BathParams& p);

/// Sets one parameter on a model, symmetrically on both contacts where the
/// parameter is per-contact. Delta maps to eps1 for the ladder.
ModelSpec with_axis_value(ModelSpec model, SweepAxis axis, double value);

struct SweepConfig {
  ModelSpec model;
  SweepAxis axis = SweepAxis::Lambda;
  std::vector<double> grid;
  BathParams baths;
  SolverOptions solver;

  /// Grid nonempty, strictly monotone, and every point a valid model.
  void validate() const;
};

struct SweepRecord {
  double axis_value = 0.0;
  double j_L = 0.0;
  double j_R = 0.0;
  double residual = 0.0;
  int levels = 0;
  /// Empty on success. Failed points carry NaN currents.
  std::string error;
  /// Set when the steady state was not unique but the currents were.
  std::string note;

  bool ok() const { return error.empty(); }
  /// Current measured at the hot contact.
  double current() const { return j_L; }
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::optional<ScalingFit> fit;
};

/// One build -> diagonalize -> solve -> currents pass. Never throws for
/// solver failures; they are reported in the record.
SweepRecord evaluate_point(const ModelSpec& model, const BathParams& baths,
                           const SolverOptions& solver, double axis_value = 0.0);

/// Points run independently on `workers` threads; records stay in grid order
/// and are identical for any worker count.
SweepResult run_sweep(const SweepConfig& cfg, int workers = 1);

/// Least-squares slope of log|j| against log(axis) over records with
/// axis in [lo, hi]. Throws std::invalid_argument with fewer than 4 points
/// or any failed / non-positive current in the window.
ScalingFit fit_scaling_exponent(const SweepResult& result, double lo, double hi);

/// Same fit on raw (x, y) pairs.
ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergencePoint {
  double axis_value = 0.0;
  std::vector<SweepRecord> per_level;  // one per entry of the level grid
  /// |j(M_last) - j(M_prev)| <= 0.01 |j(M_last)| + 1e-14.
  bool converged = false;
};

struct ConvergenceStudy {
  std::vector<int> levels;
  std::vector<ConvergencePoint> points;
  bool all_converged() const;
};

constexpr double kConvergenceTolerance = 0.01;
/// Absolute slack so that vanishing currents (rounding noise) count as converged.
constexpr double kConvergenceFloor = 1e-14;

/// Runs the sweep once per truncation level in `levels` (ascending).
ConvergenceStudy convergence_study(const SweepConfig& cfg, const std::vector<int>& levels,
                                   int workers = 1);

struct PeakEstimate {
  double axis_value = 0.0;
  double current = 0.0;
  std::size_t grid_index = 0;
  /// Maximum found at the first or last grid point; no refinement done.
  bool at_boundary = false;
};

/// Argmax of |j_hot| over successful records, refined by the vertex of the
/// parabola through the maximum and its two neighbours.
PeakEstimate omega_sweep_peak(const SweepResult& result);

}  // namespace rcheat
