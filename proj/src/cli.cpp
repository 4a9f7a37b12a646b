#include "rcheat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rcheat/baseline.hpp"
#include "rcheat/io.hpp"

namespace rcheat::cli {

using nlohmann::json;

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1)));
  return g;
}

json record_json(const SweepRecord& r) {
  json j{{"axis", r.axis_value}, {"j_L", r.j_L}, {"j_R", r.j_R},
         {"residual", r.residual}, {"M", r.levels}};
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json fit_json(const ScalingFit& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2},
              {"window", {f.window_lo, f.window_hi}}, {"points", f.points}};
}

void write_csv_with_sidecar(const io::Table& table, json sidecar,
                            const std::filesystem::path& out, std::ostream& log) {
  io::emit_csv(table, out);
  const auto side = io::sidecar_path(out);
  io::emit_json(sidecar, side);
  log << "wrote " << out.string() << " and " << side.string() << '\n';
}

std::vector<double> grid_of(const RunConfig& cfg) {
  return cfg.experiment.grid.empty() ? default_grid(cfg.experiment.axis) : cfg.experiment.grid;
}

json run(const RunConfig& cfg, std::ostream& log) {
  const ExtendedSystem ext = diagonalize(build_extended_system(cfg.model));
  const auto baths = make_baths(cfg.baths);
  const Liouvillian l = build_liouvillian(ext, baths);
  json doc{{"config", to_json(cfg)}};
  try {
    const SteadyState ss = solve_steady_state(l, cfg.solver);
    const auto j = heat_currents(l, ss.rho);
    const auto cons = conservation_check(j);
    std::vector<double> pops;
    for (Eigen::Index n = 0; n < ss.rho.rows(); ++n) pops.push_back(ss.rho(n, n).real());
    doc["currents"] = {{"L", j[0]}, {"R", j[1]}};
    doc["conservation"] = {{"sum", cons.sum}, {"relative", cons.relative},
                           {"conserved", cons.conserved}};
    doc["residual"] = ss.residual_norm;
    doc["generator_norm"] = ss.generator_norm;
    doc["asymmetry_norm"] = ss.asymmetry_norm;
    doc["min_eigenvalue"] = ss.min_eigenvalue;
    doc["populations"] = pops;
    doc["solver"] = {{"method", ss.meta.method}, {"rcond", ss.meta.rcond},
                     {"refinement_steps", ss.meta.refinement_steps},
                     {"unknowns", ss.meta.unknowns}};
    log << "j_L = " << io::format_number(j[0]) << ", j_R = " << io::format_number(j[1])
        << ", residual = " << io::format_number(ss.residual_norm) << '\n';
  } catch (const DegenerateSteadyStateError& e) {
    const auto j = kernel_currents(l, e.kernel_basis());
    if (j.empty()) throw;
    doc["currents"] = {{"L", j[0]}, {"R", j[1]}};
    doc["residual"] = 0.0;
    doc["populations"] = nullptr;
    doc["note"] = std::string(e.what()) + "; currents identical on the kernel";
    log << "degenerate steady state (kernel dimension " << e.kernel_dim() << ")\n";
  }
  return doc;
}

void sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  SweepConfig sc = cfg.sweep_config();
  sc.grid = grid_of(cfg);
  const SweepResult res = run_sweep(sc, cfg.workers);

  io::Table table{{"axis", "j_L", "j_R", "residual", "M"}, {}};
  json records = json::array();
  for (const auto& r : res.records) {
    table.rows.push_back({r.axis_value, r.j_L, r.j_R, r.residual, static_cast<long long>(r.levels)});
    records.push_back(record_json(r));
    log << to_string(sc.axis) << " = " << io::format_number(r.axis_value) << ": "
        << (r.ok() ? "j_L = " + io::format_number(r.j_L) : "failed: " + r.error) << '\n';
  }

  json side{{"config", to_json(cfg)}, {"grid", sc.grid}, {"records", records}};
  side["fit"] = nullptr;
  const bool power_law = sc.axis == SweepAxis::Lambda || sc.axis == SweepAxis::Delta;
  if (cfg.experiment.fit_window || power_law) {
    const auto [lo, hi] = cfg.experiment.fit_window.value_or(
        std::pair{*std::min_element(sc.grid.begin(), sc.grid.end()),
                  *std::max_element(sc.grid.begin(), sc.grid.end())});
    try {
      side["fit"] = fit_json(fit_scaling_exponent(res, lo, hi));
    } catch (const std::invalid_argument& e) {
      side["fit_error"] = e.what();
    }
  }
  if (sc.axis == SweepAxis::Omega) {
    try {
      const auto peak = omega_sweep_peak(res);
      side["peak"] = {{"axis", peak.axis_value}, {"current", peak.current},
                      {"grid_index", peak.grid_index}, {"at_boundary", peak.at_boundary}};
    } catch (const std::invalid_argument& e) {
      side["peak_error"] = e.what();
    }
  }
  write_csv_with_sidecar(table, side, out, log);
  const bool any_failed = std::any_of(res.records.begin(), res.records.end(),
                                      [](const SweepRecord& r) { return !r.ok(); });
  if (any_failed) log << "warning: some grid points failed; see sidecar\n";
}

void converge(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  SweepConfig sc = cfg.sweep_config();
  sc.grid = grid_of(cfg);
  const ConvergenceStudy study = convergence_study(sc, cfg.experiment.levels, cfg.workers);

  io::Table table{{"axis", "M", "j_L", "j_R", "residual"}, {}};
  json points = json::array();
  for (const auto& p : study.points) {
    json levels = json::array();
    for (const auto& r : p.per_level) {
      table.rows.push_back({p.axis_value, static_cast<long long>(r.levels), r.j_L, r.j_R, r.residual});
      levels.push_back(record_json(r));
    }
    points.push_back({{"axis", p.axis_value}, {"converged", p.converged}, {"levels", levels}});
    log << to_string(sc.axis) << " = " << io::format_number(p.axis_value)
        << (p.converged ? ": converged\n" : ": NOT converged\n");
  }
  json side{{"config", to_json(cfg)},
            {"M_grid", study.levels},
            {"tolerance", kConvergenceTolerance},
            {"all_converged", study.all_converged()},
            {"points", points}};
  write_csv_with_sidecar(table, side, out, log);
}

void spectrum(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const ExtendedSystem ext = diagonalize(build_extended_system(cfg.model));
  io::Table table{{"n", "E_n"}, {}};
  for (const auto& r : export_spectrum(ext))
    table.rows.push_back({static_cast<long long>(r.n), r.energy});
  write_csv_with_sidecar(table, json{{"config", to_json(cfg)}, {"dim", ext.dim()}}, out, log);
}

void coupling_map(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const ExtendedSystem ext = diagonalize(build_extended_system(cfg.model));
  const RMatrix map = export_coupling_map(ext, cfg.experiment.bath);
  io::Table table{{"n", "m", "log10_abs"}, {}};
  for (Eigen::Index n = 0; n < map.rows(); ++n)
    for (Eigen::Index m = 0; m < map.cols(); ++m)
      table.rows.push_back({static_cast<long long>(n), static_cast<long long>(m), map(n, m)});
  json side{{"config", to_json(cfg)},
            {"bath", std::string(to_string(cfg.experiment.bath))},
            {"floor", kCouplingMapFloor},
            {"dim", ext.dim()}};
  write_csv_with_sidecar(table, side, out, log);
}

json ladder_baseline(const RunConfig& cfg) {
  const auto* ladder = std::get_if<Ladder>(&cfg.model.system);
  const auto eps = ladder ? ladder->eps : Ladder{}.eps;
  BareLadderBaths b;
  b.t_hot = cfg.baths.t_hot;
  b.t_cold = cfg.baths.t_cold;
  b.hot = {cfg.model.rc.lambda_L, cfg.model.rc.omega_L, cfg.baths.gamma};
  b.cold = {cfg.model.rc.lambda_R, cfg.model.rc.omega_R, cfg.baths.gamma};
  const LadderRates k = ladder_rates(eps, b);
  const auto p = baseline_steady_populations(k);
  return json{{"config", to_json(cfg)},
              {"eps", eps},
              {"rates", {{"k01_cold", k.k01_cold}, {"k10_cold", k.k10_cold},
                         {"k12_hot", k.k12_hot}, {"k21_hot", k.k21_hot}}},
              {"populations", p},
              {"current", baseline_current(k, p, eps)}};
}

json polaron(const RunConfig& cfg) {
  const PolaronParams pp = polaron_params(cfg.model);
  const ExtendedSystem ext = diagonalize(build_extended_system(cfg.model));
  const double gap = ext.energies()(1) - ext.energies()(0);
  const double theta = std::get<SpinBoson>(cfg.model.system).theta;
  // The dressed splitting that applies depends on which frame diagonalizes
  // the R coupling; intermediate angles have no closed form.
  json reference = nullptr;
  if (theta == std::numbers::pi / 2.0) reference = pp.renorm_delta_both;
  if (theta == 0.0) reference = pp.renorm_delta_left;
  json doc{{"config", to_json(cfg)},
           {"dressing", {{"L", pp.dressing[0]}, {"R", pp.dressing[1]}}},
           {"renorm_delta_both", pp.renorm_delta_both},
           {"renorm_delta_left", pp.renorm_delta_left},
           {"superexchange", pp.superexchange},
           {"numerical_gap", gap},
           {"reference_gap", reference}};
  if (reference.is_number())
    doc["gap_relative_error"] = std::abs(gap - reference.get<double>()) / reference.get<double>();
  return doc;
}

}  // namespace

bool is_subcommand(std::string_view name) {
  return std::find(kSubcommands.begin(), kSubcommands.end(), name) != kSubcommands.end();
}

bool writes_csv(std::string_view s) {
  return s == "sweep" || s == "spectrum" || s == "coupling-map" || s == "converge";
}

std::filesystem::path default_output(std::string_view s) {
  return std::string(s) + (writes_csv(s) ? ".csv" : ".json");
}

std::vector<double> default_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Lambda:
    case SweepAxis::Delta:
      return log_grid(1e-3, 1e-1, 9);
    case SweepAxis::Omega:
      return {1, 1.1, 1.25, 1.5, 2, 3, 5, 10, 20, 50};
    case SweepAxis::Theta: {
      std::vector<double> g;
      for (int i = 0; i <= 6; ++i) g.push_back(std::numbers::pi / 2.0 * i / 6.0);
      return g;
    }
    case SweepAxis::Levels:
      return {2, 3, 4, 5, 6};
  }
  return {};
}

int dispatch(const RunConfig& cfg, std::string_view subcommand,
             const std::filesystem::path& out, std::ostream& log) {
  if (!is_subcommand(subcommand)) {
    log << "error: unknown subcommand '" << subcommand << "'\n";
    return 2;
  }
  const auto path = out.empty() ? default_output(subcommand) : out;
  try {
    if (subcommand == "run") {
      io::emit_json(run(cfg, log), path);
    } else if (subcommand == "sweep") {
      sweep(cfg, path, log);
    } else if (subcommand == "converge") {
      converge(cfg, path, log);
    } else if (subcommand == "spectrum") {
      spectrum(cfg, path, log);
    } else if (subcommand == "coupling-map") {
      coupling_map(cfg, path, log);
    } else if (subcommand == "ladder-baseline") {
      io::emit_json(ladder_baseline(cfg), path);
    } else {
      io::emit_json(polaron(cfg), path);
    }
    if (!writes_csv(subcommand)) log << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << subcommand << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rcheat::cli
