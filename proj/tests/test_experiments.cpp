#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rcheat/experiments.hpp"

using namespace rcheat;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig sb_sweep(SweepAxis axis, std::vector<double> grid, double theta, int levels = 3) {
  SweepConfig c;
  c.model = {SpinBoson{0.1, theta}, {0.1, 0.1, 10.0, 10.0, levels}};
  c.axis = axis;
  c.grid = std::move(grid);
  return c;
}

SweepResult synthetic(const std::vector<double>& x, double (*f)(double)) {
  SweepResult r;
  for (double v : x) {
    SweepRecord rec;
    rec.axis_value = v;
    rec.j_L = f(v);
    rec.j_R = -rec.j_L;
    r.records.push_back(rec);
  }
  return r;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return g;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("axis names") {
  for (auto a : {SweepAxis::Lambda, SweepAxis::Delta, SweepAxis::Omega, SweepAxis::Theta,
                 SweepAxis::Levels})
    CHECK(parse_sweep_axis(to_string(a)) == a);
  CHECK(to_string(SweepAxis::Levels) == "M");
  CHECK_THROWS_AS(parse_sweep_axis("kappa"), std::invalid_argument);
}

TEST_CASE("axis values land on the right parameter") {
  const ModelSpec sb{SpinBoson{0.1, 0.0}, {0.1, 0.2, 10.0, 5.0, 3}};
  const ModelSpec lad{Ladder{}, {0.1, 0.1, 10.0, 10.0, 3}};
  auto m = with_axis_value(sb, SweepAxis::Lambda, 0.5);
  CHECK(m.rc.lambda_L == 0.5);
  CHECK(m.rc.lambda_R == 0.5);
  m = with_axis_value(sb, SweepAxis::Omega, 2.0);
  CHECK(m.rc.omega_L == 2.0);
  CHECK(m.rc.omega_R == 2.0);
  CHECK(std::get<SpinBoson>(with_axis_value(sb, SweepAxis::Delta, 0.3).system).delta == 0.3);
  CHECK(std::get<SpinBoson>(with_axis_value(sb, SweepAxis::Theta, 0.3).system).theta == 0.3);
  CHECK(with_axis_value(sb, SweepAxis::Levels, 6).rc.levels == 6);
  CHECK_THROWS_AS(with_axis_value(sb, SweepAxis::Levels, 2.5), std::invalid_argument);
  CHECK(std::get<Ladder>(with_axis_value(lad, SweepAxis::Delta, 0.25).system).eps[1] == 0.25);
  CHECK_THROWS_AS(with_axis_value(lad, SweepAxis::Theta, 0.1), std::invalid_argument);
}

TEST_CASE("sweep config validation") {
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Lambda, {}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Lambda, {0.1, 0.3, 0.2}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Lambda, {0.1, 0.1}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Lambda, {-0.1, 0.1}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Theta, {0.0, 2.0}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(sb_sweep(SweepAxis::Levels, {1, 2}, 0.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(sb_sweep(SweepAxis::Lambda, {0.3, 0.2, 0.1}, 0.0).validate());
  auto bad = sb_sweep(SweepAxis::Lambda, {0.1}, 0.0);
  bad.baths.t_cold = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("synthetic fits") {
  const auto x = logspace(1e-3, 1e-2, 8);
  const auto quad = fit_scaling_exponent(synthetic(x, [](double l) { return 3.0 * l * l; }), 1e-3, 1e-2);
  CHECK(std::abs(quad.slope - 2.0) <= 1e-6);
  CHECK(quad.intercept == doctest::Approx(std::log(3.0)));
  CHECK(quad.r2 == doctest::Approx(1.0));
  CHECK(quad.points == 8);
  CHECK(quad.window_lo == 1e-3);

  const auto small = logspace(1e-4, 1e-3, 6);
  const auto mixed =
      fit_scaling_exponent(synthetic(small, [](double l) { return l * l + 1e2 * l * l * l * l; }), 0, 1);
  CHECK(std::abs(mixed.slope - 2.0) < 1e-3);
  const auto large = logspace(10.0, 100.0, 6);
  CHECK(std::abs(fit_scaling_exponent(synthetic(large, [](double l) { return l * l + 1e2 * l * l * l * l; }), 0, 1e3)
                     .slope - 4.0) < 1e-3);

  // window restriction
  const auto w = fit_scaling_exponent(synthetic(logspace(1e-3, 1.0, 10), [](double l) { return l; }), 0.009, 1.0);
  CHECK(w.points == 7);

  CHECK_THROWS_AS(fit_scaling_exponent(synthetic(logspace(1, 2, 3), [](double l) { return l; }), 0, 9),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling_exponent(synthetic(x, [](double l) { return -l; }), 0, 1), std::invalid_argument);
  auto with_failure = synthetic(x, [](double l) { return l; });
  with_failure.records[2].error = "boom";
  CHECK_THROWS_AS(fit_scaling_exponent(with_failure, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(fit_loglog({1, 2, 3}, {1, 2}), std::invalid_argument);
}

TEST_CASE("peak estimation") {
  const std::vector<double> x{1, 2, 3.5, 4, 6, 9};
  const auto sym = omega_sweep_peak(synthetic(x, [](double w) { return 100.0 - (w - 3.7) * (w - 3.7); }));
  CHECK(sym.axis_value == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(sym.current == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(sym.grid_index == 2);
  CHECK_FALSE(sym.at_boundary);

  const auto mono = omega_sweep_peak(synthetic(x, [](double w) { return w; }));
  CHECK(mono.at_boundary);
  CHECK(mono.axis_value == 9.0);
  const auto first = omega_sweep_peak(synthetic(x, [](double w) { return 1.0 / w; }));
  CHECK(first.at_boundary);
  CHECK(first.grid_index == 0);

  auto none = synthetic(x, [](double w) { return w; });
  for (auto& r : none.records) r.error = "x";
  CHECK_THROWS_AS(omega_sweep_peak(none), std::invalid_argument);
}

TEST_CASE("lambda sweep is monotone and conserving") {
  const auto res = run_sweep(sb_sweep(SweepAxis::Lambda, logspace(1e-3, 1e-1, 5), kPi / 2));
  REQUIRE(res.records.size() == 5);
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    CHECK(r.ok());
    CHECK(r.levels == 3);
    CHECK(std::abs(r.j_L + r.j_R) <= 1e-6 * std::abs(r.j_L) + 1e-14);
    if (i) CHECK(r.current() > res.records[i - 1].current());
  }
}

TEST_CASE("splitting dependence") {
  const auto pi2 = run_sweep(sb_sweep(SweepAxis::Delta, {1e-3, 1e-2, 1e-1}, kPi / 2));
  CHECK(pi2.records[0].current() < 0.05 * pi2.records[2].current());
  CHECK(pi2.records[0].current() < pi2.records[1].current());

  const auto zero = run_sweep(sb_sweep(SweepAxis::Delta, {0.0, 0.1}, 0.0));
  CHECK(zero.records[0].current() > 0.5 * zero.records[1].current());

  // The ladder's inter-bath current barely notices where the middle level sits.
  SweepConfig lad = sb_sweep(SweepAxis::Delta, {0.0, 0.25, 0.5, 0.75}, 0.0);
  lad.model.system = Ladder{};
  const auto ladder = run_sweep(lad);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : ladder.records) {
    REQUIRE(r.ok());
    lo = std::min(lo, r.current());
    hi = std::max(hi, r.current());
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("worker count does not change results") {
  const auto cfg = sb_sweep(SweepAxis::Theta, {0.0, 0.4, 0.8, 1.2, kPi / 2}, 0.0, 2);
  const auto serial = run_sweep(cfg, 1);
  const auto parallel = run_sweep(cfg, 3);
  const auto again = run_sweep(cfg, 1);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    for (const auto* other : {&parallel, &again}) {
      const auto& a = serial.records[i];
      const auto& b = other->records[i];
      CHECK(bitwise_equal(a.axis_value, b.axis_value));
      CHECK(bitwise_equal(a.j_L, b.j_L));
      CHECK(bitwise_equal(a.j_R, b.j_R));
      CHECK(bitwise_equal(a.residual, b.residual));
    }
  }
}

TEST_CASE("failures stay in their row") {
  auto cfg = sb_sweep(SweepAxis::Lambda, {0.0, 0.05, 0.1}, 0.0, 2);
  const auto res = run_sweep(cfg);
  CHECK(res.records[0].ok());
  CHECK_FALSE(res.records[0].note.empty());
  CHECK(std::abs(res.records[0].current()) <= 1e-14);

  cfg.solver.residual_tolerance = 1e-40;
  cfg.solver.max_refinement_steps = 0;
  const auto bad = run_sweep(cfg);
  REQUIRE(bad.records.size() == 3);
  CHECK_FALSE(bad.records[1].ok());
  CHECK(std::isnan(bad.records[1].j_L));
  CHECK(bad.records[1].axis_value == 0.05);
}

TEST_CASE("truncation convergence") {
  SUBCASE("no coupling: currents independent of M") {
    const auto study = convergence_study(sb_sweep(SweepAxis::Lambda, {0.0}, 0.0), {2, 3});
    REQUIRE(study.points.size() == 1);
    CHECK(study.points[0].per_level.size() == 2);
    for (const auto& r : study.points[0].per_level) CHECK(std::abs(r.current()) <= 1e-14);
    CHECK(study.all_converged());
  }
  SUBCASE("weak coupling converges") {
    const auto study = convergence_study(sb_sweep(SweepAxis::Omega, {2.0, 10.0}, 0.0), {4, 5});
    CHECK(study.all_converged());
  }
  SUBCASE("lambda / Omega = 0.5 with tiny truncations does not") {
    auto cfg = sb_sweep(SweepAxis::Lambda, {5.0}, 0.0);
    const auto study = convergence_study(cfg, {2, 3});
    CHECK_FALSE(study.points[0].converged);
    CHECK_FALSE(study.all_converged());
  }
  CHECK_THROWS_AS(convergence_study(sb_sweep(SweepAxis::Lambda, {0.1}, 0.0), {3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(sb_sweep(SweepAxis::Lambda, {0.1}, 0.0), {}), std::invalid_argument);
}
