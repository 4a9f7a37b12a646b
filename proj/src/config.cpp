#include "rcheat/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

namespace rcheat {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Walks one JSON object, remembering which keys were read so that anything
// left over can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "document" : path_, "must be an object");
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(field(key), "must be a number");
    return v->get<double>();
  }

  std::optional<int> integer(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) throw ConfigError(field(key), "must be an integer");
    return v->get<int>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(field(key), "must be a string");
    return v->get<std::string>();
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

std::vector<double> parse_grid(const json& g, const std::string& path) {
  std::vector<double> out;
  if (g.is_array()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      check(g[i].is_number(), path + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(g[i].get<double>());
    }
  } else {
    ObjectReader r(g, path);
    const auto start = r.number("start");
    const auto stop = r.number("stop");
    const auto points = r.integer("points");
    const std::string spacing = r.string("spacing").value_or("linear");
    r.finish();
    check(start.has_value(), r.field("start"), "required");
    check(stop.has_value(), r.field("stop"), "required");
    check(points.has_value() && *points >= 1, r.field("points"), "must be an integer >= 1");
    check(spacing == "linear" || spacing == "log", r.field("spacing"), "must be 'linear' or 'log'");
    const bool log = spacing == "log";
    check(!log || (*start > 0.0 && *stop > 0.0), path, "log spacing requires positive bounds");
    const double a = log ? std::log(*start) : *start;
    const double b = log ? std::log(*stop) : *stop;
    for (int i = 0; i < *points; ++i) {
      const double t = *points == 1 ? 0.0 : static_cast<double>(i) / (*points - 1);
      const double v = a + (b - a) * t;
      out.push_back(log ? std::exp(v) : v);
    }
  }
  check(!out.empty(), path, "must not be empty");
  bool up = true, down = true;
  for (std::size_t i = 1; i < out.size(); ++i) {
    up = up && out[i] > out[i - 1];
    down = down && out[i] < out[i - 1];
  }
  check(out.size() == 1 || up || down, path, "must be strictly monotone");
  return out;
}

void parse_model(const json* j, RunConfig& cfg) {
  const json empty = json::object();
  ObjectReader r(j ? *j : empty, "model");
  const std::string variant = r.string("variant").value_or("spin_boson");
  check(variant == "spin_boson" || variant == "ladder", r.field("variant"),
        "must be 'spin_boson' or 'ladder'");
  const bool sb = variant == "spin_boson";

  if (sb) {
    SpinBoson s;
    s.delta = r.number("delta").value_or(0.1);
    s.theta = r.number("theta").value_or(std::numbers::pi / 2.0);
    check(std::isfinite(s.delta), r.field("delta"), "must be finite");
    check(s.theta >= 0.0 && s.theta <= std::numbers::pi / 2.0, r.field("theta"),
          "must lie in [0, pi/2]");
    cfg.model.system = s;
  } else {
    Ladder l;
    l.eps[0] = r.number("eps0").value_or(0.0);
    l.eps[1] = r.number("delta").value_or(0.5);
    l.eps[2] = r.number("eps2").value_or(1.0);
    check(l.eps[0] <= l.eps[1], r.field("delta"), "must satisfy eps0 <= delta");
    check(l.eps[1] <= l.eps[2], r.field("delta"), "must satisfy delta <= eps2");
    cfg.model.system = l;
  }

  const double lambda = r.number("lambda").value_or(0.1);
  const double omega = r.number("omega").value_or(10.0);
  auto& rc = cfg.model.rc;
  rc.lambda_L = r.number("lambda_L").value_or(lambda);
  rc.lambda_R = r.number("lambda_R").value_or(lambda);
  rc.omega_L = r.number("omega_L").value_or(omega);
  rc.omega_R = r.number("omega_R").value_or(omega);
  for (const auto& [name, v] : {std::pair{"lambda_L", rc.lambda_L}, std::pair{"lambda_R", rc.lambda_R}})
    check(v >= 0.0, r.field(name), "must be >= 0");
  for (const auto& [name, v] : {std::pair{"omega_L", rc.omega_L}, std::pair{"omega_R", rc.omega_R}})
    check(v > 0.0, r.field(name), "must be > 0");
  rc.levels = sb ? 4 : 5;
  r.finish();
}

void parse_baths(const json* j, RunConfig& cfg) {
  if (!j) return;
  ObjectReader r(*j, "baths");
  auto& b = cfg.baths;
  b.t_hot = r.number("T_h").value_or(b.t_hot);
  b.t_cold = r.number("T_c").value_or(b.t_cold);
  b.gamma = r.number("gamma").value_or(b.gamma);
  b.cutoff = r.number("cutoff").value_or(b.cutoff);
  r.finish();
  check(b.t_hot > 0.0, r.field("T_h"), "must be > 0");
  check(b.t_cold > 0.0, r.field("T_c"), "must be > 0");
  check(b.gamma > 0.0, r.field("gamma"), "must be > 0");
  check(b.cutoff > 0.0, r.field("cutoff"), "must be > 0");
}

// Returns whether M was given explicitly.
bool parse_solver(const json* j, RunConfig& cfg) {
  if (!j) return false;
  ObjectReader r(*j, "solver");
  auto& s = cfg.solver;
  const auto m = r.integer("M");
  if (m) {
    check(*m >= 2, r.field("M"), "must be >= 2");
    cfg.model.rc.levels = *m;
  }
  s.residual_tolerance = r.number("residual_tolerance").value_or(s.residual_tolerance);
  s.fallback_rcond = r.number("fallback_rcond").value_or(s.fallback_rcond);
  s.singular_rcond = r.number("singular_rcond").value_or(s.singular_rcond);
  s.kernel_tolerance = r.number("kernel_tolerance").value_or(s.kernel_tolerance);
  s.max_refinement_steps = r.integer("max_refinement_steps").value_or(s.max_refinement_steps);
  cfg.workers = r.integer("workers").value_or(cfg.workers);
  r.finish();
  check(s.residual_tolerance > 0.0, r.field("residual_tolerance"), "must be > 0");
  check(s.fallback_rcond > 0.0, r.field("fallback_rcond"), "must be > 0");
  check(s.singular_rcond >= 0.0, r.field("singular_rcond"), "must be >= 0");
  check(s.kernel_tolerance > 0.0, r.field("kernel_tolerance"), "must be > 0");
  check(s.max_refinement_steps >= 0, r.field("max_refinement_steps"), "must be >= 0");
  check(cfg.workers >= 1, r.field("workers"), "must be >= 1");
  return m.has_value();
}

void parse_experiment(const json* j, RunConfig& cfg) {
  if (!j) return;
  ObjectReader r(*j, "experiment");
  auto& e = cfg.experiment;
  if (auto axis = r.string("axis")) {
    try {
      e.axis = parse_sweep_axis(*axis);
    } catch (const std::invalid_argument&) {
      throw ConfigError(r.field("axis"), "must be one of lambda, delta, omega, theta, M");
    }
  }
  if (const json* g = r.get("grid")) e.grid = parse_grid(*g, r.field("grid"));
  if (const json* w = r.get("fit_window")) {
    check(w->is_array() && w->size() == 2 && (*w)[0].is_number() && (*w)[1].is_number(),
          r.field("fit_window"), "must be [lo, hi]");
    const double lo = (*w)[0].get<double>(), hi = (*w)[1].get<double>();
    check(lo < hi, r.field("fit_window"), "requires lo < hi");
    e.fit_window = std::pair{lo, hi};
  }
  if (const json* m = r.get("M_grid")) {
    check(m->is_array() && !m->empty(), r.field("M_grid"), "must be a nonempty array");
    e.levels.clear();
    for (const auto& v : *m) {
      check(v.is_number_integer() && v.get<int>() >= 2, r.field("M_grid"),
            "entries must be integers >= 2");
      check(e.levels.empty() || v.get<int>() > e.levels.back(), r.field("M_grid"),
            "must be ascending");
      e.levels.push_back(v.get<int>());
    }
  }
  if (auto bath = r.string("bath")) {
    check(*bath == "L" || *bath == "R", r.field("bath"), "must be 'L' or 'R'");
    e.bath = *bath == "L" ? Contact::L : Contact::R;
  }
  r.finish();
  if (e.axis == SweepAxis::Theta)
    check(cfg.model.is_spin_boson(), r.field("axis"), "theta requires the spin_boson model");
  for (double v : e.grid) {
    try {
      with_axis_value(cfg.model, e.axis, v).validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(r.field("grid"), ex.what());
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

SweepConfig RunConfig::sweep_config() const {
  SweepConfig s;
  s.model = model;
  s.axis = experiment.axis;
  s.grid = experiment.grid;
  s.baths = baths;
  s.solver = solver;
  return s;
}

RunConfig parse_config(const json& doc) {
  ObjectReader top(doc, "");
  RunConfig cfg;
  parse_model(top.get("model"), cfg);
  parse_baths(top.get("baths"), cfg);
  const bool levels_given = parse_solver(top.get("solver"), cfg);
  parse_experiment(top.get("experiment"), cfg);
  top.finish();
  // Omega sweeps of the spin-boson model need a deeper truncation.
  if (!levels_given && cfg.model.is_spin_boson() && cfg.experiment.axis == SweepAxis::Omega)
    cfg.model.rc.levels = 7;
  cfg.model.validate();
  return cfg;
}

RunConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("document", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("document", "cannot read '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }
  return parse_config_text(text);
}

json to_json(const RunConfig& cfg) {
  json model;
  if (const auto* sb = std::get_if<SpinBoson>(&cfg.model.system)) {
    model["variant"] = "spin_boson";
    model["delta"] = sb->delta;
    model["theta"] = sb->theta;
  } else {
    const auto& eps = std::get<Ladder>(cfg.model.system).eps;
    model["variant"] = "ladder";
    model["eps0"] = eps[0];
    model["delta"] = eps[1];
    model["eps2"] = eps[2];
  }
  model["lambda_L"] = cfg.model.rc.lambda_L;
  model["lambda_R"] = cfg.model.rc.lambda_R;
  model["omega_L"] = cfg.model.rc.omega_L;
  model["omega_R"] = cfg.model.rc.omega_R;

  json baths{{"T_h", cfg.baths.t_hot},
             {"T_c", cfg.baths.t_cold},
             {"gamma", cfg.baths.gamma},
             {"cutoff", cfg.baths.cutoff}};
  json solver{{"M", cfg.model.rc.levels},
              {"residual_tolerance", cfg.solver.residual_tolerance},
              {"fallback_rcond", cfg.solver.fallback_rcond},
              {"singular_rcond", cfg.solver.singular_rcond},
              {"kernel_tolerance", cfg.solver.kernel_tolerance},
              {"max_refinement_steps", cfg.solver.max_refinement_steps},
              {"workers", cfg.workers}};
  json experiment{{"axis", std::string(to_string(cfg.experiment.axis))},
                  {"grid", cfg.experiment.grid},
                  {"M_grid", cfg.experiment.levels},
                  {"bath", std::string(to_string(cfg.experiment.bath))}};
  if (cfg.experiment.fit_window)
    experiment["fit_window"] = {cfg.experiment.fit_window->first, cfg.experiment.fit_window->second};
  return json{{"model", model}, {"baths", baths}, {"solver", solver}, {"experiment", experiment}};
}

}  // namespace rcheat
