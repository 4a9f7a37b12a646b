// rcheat: steady-state heat currents through reaction-coordinate models.
//
//   rcheat <subcommand> --config cfg.json [--out path] [--workers N] [--axis name]

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcheat/cli.hpp"
#include "rcheat/config.hpp"

namespace {

nlohmann::json read_document(const std::string& path) {
  std::string text;
  if (path.empty()) return nlohmann::json::object();
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw rcheat::ConfigError("document", "cannot read '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw rcheat::ConfigError("document", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state heat transport with reaction coordinates and Redfield dissipators"};
  std::string positional, flag_subcommand, config_path, out_path, axis;
  int workers = 0;

  std::string names;
  for (auto s : rcheat::cli::kSubcommands) names += (names.empty() ? "" : ", ") + std::string(s);
  app.add_option("command", positional, "One of: " + names);
  app.add_option("--subcommand", flag_subcommand, "Same as the positional argument");
  app.add_option("-c,--config", config_path, "JSON config file, '-' for stdin (default: all defaults)");
  app.add_option("-o,--out", out_path, "Output path (default: <subcommand>.csv or .json)");
  app.add_option("-w,--workers", workers, "Worker threads; overrides solver.workers")
      ->check(CLI::PositiveNumber);
  app.add_option("--axis", axis, "Sweep axis; overrides experiment.axis");
  CLI11_PARSE(app, argc, argv);

  if (!positional.empty() && !flag_subcommand.empty() && positional != flag_subcommand) {
    std::cerr << "error: conflicting subcommands '" << positional << "' and '" << flag_subcommand
              << "'\n";
    return 2;
  }
  const std::string subcommand = positional.empty() ? flag_subcommand : positional;
  if (subcommand.empty()) {
    std::cerr << "error: no subcommand given (" << names << ")\n";
    return 2;
  }
  if (!rcheat::cli::is_subcommand(subcommand)) {
    std::cerr << "error: unknown subcommand '" << subcommand << "' (" << names << ")\n";
    return 2;
  }

  rcheat::RunConfig cfg;
  try {
    auto doc = read_document(config_path);
    // Overrides go through the document so that they are validated and echoed.
    if (doc.is_object()) {
      if (workers > 0) doc["solver"]["workers"] = workers;
      if (!axis.empty()) doc["experiment"]["axis"] = axis;
    }
    cfg = rcheat::parse_config(doc);
  } catch (const rcheat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return rcheat::cli::dispatch(cfg, subcommand, out_path, std::cerr);
}
