#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rcheat/config.hpp"

namespace rcheat::cli {

inline constexpr std::array<std::string_view, 7> kSubcommands{
    "run", "sweep", "spectrum", "coupling-map", "ladder-baseline", "polaron", "converge"};

bool is_subcommand(std::string_view name);

/// `sweep`, `spectrum`, `coupling-map` and `converge` write CSV plus a JSON
/// sidecar; the others write one JSON document.
bool writes_csv(std::string_view subcommand);

/// `<subcommand>.csv` or `<subcommand>.json` in the working directory.
std::filesystem::path default_output(std::string_view subcommand);

/// Grid used by `sweep` and `converge` when the config gives none.
std::vector<double> default_grid(SweepAxis axis);

/// Runs one subcommand and writes its artifacts. Returns 0 on success, 2 for
/// an unknown subcommand, 1 for any other failure (diagnostic on `log`).
int dispatch(const RunConfig& cfg, std::string_view subcommand,
             const std::filesystem::path& out, std::ostream& log);

}  // namespace rcheat::cli
