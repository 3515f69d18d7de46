#pragma once

#include "ghostfield/quadrature.hpp"
#include "ghostfield/units.hpp"

#include <string>
#include <vector>

namespace ghostfield {

struct ParsedConfig {
    Configuration config;
    QuadratureSpec spec;
    int n_max = 32;
    bool has_k_max = false; // false: derive k_max = 200/R at run time
};

/// Flat key=value file, '#' comments, unknown keys are hard errors.
ParsedConfig parse_config(const std::string& path);

/// Entry point behind the CLI binary. argv includes the program name.
/// Returns 0 on success, 2 on configuration errors, 3 on numerical
/// non-convergence.
int run_command(const std::vector<std::string>& argv);

} // namespace ghostfield
