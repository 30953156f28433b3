#pragma once

#include "wstring/params.hpp"
#include "wstring/solver.hpp"

#include <string>
#include <vector>

namespace wstring {

struct GridConfig {
    double R = 8.0;
    int n = 257;
};

// One parsed run description.  The coefficient block is resolved to a
// Params up front, so every command starts from validated inputs.
struct RunConfig {
    Params params;                     // built with epsilons.front()
    std::vector<double> epsilons;      // single value or sweep, in file order
    bool is_sweep = false;
    GridConfig grid;
    solver::NewtonOptions newton;
    std::string out_dir = "out";

    Params params_at(double eps) const; // same coefficients, different epsilon
};

// Parses a JSON config document.  Unknown keys anywhere are errors, as
// are missing required blocks, mixed coefficient styles, and values that
// violate the Params invariants.  Throws ConfigError with the offending
// key in the message; admissibility failures pass through as
// AdmissibilityError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace wstring
