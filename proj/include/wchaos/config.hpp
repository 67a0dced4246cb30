#ifndef WCHAOS_CONFIG_HPP
#define WCHAOS_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "wchaos/chaos_space.hpp"
#include "wchaos/oracles.hpp"
#include "wchaos/propagator.hpp"

namespace wchaos {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A full batch-run description: equation, discretization, truncation,
// reported weights, outputs, and Monte Carlo settings.
struct RunConfig {
    std::string preset;  // equation preset name, empty for expression input
    PropagatorConfig prop;
    std::vector<WeightPair> weights{{0.0, 0.0}};
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json
    McConfig mc;
    std::string config_hash;  // FNV-1a of the canonical config text
};

// Named equation presets: "paper-example" (a = rho = 1, Gaussian datum) and
// "full2nd-varcoeff" (a = 1 + 0.2 sin x, rho = 0.5, b = sigma = 0.1).
RunConfig preset_config(const std::string& name);

// Parses and validates a JSON config file; unknown keys are rejected and
// every error message names the offending key.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Header comment placed on every output file: config hash, truncation,
// grid, and dt.
std::string output_header(const RunConfig& cfg);

}  // namespace wchaos

#endif
