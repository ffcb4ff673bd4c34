#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailwalk/errors.hpp"
#include "tailwalk/kernel.hpp"

namespace tailwalk {

/// Malformed or incomplete configuration. line() is 1-based; 0 when the
/// problem is not tied to a line (a missing key).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct SolverConfig {
    /// "auto", "series_lattice", "fourier_continuum" or "ctrw".
    std::string method = "auto";
    double tolerance = 1e-9;
    double max_spacing = 0.25;
    /// Output half-width for `density`; 0 picks 10 sqrt(sigma2 t).
    double radius = 0.0;
    /// CTRW paths when method = "ctrw".
    long paths = 100000;

    bool operator==(const SolverConfig&) const = default;
};

struct SweepConfig {
    std::vector<double> times;
    /// Points along `directions[0]` (or the first axis).
    std::vector<double> x;
    std::vector<double> lambdas;
    /// Flattened, d entries per direction; empty means the first axis.
    std::vector<double> directions;
    double delta = 0.5;
    double green_tolerance = 1e-12;

    bool operator==(const SweepConfig&) const = default;
};

struct BranchConfig {
    double beta = 0.5;
    double mu = 0.25;
    long runs = 10000;
    long cap = 100000;
    std::vector<double> times;
    double cell_width = 1.0;
    long half_cells = 60;

    bool operator==(const BranchConfig&) const = default;
};

/// Everything a CLI run needs. Text form: flat `key = value` lines under
/// [kernel], [solver], [sweep] and [branching] headers; `seed` and `output`
/// sit at the top.
struct ExperimentConfig {
    KernelSpec kernel;
    SolverConfig solver;
    SweepConfig sweep;
    BranchConfig branching;
    std::optional<std::uint64_t> seed;
    std::string output = "out";

    bool operator==(const ExperimentConfig&) const = default;

    /// ConfigError unless a seed is present.
    std::uint64_t require_seed(const std::string& purpose) const;
};

/// Parses the TOML subset: comments, [section] headers, key = value with
/// strings, integers, floats, booleans and single-line flat arrays.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace tailwalk
