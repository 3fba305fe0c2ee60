#ifndef DRIFTSOLVE_CONFIG_HPP
#define DRIFTSOLVE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftsolve/model.hpp"
#include "driftsolve/scheme.hpp"

namespace drift {

/// Bad or missing configuration; maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing artifacts; CLI exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One run configuration, read from a flat key=value file with CLI
/// overrides. Commands use the subset of fields they need.
struct RunConfig {
    std::string model_kind;            // pure-drift | selection | one-way | two-way
    double eta = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double mu = 0.0;

    std::string init_kind = "uniform"; // gaussian | delta0 | uniform
    double x0 = 0.5;
    double sigma = 0.01;

    std::string scheme = "rfdm";       // rfdm | sfdm
    int k = 100;
    double tau = 1e-4;
    double horizon = 1.0;

    long stride = 0;                   // 0: observe only start and end
    std::uint64_t seed = 0;
    std::string out_dir = ".";

    std::vector<int> grids;            // sweep interval counts
    std::vector<double> taus;          // per-grid steps for convergence runs
    int ref_k = 0;
    double ref_tau = 0.0;
    double window_lo = 0.3;
    double window_hi = 0.7;
    std::vector<double> snapshots;     // profile output times

    std::optional<double> a_inf;
    std::optional<double> b_inf;

    /// Treat the initial data as occupying the first temporal grid level
    /// (t_1 = tau), so a run to horizon T performs N-1 steps.
    bool init_on_first_level = false;

    // Wright-Fisher oracle
    int pop_size = 200;
    long replicates = 10000;
    long generation_cap = 0;
    double init_freq = 0.7;

    DriftModel model() const;              ///< throws ConfigError if incomplete
    InitialCondition initial() const;      ///< throws ConfigError if incomplete
    SchemeVariant variant() const;
};

/// Parses a key=value file ('#' starts a comment). Throws ConfigError on
/// unknown keys or malformed values, IoError when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Applies one "key=value" override in place.
void apply_override(RunConfig& cfg, const std::string& key_value);

} // namespace drift

#endif
