#ifndef DRIFTSOLVE_COMMANDS_HPP
#define DRIFTSOLVE_COMMANDS_HPP

#include <string>
#include <vector>

#include "driftsolve/config.hpp"
#include "driftsolve/diagnostics.hpp"

namespace drift {

/// Time-steps one configuration; writes timeseries.csv plus a profile CSV
/// (x,F,f) per requested snapshot time and at the final time.
void cmd_run(const RunConfig& cfg);

/// Grid-refinement study against a cached fine reference; writes
/// convergence.csv.
void cmd_convergence(const RunConfig& cfg);

/// h-sweep at fixed tau; boundary jumps, errors against the limiting
/// fixation probabilities, and refinement orders; writes fixation.csv.
void cmd_fixation(const RunConfig& cfg);

/// Nested-grid sweep extracting the boundary power-law exponents; writes
/// powerlaw.csv and log-log boundary samples for the finest grid.
void cmd_powerlaw(const RunConfig& cfg);

/// Runs both scheme variants on the same configuration; writes
/// sfdm_compare.csv plus the expectation time series of both variants.
void cmd_compare_sfdm(const RunConfig& cfg);

/// Wright-Fisher Monte Carlo cross-check of the solver's fixation
/// prediction; writes oracle.csv.
void cmd_oracle(const RunConfig& cfg);

/// Advances the configured problem to its horizon (honoring
/// init_on_first_level) with an optional observer; shared by the commands
/// and the test suites.
CdfState run_config(const RunConfig& cfg, const StateObserver& observe = {},
                    long stride = 0);

/// Limiting jump heights (a_inf, b_inf) for the configured model/initial
/// data: overrides win; pure drift uses the initial mean, selection the
/// theta-weighted initial moment on a 1/10000 grid, one-way mutation (0,1).
std::pair<double, double> limit_jumps(const RunConfig& cfg);

} // namespace drift

#endif
