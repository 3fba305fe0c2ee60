#ifndef DRIFTSOLVE_WRIGHT_FISHER_HPP
#define DRIFTSOLVE_WRIGHT_FISHER_HPP

#include <cstdint>

#include "driftsolve/model.hpp"

namespace drift {

/// Discrete Wright-Fisher chain setup. Each generation resamples the allele
/// count binomially with success probability x + M(x)/pop_size, clamped to
/// [0,1]; one diffusion time unit corresponds to pop_size generations.
struct WfConfig {
    int pop_size = 100;            ///< N_e, at least 10
    long generation_cap = 0;       ///< 0 selects the default 100 * pop_size
    long replicates = 1;
    std::uint64_t seed = 0;
    DriftModel model;
    double init_freq = 0.5;        ///< initial allele frequency in [0,1]
};

struct FixationEstimate {
    double fixed_at_one = 0.0;     ///< fraction of replicates absorbed at x=1
    double fixed_at_zero = 0.0;
    double unresolved = 0.0;       ///< hit the generation cap; never dropped
    long replicates = 0;
};

/// Runs the replicates (in parallel; per-replicate RNG streams are derived
/// from (seed, replicate index), so results are bitwise reproducible) and
/// returns the absorbed fractions. Throws std::invalid_argument on a bad
/// configuration.
FixationEstimate simulate_fixation(const WfConfig& cfg);

} // namespace drift

#endif
