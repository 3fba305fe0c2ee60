#ifndef DRIFTSOLVE_SCHEME_HPP
#define DRIFTSOLVE_SCHEME_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "driftsolve/model.hpp"

namespace drift {

/// Rfdm zeroes the diffusion coefficient at the outermost half nodes
/// (a_{1/2} = a_{K-1/2} = 0) so the degenerate boundary stays decoupled;
/// Sfdm keeps a(x) there.
enum class SchemeVariant { Rfdm, Sfdm };

/// Thrown when the numerics break down (zero pivot, non-finite state).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Banded form of one implicit step, B F^n = rhs. Entry i of lower/diag/upper
/// holds b_{i,i-1}, b_{ii}, b_{i,i+1}. Rows 0 and K are identity rows with
/// rhs 0 and 1; interior rows satisfy lower,upper <= 0 < diag and
/// diag - |lower| - |upper| = 1.
struct TridiagonalSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;

    std::size_t size() const { return diag.size(); }
};

/// Assembles the fully implicit step from state `prev`:
///   (F_i - prev_i)/tau - (a_{i+1/2} D_h F_{i+1} - a_{i-1/2} D_h F_i)/h
///     + M(x_i) D F_i = 0,
/// every spatial term at the new time level. The one-sided convection
/// difference is chosen per node: mutation drifts use the upstream stencil
/// (backward when M(x_i) >= 0); selection drift vanishes at the endpoints
/// like a(x), so its stencil reaches toward the interior (forward on the
/// left half, backward on the right) and rows 1, K-1 never read the pinned
/// boundary values.
TridiagonalSystem assemble(const CdfState& prev, const DriftModel& model,
                           const GridSpec& grid, double tau, SchemeVariant variant);

/// Thomas elimination without pivoting. Valid for the diagonally dominant
/// systems produced by assemble (interior dominance margin 1); throws
/// numerical_error on a vanishing pivot.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

/// One implicit step of size tau; boundary values re-pinned exactly.
CdfState step(const CdfState& prev, const DriftModel& model, const GridSpec& grid,
              double tau, SchemeVariant variant);

using StateObserver = std::function<void(const CdfState&)>;

/// Runs time.steps() implicit steps from the initial condition. The observer
/// (when set) sees the initial state, every observe_stride-th state, and the
/// final state. Deterministic for fixed inputs.
CdfState run(const InitialCondition& ic, const DriftModel& model, const GridSpec& grid,
             const TimeSpec& time, SchemeVariant variant,
             const StateObserver& observe = {}, long observe_stride = 1);

/// Recovers the density from the CDF: central differences away from the
/// boundary, one-sided at i in {0, 1, K-1, K} where the CDF may jump.
/// two_way_mode switches i = 1 and K-1 to central differences (the two-way
/// steady state is continuous up to the boundary).
std::vector<double> recover_pdf(const CdfState& state, const GridSpec& grid,
                                bool two_way_mode = false);

} // namespace drift

#endif
