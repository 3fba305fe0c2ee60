#ifndef DRIFTSOLVE_DIAGNOSTICS_HPP
#define DRIFTSOLVE_DIAGNOSTICS_HPP

#include <optional>
#include <utility>

#include "driftsolve/model.hpp"

namespace drift {

/// Scalar observables of one CDF state.
struct DiagnosticsReport {
    double time = 0.0;
    double total_prob = 0.0;       ///< F_K - F_0, exactly 1 for a valid state
    double expectation = 0.0;      ///< discrete E_h
    std::optional<double> theta_moment;  ///< selection models only
    double jump_left = 0.0;        ///< F_1 - F_0
    double jump_right = 0.0;       ///< F_K - F_{K-1}
};

/// One line of a grid-refinement study.
struct ConvergenceRow {
    double h = 0.0;
    double tau = 0.0;
    double error_l2 = 0.0;
    double error_linf = 0.0;
    std::optional<double> order_l2;    // defined from the second row on
    std::optional<double> order_linf;
};

/// Trapezoid discrete expectation
///   E_h = 1 - h*sum_{i=1}^{K-1} F_i - (h/2)(F_0 + F_K).
double discrete_expectation(const CdfState& state, const GridSpec& grid);

/// Theta-weighted moment for a selection model,
///   E_h^theta = 1 - (1/A) * trapz(F_i * w_i),  w(x) = exp(-(eta/2)x^2 - beta*x),
/// with A the trapezoid of w on the same grid. Throws std::invalid_argument
/// for non-selection models.
double discrete_theta_moment(const CdfState& state, const GridSpec& grid,
                             const DriftModel& model);

/// (|jump_left - a_inf|, |jump_right - b_inf|).
std::pair<double, double> fixation_errors(const CdfState& state, double a_inf,
                                          double b_inf);

struct ErrorNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// Windowed error of a coarse solution against a reference on a nested finer
/// grid: l2 = sqrt(sum_i (F_i - Fref(x_i))^2 h) and the max over the coarse
/// nodes inside [window_lo, window_hi]. The reference interval count must be
/// a multiple of the coarse one and the window endpoints must sit on coarse
/// nodes; otherwise std::invalid_argument.
ErrorNorms local_error(const CdfState& numeric, const CdfState& reference,
                       double window_lo, double window_hi);

/// log2(e_coarse / e_fine) for one halving of h. Both errors must be > 0.
double convergence_order(double e_coarse, double e_fine);

/// Boundary power-law exponents from two states at the same time on grids
/// h and h/2: F ~ C x^gamma near 0 makes F_1 proportional to h^gamma, so
///   gamma_hat = ln(F_1(h)/F_1(h/2)) / ln 2,
/// and mu_hat likewise from the right jumps F_K - F_{K-1}. Throws
/// numerical_error when a jump is not positive.
std::pair<double, double> power_law_exponents(const CdfState& coarse,
                                              const CdfState& fine);

/// Full report for one state; theta_moment filled for selection models.
DiagnosticsReport make_report(const CdfState& state, const GridSpec& grid,
                              const DriftModel& model);

} // namespace drift

#endif
