#include "driftsolve/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "driftsolve/scheme.hpp"

namespace drift {

double discrete_expectation(const CdfState& state, const GridSpec& grid)
{
    const int k = grid.intervals();
    const double h = grid.step();
    double sum = 0.0;
    for (int i = 1; i < k; ++i)
        sum += state.values[i];
    return 1.0 - h * sum - 0.5 * h * (state.values[0] + state.values[k]);
}

double discrete_theta_moment(const CdfState& state, const GridSpec& grid,
                             const DriftModel& model)
{
    const auto* sel = std::get_if<Selection>(&model);
    if (!sel)
        throw std::invalid_argument("theta moment is defined for selection models only");
    const int k = grid.intervals();
    const auto weight = [sel](double x) {
        return std::exp(-(0.5 * sel->eta * x + sel->beta) * x);
    };
    // the common factor h cancels between the weighted sum and the norm
    double norm = 0.5 * (weight(0.0) + weight(1.0));
    double sum = 0.5 * (state.values[0] * weight(0.0) + state.values[k] * weight(1.0));
    for (int i = 1; i < k; ++i) {
        const double w = weight(grid.node(i));
        norm += w;
        sum += state.values[i] * w;
    }
    return 1.0 - sum / norm;
}

std::pair<double, double> fixation_errors(const CdfState& state, double a_inf,
                                          double b_inf)
{
    return {std::abs(state.jump_left() - a_inf), std::abs(state.jump_right() - b_inf)};
}

ErrorNorms local_error(const CdfState& numeric, const CdfState& reference,
                       double window_lo, double window_hi)
{
    const int k = static_cast<int>(numeric.values.size()) - 1;
    const int k_ref = static_cast<int>(reference.values.size()) - 1;
    if (k < 4 || k_ref < k || k_ref % k != 0)
        throw std::invalid_argument("reference grid is not a nested refinement");
    const int ratio = k_ref / k;
    const double h = 1.0 / k;

    const double lo_idx = window_lo * k;
    const double hi_idx = window_hi * k;
    const int k1 = static_cast<int>(std::lround(lo_idx));
    const int k2 = static_cast<int>(std::lround(hi_idx));
    if (std::abs(lo_idx - k1) > 1e-9 * k || std::abs(hi_idx - k2) > 1e-9 * k)
        throw std::invalid_argument("window endpoints must lie on the coarse grid");
    if (k1 < 0 || k2 > k || k1 > k2)
        throw std::invalid_argument("window outside [0,1]");

    ErrorNorms norms;
    double ss = 0.0;
    for (int i = k1; i <= k2; ++i) {
        const double d = numeric.values[i] - reference.values[i * ratio];
        ss += d * d;
        norms.linf = std::max(norms.linf, std::abs(d));
    }
    norms.l2 = std::sqrt(ss * h);
    return norms;
}

double convergence_order(double e_coarse, double e_fine)
{
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw std::invalid_argument("convergence order needs positive errors");
    return std::log2(e_coarse / e_fine);
}

std::pair<double, double> power_law_exponents(const CdfState& coarse,
                                              const CdfState& fine)
{
    const int k = static_cast<int>(coarse.values.size()) - 1;
    const int k_fine = static_cast<int>(fine.values.size()) - 1;
    if (k_fine != 2 * k)
        throw std::invalid_argument("fine grid must halve the coarse step");
    if (std::abs(coarse.time - fine.time) > 1e-9 * (1.0 + std::abs(coarse.time)))
        throw std::invalid_argument("states must be at the same time");

    const double f1c = coarse.values[1] - coarse.values[0];
    const double f1f = fine.values[1] - fine.values[0];
    const double jrc = coarse.jump_right();
    const double jrf = fine.jump_right();
    if (!(f1c > 0.0) || !(f1f > 0.0) || !(jrc > 0.0) || !(jrf > 0.0))
        throw numerical_error("power-law extraction needs positive boundary jumps");
    return {std::log(f1c / f1f) / std::log(2.0), std::log(jrc / jrf) / std::log(2.0)};
}

DiagnosticsReport make_report(const CdfState& state, const GridSpec& grid,
                              const DriftModel& model)
{
    DiagnosticsReport rep;
    rep.time = state.time;
    rep.total_prob = state.values.back() - state.values.front();
    rep.expectation = discrete_expectation(state, grid);
    if (std::holds_alternative<Selection>(model))
        rep.theta_moment = discrete_theta_moment(state, grid, model);
    rep.jump_left = state.jump_left();
    rep.jump_right = state.jump_right();
    return rep;
}

} // namespace drift
