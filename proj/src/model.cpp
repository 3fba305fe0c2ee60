#include "driftsolve/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace drift {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

void validate(const DriftModel& model)
{
    if (const auto* m = std::get_if<OneWayMutation>(&model)) {
        if (!(m->gamma > 0.0))
            throw std::invalid_argument("one-way mutation rate gamma must be > 0");
    } else if (const auto* m = std::get_if<TwoWayMutation>(&model)) {
        if (!(m->gamma > 0.0 && m->gamma < 1.0 && m->mu > 0.0 && m->mu < 1.0))
            throw std::invalid_argument("two-way mutation rates must lie in (0,1)");
    }
}

double eval_drift(const DriftModel& model, double x)
{
    return std::visit([x](const auto& m) { return eval_drift(m, x); }, model);
}

double eval_diffusion(double x)
{
    return x * (1.0 - x);
}

double theta(const DriftModel& model, double x, int quad_points)
{
    if (std::holds_alternative<PureDrift>(model))
        return x;
    const auto* sel = std::get_if<Selection>(&model);
    if (!sel)
        throw std::invalid_argument("theta is defined for pure drift and selection only");
    if (quad_points < 100)
        throw std::invalid_argument("theta needs at least 100 quadrature panels");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;

    const double eta = sel->eta;
    const double beta = sel->beta;
    const auto weight = [eta, beta](double s) {
        return std::exp(-(0.5 * eta * s + beta) * s);
    };

    // one cumulative trapezoid pass over [0,1]; the prefix at x adds the
    // partial panel [s_j, x]
    const double hq = 1.0 / quad_points;
    const int j = std::min(static_cast<int>(x * quad_points), quad_points - 1);
    double prev = weight(0.0);
    double prefix = 0.0;
    double total = 0.0;
    for (int i = 1; i <= quad_points; ++i) {
        const double w = weight(i * hq);
        total += 0.5 * hq * (prev + w);
        if (i == j)
            prefix = total;
        prev = w;
    }
    const double sj = j * hq;
    prefix += 0.5 * (x - sj) * (weight(sj) + weight(x));
    return prefix / total;
}

double steady_state_two_way(const TwoWayMutation& model, double x)
{
    validate(DriftModel{model});
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("two-way steady state has poles at x = 0, 1");
    const double log_norm = std::lgamma(model.gamma + model.mu) - std::lgamma(model.gamma)
                          - std::lgamma(model.mu);
    return std::exp(log_norm + (model.gamma - 1.0) * std::log(x)
                    + (model.mu - 1.0) * std::log1p(-x));
}

GridSpec::GridSpec(int num_intervals) : k_(num_intervals)
{
    if (num_intervals < 4)
        throw std::invalid_argument("grid needs at least 4 intervals, got "
                                    + std::to_string(num_intervals));
}

TimeSpec::TimeSpec(double tau, double horizon) : tau_(tau), horizon_(horizon)
{
    if (!(tau > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("time step and horizon must be positive");
    steps_ = std::lround(horizon / tau);
    if (std::abs(steps_ * tau - horizon) > 1e-9 * std::max(1.0, horizon))
        throw std::invalid_argument("horizon is not an integer multiple of the time step");
}

CdfState build_initial_cdf(const InitialCondition& ic, const GridSpec& grid)
{
    const int k = grid.intervals();
    CdfState state;
    state.time = 0.0;
    state.values.resize(k + 1);

    if (const auto* g = std::get_if<GaussianPdf>(&ic)) {
        // right-cell-edge mass accounting; keeps the interior node sum equal
        // to the cumulative sum of the sampled density
        const double h = grid.step();
        for (int i = 1; i < k; ++i)
            state.values[i] = normal_cdf((grid.node(i) + 0.5 * h - g->x0) / g->sigma);
    } else if (std::holds_alternative<DeltaAtZero>(ic)) {
        for (int i = 1; i < k; ++i)
            state.values[i] = 1.0;
    } else {
        for (int i = 1; i < k; ++i)
            state.values[i] = grid.node(i);
    }
    state.values[0] = 0.0;
    state.values[k] = 1.0;
    return state;
}

} // namespace drift
