#ifndef DRIFTSOLVE_MODEL_HPP
#define DRIFTSOLVE_MODEL_HPP

#include <cstddef>
#include <variant>
#include <vector>

namespace drift {

/// No deterministic force, M(x) = 0.
struct PureDrift {};

/// Natural selection, M(x) = x(1-x)(eta*x + beta).
struct Selection {
    double eta = 0.0;
    double beta = 0.0;
};

/// One-way mutation B -> A with rate gamma, M(x) = gamma*(1-x).
struct OneWayMutation {
    double gamma = 0.0;
};

/// Two-way mutation, M(x) = gamma*(1-x) - mu*x.
struct TwoWayMutation {
    double gamma = 0.0;
    double mu = 0.0;
};

using DriftModel = std::variant<PureDrift, Selection, OneWayMutation, TwoWayMutation>;

/// Checks the admissible parameter ranges (gamma > 0 for one-way mutation,
/// gamma and mu in (0,1) for two-way). Throws std::invalid_argument.
void validate(const DriftModel& model);

inline double eval_drift(const PureDrift&, double) { return 0.0; }
inline double eval_drift(const Selection& m, double x) { return x * (1.0 - x) * (m.eta * x + m.beta); }
inline double eval_drift(const OneWayMutation& m, double x) { return m.gamma * (1.0 - x); }
inline double eval_drift(const TwoWayMutation& m, double x) { return m.gamma * (1.0 - x) - m.mu * x; }

/// Drift term M(x) of the chosen model at x in [0,1].
double eval_drift(const DriftModel& model, double x);

/// Diffusion coefficient a(x) = x(1-x); degenerates at both endpoints.
double eval_diffusion(double x);

/// Fixation probability theta(x): x for pure drift; for selection the ratio
/// of prefix integrals of exp(-(eta/2)s^2 - beta*s), evaluated by composite
/// trapezoid on quad_points panels (single cumulative pass, so all grid
/// nodes cost one sweep). theta(0)=0, theta(1)=1, nondecreasing.
/// Throws std::invalid_argument for mutation models and quad_points < 100.
double theta(const DriftModel& model, double x, int quad_points = 100000);

/// Stationary density of the two-way mutation model,
///   f(x) = x^{gamma-1} (1-x)^{mu-1} / B(gamma, mu),
/// normalized through log-gamma. Throws std::domain_error at the endpoint
/// poles x = 0, 1.
double steady_state_two_way(const TwoWayMutation& model, double x);

/// Uniform spatial mesh on [0,1] with K intervals, nodes x_i = i/K.
class GridSpec {
public:
    /// Throws std::invalid_argument for fewer than 4 intervals.
    explicit GridSpec(int num_intervals);

    int intervals() const { return k_; }
    int num_nodes() const { return k_ + 1; }
    double step() const { return 1.0 / k_; }
    /// x_i; exact 0 and 1 at the ends.
    double node(int i) const { return static_cast<double>(i) / k_; }
    /// Half node x_{i-1/2}.
    double half_node(int i) const { return (i - 0.5) / k_; }

private:
    int k_;
};

/// Temporal mesh: step tau, horizon T, N = round(T/tau) steps.
class TimeSpec {
public:
    /// Requires tau, T > 0 and N*tau == T to one part in 1e9.
    TimeSpec(double tau, double horizon);

    double tau() const { return tau_; }
    double horizon() const { return horizon_; }
    long steps() const { return steps_; }

private:
    double tau_;
    double horizon_;
    long steps_;
};

/// Gaussian initial density with mean x0 and standard deviation sigma.
struct GaussianPdf {
    double x0 = 0.5;
    double sigma = 0.01;
};

/// Point measure with the whole probability at x = 0.
struct DeltaAtZero {};

/// Uniform initial density f0(x) = 1.
struct UniformPdf {};

using InitialCondition = std::variant<GaussianPdf, DeltaAtZero, UniformPdf>;

/// CDF values F_0..F_K at the grid nodes at one time level.
/// F_0 = 0 and F_K = 1 are pinned; interior values stay in [0,1].
struct CdfState {
    double time = 0.0;
    std::vector<double> values;

    double jump_left() const { return values[1] - values.front(); }
    double jump_right() const { return values.back() - values[values.size() - 2]; }
};

/// Initial CDF on the grid. The Gaussian case accounts mass per cell through
/// the right cell edge, F_i = Phi((x_i + h/2 - x0)/sigma), matching a
/// cumulative sum of the sampled density; no renormalization. DeltaAtZero
/// gives the unit jump between nodes 0 and 1; UniformPdf gives F_i = x_i.
/// F_0 = 0 and F_K = 1 are pinned exactly.
CdfState build_initial_cdf(const InitialCondition& ic, const GridSpec& grid);

} // namespace drift

#endif
