#include "driftsolve/scheme.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace drift {

namespace {

template <class Model>
void fill_interior(TridiagonalSystem& sys, const CdfState& prev, const Model& model,
                   const GridSpec& grid, double tau, SchemeVariant variant)
{
    const int k = grid.intervals();
    const double h = grid.step();
    const double r = tau / (h * h);
    const double s = tau / h;
    const bool revised = variant == SchemeVariant::Rfdm;
    // Mutation drifts keep M != 0 at a boundary, so their one-sided
    // difference points upstream and may legitimately read the pinned value
    // there. Selection drift vanishes at both endpoints like a(x) -- no
    // information enters from either boundary -- so its one-sided difference
    // reaches toward the interior instead: forward on the left half,
    // backward on the right. Rows 1 and K-1 then never touch F_0, F_K, and
    // the off-diagonal signs survive any (eta, beta).
    const bool positional = std::is_same_v<Model, Selection>;

    for (int i = 1; i < k; ++i) {
        const double am = (revised && i == 1) ? 0.0 : eval_diffusion(grid.half_node(i));
        const double ap = (revised && i == k - 1) ? 0.0 : eval_diffusion(grid.half_node(i + 1));
        double lo = -r * am;
        double up = -r * ap;
        double di = 1.0 + r * (am + ap);

        const double m = eval_drift(model, grid.node(i));
        const bool backward = positional ? (grid.node(i) >= 0.5) : (m >= 0.0);
        if (backward) {
            di += s * m;
            lo -= s * m;
        } else {
            di -= s * m;
            up += s * m;
        }
        sys.lower[i] = lo;
        sys.diag[i] = di;
        sys.upper[i] = up;
        sys.rhs[i] = prev.values[i];
    }
}

} // namespace

TridiagonalSystem assemble(const CdfState& prev, const DriftModel& model,
                           const GridSpec& grid, double tau, SchemeVariant variant)
{
    const int k = grid.intervals();
    if (static_cast<int>(prev.values.size()) != k + 1)
        throw std::invalid_argument("state size does not match the grid");
    if (!(tau > 0.0))
        throw std::invalid_argument("time step must be positive");

    TridiagonalSystem sys;
    sys.lower.assign(k + 1, 0.0);
    sys.diag.assign(k + 1, 0.0);
    sys.upper.assign(k + 1, 0.0);
    sys.rhs.assign(k + 1, 0.0);
    sys.diag[0] = 1.0;
    sys.rhs[0] = 0.0;
    sys.diag[k] = 1.0;
    sys.rhs[k] = 1.0;

    std::visit([&](const auto& m) { fill_interior(sys, prev, m, grid, tau, variant); },
               model);
    return sys;
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys)
{
    const std::size_t n = sys.size();
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    std::vector<double> x(n, 0.0);

    double piv = sys.diag[0];
    if (std::abs(piv) < 1e-300)
        throw numerical_error("zero pivot in tridiagonal elimination");
    double inv = 1.0 / piv;
    c[0] = sys.upper[0] * inv;
    d[0] = sys.rhs[0] * inv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = sys.diag[i] - sys.lower[i] * c[i - 1];
        if (std::abs(piv) < 1e-300)
            throw numerical_error("zero pivot in tridiagonal elimination at row "
                                  + std::to_string(i));
        inv = 1.0 / piv;
        c[i] = sys.upper[i] * inv;
        d[i] = (sys.rhs[i] - sys.lower[i] * d[i - 1]) * inv;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

CdfState step(const CdfState& prev, const DriftModel& model, const GridSpec& grid,
              double tau, SchemeVariant variant)
{
    const TridiagonalSystem sys = assemble(prev, model, grid, tau, variant);
    CdfState next;
    next.time = prev.time + tau;
    next.values = thomas_solve(sys);
    next.values.front() = 0.0;
    next.values.back() = 1.0;
    return next;
}

CdfState run(const InitialCondition& ic, const DriftModel& model, const GridSpec& grid,
             const TimeSpec& time, SchemeVariant variant,
             const StateObserver& observe, long observe_stride)
{
    if (observe_stride < 1)
        observe_stride = 1;
    CdfState state = build_initial_cdf(ic, grid);
    if (observe)
        observe(state);
    const long n = time.steps();
    for (long i = 1; i <= n; ++i) {
        state = step(state, model, grid, time.tau(), variant);
        if (observe && (i % observe_stride == 0 || i == n))
            observe(state);
    }
    if (!std::isfinite(state.values[grid.intervals() / 2]))
        throw numerical_error("non-finite state after time stepping");
    return state;
}

std::vector<double> recover_pdf(const CdfState& state, const GridSpec& grid,
                                bool two_way_mode)
{
    const int k = grid.intervals();
    if (static_cast<int>(state.values.size()) != k + 1)
        throw std::invalid_argument("state size does not match the grid");
    const double h = grid.step();
    const auto& f = state.values;
    std::vector<double> pdf(k + 1, 0.0);

    pdf[0] = (f[1] - f[0]) / h;
    pdf[k] = (f[k] - f[k - 1]) / h;
    for (int i = 2; i <= k - 2; ++i)
        pdf[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    if (two_way_mode) {
        pdf[1] = (f[2] - f[0]) / (2.0 * h);
        pdf[k - 1] = (f[k] - f[k - 2]) / (2.0 * h);
    } else {
        pdf[1] = (f[2] - f[1]) / h;
        pdf[k - 1] = (f[k - 1] - f[k - 2]) / h;
    }
    return pdf;
}

} // namespace drift
