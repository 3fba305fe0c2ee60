#include "driftsolve/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include "driftsolve/scheme.hpp"
#include "driftsolve/wright_fisher.hpp"

namespace drift {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_sig6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%#.6g", v);
    std::string s = buf;
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

std::string fmt_opt(const std::optional<double>& v)
{
    return v ? fmt17(*v) : std::string{};
}

/// CSV sink: comma separated, LF endings, header row first.
class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary)
    {
        if (!out_)
            throw IoError("cannot open output file: " + path.string());
        row(header);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_)
            throw IoError("write failure on CSV output");
    }

private:
    std::ofstream out_;
};

fs::path ensure_out_dir(const RunConfig& cfg)
{
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory: " + dir.string());
    return dir;
}

std::uint64_t fnv1a64(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string describe_problem(const RunConfig& cfg, int k, double tau)
{
    std::ostringstream os;
    os << "model=" << cfg.model_kind;
    if (cfg.model_kind == "selection")
        os << ",eta=" << fmt17(cfg.eta) << ",beta=" << fmt17(cfg.beta);
    else if (cfg.model_kind == "one-way")
        os << ",gamma=" << fmt17(cfg.gamma);
    else if (cfg.model_kind == "two-way")
        os << ",gamma=" << fmt17(cfg.gamma) << ",mu=" << fmt17(cfg.mu);
    os << "|init=" << cfg.init_kind;
    if (cfg.init_kind == "gaussian")
        os << ",x0=" << fmt17(cfg.x0) << ",sigma=" << fmt17(cfg.sigma);
    os << "|K=" << k << "|tau=" << fmt17(tau) << "|T=" << fmt17(cfg.horizon)
       << "|scheme=" << cfg.scheme << "|first_level=" << cfg.init_on_first_level;
    return os.str();
}

/// N-1 steps when the initial data occupies the first temporal level.
CdfState advance(const RunConfig& cfg, int k, double tau, const StateObserver& observe,
                 long stride)
{
    const GridSpec grid(k);
    const TimeSpec nominal(tau, cfg.horizon);
    const long n = cfg.init_on_first_level ? nominal.steps() - 1 : nominal.steps();
    if (stride < 1)
        stride = std::max<long>(1, n);

    CdfState state = build_initial_cdf(cfg.initial(), grid);
    if (observe)
        observe(state);
    const DriftModel model = cfg.model();
    const SchemeVariant variant = cfg.variant();
    for (long i = 1; i <= n; ++i) {
        state = step(state, model, grid, tau, variant);
        if (observe && (i % stride == 0 || i == n))
            observe(state);
    }
    if (n > 0 && !std::isfinite(state.values[k / 2]))
        throw numerical_error("non-finite state after time stepping");
    return state;
}

std::optional<CdfState> load_reference(const fs::path& path, int expect_k)
{
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    CdfState state;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x')
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            return std::nullopt;
        state.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (static_cast<int>(state.values.size()) != expect_k + 1)
        return std::nullopt;
    return state;
}

void save_reference(const fs::path& path, const CdfState& state, const GridSpec& grid)
{
    CsvWriter csv(path, {"x", "F"});
    for (int i = 0; i < grid.num_nodes(); ++i)
        csv.row({fmt17(grid.node(i)), fmt17(state.values[i])});
}

void require_doubling(const std::vector<int>& grids)
{
    for (std::size_t i = 1; i < grids.size(); ++i)
        if (grids[i] != 2 * grids[i - 1])
            throw ConfigError("grid list must double at every refinement");
}

/// Least-squares slope of ln(F) against ln(x) over the `count` nodes nearest
/// the chosen boundary.
double boundary_fit_slope(const CdfState& state, const GridSpec& grid, bool left,
                          int count)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int k = grid.intervals();
    for (int j = 1; j <= count; ++j) {
        const double x = left ? grid.node(j) : 1.0 - grid.node(k - j);
        const double f = left ? state.values[j] : 1.0 - state.values[k - j];
        if (!(f > 0.0))
            throw numerical_error("log-log fit needs positive CDF increments");
        const double lx = std::log(x);
        const double ly = std::log(f);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn)
{
    std::vector<std::future<T>> futs;
    futs.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        futs.push_back(std::async(std::launch::async, fn, i));
    std::vector<T> out;
    out.reserve(n);
    for (auto& f : futs)
        out.push_back(f.get());
    return out;
}

} // namespace

CdfState run_config(const RunConfig& cfg, const StateObserver& observe, long stride)
{
    return advance(cfg, cfg.k, cfg.tau, observe, stride);
}

std::pair<double, double> limit_jumps(const RunConfig& cfg)
{
    double b;
    if (cfg.b_inf) {
        b = *cfg.b_inf;
    } else if (cfg.model_kind == "pure-drift") {
        if (cfg.init_kind == "gaussian")
            b = cfg.x0;
        else if (cfg.init_kind == "uniform")
            b = 0.5;
        else
            b = 0.0;
    } else if (cfg.model_kind == "selection") {
        const GridSpec fine(10000);
        const CdfState init = build_initial_cdf(cfg.initial(), fine);
        b = discrete_theta_moment(init, fine, cfg.model());
    } else if (cfg.model_kind == "one-way") {
        b = 1.0;
    } else {
        throw ConfigError("fixation limits need a_inf/b_inf overrides for this model");
    }
    const double a = cfg.a_inf ? *cfg.a_inf : 1.0 - b;
    return {a, b};
}

void cmd_run(const RunConfig& cfg)
{
    const fs::path dir = ensure_out_dir(cfg);
    const GridSpec grid(cfg.k);
    const DriftModel model = cfg.model();
    const bool two_way = cfg.model_kind == "two-way";

    const TimeSpec nominal(cfg.tau, cfg.horizon);
    const long n = cfg.init_on_first_level ? nominal.steps() - 1 : nominal.steps();
    const long report_stride = cfg.stride < 1 ? std::max<long>(1, n) : cfg.stride;

    std::vector<DiagnosticsReport> series;
    std::vector<std::pair<double, CdfState>> profiles;
    std::vector<bool> captured(cfg.snapshots.size(), false);

    // observe every step: reports keep the stride, snapshots match any step
    long step_idx = -1;
    const StateObserver every = [&](const CdfState& s) {
        ++step_idx;
        if (step_idx == 0 || step_idx == n || step_idx % report_stride == 0)
            series.push_back(make_report(s, grid, model));
        for (std::size_t j = 0; j < cfg.snapshots.size(); ++j) {
            if (!captured[j] && std::abs(s.time - cfg.snapshots[j]) <= 0.5 * cfg.tau) {
                captured[j] = true;
                profiles.emplace_back(cfg.snapshots[j], s);
            }
        }
    };
    const CdfState final_state = advance(cfg, cfg.k, cfg.tau, every, 1);
    profiles.emplace_back(final_state.time, final_state);

    CsvWriter ts(dir / "timeseries.csv",
                 {"t", "total_prob", "expectation", "theta_moment", "jump_left",
                  "jump_right"});
    for (const auto& r : series)
        ts.row({fmt17(r.time), fmt17(r.total_prob), fmt17(r.expectation),
                fmt_opt(r.theta_moment), fmt17(r.jump_left), fmt17(r.jump_right)});

    for (const auto& [t, state] : profiles) {
        char label[32];
        std::snprintf(label, sizeof label, "%g", t);
        CsvWriter prof(dir / ("profile_t" + std::string(label) + ".csv"), {"x", "F", "f"});
        const std::vector<double> pdf = recover_pdf(state, grid, two_way);
        for (int i = 0; i < grid.num_nodes(); ++i)
            prof.row({fmt17(grid.node(i)), fmt17(state.values[i]), fmt17(pdf[i])});
    }
}

void cmd_convergence(const RunConfig& cfg)
{
    if (cfg.grids.empty() || cfg.grids.size() != cfg.taus.size())
        throw ConfigError("convergence needs matching 'grids' and 'taus' lists");
    require_doubling(cfg.grids);
    if (cfg.ref_k <= 0 || !(cfg.ref_tau > 0.0))
        throw ConfigError("convergence needs ref_K and ref_tau");
    for (int k : cfg.grids)
        if (cfg.ref_k % k != 0)
            throw ConfigError("reference grid must nest every sweep grid");

    const fs::path dir = ensure_out_dir(cfg);

    const std::string key = describe_problem(cfg, cfg.ref_k, cfg.ref_tau);
    char keyhex[24];
    std::snprintf(keyhex, sizeof keyhex, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key)));
    const fs::path cache = dir / ("ref_cache_" + std::string(keyhex) + ".csv");

    CdfState reference;
    if (auto cached = load_reference(cache, cfg.ref_k)) {
        reference = std::move(*cached);
    } else {
        reference = advance(cfg, cfg.ref_k, cfg.ref_tau, {}, 0);
        save_reference(cache, reference, GridSpec(cfg.ref_k));
    }

    const auto norms = parallel_map<ErrorNorms>(cfg.grids.size(), [&](std::size_t i) {
        const CdfState state = advance(cfg, cfg.grids[i], cfg.taus[i], {}, 0);
        return local_error(state, reference, cfg.window_lo, cfg.window_hi);
    });

    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        ConvergenceRow row;
        row.h = 1.0 / cfg.grids[i];
        row.tau = cfg.taus[i];
        row.error_l2 = norms[i].l2;
        row.error_linf = norms[i].linf;
        if (i > 0) {
            row.order_l2 = convergence_order(norms[i - 1].l2, norms[i].l2);
            row.order_linf = convergence_order(norms[i - 1].linf, norms[i].linf);
        }
        rows.push_back(row);
    }

    const bool with_orders = rows.size() > 1;
    std::vector<std::string> header = {"h", "tau", "error_l2", "error_linf"};
    if (with_orders) {
        header.push_back("order_l2");
        header.push_back("order_linf");
    }
    header.push_back("error_l2_sig6");
    header.push_back("error_linf_sig6");
    CsvWriter csv(dir / "convergence.csv", header);
    for (const auto& r : rows) {
        std::vector<std::string> cells = {fmt17(r.h), fmt17(r.tau), fmt17(r.error_l2),
                                          fmt17(r.error_linf)};
        if (with_orders) {
            cells.push_back(fmt_opt(r.order_l2));
            cells.push_back(fmt_opt(r.order_linf));
        }
        cells.push_back(fmt_sig6(r.error_l2));
        cells.push_back(fmt_sig6(r.error_linf));
        csv.row(cells);
    }
}

void cmd_fixation(const RunConfig& cfg)
{
    cfg.model();
    cfg.initial();
    cfg.variant();
    const fs::path dir = ensure_out_dir(cfg);
    CsvWriter csv(dir / "fixation.csv",
                  {"h", "jump_left", "e_left", "order_left", "jump_right", "e_right",
                   "order_right", "ainf_plus_binf", "jump_left_sig6", "jump_right_sig6"});
    if (cfg.grids.empty())
        return; // empty sweep: header-only table

    const auto [a_inf, b_inf] = limit_jumps(cfg);
    const auto states = parallel_map<CdfState>(cfg.grids.size(), [&](std::size_t i) {
        return advance(cfg, cfg.grids[i], cfg.tau, {}, 0);
    });

    std::optional<double> prev_el, prev_er;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto [el, er] = fixation_errors(states[i], a_inf, b_inf);
        std::string ol, orr;
        if (i > 0 && cfg.grids[i] == 2 * cfg.grids[i - 1] && *prev_el > 0 && el > 0) {
            ol = fmt17(convergence_order(*prev_el, el));
            orr = fmt17(convergence_order(*prev_er, er));
        }
        csv.row({fmt17(1.0 / cfg.grids[i]), fmt17(states[i].jump_left()), fmt17(el), ol,
                 fmt17(states[i].jump_right()), fmt17(er), orr, fmt17(a_inf + b_inf),
                 fmt_sig6(states[i].jump_left()), fmt_sig6(states[i].jump_right())});
        prev_el = el;
        prev_er = er;
    }
}

void cmd_powerlaw(const RunConfig& cfg)
{
    if (cfg.grids.empty())
        throw ConfigError("powerlaw needs a 'grids' list");
    require_doubling(cfg.grids);
    const fs::path dir = ensure_out_dir(cfg);

    const auto states = parallel_map<CdfState>(cfg.grids.size(), [&](std::size_t i) {
        return advance(cfg, cfg.grids[i], cfg.tau, {}, 0);
    });

    CsvWriter csv(dir / "powerlaw.csv",
                  {"h", "F0", "F1", "gamma_hat", "FK1", "FK", "mu_hat", "gamma_fit",
                   "mu_fit", "F1_sig6", "FK1_sig6"});
    for (std::size_t i = 0; i < states.size(); ++i) {
        const GridSpec grid(cfg.grids[i]);
        const auto& v = states[i].values;
        std::string gh, mh;
        if (i > 0) {
            const auto [g, m] = power_law_exponents(states[i - 1], states[i]);
            gh = fmt17(g);
            mh = fmt17(m);
        }
        const double gfit = boundary_fit_slope(states[i], grid, true, 10);
        const double mfit = boundary_fit_slope(states[i], grid, false, 10);
        csv.row({fmt17(grid.step()), fmt17(v.front()), fmt17(v[1]), gh,
                 fmt17(v[v.size() - 2]), fmt17(v.back()), mh, fmt17(gfit), fmt17(mfit),
                 fmt_sig6(v[1]), fmt_sig6(v[v.size() - 2])});
    }

    // log-log samples near both boundaries on the finest grid
    const GridSpec fine(cfg.grids.back());
    const auto& v = states.back().values;
    CsvWriter samples(dir / "powerlaw_boundary.csv", {"side", "ln_x", "ln_F"});
    for (int j = 1; j <= 10; ++j)
        samples.row({"left", fmt17(std::log(fine.node(j))), fmt17(std::log(v[j]))});
    for (int j = 1; j <= 10; ++j)
        samples.row({"right", fmt17(std::log(1.0 - fine.node(fine.intervals() - j))),
                     fmt17(std::log(1.0 - v[fine.intervals() - j]))});
}

void cmd_compare_sfdm(const RunConfig& cfg)
{
    const fs::path dir = ensure_out_dir(cfg);
    const std::vector<int> grids = cfg.grids.empty() ? std::vector<int>{cfg.k} : cfg.grids;
    const auto [a_inf, b_inf] = limit_jumps(cfg);
    const DriftModel model = cfg.model();

    struct Pair {
        CdfState rfdm, sfdm;
    };
    const auto states = parallel_map<Pair>(grids.size(), [&](std::size_t i) {
        RunConfig local = cfg;
        local.k = grids[i];
        local.scheme = "rfdm";
        Pair p;
        p.rfdm = run_config(local);
        local.scheme = "sfdm";
        p.sfdm = run_config(local);
        return p;
    });

    CsvWriter csv(dir / "sfdm_compare.csv",
                  {"h", "rfdm_jump_left", "rfdm_e_left", "sfdm_jump_left", "sfdm_e_left",
                   "rfdm_jump_right", "rfdm_e_right", "sfdm_jump_right", "sfdm_e_right",
                   "lambda_check", "sfdm_jump_left_sig6"});
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const GridSpec grid(grids[i]);
        const double h = grid.step();
        const CdfState init = build_initial_cdf(cfg.initial(), grid);
        const TridiagonalSystem br = assemble(init, model, grid, cfg.tau, SchemeVariant::Rfdm);
        const TridiagonalSystem bs = assemble(init, model, grid, cfg.tau, SchemeVariant::Sfdm);
        // the two assemblies may differ only through the boundary half-node
        // diffusion coefficient a(h/2) = a(1-h/2)
        const double lam = cfg.tau * eval_diffusion(0.5 * h) / (h * h);
        double dev = 0.0;
        for (int j = 0; j <= grid.intervals(); ++j) {
            double el = bs.lower[j] - br.lower[j];
            double ed = bs.diag[j] - br.diag[j];
            double eu = bs.upper[j] - br.upper[j];
            if (j == 1) {
                el -= -lam;
                ed -= lam;
            } else if (j == grid.intervals() - 1) {
                ed -= lam;
                eu -= -lam;
            }
            dev = std::max({dev, std::abs(el), std::abs(ed), std::abs(eu)});
        }
        const auto [rel, rer] = fixation_errors(states[i].rfdm, a_inf, b_inf);
        const auto [sel, ser] = fixation_errors(states[i].sfdm, a_inf, b_inf);
        csv.row({fmt17(h), fmt17(states[i].rfdm.jump_left()), fmt17(rel),
                 fmt17(states[i].sfdm.jump_left()), fmt17(sel),
                 fmt17(states[i].rfdm.jump_right()), fmt17(rer),
                 fmt17(states[i].sfdm.jump_right()), fmt17(ser),
                 dev <= 1e-14 ? "pass" : "fail", fmt_sig6(states[i].sfdm.jump_left())});
    }

    // expectation drift of both variants at the configured K
    const GridSpec grid(cfg.k);
    std::vector<double> times;
    std::vector<double> er, es;
    RunConfig local = cfg;
    local.scheme = "rfdm";
    run_config(local, [&](const CdfState& s) {
        times.push_back(s.time);
        er.push_back(discrete_expectation(s, grid));
    }, cfg.stride);
    local.scheme = "sfdm";
    run_config(local, [&](const CdfState& s) {
        es.push_back(discrete_expectation(s, grid));
    }, cfg.stride);

    CsvWriter ts(dir / "sfdm_expectation.csv", {"t", "expectation_rfdm", "expectation_sfdm"});
    for (std::size_t i = 0; i < times.size() && i < es.size(); ++i)
        ts.row({fmt17(times[i]), fmt17(er[i]), fmt17(es[i])});
}

void cmd_oracle(const RunConfig& cfg)
{
    const fs::path dir = ensure_out_dir(cfg);

    WfConfig wf;
    wf.pop_size = cfg.pop_size;
    wf.generation_cap = cfg.generation_cap;
    wf.replicates = cfg.replicates;
    wf.seed = cfg.seed;
    wf.model = cfg.model();
    wf.init_freq = cfg.init_freq;
    const FixationEstimate mc = simulate_fixation(wf);

    const CdfState final_state = run_config(cfg);
    const double pde_b = final_state.jump_right();
    const double pde_a = final_state.jump_left();

    const double phat = mc.fixed_at_one;
    const double radius = 3.0 * std::sqrt(std::max(phat * (1.0 - phat), 1e-12)
                                          / static_cast<double>(mc.replicates));
    CsvWriter csv(dir / "oracle.csv",
                  {"pop_size", "replicates", "seed", "mc_fixed_at_one", "mc_fixed_at_zero",
                   "mc_unresolved", "radius_3sigma", "pde_jump_right", "pde_jump_left",
                   "within_3sigma"});
    csv.row({std::to_string(cfg.pop_size), std::to_string(mc.replicates),
             std::to_string(cfg.seed), fmt17(mc.fixed_at_one), fmt17(mc.fixed_at_zero),
             fmt17(mc.unresolved), fmt17(radius), fmt17(pde_b), fmt17(pde_a),
             std::abs(pde_b - phat) <= radius ? "1" : "0"});
}

} // namespace drift
