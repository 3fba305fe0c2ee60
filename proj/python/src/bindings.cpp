#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "driftsolve/diagnostics.hpp"
#include "driftsolve/model.hpp"
#include "driftsolve/scheme.hpp"
#include "driftsolve/wright_fisher.hpp"

namespace py = pybind11;
using namespace drift;

namespace {

SchemeVariant parse_variant(const std::string& name)
{
    if (name == "rfdm")
        return SchemeVariant::Rfdm;
    if (name == "sfdm")
        return SchemeVariant::Sfdm;
    throw std::invalid_argument("scheme must be 'rfdm' or 'sfdm'");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Implicit CDF solver for random genetic drift models";

    py::class_<PureDrift>(m, "PureDrift")
        .def(py::init<>())
        .def("__repr__", [](const PureDrift&) { return std::string("pure_drift()"); });
    py::class_<Selection>(m, "Selection")
        .def(py::init<double, double>(), py::arg("eta"), py::arg("beta"))
        .def_readonly("eta", &Selection::eta)
        .def_readonly("beta", &Selection::beta)
        .def("__repr__", [](const Selection& v) {
            return "selection(eta=" + std::to_string(v.eta)
                 + ", beta=" + std::to_string(v.beta) + ")";
        });
    py::class_<OneWayMutation>(m, "OneWayMutation")
        .def(py::init<double>(), py::arg("gamma"))
        .def_readonly("gamma", &OneWayMutation::gamma)
        .def("__repr__", [](const OneWayMutation& v) {
            return "one_way(gamma=" + std::to_string(v.gamma) + ")";
        });
    py::class_<TwoWayMutation>(m, "TwoWayMutation")
        .def(py::init<double, double>(), py::arg("gamma"), py::arg("mu"))
        .def_readonly("gamma", &TwoWayMutation::gamma)
        .def_readonly("mu", &TwoWayMutation::mu)
        .def("__repr__", [](const TwoWayMutation& v) {
            return "two_way(gamma=" + std::to_string(v.gamma)
                 + ", mu=" + std::to_string(v.mu) + ")";
        });

    m.def("pure_drift", [] { return PureDrift{}; });
    m.def("selection", [](double eta, double beta) { return Selection{eta, beta}; },
          py::arg("eta"), py::arg("beta"));
    m.def("one_way", [](double gamma) {
        OneWayMutation mod{gamma};
        validate(DriftModel{mod});
        return mod;
    }, py::arg("gamma"));
    m.def("two_way", [](double gamma, double mu) {
        TwoWayMutation mod{gamma, mu};
        validate(DriftModel{mod});
        return mod;
    }, py::arg("gamma"), py::arg("mu"));

    py::class_<GaussianPdf>(m, "GaussianPdf")
        .def(py::init<double, double>(), py::arg("x0"), py::arg("sigma"))
        .def_readonly("x0", &GaussianPdf::x0)
        .def_readonly("sigma", &GaussianPdf::sigma);
    py::class_<DeltaAtZero>(m, "DeltaAtZero").def(py::init<>());
    py::class_<UniformPdf>(m, "UniformPdf").def(py::init<>());

    m.def("gaussian_pdf", [](double x0, double sigma) { return GaussianPdf{x0, sigma}; },
          py::arg("x0"), py::arg("sigma"));
    m.def("delta_at_zero", [] { return DeltaAtZero{}; });
    m.def("uniform_pdf", [] { return UniformPdf{}; });

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int>(), py::arg("num_intervals"))
        .def_property_readonly("intervals", &GridSpec::intervals)
        .def_property_readonly("step", &GridSpec::step)
        .def("node", &GridSpec::node, py::arg("i"));

    py::class_<TimeSpec>(m, "TimeSpec")
        .def(py::init<double, double>(), py::arg("tau"), py::arg("horizon"))
        .def_property_readonly("tau", &TimeSpec::tau)
        .def_property_readonly("horizon", &TimeSpec::horizon)
        .def_property_readonly("steps", &TimeSpec::steps);

    py::class_<CdfState>(m, "CdfState")
        .def(py::init([](double time, std::vector<double> values) {
                 CdfState s;
                 s.time = time;
                 s.values = std::move(values);
                 return s;
             }),
             py::arg("time"), py::arg("values"))
        .def_readonly("time", &CdfState::time)
        .def_readonly("values", &CdfState::values)
        .def_property_readonly("jump_left", &CdfState::jump_left)
        .def_property_readonly("jump_right", &CdfState::jump_right);

    py::class_<DiagnosticsReport>(m, "DiagnosticsReport")
        .def_readonly("time", &DiagnosticsReport::time)
        .def_readonly("total_prob", &DiagnosticsReport::total_prob)
        .def_readonly("expectation", &DiagnosticsReport::expectation)
        .def_readonly("theta_moment", &DiagnosticsReport::theta_moment)
        .def_readonly("jump_left", &DiagnosticsReport::jump_left)
        .def_readonly("jump_right", &DiagnosticsReport::jump_right);

    py::class_<FixationEstimate>(m, "FixationEstimate")
        .def_readonly("fixed_at_one", &FixationEstimate::fixed_at_one)
        .def_readonly("fixed_at_zero", &FixationEstimate::fixed_at_zero)
        .def_readonly("unresolved", &FixationEstimate::unresolved)
        .def_readonly("replicates", &FixationEstimate::replicates);

    m.def("eval_drift", [](const DriftModel& mod, double x) { return eval_drift(mod, x); },
          py::arg("model"), py::arg("x"));
    m.def("eval_diffusion", &eval_diffusion, py::arg("x"));
    m.def("theta", &theta, py::arg("model"), py::arg("x"), py::arg("quad_points") = 100000);
    m.def("steady_state_two_way", [](double gamma, double mu, double x) {
        return steady_state_two_way(TwoWayMutation{gamma, mu}, x);
    }, py::arg("gamma"), py::arg("mu"), py::arg("x"));
    m.def("build_initial_cdf", &build_initial_cdf, py::arg("init"), py::arg("grid"));
    m.def("step",
          [](const CdfState& prev, const DriftModel& mod, const GridSpec& grid,
             double tau, const std::string& scheme) {
              return step(prev, mod, grid, tau, parse_variant(scheme));
          },
          py::arg("prev"), py::arg("model"), py::arg("grid"), py::arg("tau"),
          py::arg("scheme") = "rfdm");
    m.def("recover_pdf", &recover_pdf, py::arg("state"), py::arg("grid"),
          py::arg("two_way_mode") = false);

    m.def("solve",
          [](const InitialCondition& init, const DriftModel& mod, int k, double tau,
             double horizon, const std::string& scheme, long stride) {
              const GridSpec grid(k);
              const TimeSpec time(tau, horizon);
              std::vector<DiagnosticsReport> series;
              const CdfState final_state =
                  run(init, mod, grid, time, parse_variant(scheme),
                      [&](const CdfState& s) { series.push_back(make_report(s, grid, mod)); },
                      stride < 1 ? std::max<long>(1, time.steps()) : stride);
              return py::make_tuple(final_state, series);
          },
          py::arg("init"), py::arg("model"), py::arg("K"), py::arg("tau"), py::arg("T"),
          py::arg("scheme") = "rfdm", py::arg("stride") = 0,
          "Run the implicit scheme; returns (final state, diagnostics series).");

    m.def("discrete_expectation", &discrete_expectation, py::arg("state"), py::arg("grid"));
    m.def("discrete_theta_moment", &discrete_theta_moment, py::arg("state"),
          py::arg("grid"), py::arg("model"));
    m.def("fixation_errors", &fixation_errors, py::arg("state"), py::arg("a_inf"),
          py::arg("b_inf"));
    m.def("convergence_order", &convergence_order, py::arg("e_coarse"), py::arg("e_fine"));
    m.def("power_law_exponents", &power_law_exponents, py::arg("coarse"), py::arg("fine"));
    m.def("local_error", [](const CdfState& numeric, const CdfState& reference,
                            double lo, double hi) {
        const ErrorNorms e = local_error(numeric, reference, lo, hi);
        return py::make_tuple(e.l2, e.linf);
    }, py::arg("numeric"), py::arg("reference"), py::arg("window_lo"), py::arg("window_hi"));

    m.def("simulate_fixation",
          [](const DriftModel& mod, double init_freq, int pop_size, long replicates,
             std::uint64_t seed, long generation_cap) {
              WfConfig cfg;
              cfg.model = mod;
              cfg.init_freq = init_freq;
              cfg.pop_size = pop_size;
              cfg.replicates = replicates;
              cfg.seed = seed;
              cfg.generation_cap = generation_cap;
              return simulate_fixation(cfg);
          },
          py::arg("model"), py::arg("init_freq"), py::arg("pop_size") = 200,
          py::arg("replicates") = 10000, py::arg("seed") = 0,
          py::arg("generation_cap") = 0);
}
