#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sclab/config.hpp"
#include "sclab/kinetic.hpp"
#include "sclab/ldp.hpp"
#include "sclab/runner.hpp"
#include "sclab/stochastic.hpp"

namespace py = pybind11;
using namespace sclab;

PYBIND11_MODULE(_sclab, m) {
    m.doc() = "stochastic scalar conservation law laboratory";
    m.attr("__version__") = run::kVersion;

    py::class_<TorusGrid>(m, "TorusGrid")
        .def(py::init<int, int>(), py::arg("dim"), py::arg("n"))
        .def_readonly("dim", &TorusGrid::dim)
        .def_readonly("cells_per_axis", &TorusGrid::cells_per_axis)
        .def("cell_width", &TorusGrid::cell_width)
        .def("cell_count", &TorusGrid::cell_count)
        .def("center", &TorusGrid::center);

    py::class_<Field>(m, "Field")
        .def(py::init<const TorusGrid&, double>(), py::arg("grid"), py::arg("fill") = 0.0)
        .def(py::init<const TorusGrid&, std::vector<double>>(), py::arg("grid"),
             py::arg("values"))
        .def_readonly("grid", &Field::grid)
        .def_readwrite("values", &Field::values)
        .def("mean", &Field::mean)
        .def("min", &Field::min)
        .def("max", &Field::max);

    m.def("l1_distance", &l1_distance);
    m.def("l1_norm", &l1_norm);
    m.def("l2_norm_sq", &l2_norm_sq);

    py::class_<FluxModel>(m, "FluxModel")
        .def_static("burgers", &FluxModel::burgers, py::arg("dim") = 1)
        .def_static("linear", &FluxModel::linear, py::arg("c"))
        .def_static("polynomial", &FluxModel::polynomial, py::arg("coeffs"),
                    py::arg("dim") = 1)
        .def("value", &FluxModel::value)
        .def("deriv", &FluxModel::deriv)
        .def("truncated", &FluxModel::truncated)
        .def_property_readonly("growth_C", &FluxModel::growth_C)
        .def_property_readonly("growth_p", &FluxModel::growth_p);

    py::class_<NoiseModel>(m, "NoiseModel")
        .def_static("trigonometric", &NoiseModel::trigonometric, py::arg("K"),
                    py::arg("sigma"), py::arg("q") = 1.0, py::arg("b0") = 1.0,
                    py::arg("b1") = 0.0, py::arg("u_bound") = 10.0)
        .def_property_readonly("K", &NoiseModel::K)
        .def_property_readonly("D0", &NoiseModel::D0)
        .def_property_readonly("D1", &NoiseModel::D1)
        .def(
            "eval",
            [](const NoiseModel& n, const std::vector<double>& x, double u) {
                return noise_eval(n, x, u);
            },
            py::arg("x"), py::arg("u"));

    py::class_<CertifyReport>(m, "CertifyReport")
        .def_readonly("D0_hat", &CertifyReport::D0_hat)
        .def_readonly("D1_hat", &CertifyReport::D1_hat)
        .def_readonly("ok", &CertifyReport::ok)
        .def_readonly("message", &CertifyReport::message);
    m.def("certify_bounds", &certify_bounds, py::arg("noise"), py::arg("sample_count"));

    py::class_<Control>(m, "Control")
        .def_static("zero", &Control::zero)
        .def_static("constant", &Control::constant)
        .def_property_readonly("K", &Control::K)
        .def_property_readonly("T", &Control::T)
        .def_property_readonly("steps", &Control::steps)
        .def("coeffs", py::overload_cast<>(&Control::coeffs, py::const_))
        .def("set",
             [](Control& h, int node, int k, double v) { h.at(node, k) = v; })
        .def("in_ball", &Control::in_ball);
    m.def("control_norm_sq", &control_norm_sq);

    py::class_<hyperbolic::SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("cfl", &hyperbolic::SolverConfig::cfl)
        .def_readwrite("viscosity_eta", &hyperbolic::SolverConfig::viscosity_eta);

    py::class_<hyperbolic::Trajectory>(m, "Trajectory")
        .def_readonly("times", &hyperbolic::Trajectory::times)
        .def_readonly("fields", &hyperbolic::Trajectory::fields)
        .def_readonly("energy_sup_l2sq", &hyperbolic::Trajectory::energy_sup_l2sq)
        .def_readonly("dissipation", &hyperbolic::Trajectory::dissipation);

    m.def("solve_skeleton", &hyperbolic::solve_skeleton, py::arg("u0"), py::arg("flux"),
          py::arg("noise"), py::arg("h"), py::arg("T"),
          py::arg("cfg") = hyperbolic::SolverConfig{});
    m.def("solve_parabolic", &hyperbolic::solve_parabolic, py::arg("u0"), py::arg("flux"),
          py::arg("noise"), py::arg("h"), py::arg("T"), py::arg("eta"),
          py::arg("R") = std::optional<double>{},
          py::arg("cfg") = hyperbolic::SolverConfig{});
    m.def("solve_stochastic", &stochastic::solve_stochastic, py::arg("u0"), py::arg("flux"),
          py::arg("noise"), py::arg("h"), py::arg("eps"), py::arg("T"),
          py::arg("cfg") = hyperbolic::SolverConfig{}, py::arg("seed") = 0,
          py::arg("traj") = 0);
    m.def("l1l1_distance", &hyperbolic::l1l1_distance);

    py::class_<kinetic::XiGrid>(m, "XiGrid")
        .def(py::init<double, double, int>(), py::arg("xi_min"), py::arg("xi_max"),
             py::arg("points"));
    py::class_<kinetic::KineticSnapshot>(m, "KineticSnapshot")
        .def_readonly("f", &kinetic::KineticSnapshot::f)
        .def("at", &kinetic::KineticSnapshot::at);
    m.def("kinetic_lift", &kinetic::kinetic_lift);
    m.def("reconstruct", &kinetic::reconstruct);
    m.def("l1_via_kinetic", [](const Field& a, const Field& b, const kinetic::XiGrid& xi) {
        auto r = kinetic::l1_via_kinetic(a, b, xi);
        return std::make_pair(r.pos, r.neg);
    });
    m.def("doubling_functional", &kinetic::doubling_functional);

    m.def("action", &ldp::action);
    py::class_<ldp::ActionResult>(m, "ActionResult")
        .def_readonly("action", &ldp::ActionResult::action)
        .def_readonly("terminal_gap", &ldp::ActionResult::terminal_gap)
        .def_readonly("converged", &ldp::ActionResult::converged)
        .def_readonly("iterations", &ldp::ActionResult::iterations)
        .def_readonly("control", &ldp::ActionResult::control);
    m.def(
        "minimize_action",
        [](const Field& u0, const Field& target, double delta_target, const FluxModel& flux,
           const NoiseModel& noise, double T, int steps) {
            ldp::MinimizeOptions opt;
            opt.steps = steps;
            return ldp::minimize_action(u0, target, delta_target, flux, noise, T, opt);
        },
        py::arg("u0"), py::arg("target"), py::arg("delta_target"), py::arg("flux"),
        py::arg("noise"), py::arg("T"), py::arg("steps") = 25);

    py::class_<ldp::MCRow>(m, "MCRow")
        .def_readonly("eps", &ldp::MCRow::eps)
        .def_readonly("hits", &ldp::MCRow::hits)
        .def_readonly("p_hat", &ldp::MCRow::p_hat)
        .def_readonly("ci_lo", &ldp::MCRow::ci_lo)
        .def_readonly("ci_hi", &ldp::MCRow::ci_hi)
        .def_readonly("minus_eps_log_p", &ldp::MCRow::minus_eps_log_p)
        .def_readonly("usable", &ldp::MCRow::usable);
    py::class_<ldp::MCTable>(m, "MCTable").def_readonly("rows", &ldp::MCTable::rows);
    py::class_<ldp::RareEvent>(m, "RareEvent")
        .def(py::init([](const std::string& kind, double threshold, double ref_scalar) {
                 ldp::RareEvent ev;
                 ev.kind = kind == "l1_ball_complement"
                               ? ldp::RareEvent::Kind::TerminalL1BallComplement
                               : ldp::RareEvent::Kind::TerminalMeanThreshold;
                 ev.threshold = threshold;
                 ev.ref_scalar = ref_scalar;
                 return ev;
             }),
             py::arg("kind"), py::arg("threshold"), py::arg("ref_scalar") = 0.0)
        .def_readwrite("reference", &ldp::RareEvent::reference);
    m.def(
        "mc_rare_event",
        [](const Field& u0, const FluxModel& flux, const NoiseModel& noise,
           const ldp::RareEvent& ev, const std::vector<double>& eps_list, uint64_t n_traj,
           uint64_t master_seed, double T, int steps) {
            return ldp::mc_rare_event(u0, flux, noise, ev, eps_list, n_traj, master_seed, T,
                                      steps);
        },
        py::arg("u0"), py::arg("flux"), py::arg("noise"), py::arg("event"),
        py::arg("eps_list"), py::arg("n_traj"), py::arg("master_seed"), py::arg("T"),
        py::arg("steps"));
    py::class_<ldp::LdpFitReport>(m, "LdpFitReport")
        .def_readonly("eps", &ldp::LdpFitReport::eps)
        .def_readonly("values", &ldp::LdpFitReport::values)
        .def_readonly("monotone", &ldp::LdpFitReport::monotone)
        .def_readonly("limit", &ldp::LdpFitReport::limit)
        .def_readonly("ratio", &ldp::LdpFitReport::ratio);
    m.def("ldp_fit", &ldp::ldp_fit, py::arg("table"), py::arg("action_star"));

    m.def("parse_config", [](const std::string& text) {
        auto r = cfg::parse_config(text);
        std::vector<std::pair<int, std::string>> errs;
        for (const auto& e : r.errors) errs.emplace_back(e.line, e.message);
        return std::make_pair(r.ok(), errs);
    });
    m.def("run_experiment_from_text",
          [](const std::string& text, const std::string& task, const std::string& out_dir,
             uint64_t seed) {
              auto r = cfg::parse_config(text);
              if (!r.ok()) throw std::runtime_error("invalid config: " + r.errors[0].message);
              if (!task.empty()) r.spec.task = task;
              if (!out_dir.empty()) r.spec.output_dir = out_dir;
              r.spec.seed = seed;
              return run::run_experiment(r.spec);
          },
          py::arg("text"), py::arg("task") = "", py::arg("out_dir") = "",
          py::arg("seed") = 0);
}
