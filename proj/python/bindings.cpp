#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rsstoa/bench.hpp"
#include "rsstoa/config.hpp"
#include "rsstoa/error.hpp"
#include "rsstoa/optim.hpp"

namespace py = pybind11;
using namespace rsstoa;

namespace {

std::string repr(const ParamVector& p) {
    std::ostringstream os;
    os << "ParamVector(x=" << p.x << ", y=" << p.y << ", p0=" << p.p0 << ", b=" << p.b << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RSS/TOA target localization: ML cost, grid search, gradient descent and PSO";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", base);
    py::register_exception<InvalidParameterError>(m, "InvalidParameterError", base);
    py::register_exception<DivergenceError>(m, "DivergenceError", base);
    py::register_exception<EmptyGridError>(m, "EmptyGridError", base);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);

    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;
    m.attr("MIN_DISTANCE") = kMinDistance;

    py::class_<Position2D>(m, "Position2D")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Position2D{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Position2D::x)
        .def_readwrite("y", &Position2D::y)
        .def(py::self == py::self)
        .def("__repr__", [](const Position2D& p) {
            std::ostringstream os;
            os << "Position2D(" << p.x << ", " << p.y << ")";
            return os.str();
        });

    py::class_<SignalParams>(m, "SignalParams")
        .def(py::init<>())
        .def_readwrite("p0_true", &SignalParams::p0_true)
        .def_readwrite("beta", &SignalParams::beta)
        .def_readwrite("d0", &SignalParams::d0)
        .def_readwrite("sigma_rss", &SignalParams::sigma_rss)
        .def_readwrite("sigma_toa", &SignalParams::sigma_toa)
        .def_readwrite("tau_true", &SignalParams::tau_true)
        .def("validate", &SignalParams::validate);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("target", &Scenario::target)
        .def_readwrite("receivers", &Scenario::receivers)
        .def_readwrite("signal", &Scenario::signal)
        .def("validate", &Scenario::validate);

    py::class_<MeasurementSet>(m, "MeasurementSet")
        .def(py::init<>())
        .def(py::init([](std::vector<double> rss, std::vector<double> toa) {
                 return MeasurementSet{std::move(rss), std::move(toa)};
             }),
             py::arg("rss"), py::arg("toa"))
        .def_readwrite("rss", &MeasurementSet::rss)
        .def_readwrite("toa", &MeasurementSet::toa)
        .def("__len__", &MeasurementSet::size)
        .def(py::self == py::self);

    m.def("distance", &distance, py::arg("a"), py::arg("b"));
    m.def("rss_mean", &rss_mean, py::arg("target"), py::arg("rx"), py::arg("p0"), py::arg("beta"),
          py::arg("d0") = 1.0);
    m.def("toa_mean", &toa_mean, py::arg("target"), py::arg("rx"), py::arg("tau"));
    m.def("sample_measurements", &sample_measurements, py::arg("scenario"), py::arg("seed"));
    m.def("make_ring_scenario", &make_ring_scenario, py::arg("target"), py::arg("radius"),
          py::arg("n_receivers"), py::arg("signal") = SignalParams{});

    py::class_<ParamVector>(m, "ParamVector")
        .def(py::init<>())
        .def(py::init([](double x, double y, double p0, double b) { return ParamVector{x, y, p0, b}; }),
             py::arg("x"), py::arg("y"), py::arg("p0"), py::arg("b"))
        .def_static("from_tau", &ParamVector::from_tau, py::arg("x"), py::arg("y"), py::arg("p0"),
                    py::arg("tau"))
        .def_readwrite("x", &ParamVector::x)
        .def_readwrite("y", &ParamVector::y)
        .def_readwrite("p0", &ParamVector::p0)
        .def_readwrite("b", &ParamVector::b)
        .def_property_readonly("tau", &ParamVector::tau)
        .def("position", &ParamVector::position)
        .def("as_tuple", [](const ParamVector& p) { return py::make_tuple(p.x, p.y, p.p0, p.b); })
        .def(py::self == py::self)
        .def("__repr__", &repr);

    py::class_<ObjectiveContext>(m, "ObjectiveContext")
        .def(py::init<>())
        .def(py::init([](std::vector<Position2D> receivers, MeasurementSet ms, double beta, double d0) {
                 ObjectiveContext c{std::move(receivers), std::move(ms), beta, d0};
                 c.validate();
                 return c;
             }),
             py::arg("receivers"), py::arg("measurements"), py::arg("beta") = 3.0, py::arg("d0") = 1.0)
        .def_static("from_scenario", &ObjectiveContext::from_scenario, py::arg("scenario"),
                    py::arg("measurements"))
        .def_readwrite("receivers", &ObjectiveContext::receivers)
        .def_readwrite("measurements", &ObjectiveContext::measurements)
        .def_readwrite("beta", &ObjectiveContext::beta)
        .def_readwrite("d0", &ObjectiveContext::d0);

    m.def("weight", &weight, py::arg("d"));
    m.def("cost", &cost, py::arg("theta"), py::arg("ctx"));
    m.def("cost_gradient", &cost_gradient, py::arg("theta"), py::arg("ctx"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("center", &GridSpec::center)
        .def_readwrite("half_span", &GridSpec::half_span)
        .def_readwrite("interval", &GridSpec::interval)
        .def_readwrite("parallel", &GridSpec::parallel)
        .def_readwrite("threads", &GridSpec::threads)
        .def("axis_sizes", &GridSpec::axis_sizes);

    py::class_<GdConfig>(m, "GdConfig")
        .def(py::init<>())
        .def_readwrite("init", &GdConfig::init)
        .def_readwrite("gamma", &GdConfig::gamma)
        .def_readwrite("max_iters", &GdConfig::max_iters)
        .def_readwrite("grad_tol", &GdConfig::grad_tol);

    py::class_<PsoConfig>(m, "PsoConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &PsoConfig::max_iters)
        .def_readwrite("swarm_size", &PsoConfig::swarm_size)
        .def_readwrite("lower", &PsoConfig::lower)
        .def_readwrite("upper", &PsoConfig::upper)
        .def_readwrite("inertia", &PsoConfig::inertia)
        .def_readwrite("c1", &PsoConfig::c1)
        .def_readwrite("c2", &PsoConfig::c2)
        .def_readwrite("seed", &PsoConfig::seed);

    py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
        .def_readonly("iteration", &TrajectoryPoint::iteration)
        .def_readonly("cost", &TrajectoryPoint::cost);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("estimate", &SolveResult::estimate)
        .def_readonly("cost", &SolveResult::cost)
        .def_readonly("evaluations", &SolveResult::evaluations)
        .def_readonly("trajectory", &SolveResult::trajectory)
        .def(py::self == py::self);

    // The solvers are single-threaded and pure, so drop the GIL while they run.
    m.def("grid_search", &grid_search, py::arg("ctx"), py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("gradient_descent", &gradient_descent, py::arg("ctx"), py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());
    m.def("pso", &pso, py::arg("ctx"), py::arg("cfg"), py::call_guard<py::gil_scoped_release>());

    py::class_<OffsetInit>(m, "OffsetInit")
        .def(py::init<>())
        .def_readwrite("dx", &OffsetInit::dx)
        .def_readwrite("dy", &OffsetInit::dy)
        .def_readwrite("p0", &OffsetInit::p0)
        .def_readwrite("b", &OffsetInit::b);
    py::class_<CoarseGridInit>(m, "CoarseGridInit")
        .def(py::init<>())
        .def_readwrite("points_per_axis", &CoarseGridInit::points_per_axis)
        .def_readwrite("margin", &CoarseGridInit::margin)
        .def_readwrite("p0", &CoarseGridInit::p0)
        .def_readwrite("b", &CoarseGridInit::b);
    m.def("offset_init", &offset_init, py::arg("truth"), py::arg("init") = OffsetInit{});
    m.def("coarse_grid_init", &coarse_grid_init, py::arg("ctx"), py::arg("init") = CoarseGridInit{});

    m.def("rmse", &rmse, py::arg("errors"));
    m.def("percentile", &percentile, py::arg("errors"), py::arg("q"));
    m.def("cdf_points", &cdf_points, py::arg("errors"));

    py::enum_<SolverKind>(m, "SolverKind")
        .value("grid", SolverKind::grid)
        .value("gd", SolverKind::gd)
        .value("pso", SolverKind::pso);

    py::class_<GdSettings>(m, "GdSettings")
        .def(py::init<>())
        .def_readwrite("gamma", &GdSettings::gamma)
        .def_readwrite("max_iters", &GdSettings::max_iters)
        .def_readwrite("grad_tol", &GdSettings::grad_tol);

    py::class_<PsoSettings>(m, "PsoSettings")
        .def(py::init<>())
        .def_readwrite("max_iters", &PsoSettings::max_iters)
        .def_readwrite("swarm_size", &PsoSettings::swarm_size)
        .def_readwrite("inertia", &PsoSettings::inertia)
        .def_readwrite("c1", &PsoSettings::c1)
        .def_readwrite("c2", &PsoSettings::c2)
        .def_readwrite("seed", &PsoSettings::seed);

    py::class_<SolverSettings>(m, "SolverSettings")
        .def(py::init<>())
        .def_readwrite("enabled", &SolverSettings::enabled)
        .def_readwrite("gd", &SolverSettings::gd)
        .def_readwrite("pso", &SolverSettings::pso)
        .def("is_enabled", &SolverSettings::is_enabled);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("radii", &ExperimentConfig::radii)
        .def_readwrite("trials_per_radius", &ExperimentConfig::trials_per_radius)
        .def_readwrite("n_receivers", &ExperimentConfig::n_receivers)
        .def_readwrite("target", &ExperimentConfig::target)
        .def_readwrite("signal", &ExperimentConfig::signal)
        .def_readwrite("solvers", &ExperimentConfig::solvers)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("warmup", &ExperimentConfig::warmup)
        .def("to_json", &dump_experiment_config)
        .def_static("from_json", &parse_experiment_config, py::arg("text"))
        .def_static("load", [](const std::string& path) { return load_experiment_config(path); },
                    py::arg("path"));

    py::class_<SolverOutcome>(m, "SolverOutcome")
        .def_readonly("solver", &SolverOutcome::solver)
        .def_readonly("ok", &SolverOutcome::ok)
        .def_readonly("failure", &SolverOutcome::failure)
        .def_readonly("estimate", &SolverOutcome::estimate)
        .def_readonly("cost", &SolverOutcome::cost)
        .def_readonly("error_m", &SolverOutcome::error_m)
        .def_readonly("time_s", &SolverOutcome::time_s)
        .def_readonly("evaluations", &SolverOutcome::evaluations);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("seed", &TrialResult::seed)
        .def_readonly("radius", &TrialResult::radius)
        .def_readonly("trial", &TrialResult::trial)
        .def_readonly("outcomes", &TrialResult::outcomes);

    py::class_<SolverSummary>(m, "SolverSummary")
        .def_readonly("solver", &SolverSummary::solver)
        .def_readonly("errors", &SolverSummary::errors)
        .def_readonly("failures", &SolverSummary::failures)
        .def_readonly("rmse", &SolverSummary::rmse)
        .def_readonly("p80", &SolverSummary::p80)
        .def_readonly("p95", &SolverSummary::p95)
        .def_readonly("mean_time_s", &SolverSummary::mean_time_s)
        .def_readonly("total_evaluations", &SolverSummary::total_evaluations);

    py::class_<ExperimentReport>(m, "ExperimentReport")
        .def_readonly("trials", &ExperimentReport::trials)
        .def_readonly("summaries", &ExperimentReport::summaries)
        .def("errors_csv", [](const ExperimentReport& r) { return errors_csv(r); })
        .def("summary_csv", [](const ExperimentReport& r) { return summary_csv(r); })
        .def("cdf_csv", [](const ExperimentReport& r) { return cdf_csv(r); });

    m.def("run_experiment", &run_experiment, py::arg("cfg"), py::call_guard<py::gil_scoped_release>());
}
