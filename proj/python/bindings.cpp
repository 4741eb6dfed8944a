#include "c3bf/barriers.hpp"
#include "c3bf/dynamics.hpp"
#include "c3bf/errors.hpp"
#include "c3bf/safety_filter.hpp"
#include "c3bf/scenario_io.hpp"
#include "c3bf/sim_engine.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace c3bf;

namespace {

// Columns of a finished episode, one row per logged step.
struct Trajectory {
  Eigen::VectorXd t;
  Eigen::Matrix<double, Eigen::Dynamic, 7> state;
  Eigen::Matrix<double, Eigen::Dynamic, 3> u_des;
  Eigen::Matrix<double, Eigen::Dynamic, 3> u_safe;
  Eigen::MatrixXd h;
  bool collided = false;
};

Trajectory columns(const TrajectoryLog& log) {
  const auto n = static_cast<Eigen::Index>(log.records.size());
  const auto m = static_cast<Eigen::Index>(log.radii.size());
  Trajectory out;
  out.t.resize(n);
  out.state.resize(n, 7);
  out.u_des.resize(n, 3);
  out.u_safe.resize(n, 3);
  out.h.resize(n, m);
  for (Eigen::Index k = 0; k < n; ++k) {
    const LogRecord& r = log.records[k];
    out.t[k] = r.t;
    out.state.row(k) = r.state.as_vector().transpose();
    out.u_des.row(k) = r.u_des.as_vector().transpose();
    out.u_safe.row(k) = r.u_safe.as_vector().transpose();
    for (Eigen::Index i = 0; i < m; ++i) out.h(k, i) = r.h[i];
  }
  out.collided = log.termination == Termination::collision;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<InsideCollisionRadius>(m, "InsideCollisionRadius", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<AircraftState>(m, "AircraftState")
      .def(py::init<double, double, double, double, double, double, double>(), py::arg("x_p") = 0.0,
           py::arg("y_p") = 0.0, py::arg("z_p") = 0.0, py::arg("phi") = 0.0, py::arg("theta") = 0.0,
           py::arg("psi") = 0.0, py::arg("v_t") = 20.0)
      .def_readwrite("x_p", &AircraftState::x_p)
      .def_readwrite("y_p", &AircraftState::y_p)
      .def_readwrite("z_p", &AircraftState::z_p)
      .def_readwrite("phi", &AircraftState::phi)
      .def_readwrite("theta", &AircraftState::theta)
      .def_readwrite("psi", &AircraftState::psi)
      .def_readwrite("v_t", &AircraftState::v_t)
      .def_property_readonly("position", &AircraftState::position)
      .def("as_vector", &AircraftState::as_vector)
      .def("__repr__", [](const AircraftState& s) {
        return "AircraftState(" + std::to_string(s.x_p) + ", " + std::to_string(s.y_p) + ", " +
               std::to_string(s.z_p) + ", " + std::to_string(s.phi) + ", " + std::to_string(s.theta) + ", " +
               std::to_string(s.psi) + ", " + std::to_string(s.v_t) + ")";
      });

  py::class_<ControlInput>(m, "ControlInput")
      .def(py::init<double, double, double>(), py::arg("a_t") = 0.0, py::arg("p") = 0.0, py::arg("q") = 0.0)
      .def_readwrite("a_t", &ControlInput::a_t)
      .def_readwrite("p", &ControlInput::p)
      .def_readwrite("q", &ControlInput::q)
      .def("as_vector", &ControlInput::as_vector);

  py::class_<Obstacle>(m, "Obstacle")
      .def(py::init([](const Vec3& center, const Vec3& velocity, double r_obs) {
             return Obstacle{center, velocity, r_obs};
           }),
           py::arg("center"), py::arg("velocity") = Vec3::Zero(), py::arg("r_obs") = 80.0)
      .def_readwrite("center", &Obstacle::center)
      .def_readwrite("velocity", &Obstacle::velocity)
      .def_readwrite("r_obs", &Obstacle::r_obs)
      .def("at", &Obstacle::at, py::arg("t"));

  py::class_<CollisionGeometry>(m, "CollisionGeometry")
      .def(py::init([](double r_obs, double r_uav, double d_s) { return CollisionGeometry{r_obs, r_uav, d_s}; }),
           py::arg("r_obs") = 80.0, py::arg("r_uav") = 10.0, py::arg("d_s") = 10.0)
      .def_property_readonly("radius", &CollisionGeometry::radius);

  py::class_<BarrierEval>(m, "BarrierEval")
      .def_readonly("h", &BarrierEval::h)
      .def_readonly("lf_h", &BarrierEval::lf_h)
      .def_readonly("lg_h", &BarrierEval::lg_h)
      .def_readonly("separation", &BarrierEval::separation)
      .def_readonly("degenerate_velocity", &BarrierEval::degenerate_velocity)
      .def_readonly("yaw_rate_gap", &BarrierEval::yaw_rate_gap)
      .def("hdot", &BarrierEval::hdot, py::arg("u"));

  py::class_<FilterOutput>(m, "FilterOutput")
      .def_readonly("u_star", &FilterOutput::u_star)
      .def_readonly("u_safe", &FilterOutput::u_safe)
      .def_readonly("psi", &FilterOutput::psi)
      .def_readonly("active", &FilterOutput::active)
      .def_readonly("feasible", &FilterOutput::feasible);

  py::class_<EpisodeMetrics>(m, "Metrics")
      .def_readonly("min_separation", &EpisodeMetrics::min_separation)
      .def_readonly("min_h", &EpisodeMetrics::min_h)
      .def_readonly("collision", &EpisodeMetrics::collision)
      .def_readonly("filter_active_fraction", &EpisodeMetrics::filter_active_fraction)
      .def_readonly("control_effort", &EpisodeMetrics::control_effort)
      .def_readonly("first_activation_time", &EpisodeMetrics::first_activation_time)
      .def_readonly("infeasible_steps", &EpisodeMetrics::infeasible_steps);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("t", &Trajectory::t)
      .def_readonly("state", &Trajectory::state)
      .def_readonly("u_des", &Trajectory::u_des)
      .def_readonly("u_safe", &Trajectory::u_safe)
      .def_readonly("h", &Trajectory::h)
      .def_readonly("collided", &Trajectory::collided);

  const double g = kDefaultGravity;
  m.def("drift", &dynamics::drift, py::arg("state"), py::arg("gravity") = g);
  m.def("control_matrix", &dynamics::control_matrix, py::arg("state"));
  m.def("inertial_velocity", &dynamics::inertial_velocity, py::arg("state"));
  m.def("coordinated_turn_rate", &dynamics::coordinated_turn_rate, py::arg("state"), py::arg("gravity") = g);
  m.def("step_rk4", &dynamics::step_rk4, py::arg("state"), py::arg("u"), py::arg("dt"), py::arg("gravity") = g);

  m.def("c3bf_eval", &c3bf_eval, py::arg("state"), py::arg("obstacle"), py::arg("geometry"),
        py::arg("gravity") = g);
  m.def(
      "backstepped_eval",
      [](const AircraftState& s, const Obstacle& o, const CollisionGeometry& geom, double yaw_rate_des,
         double lambda, double gravity) {
        return backstepped_eval(s, o, geom, BacksteppingConfig{lambda, RDesMode::coordinated_turn}, yaw_rate_des,
                                gravity);
      },
      py::arg("state"), py::arg("obstacle"), py::arg("geometry"), py::arg("yaw_rate_des"),
      py::arg("lam") = 1e-4, py::arg("gravity") = g);
  m.def("baseline_distance_eval", &baseline_distance_eval, py::arg("state"), py::arg("obstacle"),
        py::arg("geometry"), py::arg("gravity") = g, py::arg("gamma1") = 1.0);

  m.def(
      "safety_filter",
      [](const BarrierEval& e, const ControlInput& u, double gamma) { return filter(e, u, ClassKappa{gamma}); },
      py::arg("eval"), py::arg("u_des"), py::arg("gamma") = 1.0);
  m.def(
      "qp_reference_solve",
      [](const BarrierEval& e, const ControlInput& u, double gamma) {
        return qp_reference_solve(e, u, ClassKappa{gamma});
      },
      py::arg("eval"), py::arg("u_des"), py::arg("gamma") = 1.0);

  m.def(
      "run_scenario",
      [](const std::string& path, const std::vector<std::string>& overrides) {
        TrajectoryLog log;
        {
          py::gil_scoped_release release;
          log = run(io::load_scenario(path, overrides));
        }
        return py::make_tuple(columns(log), summarize(log));
      },
      py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
      "Runs a scenario file and returns (Trajectory, Metrics).");
}
