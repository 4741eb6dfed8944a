#include "c3bf/dynamics.hpp"

#include "c3bf/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace c3bf::dynamics {

void check_domain(const AircraftState& state) {
  if (!(state.v_t > kMinSpeed)) {
    throw DomainError("speed V_T = " + std::to_string(state.v_t) + " m/s is at or below the " +
                      "minimum of " + std::to_string(kMinSpeed) + " m/s");
  }
  if (!(std::abs(state.theta) < std::numbers::pi / 2 - kPitchMargin)) {
    throw DomainError("pitch theta = " + std::to_string(state.theta) +
                      " rad is too close to +-pi/2");
  }
}

StateDerivative drift(const AircraftState& state, double gravity) {
  check_domain(state);
  const double sphi = std::sin(state.phi), cphi = std::cos(state.phi);
  const double sth = std::sin(state.theta), cth = std::cos(state.theta);
  const double spsi = std::sin(state.psi), cpsi = std::cos(state.psi);
  const double v = state.v_t;
  const double k = gravity / v;

  StateDerivative f;
  f << v * cth * cpsi, v * cth * spsi, -v * sth,
      k * sphi * cphi * sth, -k * sphi * sphi * cth, k * sphi * cphi,
      0.0;
  return f;
}

ControlMatrix control_matrix(const AircraftState& state) {
  check_domain(state);
  const double sphi = std::sin(state.phi), cphi = std::cos(state.phi);
  const double cth = std::cos(state.theta), tth = std::tan(state.theta);

  ControlMatrix g = ControlMatrix::Zero();
  g(3, 1) = 1.0;
  g(3, 2) = sphi * tth;
  g(4, 2) = cphi;
  g(5, 2) = sphi / cth;
  g(6, 0) = 1.0;
  return g;
}

StateDerivative state_derivative(const AircraftState& state, const ControlInput& input,
                                 double gravity) {
  return drift(state, gravity) + control_matrix(state) * input.as_vector();
}

Vec3 inertial_velocity(const AircraftState& state) {
  const double sth = std::sin(state.theta), cth = std::cos(state.theta);
  return state.v_t * Vec3(cth * std::cos(state.psi), cth * std::sin(state.psi), -sth);
}

double coordinated_turn_rate(const AircraftState& state, double gravity) {
  if (!(state.v_t > kMinSpeed)) {
    throw DomainError("speed V_T = " + std::to_string(state.v_t) + " m/s is at or below the minimum");
  }
  return gravity / state.v_t * std::sin(state.phi) * std::cos(state.theta);
}

namespace {

// Unit direction d(theta, psi) of the velocity and its partials.
struct Direction {
  Vec3 d;
  Vec3 d_theta;
  Vec3 d_psi;
};

Direction direction(const AircraftState& s) {
  const double sth = std::sin(s.theta), cth = std::cos(s.theta);
  const double spsi = std::sin(s.psi), cpsi = std::cos(s.psi);
  return {Vec3(cth * cpsi, cth * spsi, -sth), Vec3(-sth * cpsi, -sth * spsi, -cth),
          Vec3(-cth * spsi, cth * cpsi, 0.0)};
}

}  // namespace

Vec3 aircraft_acceleration(const AircraftState& state, const ControlInput& input, double gravity) {
  const StateDerivative xdot = state_derivative(state, input, gravity);
  const Direction dir = direction(state);
  // v = V_T d(theta, psi)
  return xdot[6] * dir.d + state.v_t * (xdot[4] * dir.d_theta + xdot[5] * dir.d_psi);
}

Eigen::Matrix3d acceleration_input_jacobian(const AircraftState& state) {
  const ControlMatrix g = control_matrix(state);
  const Direction dir = direction(state);
  Eigen::Matrix3d jac;
  for (int col = 0; col < 3; ++col) {
    jac.col(col) = g(6, col) * dir.d + state.v_t * (g(4, col) * dir.d_theta + g(5, col) * dir.d_psi);
  }
  return jac;
}

AircraftState step_rk4(const AircraftState& state, const ControlInput& input, double dt,
                       double gravity) {
  if (!(dt > 0.0)) throw DomainError("integration step must be positive");
  const StateVector x0 = state.as_vector();
  auto rhs = [&](const StateVector& x) {
    return state_derivative(AircraftState::from_vector(x), input, gravity);
  };
  const StateDerivative k1 = rhs(x0);
  const StateDerivative k2 = rhs(x0 + 0.5 * dt * k1);
  const StateDerivative k3 = rhs(x0 + 0.5 * dt * k2);
  const StateDerivative k4 = rhs(x0 + dt * k3);
  AircraftState next = AircraftState::from_vector(x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  next.phi = wrap_angle(next.phi);
  next.psi = wrap_angle(next.psi);
  check_domain(next);
  return next;
}

}  // namespace c3bf::dynamics
