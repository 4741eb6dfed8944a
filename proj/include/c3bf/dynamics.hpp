#pragma once

#include "c3bf/types.hpp"

namespace c3bf::dynamics {

/// Throws DomainError if V_T <= kMinSpeed or |theta| >= pi/2 - kPitchMargin.
void check_domain(const AircraftState& state);

/// Drift field f(x) of the 3D Dubins model.
StateDerivative drift(const AircraftState& state, double gravity = kDefaultGravity);

/// Input matrix g(x); columns ordered (A_T, P, Q).
ControlMatrix control_matrix(const AircraftState& state);

/// x_dot = f(x) + g(x) u.
StateDerivative state_derivative(const AircraftState& state, const ControlInput& input,
                                 double gravity = kDefaultGravity);

/// Earth-fixed velocity of the aircraft. Its norm is V_T.
Vec3 inertial_velocity(const AircraftState& state);

/// Body yaw rate R = (g / V_T) sin(phi) cos(theta) implied by the drift terms.
double coordinated_turn_rate(const AircraftState& state, double gravity = kDefaultGravity);

/// d/dt of inertial_velocity along x_dot = f(x) + g(x) u.
Vec3 aircraft_acceleration(const AircraftState& state, const ControlInput& input,
                           double gravity = kDefaultGravity);

/// Jacobian of aircraft_acceleration with respect to (A_T, P, Q). The P column is zero.
Eigen::Matrix3d acceleration_input_jacobian(const AircraftState& state);

/// One classical RK4 step with the input held over [t, t + dt]. Angles are wrapped.
AircraftState step_rk4(const AircraftState& state, const ControlInput& input, double dt,
                       double gravity = kDefaultGravity);

}  // namespace c3bf::dynamics
