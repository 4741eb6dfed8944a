#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace c3bf {

using Vec3 = Eigen::Vector3d;
using StateVector = Eigen::Matrix<double, 7, 1>;
using StateDerivative = StateVector;
using ControlMatrix = Eigen::Matrix<double, 7, 3>;

inline constexpr double kDefaultGravity = 9.81;

// Singularity guards of the kinematic model.
inline constexpr double kMinSpeed = 1e-3;     // on V_T [m/s]
inline constexpr double kPitchMargin = 1e-3;  // on pi/2 - |theta| [rad]

/// 3D Dubins aircraft state. Earth-fixed position with z_p increasing as the
/// aircraft descends (z_dot = -V_T sin(theta)).
struct AircraftState {
  double x_p = 0.0;
  double y_p = 0.0;
  double z_p = 0.0;
  double phi = 0.0;    // roll [rad]
  double theta = 0.0;  // pitch [rad]
  double psi = 0.0;    // yaw [rad]
  double v_t = 0.0;    // total speed [m/s]

  Vec3 position() const { return {x_p, y_p, z_p}; }

  StateVector as_vector() const {
    StateVector v;
    v << x_p, y_p, z_p, phi, theta, psi, v_t;
    return v;
  }

  static AircraftState from_vector(const StateVector& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }

  bool operator==(const AircraftState&) const = default;
};

/// u = [A_T, P, Q].
struct ControlInput {
  double a_t = 0.0;  // longitudinal acceleration [m/s^2]
  double p = 0.0;    // body roll rate [rad/s]
  double q = 0.0;    // body pitch rate [rad/s]

  Vec3 as_vector() const { return {a_t, p, q}; }
  static ControlInput from_vector(const Vec3& v) { return {v[0], v[1], v[2]}; }

  bool operator==(const ControlInput&) const = default;
};

/// Reduces an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, kTwoPi);
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

}  // namespace c3bf
