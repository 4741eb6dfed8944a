#include "c3bf/barriers.hpp"

#include "c3bf/dynamics.hpp"
#include "c3bf/errors.hpp"

#include <cmath>

namespace c3bf {

RelativeKinematics relative_kinematics(const AircraftState& state, const Obstacle& obstacle) {
  return {obstacle.center - state.position(), obstacle.velocity - dynamics::inertial_velocity(state)};
}

double c3bf_value(const RelativeKinematics& rel, const CollisionGeometry& geom) {
  const double r = geom.radius();
  const double dist = rel.p_rel.norm();
  if (!(dist > r)) throw InsideCollisionRadius(dist, r);
  return rel.p_rel.dot(rel.v_rel) + rel.v_rel.norm() * std::sqrt(dist * dist - r * r);
}

BarrierEval c3bf_eval(const AircraftState& state, const Obstacle& obstacle, const CollisionGeometry& geom,
                      double gravity) {
  const RelativeKinematics rel = relative_kinematics(state, obstacle);
  const Vec3& p = rel.p_rel;
  const Vec3& v = rel.v_rel;

  BarrierEval out;
  out.kind = BarrierKind::naive;
  out.separation = p.norm();
  out.h = c3bf_value(rel, geom);

  const double r = geom.radius();
  const double root = std::sqrt(out.separation * out.separation - r * r);
  const double speed = v.norm();
  out.degenerate_velocity = speed <= kMinRelativeSpeed;

  const Vec3 grad_p = v + (speed / root) * p;
  const Vec3 xi = out.degenerate_velocity ? Vec3(p) : Vec3(p + v * (root / speed));

  // v_rel_dot = -(a_drift + J u) for a constant-velocity obstacle.
  const Vec3 a_drift = dynamics::aircraft_acceleration(state, ControlInput{}, gravity);
  const Eigen::Matrix3d jac = dynamics::acceleration_input_jacobian(state);

  out.lf_h = grad_p.dot(v) - xi.dot(a_drift);
  out.lg_h = -(jac.transpose() * xi);
  return out;
}

double r_des(const AircraftState& state, double lateral_accel, double gravity) {
  if (!(state.v_t > kMinSpeed)) throw DomainError("speed at or below the minimum in R_des");
  const double bank = std::atan2(lateral_accel, gravity);
  return gravity / state.v_t * std::sin(bank) * std::cos(state.theta);
}

double r_des(const AircraftState& state, const ReferenceSample& ref, const TrackingGains& gains,
             RDesMode mode, double gravity) {
  switch (mode) {
    case RDesMode::coordinated_turn:
      return r_des(state, lateral_accel_demand(state, ref, gains), gravity);
    case RDesMode::wings_level:
      return r_des(state, 0.0, gravity);
  }
  return 0.0;
}

BarrierEval backstepped_eval(const AircraftState& state, const Obstacle& obstacle,
                             const CollisionGeometry& geom, const BacksteppingConfig& config,
                             double yaw_rate_des, double gravity) {
  if (!(config.lambda > 0.0)) throw DomainError("backstepping lambda must be positive");
  BarrierEval out = c3bf_eval(state, obstacle, geom, gravity);
  out.kind = BarrierKind::backstepped;

  const double yaw_rate = dynamics::coordinated_turn_rate(state, gravity);
  const double gap = yaw_rate_des - yaw_rate;
  out.yaw_rate_gap = gap;
  out.h -= gap * gap / (2.0 * config.lambda);

  // Gradient of R = (g/V) sin(phi) cos(theta) over the 7 states.
  const double sphi = std::sin(state.phi), cphi = std::cos(state.phi);
  const double sth = std::sin(state.theta), cth = std::cos(state.theta);
  const double k = gravity / state.v_t;
  StateVector grad_r = StateVector::Zero();
  grad_r[3] = k * cphi * cth;
  grad_r[4] = -k * sphi * sth;
  grad_r[6] = -k / state.v_t * sphi * cth;

  const double rdot_drift = grad_r.dot(dynamics::drift(state, gravity));
  const Vec3 rdot_input = dynamics::control_matrix(state).transpose() * grad_r;

  // d/dt[-(R_des - R)^2 / (2 lambda)] = (R_des - R) R_dot / lambda
  const double weight = gap / config.lambda;
  out.lf_h += weight * rdot_drift;
  out.lg_h += weight * rdot_input;
  return out;
}

BarrierEval backstepped_eval(const AircraftState& state, const Obstacle& obstacle,
                             const CollisionGeometry& geom, const BacksteppingConfig& config,
                             const ReferenceSample& ref, const TrackingGains& gains, double gravity) {
  return backstepped_eval(state, obstacle, geom, config,
                          r_des(state, ref, gains, config.r_des_mode, gravity), gravity);
}

BarrierEval baseline_distance_eval(const AircraftState& state, const Obstacle& obstacle,
                                   const CollisionGeometry& geom, double gravity, double gamma1) {
  if (!(gamma1 > 0.0)) throw DomainError("baseline gamma1 must be positive");
  const RelativeKinematics rel = relative_kinematics(state, obstacle);
  const Vec3& p = rel.p_rel;
  const Vec3& v = rel.v_rel;
  const double r = geom.radius();

  BarrierEval out;
  out.kind = BarrierKind::baseline;
  out.separation = p.norm();
  if (out.separation < r) throw InsideCollisionRadius(out.separation, r);

  const double h0 = p.squaredNorm() - r * r;
  out.h = 2.0 * p.dot(v) + gamma1 * h0;

  const Vec3 a_drift = dynamics::aircraft_acceleration(state, ControlInput{}, gravity);
  const Eigen::Matrix3d jac = dynamics::acceleration_input_jacobian(state);
  out.lf_h = 2.0 * v.squaredNorm() - 2.0 * p.dot(a_drift) + 2.0 * gamma1 * p.dot(v);
  out.lg_h = -2.0 * (jac.transpose() * p);
  return out;
}

}  // namespace c3bf
