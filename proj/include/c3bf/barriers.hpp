#pragma once

#include "c3bf/nominal_controller.hpp"
#include "c3bf/types.hpp"

namespace c3bf {

/// Sphere obstacle moving with constant velocity. `center` is the position at t = 0.
struct Obstacle {
  Vec3 center = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double r_obs = 0.0;

  Obstacle at(double t) const { return {center + velocity * t, velocity, r_obs}; }

  bool operator==(const Obstacle& other) const {
    return center == other.center && velocity == other.velocity && r_obs == other.r_obs;
  }
};

/// Collision radius r = r_obs + r_uav + d_s.
struct CollisionGeometry {
  double r_obs = 0.0;
  double r_uav = 0.0;
  double d_s = 0.0;

  double radius() const { return r_obs + r_uav + d_s; }
};

struct RelativeKinematics {
  Vec3 p_rel = Vec3::Zero();  // obstacle minus aircraft
  Vec3 v_rel = Vec3::Zero();
};

enum class BarrierKind { naive, backstepped, baseline };

/// Barrier value with h_dot = lf_h + lg_h . u, u = (A_T, P, Q).
struct BarrierEval {
  double h = 0.0;
  double lf_h = 0.0;
  Vec3 lg_h = Vec3::Zero();
  BarrierKind kind = BarrierKind::naive;

  double separation = 0.0;           // |p_rel|
  bool degenerate_velocity = false;  // |v_rel| <= kMinRelativeSpeed
  double yaw_rate_gap = 0.0;         // R_des - R, backstepped only

  double hdot(const ControlInput& u) const { return lf_h + lg_h.dot(u.as_vector()); }
};

// Below this relative speed the cone axis is undefined and xi falls back to p_rel.
inline constexpr double kMinRelativeSpeed = 1e-6;

enum class RDesMode { coordinated_turn, wings_level };

struct BacksteppingConfig {
  double lambda = 1e-4;
  RDesMode r_des_mode = RDesMode::coordinated_turn;
};

/// `obstacle` is taken at the evaluation time (see Obstacle::at).
RelativeKinematics relative_kinematics(const AircraftState& state, const Obstacle& obstacle);

/// h = <p_rel, v_rel> + |v_rel| sqrt(|p_rel|^2 - r^2). Throws InsideCollisionRadius if |p_rel| <= r.
double c3bf_value(const RelativeKinematics& rel, const CollisionGeometry& geom);

BarrierEval c3bf_eval(const AircraftState& state, const Obstacle& obstacle, const CollisionGeometry& geom,
                      double gravity = kDefaultGravity);

/// Yaw rate of a coordinated turn banked at atan2(a_lat_des, g).
double r_des(const AircraftState& state, double lateral_accel, double gravity = kDefaultGravity);

double r_des(const AircraftState& state, const ReferenceSample& ref, const TrackingGains& gains,
             RDesMode mode, double gravity = kDefaultGravity);

/// Collision-cone barrier minus (R_des - R)^2 / (2 lambda). R_des is held constant.
BarrierEval backstepped_eval(const AircraftState& state, const Obstacle& obstacle,
                             const CollisionGeometry& geom, const BacksteppingConfig& config,
                             double yaw_rate_des, double gravity = kDefaultGravity);

BarrierEval backstepped_eval(const AircraftState& state, const Obstacle& obstacle,
                             const CollisionGeometry& geom, const BacksteppingConfig& config,
                             const ReferenceSample& ref, const TrackingGains& gains,
                             double gravity = kDefaultGravity);

/// Second-order distance barrier H = d/dt(|p|^2 - r^2) + gamma1 (|p|^2 - r^2).
/// Throws InsideCollisionRadius if |p_rel| < r.
BarrierEval baseline_distance_eval(const AircraftState& state, const Obstacle& obstacle,
                                   const CollisionGeometry& geom, double gravity = kDefaultGravity,
                                   double gamma1 = 1.0);

}  // namespace c3bf
