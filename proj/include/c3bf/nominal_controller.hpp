#pragma once

#include "c3bf/types.hpp"

#include <limits>
#include <vector>

namespace c3bf {

struct ReferenceSample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

struct TrackingGains {
  double k_pos = 0.5;
  double k_v = 1.0;
  double k_theta = 2.0;
  double k_phi = 2.0;
};

/// One piece of a reference path: constant heading rate and constant flight-path
/// angle. turn_rate == 0 is a straight line, flight_path_angle == 0 is level.
struct ReferenceSegment {
  double duration = std::numeric_limits<double>::infinity();
  double turn_rate = 0.0;          // [rad/s], positive turns from +x toward +y
  double flight_path_angle = 0.0;  // [rad], positive climbs (z decreases)

  bool operator==(const ReferenceSegment&) const = default;
};

/// Reference made of straight lines, constant-rate turns and constant-angle
/// climbs or descents flown at a fixed speed. Only the last segment may have
/// an infinite duration.
class ReferenceTrajectory {
 public:
  ReferenceTrajectory() = default;
  ReferenceTrajectory(Vec3 start, double heading, double speed, std::vector<ReferenceSegment> segments);

  ReferenceSample sample(double t) const;
  double horizon() const;

  const Vec3& start() const { return start_; }
  double heading() const { return heading_; }
  double speed() const { return speed_; }
  const std::vector<ReferenceSegment>& segments() const { return segments_; }

  static ReferenceTrajectory straight(Vec3 start, double heading, double speed);

  bool operator==(const ReferenceTrajectory& other) const {
    return start_ == other.start_ && heading_ == other.heading_ && speed_ == other.speed_ &&
           segments_ == other.segments_;
  }

 private:
  struct Knot {
    double t0;
    Vec3 position;
    double heading;
  };

  Vec3 start_ = Vec3::Zero();
  double heading_ = 0.0;
  double speed_ = 20.0;
  std::vector<ReferenceSegment> segments_{ReferenceSegment{}};
  std::vector<Knot> knots_{Knot{0.0, Vec3::Zero(), 0.0}};
};

/// Throws OutOfHorizon for t < 0 or t beyond the finite horizon.
ReferenceSample reference_eval(const ReferenceTrajectory& trajectory, double t);

/// Horizontal lateral acceleration demanded by the tracker, measured along the
/// aircraft's left-to-right horizontal normal (-sin psi, cos psi, 0).
double lateral_accel_demand(const AircraftState& state, const ReferenceSample& ref,
                            const TrackingGains& gains);

/// Cascaded proportional velocity tracker producing u_des.
ControlInput track(const AircraftState& state, const ReferenceSample& ref, const TrackingGains& gains,
                   double gravity = kDefaultGravity);

}  // namespace c3bf
