#include "c3bf/nominal_controller.hpp"

#include "c3bf/dynamics.hpp"
#include "c3bf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace c3bf {

namespace {

Vec3 heading_vector(double heading) { return {std::cos(heading), std::sin(heading), 0.0}; }

// Position after flying `dt` seconds of `seg` from `p0` with initial heading `h0`.
Vec3 advance(const Vec3& p0, double h0, double speed, const ReferenceSegment& seg, double dt) {
  const double ground_speed = speed * std::cos(seg.flight_path_angle);
  const Vec3 climb(0.0, 0.0, -speed * std::sin(seg.flight_path_angle) * dt);
  if (seg.turn_rate == 0.0) return p0 + ground_speed * dt * heading_vector(h0) + climb;
  const double h = h0 + seg.turn_rate * dt;
  const double radius = ground_speed / seg.turn_rate;
  return p0 + radius * Vec3(std::sin(h) - std::sin(h0), std::cos(h0) - std::cos(h), 0.0) + climb;
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(Vec3 start, double heading, double speed,
                                         std::vector<ReferenceSegment> segments)
    : start_(std::move(start)), heading_(heading), speed_(speed), segments_(std::move(segments)) {
  if (!(speed_ > kMinSpeed)) throw DomainError("reference speed must exceed the minimum speed");
  if (segments_.empty()) throw DomainError("reference trajectory needs at least one segment");
  knots_.clear();
  double t0 = 0.0;
  Vec3 p = start_;
  double h = heading_;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (!(seg.duration > 0.0)) throw DomainError("reference segment duration must be positive");
    if (std::isinf(seg.duration) && i + 1 != segments_.size()) {
      throw DomainError("only the last reference segment may be unbounded");
    }
    if (!std::isfinite(seg.turn_rate)) throw DomainError("reference turn rate must be finite");
    if (!(std::abs(seg.flight_path_angle) < std::numbers::pi / 2 - 2.0 * kPitchMargin)) {
      throw DomainError("reference flight-path angle must be within the pitch guard");
    }
    knots_.push_back({t0, p, h});
    if (std::isfinite(seg.duration)) {
      p = advance(p, h, speed_, seg, seg.duration);
      h += seg.turn_rate * seg.duration;
      t0 += seg.duration;
    }
  }
}

ReferenceTrajectory ReferenceTrajectory::straight(Vec3 start, double heading, double speed) {
  return ReferenceTrajectory(std::move(start), heading, speed, {ReferenceSegment{}});
}

double ReferenceTrajectory::horizon() const {
  const auto& last = segments_.back();
  return knots_.back().t0 + last.duration;
}

ReferenceSample ReferenceTrajectory::sample(double t) const {
  if (!(t >= 0.0) || t > horizon()) {
    throw OutOfHorizon("reference time " + std::to_string(t) + " s is outside [0, " +
                       std::to_string(horizon()) + "]");
  }
  std::size_t i = knots_.size() - 1;
  while (i > 0 && knots_[i].t0 > t) --i;
  const Knot& k = knots_[i];
  const ReferenceSegment& seg = segments_[i];
  const double dt = t - k.t0;
  const double h = k.heading + seg.turn_rate * dt;
  const double cg = std::cos(seg.flight_path_angle);

  ReferenceSample s;
  s.position = advance(k.position, k.heading, speed_, seg, dt);
  s.velocity = speed_ * Vec3(cg * std::cos(h), cg * std::sin(h), -std::sin(seg.flight_path_angle));
  s.acceleration = speed_ * cg * seg.turn_rate * Vec3(-std::sin(h), std::cos(h), 0.0);
  return s;
}

ReferenceSample reference_eval(const ReferenceTrajectory& trajectory, double t) {
  return trajectory.sample(t);
}

namespace {

Vec3 commanded_velocity(const AircraftState& state, const ReferenceSample& ref, const TrackingGains& gains) {
  return ref.velocity + gains.k_pos * (ref.position - state.position());
}

}  // namespace

double lateral_accel_demand(const AircraftState& state, const ReferenceSample& ref,
                            const TrackingGains& gains) {
  const Vec3 v_cmd = commanded_velocity(state, ref, gains);
  const Vec3 demand = ref.acceleration + gains.k_pos * (v_cmd - dynamics::inertial_velocity(state));
  const Vec3 normal(-std::sin(state.psi), std::cos(state.psi), 0.0);
  return normal.dot(demand);
}

ControlInput track(const AircraftState& state, const ReferenceSample& ref, const TrackingGains& gains,
                   double gravity) {
  dynamics::check_domain(state);
  const Vec3 v_cmd = commanded_velocity(state, ref, gains);
  const double speed_cmd = v_cmd.norm();
  if (!(speed_cmd > kMinSpeed)) throw DomainError("commanded velocity vanishes");

  // Speed demand is the commanded velocity resolved along the flight direction;
  // its norm would ask for more speed when v_cmd points backwards.
  const Vec3 direction = dynamics::inertial_velocity(state) / state.v_t;
  ControlInput u;
  u.a_t = gains.k_v * (v_cmd.dot(direction) - state.v_t);

  const double pitch_limit = std::numbers::pi / 2 - 2.0 * kPitchMargin;
  const double theta_cmd = std::clamp(-std::asin(std::clamp(v_cmd.z() / speed_cmd, -1.0, 1.0)),
                                      -pitch_limit, pitch_limit);
  u.q = gains.k_theta * (theta_cmd - state.theta) / std::max(std::cos(state.phi), 0.1);

  const double phi_cmd = std::atan2(lateral_accel_demand(state, ref, gains), gravity);
  u.p = gains.k_phi * (phi_cmd - state.phi);
  return u;
}

}  // namespace c3bf
