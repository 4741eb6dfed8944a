#pragma once

#include "c3bf/barriers.hpp"
#include "c3bf/dynamics.hpp"
#include "c3bf/types.hpp"

#include <cmath>
#include <random>

namespace c3bf::testing {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vec3 vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  Vec3 direction() {
    Vec3 v;
    do {
      v = vec(-1.0, 1.0);
    } while (v.norm() < 0.1 || v.norm() > 1.0);
    return v.normalized();
  }

  // Keeps clear of the pitch guard so finite differences stay inside the domain.
  AircraftState state() {
    return {uniform(-500, 500), uniform(-500, 500), uniform(-500, 500), uniform(-1.4, 1.4),
            uniform(-1.3, 1.3),  uniform(-3.1, 3.1),  uniform(5.0, 40.0)};
  }

  ControlInput input() { return {uniform(-5, 5), uniform(-1, 1), uniform(-1, 1)}; }

  /// Obstacle at time 0 placed between 1.2 r and 1.2 r + span from the aircraft.
  /// Pair with geometry(o): r = r_obs + 20.
  Obstacle obstacle_near(const AircraftState& s, double r, double span = 400.0) {
    Obstacle o;
    o.r_obs = r - 20.0;
    o.center = s.position() + direction() * (1.2 * r + uniform(0.0, span));
    o.velocity = vec(-15, 15);
    return o;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline CollisionGeometry geometry(const Obstacle& o) { return {o.r_obs, 10.0, 10.0}; }

inline double rel_err(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max(floor, std::max(std::abs(a), std::abs(b)));
}

}  // namespace c3bf::testing
