#pragma once

#include "c3bf/barriers.hpp"
#include "c3bf/nominal_controller.hpp"
#include "c3bf/safety_filter.hpp"
#include "c3bf/types.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace c3bf {

enum class FilterKind { none, naive, backstepped, baseline };

const char* to_string(FilterKind kind);
std::optional<FilterKind> parse_filter_kind(const std::string& text);

/// Optional clamp applied after the filter. The barrier guarantee does not
/// hold for clamped commands.
struct InputLimits {
  bool enabled = false;
  double a_t = std::numeric_limits<double>::infinity();
  double p = std::numeric_limits<double>::infinity();
  double q = std::numeric_limits<double>::infinity();
};

struct ScenarioConfig {
  std::string name = "scenario";
  AircraftState initial_state{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 20.0};
  std::vector<Obstacle> obstacles;
  // Aircraft side of r = r_obs + r_uav + d_s; r_obs comes from each obstacle.
  double r_uav = 10.0;
  double d_s = 10.0;
  ReferenceTrajectory trajectory = ReferenceTrajectory::straight(Vec3::Zero(), 0.0, 20.0);
  TrackingGains gains;
  ClassKappa kappa;
  FilterKind filter_kind = FilterKind::naive;
  BacksteppingConfig backstepping;
  double baseline_gamma1 = 1.0;
  double eps_grad = kDefaultEpsGrad;
  InputLimits saturation;
  double dt = 0.01;
  double t_max = 120.0;
  double gravity = kDefaultGravity;

  CollisionGeometry geometry_for(const Obstacle& obstacle) const {
    return {obstacle.r_obs, r_uav, d_s};
  }
};

/// Every violated invariant, empty when the config is runnable.
std::vector<std::string> validate(const ScenarioConfig& config);

struct LogRecord {
  double t = 0.0;
  AircraftState state;
  ControlInput u_des;
  ControlInput u_safe;
  ControlInput u_star;
  std::vector<double> h;    // per obstacle, NaN once inside the collision sphere
  std::vector<double> psi;  // per obstacle
  int active_index = -1;    // obstacle whose constraint modified u_des, -1 if none
  std::vector<double> separation;
  bool feasible = true;
  Vec3 ref_position = Vec3::Zero();
};

enum class Termination { completed, collision };

struct TrajectoryLog {
  std::vector<LogRecord> records;
  std::vector<double> radii;  // collision radius per obstacle
  Termination termination = Termination::completed;
  double dt = 0.0;
};

struct EpisodeMetrics {
  double min_separation = std::numeric_limits<double>::infinity();
  double min_clearance = std::numeric_limits<double>::infinity();  // min over obstacles of separation - r
  double min_h = std::numeric_limits<double>::infinity();
  bool collision = false;
  double filter_active_fraction = 0.0;
  double control_effort = 0.0;  // integral of |u_safe|^2
  double max_path_deviation = 0.0;
  std::size_t infeasible_steps = 0;
  double first_activation_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t records = 0;
  double final_time = 0.0;
};

/// Runs one closed-loop episode. Throws ConfigError for an invalid config and
/// DomainError (naming the step) if the aircraft leaves the model's domain.
TrajectoryLog run(const ScenarioConfig& config);

EpisodeMetrics summarize(const TrajectoryLog& log);

/// Largest pointwise distance between the aircraft positions of two logs over
/// their common records.
double max_position_difference(const TrajectoryLog& a, const TrajectoryLog& b);

struct ComparisonEntry {
  std::string name;
  FilterKind filter_kind = FilterKind::none;
  EpisodeMetrics metrics;
  TrajectoryLog log;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  // Element [i][j] is the max position difference between entries i and j.
  std::vector<std::vector<double>> position_difference;
};

/// Runs configs that share trajectory, obstacles and dt. Throws ConfigMismatch otherwise.
ComparisonReport compare(const std::vector<ScenarioConfig>& configs);

/// Calls fn(0..n-1) on a small worker pool. The first exception thrown by fn is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Runs independent episodes concurrently; results keep the input order.
std::vector<TrajectoryLog> run_all(const std::vector<ScenarioConfig>& configs);

}  // namespace c3bf
