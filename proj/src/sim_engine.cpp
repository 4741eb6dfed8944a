#include "c3bf/sim_engine.hpp"

#include "c3bf/dynamics.hpp"
#include "c3bf/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace c3bf {

const char* to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::none: return "none";
    case FilterKind::naive: return "naive";
    case FilterKind::backstepped: return "backstepped";
    case FilterKind::baseline: return "baseline";
  }
  return "unknown";
}

std::optional<FilterKind> parse_filter_kind(const std::string& text) {
  for (FilterKind k : {FilterKind::none, FilterKind::naive, FilterKind::backstepped, FilterKind::baseline}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::vector<std::string> validate(const ScenarioConfig& config) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) errors.push_back(what);
  };

  require(config.dt > 0.0, "dt must be positive");
  require(config.t_max > config.dt, "t_max must exceed dt");
  require(config.gravity > 0.0, "gravity must be positive");
  require(config.kappa.gamma > 0.0, "kappa.gamma must be positive");
  require(config.backstepping.lambda > 0.0, "backstepping.lambda must be positive");
  require(config.baseline_gamma1 > 0.0, "baseline.gamma1 must be positive");
  require(config.eps_grad > 0.0, "eps_grad must be positive");
  require(config.gains.k_pos > 0.0 && config.gains.k_v > 0.0 && config.gains.k_theta > 0.0 &&
              config.gains.k_phi > 0.0,
          "tracking gains must be positive");
  require(config.r_uav >= 0.0 && config.d_s >= 0.0, "geometry.r_uav and geometry.d_s must be non-negative");
  if (config.saturation.enabled) {
    require(config.saturation.a_t > 0.0 && config.saturation.p > 0.0 && config.saturation.q > 0.0,
            "saturation limits must be positive");
  }

  const AircraftState& s = config.initial_state;
  require(s.v_t > kMinSpeed, "initial_state.v_t must exceed the minimum speed");
  require(std::abs(s.theta) < std::numbers::pi / 2 - kPitchMargin,
          "initial_state.theta must stay inside the pitch guard");

  if (config.dt > 0.0 && config.t_max > 0.0) {
    require(config.trajectory.horizon() >= config.t_max, "trajectory horizon is shorter than t_max");
  }

  for (std::size_t i = 0; i < config.obstacles.size(); ++i) {
    const Obstacle& o = config.obstacles[i];
    const std::string tag = "obstacles[" + std::to_string(i) + "]";
    require(o.r_obs >= 0.0, tag + ".r_obs must be non-negative");
    const double r = config.geometry_for(o).radius();
    require(r > 0.0, tag + ": collision radius r_obs + r_uav + d_s must be positive");
    const double sep = (o.center - s.position()).norm();
    require(sep > r, "initial state must be outside the collision sphere of " + tag +
                         " (separation " + std::to_string(sep) + " m, r = " + std::to_string(r) + " m)");
  }
  return errors;
}

namespace {

ControlInput clamp_input(const ControlInput& u, const InputLimits& limits) {
  return {std::clamp(u.a_t, -limits.a_t, limits.a_t), std::clamp(u.p, -limits.p, limits.p),
          std::clamp(u.q, -limits.q, limits.q)};
}

}  // namespace

TrajectoryLog run(const ScenarioConfig& config) {
  if (auto errors = validate(config); !errors.empty()) throw ConfigError(std::move(errors));

  const std::size_t n_obs = config.obstacles.size();
  const auto steps = static_cast<std::size_t>(std::floor(config.t_max / config.dt + 1e-9));

  TrajectoryLog log;
  log.dt = config.dt;
  log.records.reserve(steps + 1);
  for (const auto& o : config.obstacles) log.radii.push_back(config.geometry_for(o).radius());

  std::vector<BarrierEval> evals(n_obs);
  AircraftState state = config.initial_state;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    LogRecord rec;
    rec.t = t;
    rec.state = state;
    rec.h.assign(n_obs, std::numeric_limits<double>::quiet_NaN());
    rec.psi.assign(n_obs, std::numeric_limits<double>::quiet_NaN());
    rec.separation.resize(n_obs);

    try {
      const ReferenceSample ref = config.trajectory.sample(t);
      rec.ref_position = ref.position;
      rec.u_des = track(state, ref, config.gains, config.gravity);
      rec.u_star = rec.u_des;

      bool collided = false;
      std::vector<Obstacle> current(n_obs);
      for (std::size_t i = 0; i < n_obs; ++i) {
        current[i] = config.obstacles[i].at(t);
        rec.separation[i] = (current[i].center - state.position()).norm();
        collided = collided || rec.separation[i] <= log.radii[i];
      }
      if (collided) {
        log.records.push_back(std::move(rec));
        log.termination = Termination::collision;
        break;
      }

      if (n_obs > 0) {
        const double yaw_rate_des =
            config.filter_kind == FilterKind::backstepped
                ? r_des(state, ref, config.gains, config.backstepping.r_des_mode, config.gravity)
                : 0.0;
        for (std::size_t i = 0; i < n_obs; ++i) {
          const CollisionGeometry geom = config.geometry_for(current[i]);
          switch (config.filter_kind) {
            case FilterKind::none:
            case FilterKind::naive:
              evals[i] = c3bf_eval(state, current[i], geom, config.gravity);
              break;
            case FilterKind::backstepped:
              evals[i] = backstepped_eval(state, current[i], geom, config.backstepping, yaw_rate_des,
                                          config.gravity);
              break;
            case FilterKind::baseline:
              evals[i] = baseline_distance_eval(state, current[i], geom, config.gravity, config.baseline_gamma1);
              break;
          }
          rec.h[i] = evals[i].h;
          rec.psi[i] = psi(evals[i], rec.u_des, config.kappa);
        }

        if (config.filter_kind != FilterKind::none) {
          const FilterOutput out = compose_obstacles(evals, rec.u_des, config.kappa, config.eps_grad);
          rec.u_safe = out.u_safe;
          rec.u_star = out.u_star;
          rec.feasible = out.feasible;
          if (out.active) rec.active_index = static_cast<int>(out.binding);
        }
      }
      if (config.saturation.enabled) rec.u_star = clamp_input(rec.u_star, config.saturation);

      log.records.push_back(rec);
      if (k < steps) state = dynamics::step_rk4(state, rec.u_star, config.dt, config.gravity);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "step " << k << " (t = " << t << " s): " << e.what();
      throw DomainError(os.str());
    }
  }
  return log;
}

EpisodeMetrics summarize(const TrajectoryLog& log) {
  EpisodeMetrics m;
  m.records = log.records.size();
  if (log.records.empty()) return m;
  m.final_time = log.records.back().t;

  std::size_t active = 0;
  double prev_effort = 0.0;
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const LogRecord& rec = log.records[k];
    for (std::size_t i = 0; i < rec.separation.size(); ++i) {
      m.min_separation = std::min(m.min_separation, rec.separation[i]);
      m.min_clearance = std::min(m.min_clearance, rec.separation[i] - log.radii[i]);
      if (rec.separation[i] <= log.radii[i]) m.collision = true;
      if (!std::isnan(rec.h[i])) m.min_h = std::min(m.min_h, rec.h[i]);
    }
    if (rec.active_index >= 0) {
      ++active;
      if (std::isnan(m.first_activation_time)) m.first_activation_time = rec.t;
    }
    if (!rec.feasible) ++m.infeasible_steps;
    m.max_path_deviation = std::max(m.max_path_deviation, (rec.state.position() - rec.ref_position).norm());

    const double effort = rec.u_safe.as_vector().squaredNorm();
    if (k > 0) m.control_effort += 0.5 * (prev_effort + effort) * (rec.t - log.records[k - 1].t);
    prev_effort = effort;
  }
  m.filter_active_fraction = static_cast<double>(active) / static_cast<double>(log.records.size());
  return m;
}

double max_position_difference(const TrajectoryLog& a, const TrajectoryLog& b) {
  const std::size_t n = std::min(a.records.size(), b.records.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, (a.records[k].state.position() - b.records[k].state.position()).norm());
  }
  return worst;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

std::vector<TrajectoryLog> run_all(const std::vector<ScenarioConfig>& configs) {
  std::vector<TrajectoryLog> logs(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) { logs[i] = run(configs[i]); });
  return logs;
}

ComparisonReport compare(const std::vector<ScenarioConfig>& configs) {
  if (configs.empty()) throw ConfigMismatch("compare needs at least one config");
  const ScenarioConfig& first = configs.front();
  for (std::size_t i = 1; i < configs.size(); ++i) {
    const ScenarioConfig& c = configs[i];
    if (!(c.trajectory == first.trajectory)) throw ConfigMismatch(c.name + ": trajectory differs from " + first.name);
    if (c.obstacles != first.obstacles) throw ConfigMismatch(c.name + ": obstacles differ from " + first.name);
    if (c.dt != first.dt) throw ConfigMismatch(c.name + ": dt differs from " + first.name);
  }

  std::vector<TrajectoryLog> logs = run_all(configs);
  ComparisonReport report;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    report.entries.push_back({configs[i].name, configs[i].filter_kind, summarize(logs[i]), std::move(logs[i])});
  }
  const std::size_t n = report.entries.size();
  report.position_difference.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = max_position_difference(report.entries[i].log, report.entries[j].log);
      report.position_difference[i][j] = report.position_difference[j][i] = d;
    }
  }
  return report;
}

}  // namespace c3bf
