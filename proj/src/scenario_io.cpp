#include "c3bf/scenario_io.hpp"

#include "c3bf/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace c3bf::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

bool compatible(const Json& reference, const Json& value) {
  if (reference.is_null()) return value.is_null() || value.is_number();
  if (reference.is_number()) return value.is_number();
  if (reference.is_boolean()) return value.is_boolean();
  if (reference.is_string()) return value.is_string();
  if (reference.is_array() && !reference.empty() && reference.front().is_number()) {
    if (!value.is_array() || value.size() != reference.size()) return false;
    for (const auto& x : value) {
      if (!x.is_number()) return false;
    }
    return true;
  }
  if (reference.is_array()) return value.is_array();
  if (reference.is_object()) return value.is_object();
  return false;
}

const char* type_hint(const Json& reference) {
  if (reference.is_null()) return "a number or null";
  if (reference.is_number()) return "a number";
  if (reference.is_boolean()) return "true or false";
  if (reference.is_string()) return "a string";
  if (reference.is_array() && !reference.empty()) return "a list of 3 numbers";
  if (reference.is_array()) return "a list";
  return "an object";
}

Json merge_list(const Json& element_defaults, const Json& user, const std::string& path,
                std::vector<std::string>& errors);

// Overlays `user` on `defaults`, recording unknown keys and type mismatches.
Json merge(const Json& defaults, const Json& user, const std::string& path, std::vector<std::string>& errors) {
  Json out = defaults;
  if (!user.is_object()) {
    errors.push_back((path.empty() ? std::string("scenario") : path) + " must be an object");
    return out;
  }
  for (const auto& [key, value] : user.items()) {
    const std::string sub = path.empty() ? key : path + "." + key;
    if (!defaults.contains(key)) {
      errors.push_back("unknown key '" + sub + "'");
      continue;
    }
    if (sub == "obstacles") {
      out[key] = merge_list(obstacle_defaults(), value, sub, errors);
    } else if (sub == "trajectory.segments") {
      out[key] = merge_list(segment_defaults(), value, sub, errors);
    } else if (defaults[key].is_object()) {
      out[key] = merge(defaults[key], value, sub, errors);
    } else if (!compatible(defaults[key], value)) {
      errors.push_back("'" + sub + "' must be " + type_hint(defaults[key]));
    } else {
      out[key] = value;
    }
  }
  return out;
}

Json merge_list(const Json& element_defaults, const Json& user, const std::string& path,
                std::vector<std::string>& errors) {
  Json out = Json::array();
  if (!user.is_array()) {
    errors.push_back("'" + path + "' must be a list");
    return out;
  }
  for (std::size_t i = 0; i < user.size(); ++i) {
    out.push_back(merge(element_defaults, user[i], path + "." + std::to_string(i), errors));
  }
  return out;
}

Vec3 vec_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

double number_or_inf(const Json& j) { return j.is_null() ? kInf : j.get<double>(); }

const char* to_string(RDesMode mode) {
  return mode == RDesMode::coordinated_turn ? "coordinated_turn" : "wings_level";
}

}  // namespace

Json obstacle_defaults() {
  Json o;
  o["center"] = Json::array({0.0, 0.0, 0.0});
  o["velocity"] = Json::array({0.0, 0.0, 0.0});
  o["acceleration"] = Json::array({0.0, 0.0, 0.0});
  o["r_obs"] = 80.0;
  return o;
}

Json segment_defaults() {
  Json s;
  s["duration"] = nullptr;
  s["turn_rate"] = 0.0;
  s["flight_path_angle"] = 0.0;
  return s;
}

Json default_config() {
  return config_to_json(ScenarioConfig{});
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read scenario file '" + path.string() + "'"});
  try {
    return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError({"cannot parse scenario file '" + path.string() + "': " + e.what()});
  }
}

Json resolve(const Json& user) {
  std::vector<std::string> errors;
  Json out = merge(default_config(), user, "", errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return out;
}

void apply_override(Json& resolved, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError({"override '" + assignment + "' is not of the form key=value"});
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  Json* node = &resolved;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (node->is_object() && node->contains(part)) {
      node = &(*node)[part];
    } else if (node->is_array() && !part.empty() &&
               part.find_first_not_of("0123456789") == std::string::npos &&
               std::stoul(part) < node->size()) {
      node = &(*node)[std::stoul(part)];
    } else {
      throw ConfigError({"unknown override key '" + key + "'"});
    }
  }

  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  if (!compatible(*node, value)) {
    throw ConfigError({"override '" + key + "' must be " + std::string(type_hint(*node))});
  }
  *node = std::move(value);
}

ScenarioConfig config_from_json(const Json& j) {
  std::vector<std::string> errors;
  ScenarioConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    const Json& s = j.at("initial_state");
    c.initial_state = {s.at("x_p").get<double>(), s.at("y_p").get<double>(), s.at("z_p").get<double>(),
                       s.at("phi").get<double>(), s.at("theta").get<double>(), s.at("psi").get<double>(),
                       s.at("v_t").get<double>()};

    const Json& obstacles = j.at("obstacles");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      const Json& o = obstacles[i];
      if (!vec_from(o.at("acceleration")).isZero(0.0)) {
        errors.push_back("obstacles." + std::to_string(i) +
                         ".acceleration must be zero (obstacles move at constant velocity)");
      }
      c.obstacles.push_back({vec_from(o.at("center")), vec_from(o.at("velocity")), o.at("r_obs").get<double>()});
    }

    c.r_uav = j.at("geometry").at("r_uav").get<double>();
    c.d_s = j.at("geometry").at("d_s").get<double>();

    const Json& traj = j.at("trajectory");
    std::vector<ReferenceSegment> segments;
    for (const Json& seg : traj.at("segments")) {
      segments.push_back({number_or_inf(seg.at("duration")), seg.at("turn_rate").get<double>(),
                          seg.at("flight_path_angle").get<double>()});
    }
    try {
      c.trajectory = ReferenceTrajectory(vec_from(traj.at("start")), traj.at("heading").get<double>(),
                                         traj.at("speed").get<double>(), std::move(segments));
    } catch (const DomainError& e) {
      errors.push_back(std::string("trajectory: ") + e.what());
    }

    const Json& g = j.at("gains");
    c.gains = {g.at("k_pos").get<double>(), g.at("k_v").get<double>(), g.at("k_theta").get<double>(),
               g.at("k_phi").get<double>()};
    c.kappa.gamma = j.at("kappa").at("gamma").get<double>();

    if (auto kind = parse_filter_kind(j.at("filter_kind").get<std::string>())) {
      c.filter_kind = *kind;
    } else {
      errors.push_back("filter_kind must be one of none, naive, backstepped, baseline");
    }

    c.backstepping.lambda = j.at("backstepping").at("lambda").get<double>();
    const std::string mode = j.at("backstepping").at("r_des_mode").get<std::string>();
    if (mode == "coordinated_turn") {
      c.backstepping.r_des_mode = RDesMode::coordinated_turn;
    } else if (mode == "wings_level") {
      c.backstepping.r_des_mode = RDesMode::wings_level;
    } else {
      errors.push_back("backstepping.r_des_mode must be coordinated_turn or wings_level");
    }

    c.baseline_gamma1 = j.at("baseline").at("gamma1").get<double>();
    c.eps_grad = j.at("eps_grad").get<double>();

    const Json& sat = j.at("saturation");
    c.saturation = {sat.at("enabled").get<bool>(), number_or_inf(sat.at("a_t")), number_or_inf(sat.at("p")),
                    number_or_inf(sat.at("q"))};

    c.dt = j.at("dt").get<double>();
    c.t_max = j.at("t_max").get<double>();
    c.gravity = j.at("gravity").get<double>();
  } catch (const nlohmann::json::exception& e) {
    errors.push_back(std::string("malformed scenario: ") + e.what());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

Json config_to_json(const ScenarioConfig& c) {
  Json j;
  j["name"] = c.name;
  const AircraftState& s = c.initial_state;
  j["initial_state"] = {{"x_p", s.x_p}, {"y_p", s.y_p}, {"z_p", s.z_p}, {"phi", s.phi},
                        {"theta", s.theta}, {"psi", s.psi}, {"v_t", s.v_t}};
  j["obstacles"] = Json::array();
  for (const Obstacle& o : c.obstacles) {
    Json oj = obstacle_defaults();
    oj["center"] = vec_json(o.center);
    oj["velocity"] = vec_json(o.velocity);
    oj["r_obs"] = o.r_obs;
    j["obstacles"].push_back(oj);
  }
  j["geometry"] = {{"r_uav", c.r_uav}, {"d_s", c.d_s}};

  Json segments = Json::array();
  for (const ReferenceSegment& seg : c.trajectory.segments()) {
    segments.push_back({{"duration", number_or_null(seg.duration)},
                        {"turn_rate", seg.turn_rate},
                        {"flight_path_angle", seg.flight_path_angle}});
  }
  j["trajectory"] = {{"start", vec_json(c.trajectory.start())},
                     {"heading", c.trajectory.heading()},
                     {"speed", c.trajectory.speed()},
                     {"segments", segments}};
  j["gains"] = {{"k_pos", c.gains.k_pos}, {"k_v", c.gains.k_v}, {"k_theta", c.gains.k_theta},
                {"k_phi", c.gains.k_phi}};
  j["kappa"] = {{"gamma", c.kappa.gamma}};
  j["filter_kind"] = to_string(c.filter_kind);
  j["backstepping"] = {{"lambda", c.backstepping.lambda}, {"r_des_mode", to_string(c.backstepping.r_des_mode)}};
  j["baseline"] = {{"gamma1", c.baseline_gamma1}};
  j["eps_grad"] = c.eps_grad;
  j["saturation"] = {{"enabled", c.saturation.enabled},
                     {"a_t", number_or_null(c.saturation.a_t)},
                     {"p", number_or_null(c.saturation.p)},
                     {"q", number_or_null(c.saturation.q)}};
  j["dt"] = c.dt;
  j["t_max"] = c.t_max;
  j["gravity"] = c.gravity;
  return j;
}

Json load_resolved(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  Json user = read_json_file(path);
  if (user.is_object() && !user.contains("name")) user["name"] = path.stem().string();
  Json resolved = resolve(user);
  for (const auto& o : overrides) apply_override(resolved, o);
  return resolved;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  return config_from_json(load_resolved(path, overrides));
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
  const std::size_t n_obs = log.radii.size();
  os << "t,x_p,y_p,z_p,phi,theta,psi,v_t,"
        "u_des_a_t,u_des_p,u_des_q,u_safe_a_t,u_safe_p,u_safe_q,u_star_a_t,u_star_p,u_star_q";
  for (std::size_t i = 0; i < n_obs; ++i) os << ",h_" << i << ",psi_" << i;
  os << ",active_index";
  for (std::size_t i = 0; i < n_obs; ++i) os << ",separation_" << i;
  os << ",feasible,ref_x,ref_y,ref_z\n";

  for (const LogRecord& r : log.records) {
    const auto& s = r.state;
    os << format_number(r.t);
    for (double v : {s.x_p, s.y_p, s.z_p, s.phi, s.theta, s.psi, s.v_t}) os << ',' << format_number(v);
    for (const ControlInput* u : {&r.u_des, &r.u_safe, &r.u_star}) {
      os << ',' << format_number(u->a_t) << ',' << format_number(u->p) << ',' << format_number(u->q);
    }
    for (std::size_t i = 0; i < n_obs; ++i) os << ',' << format_number(r.h[i]) << ',' << format_number(r.psi[i]);
    os << ',' << r.active_index;
    for (std::size_t i = 0; i < n_obs; ++i) os << ',' << format_number(r.separation[i]);
    os << ',' << (r.feasible ? 1 : 0);
    os << ',' << format_number(r.ref_position.x()) << ',' << format_number(r.ref_position.y()) << ','
       << format_number(r.ref_position.z()) << '\n';
  }
}

namespace {

std::vector<std::pair<std::string, double>> metric_rows(const EpisodeMetrics& m) {
  return {{"min_separation", m.min_separation},
          {"min_clearance", m.min_clearance},
          {"min_h", m.min_h},
          {"collision", m.collision ? 1.0 : 0.0},
          {"filter_active_fraction", m.filter_active_fraction},
          {"control_effort", m.control_effort},
          {"max_path_deviation", m.max_path_deviation},
          {"infeasible_steps", static_cast<double>(m.infeasible_steps)},
          {"first_activation_time", m.first_activation_time},
          {"records", static_cast<double>(m.records)},
          {"final_time", m.final_time}};
}

}  // namespace

void write_metrics(std::ostream& os, const EpisodeMetrics& m, const ScenarioConfig& config) {
  os << "scenario: " << config.name << '\n';
  os << "filter_kind: " << to_string(config.filter_kind) << '\n';
  for (const auto& [key, value] : metric_rows(m)) {
    if (key == "collision") {
      os << key << ": " << (m.collision ? "true" : "false") << '\n';
    } else {
      os << key << ": " << format_number(value) << '\n';
    }
  }
}

std::string summary_line(const EpisodeMetrics& m) {
  std::ostringstream os;
  os << "min_separation=" << format_number(m.min_separation) << " control_effort=" << format_number(m.control_effort)
     << " filter_active_fraction=" << format_number(m.filter_active_fraction)
     << " collision=" << (m.collision ? "true" : "false");
  return os.str();
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
  const auto& entries = report.entries;
  os << "metric";
  for (const auto& e : entries) os << ',' << e.name;
  for (std::size_t i = 1; i < entries.size(); ++i) os << ",delta_" << entries[i].name;
  os << '\n';

  std::vector<std::vector<std::pair<std::string, double>>> rows;
  for (const auto& e : entries) rows.push_back(metric_rows(e.metrics));

  auto emit = [&](const std::string& name, const std::vector<double>& values) {
    os << name;
    for (double v : values) os << ',' << format_number(v);
    for (std::size_t i = 1; i < values.size(); ++i) os << ',' << format_number(values[i] - values[0]);
    os << '\n';
  };

  for (std::size_t m = 0; m < rows.front().size(); ++m) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r[m].second);
    emit(rows.front()[m].first, values);
  }

  // 1 = smallest; ties share the lower rank.
  auto ranks = [&](auto get) {
    std::vector<double> out;
    for (const auto& a : entries) {
      double rank = 1.0;
      for (const auto& b : entries) rank += get(b) < get(a) ? 1.0 : 0.0;
      out.push_back(rank);
    }
    return out;
  };
  emit("control_effort_rank", ranks([](const ComparisonEntry& e) { return e.metrics.control_effort; }));
  emit("max_path_deviation_rank", ranks([](const ComparisonEntry& e) { return e.metrics.max_path_deviation; }));

  std::vector<double> diff;
  for (std::size_t i = 0; i < entries.size(); ++i) diff.push_back(report.position_difference[i][0]);
  emit("max_position_difference_vs_first", diff);
}

std::vector<SweepRow> sweep(const Json& resolved_base, const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::string>> grid{{}};
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty()) throw ConfigError({"sweep key '" + axis.key + "' has no values"});
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : grid) {
      for (const auto& v : axis.values) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    grid = std::move(next);
  }

  // Resolve every cell up front so unknown keys fail before any episode runs.
  std::vector<ScenarioConfig> configs;
  for (const auto& cell : grid) {
    Json j = resolved_base;
    for (std::size_t a = 0; a < axes.size(); ++a) apply_override(j, axes[a].key + "=" + cell[a]);
    configs.push_back(config_from_json(j));
  }

  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    rows[i].values = grid[i];
    try {
      rows[i].metrics = summarize(run(configs[i]));
      rows[i].status = rows[i].metrics.collision ? "collision" : "ok";
    } catch (const Error& e) {
      rows[i].status = e.what();
    }
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows) {
  for (const auto& axis : axes) os << axis.key << ',';
  os << "status";
  for (const auto& [name, value] : metric_rows(EpisodeMetrics{})) os << ',' << name;
  os << '\n';
  for (const SweepRow& row : rows) {
    for (const auto& v : row.values) os << v << ',';
    std::string status = row.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ' ';
    }
    os << status;
    for (const auto& [name, value] : metric_rows(row.metrics)) os << ',' << format_number(value);
    os << '\n';
  }
}

}  // namespace c3bf::io
