#pragma once

#include "c3bf/sim_engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace c3bf::io {

using Json = nlohmann::ordered_json;

/// Complete scenario tree with every default filled in. Obstacles and
/// trajectory segments are lists; their element defaults come from
/// obstacle_defaults() and segment_defaults().
Json default_config();
Json obstacle_defaults();
Json segment_defaults();

/// Reads a scenario file. Throws ConfigError naming the path if it cannot be
/// read or parsed.
Json read_json_file(const std::filesystem::path& path);

/// Merges a user tree over the defaults. Unknown keys are rejected.
Json resolve(const Json& user);

/// Applies `key=value` with a dotted key ("obstacles.0.velocity.0=-10"). The
/// key must exist in the resolved tree. The value is parsed as JSON, falling
/// back to a plain string.
void apply_override(Json& resolved, const std::string& assignment);

ScenarioConfig config_from_json(const Json& resolved);
Json config_to_json(const ScenarioConfig& config);

/// read_json_file + resolve + overrides + config_from_json. The config name
/// defaults to the file stem.
ScenarioConfig load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
Json load_resolved(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Numbers use 9 significant digits.
std::string format_number(double value);

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log);
void write_metrics(std::ostream& os, const EpisodeMetrics& metrics, const ScenarioConfig& config);
std::string summary_line(const EpisodeMetrics& metrics);

/// Metric per row, config per column, then one delta column per config
/// (value minus the first config's).
void write_comparison_csv(std::ostream& os, const ComparisonReport& report);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepRow {
  std::vector<std::string> values;  // one per axis
  EpisodeMetrics metrics;
  std::string status;  // "ok", "collision" or the error message
};

/// Runs the grid in lexicographic order over the axes (first axis outermost).
std::vector<SweepRow> sweep(const Json& resolved_base, const std::vector<SweepAxis>& axes);
void write_sweep_csv(std::ostream& os, const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows);

}  // namespace c3bf::io
