#include "c3bf/cli.hpp"

#include "c3bf/errors.hpp"
#include "c3bf/scenario_io.hpp"
#include "c3bf/sim_engine.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace c3bf::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::vector<std::string> overrides;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::string filter;

  std::vector<std::string> all_overrides(const std::string& filter_kind) const {
    std::vector<std::string> out = overrides;
    if (dt) out.push_back("dt=" + io::format_number(*dt));
    if (t_max) out.push_back("t_max=" + io::format_number(*t_max));
    if (!filter_kind.empty()) out.push_back("filter_kind=" + filter_kind);
    return out;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--override", opts.overrides, "dotted-key=value applied to the scenario (repeatable)");
  cmd->add_option("--dt", opts.dt, "shorthand for --override dt=<value>");
  cmd->add_option("--tmax", opts.t_max, "shorthand for --override t_max=<value>");
  cmd->add_option("--filter", opts.filter, "none|naive|backstepped|baseline (shorthand for filter_kind)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

void warn_saturation(const ScenarioConfig& config, std::ostream& err) {
  if (config.saturation.enabled) {
    err << "warning: " << config.name
        << ": input saturation is enabled; clamped commands are not covered by the barrier guarantee\n";
  }
}

void write_file(const fs::path& path, const auto& writer) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  writer(os);
}

int cmd_run(const std::string& scenario, const fs::path& out_dir, const CommonOptions& opts, std::ostream& out,
            std::ostream& err) {
  const ScenarioConfig config = io::load_scenario(scenario, opts.all_overrides(opts.filter));
  warn_saturation(config, err);
  const TrajectoryLog log = run(config);
  const EpisodeMetrics metrics = summarize(log);

  fs::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, log); });
  write_file(out_dir / "metrics.txt", [&](std::ostream& os) { io::write_metrics(os, metrics, config); });
  out << io::summary_line(metrics) << '\n';
  return metrics.collision ? kExitCollision : kExitOk;
}

int cmd_compare(const std::vector<std::string>& scenarios, const fs::path& out_dir, const CommonOptions& opts,
                std::ostream& out, std::ostream& err) {
  const std::vector<std::string> filters = opts.filter.empty() ? std::vector<std::string>{""} : split(opts.filter, ',');
  std::vector<ScenarioConfig> configs;
  for (const auto& path : scenarios) {
    for (const auto& f : filters) {
      ScenarioConfig c = io::load_scenario(path, opts.all_overrides(f));
      if (scenarios.size() == 1) c.name = to_string(c.filter_kind);
      configs.push_back(std::move(c));
    }
  }
  if (configs.size() < 2) {
    err << "compare needs at least two configs: pass several --scenario files or a filter list such as "
           "--filter naive,baseline\n";
    return kExitError;
  }
  std::map<std::string, int> seen;
  for (auto& c : configs) {
    if (seen[c.name]++ > 0) c.name += "_" + std::to_string(seen[c.name] - 1);
    warn_saturation(c, err);
  }

  const ComparisonReport report = compare(configs);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    fs::create_directories(out_dir / e.name);
    write_file(out_dir / e.name / "trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, e.log); });
    write_file(out_dir / e.name / "metrics.txt", [&](std::ostream& os) { io::write_metrics(os, e.metrics, configs[i]); });
    out << e.name << ": " << io::summary_line(e.metrics) << '\n';
  }
  write_file(out_dir / "comparison.csv", [&](std::ostream& os) { io::write_comparison_csv(os, report); });
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, const std::vector<std::string>& params, const fs::path& out_dir,
              const CommonOptions& opts, std::ostream& out) {
  if (params.empty() || params.size() > 2) throw ConfigError({"sweep takes one or two --param key=v1,v2,..."});
  std::vector<io::SweepAxis> axes;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError({"sweep parameter '" + p + "' is not key=v1,v2,..."});
    io::SweepAxis axis{p.substr(0, eq), {}};
    const std::string values = p.substr(eq + 1);
    if (!values.empty()) axis.values = split(values, ',');
    axes.push_back(std::move(axis));
  }

  const io::Json base = io::load_resolved(scenario, opts.all_overrides(opts.filter));
  const std::vector<io::SweepRow> rows = io::sweep(base, axes);
  fs::create_directories(out_dir);
  write_file(out_dir / "sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, axes, rows); });
  out << rows.size() << " sweep cells written to " << (out_dir / "sweep.csv").string() << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& scenario, const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const io::Json resolved = io::load_resolved(scenario, opts.all_overrides(opts.filter));
  const ScenarioConfig config = io::config_from_json(resolved);
  const std::vector<std::string> violations = validate(config);
  if (!violations.empty()) {
    for (const auto& v : violations) err << "invalid: " << v << '\n';
    return kExitError;
  }
  warn_saturation(config, err);
  out << resolved.dump(2) << '\n';
  for (std::size_t i = 0; i < config.obstacles.size(); ++i) {
    out << "obstacles." << i << ".collision_radius: "
        << io::format_number(config.geometry_for(config.obstacles[i]).radius()) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collision-cone barrier safety filters for a 3D Dubins aircraft", "c3bf"};
  app.require_subcommand(1);

  std::string scenario;
  std::vector<std::string> scenarios;
  std::string out_dir = "out";
  std::vector<std::string> params;
  CommonOptions run_opts, compare_opts, sweep_opts, validate_opts;

  auto* run_cmd = app.add_subcommand("run", "run one episode");
  run_cmd->add_option("--scenario", scenario, "scenario file")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  add_common(run_cmd, run_opts);

  auto* compare_cmd = app.add_subcommand("compare", "run several configs on one encounter and compare them");
  compare_cmd->add_option("--scenario", scenarios, "scenario file (repeatable)")->required();
  compare_cmd->add_option("--out", out_dir, "output directory");
  add_common(compare_cmd, compare_opts);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a grid over one or two config keys");
  sweep_cmd->add_option("--scenario", scenario, "scenario file")->required();
  sweep_cmd->add_option("--param", params, "key=v1,v2,... (one or two)")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory");
  add_common(sweep_cmd, sweep_opts);

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario and print it with defaults applied");
  validate_cmd->add_option("--scenario", scenario, "scenario file")->required();
  add_common(validate_cmd, validate_opts);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(scenario, out_dir, run_opts, out, err);
    if (*compare_cmd) return cmd_compare(scenarios, out_dir, compare_opts, out, err);
    if (*sweep_cmd) return cmd_sweep(scenario, params, out_dir, sweep_opts, out);
    if (*validate_cmd) return cmd_validate(scenario, validate_opts, out, err);
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) err << "error: " << v << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace c3bf::cli
