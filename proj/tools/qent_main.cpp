// qent: command line front end.
//
//   qent run <config.json> [--out DIR] [--jobs K]
//   qent sweep <spec.json> [--out DIR] [--jobs K]
//   qent validate <config.json>
//
// Exit codes: 0 ok, 1 usage or I/O error, 2 config error, 3 numerical failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qent/config.hpp"
#include "qent/error.hpp"
#include "qent/experiment.hpp"
#include "qent/report_io.hpp"
#include "qent/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;

bool wants(const qent::OutputSpec& out, const char* format) {
  return std::find(out.formats.begin(), out.formats.end(), format) != out.formats.end();
}

std::string join_path(const std::string& dir, const char* name) { return (std::filesystem::path(dir) / name).string(); }

int cmd_run(const std::string& path, const std::string& out_dir) {
  qent::ExperimentConfig config = qent::validate_config(qent::read_text_file(path));
  if (!out_dir.empty()) config.output.directory = out_dir;

  const auto start = std::chrono::steady_clock::now();
  const qent::ExperimentResult result = qent::run_experiment(config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string& dir = config.output.directory;
  if (wants(config.output, "json")) {
    qent::write_atomic(join_path(dir, "report.json"), qent::report_json(result, elapsed).dump(2) + "\n");
  }
  if (wants(config.output, "csv")) qent::write_atomic(join_path(dir, "residual.csv"), qent::residual_csv(result.residual));
  if (result.replica) {
    qent::write_atomic(join_path(dir, "replica_check.json"),
                       qent::replica_check_json(*result.replica).dump(2) + "\n");
  }

  std::printf("%-6s %14s %14s %14s %14s %14s\n", "order", "S_state", "S_vacuum", "subtracted", "S_qm", "delta");
  for (const auto& o : result.residual.orders) {
    const qent::OrderEntropy* e = result.entropy.find(o.order);
    std::printf("%-6g %14.8f %14.8f %14.8f %14.8f %14.3e\n", o.order, e ? e->state : 0.0, e ? e->vacuum : 0.0,
                o.subtracted, o.qm, o.delta);
  }
  for (const auto& note : result.entropy.notes) std::printf("note: %s\n", note.c_str());
  if (result.replica) std::printf("replica check: max deviation %.3e\n", result.replica->max_deviation);
  return kOk;
}

int cmd_sweep(const std::string& path, const std::string& out_dir, int jobs) {
  qent::SweepSpec spec = qent::validate_sweep(qent::read_text_file(path));
  if (!out_dir.empty()) spec.base.output.directory = out_dir;

  const qent::SweepResult result = qent::run_sweep(spec, jobs);
  const std::string& dir = spec.base.output.directory;
  qent::write_atomic(join_path(dir, "sweep.csv"), qent::sweep_csv(result));
  const nlohmann::json summary = qent::sweep_summary(result);
  qent::write_atomic(join_path(dir, "summary.json"), summary.dump(2) + "\n");

  std::printf("%zu/%zu points succeeded\n", result.succeeded(), result.points.size());
  if (!summary["decreasing"].is_null()) {
    std::printf("decreasing: %s\n", summary["decreasing"].get<bool>() ? "true" : "false");
  }
  for (const auto& p : result.points) {
    if (!p.ok()) std::fprintf(stderr, "point %s: %s\n", p.label.c_str(), p.error.c_str());
  }
  if (result.succeeded() > 0) return kOk;
  const bool all_config = std::all_of(result.points.begin(), result.points.end(), [](const auto& p) { return !p.config; });
  return all_config ? kConfig : kNumerical;
}

int cmd_validate(const std::string& path) {
  const qent::ExperimentConfig config = qent::validate_config(qent::read_text_file(path));
  std::cout << qent::to_json(config).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vacuum-subtracted entanglement of lattice wave packets"};
  app.set_version_flag("--version", std::string(qent::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Run one experiment and write report.json");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  run->add_option("--jobs", jobs, "Worker threads (a single run uses one)")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write sweep.csv and summary.json");
  sweep->add_option("spec", config_path, "Sweep spec (JSON)")->required();
  sweep->add_option("--out", out_dir, "Output directory (overrides base output.directory)");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Check a config and print its canonical form");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, jobs);
    if (validate->parsed()) return cmd_validate(config_path);
  } catch (const qent::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const qent::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const qent::ShapeError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const qent::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
