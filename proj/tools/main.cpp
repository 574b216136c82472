#include <cstdio>
#include <fstream>
#include <sstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cppm/config.hpp"
#include "cppm/run.hpp"

namespace {

int execute(cppm::SimulationConfig cfg, const std::string& output, const std::string& format, int threads,
            bool quiet) {
  if (!output.empty()) cfg.output.directory = output;
  if (format == "csv") cfg.output.format = cppm::OutputFormat::csv;
  if (format == "vtk") cfg.output.format = cppm::OutputFormat::vtk;
  if (format == "both") cfg.output.format = cppm::OutputFormat::both;
  cppm::RunOptions opt;
  opt.threads = threads;
  opt.quiet = quiet;
  const auto res = cppm::run_simulation(cfg, opt);
  if (res.exit_code != cppm::kExitOk) {
    std::fprintf(stderr, "error: %s\n", res.error.c_str());
    return res.exit_code;
  }
  std::fprintf(stderr, "%s: %ld steps in %.1f s, %ld audit failures, output in %s\n", cfg.name.c_str(), res.steps,
               res.wall_seconds, res.audit_failures, cfg.output.directory.c_str());
  if (!quiet) {
    try {
      std::cout << cppm::compute_metrics(cfg.output.directory).to_json() << '\n';
    } catch (const std::exception& e) {
      std::fprintf(stderr, "metrics: %s\n", e.what());
    }
  }
  return cppm::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cosserat peridynamics engine for plane-strain localization and fracture"};
  app.require_subcommand(1);

  int threads = 1;
  std::string output;
  std::string format;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "Output directory (overrides output.directory)");
  app.add_option("--format", format, "Snapshot format")->check(CLI::IsMember({"csv", "vtk", "both"}));
  app.add_flag("--quiet", quiet, "Suppress progress and the metrics report");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario from a YAML config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--override", overrides, "key.path=value, repeatable");

  std::string preset_name;
  bool print = false;
  auto* pre = app.add_subcommand("preset", "Run a shipped example");
  pre->add_option("name", preset_name, "example1 | example2 | example3 | example4")->required();
  pre->add_option("--override", overrides, "key.path=value, repeatable");
  pre->add_flag("--print", print, "Print the preset YAML instead of running it");

  std::string metrics_dir;
  auto* met = app.add_subcommand("metrics", "Band angle and crack timing of a finished run");
  met->add_option("dir", metrics_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cppm::kExitConfig;
  }

  try {
    if (*run) return execute(cppm::load_config_text([&] {
                               std::ifstream in(config_path);
                               if (!in) throw cppm::ConfigError(config_path, "cannot open config file");
                               std::stringstream ss;
                               ss << in.rdbuf();
                               return ss.str();
                             }(), overrides),
                             output, format, threads, quiet);
    if (*pre) {
      if (print) {
        std::cout << cppm::preset_text(preset_name);
        return 0;
      }
      return execute(cppm::preset(preset_name, overrides), output, format, threads, quiet);
    }
    if (*met) {
      std::cout << cppm::compute_metrics(metrics_dir).to_json() << '\n';
      return 0;
    }
  } catch (const cppm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return cppm::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return cppm::kExitFailure;
  }
  return 0;
}
