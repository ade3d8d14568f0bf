// Command-line front end: run experiment configs, expand presets, render
// quick-look SVG plots from the emitted CSVs.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nnvqe/error.hpp"
#include "nnvqe/experiment.hpp"
#include "nnvqe/io.hpp"
#include "nnvqe/parallel.hpp"

namespace {

struct CommonOpts {
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", o.seed, "Seed override (>= 0)");
  cmd->add_option("--threads", o.threads, "Worker thread cap (default 1)");
  cmd->add_flag("--quiet", o.quiet, "Suppress progress output");
}

int run_config(nnvqe::json cfg, const CommonOpts& o) {
  if (!o.out_dir.empty()) cfg["output_dir"] = o.out_dir;
  if (o.seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(o.seed);
  if (o.threads > 0) nnvqe::thread_cap() = o.threads;

  nnvqe::LogFn log;
  if (!o.quiet)
    log = [](const std::string& msg) { std::cerr << "[nnvqe] " << msg << "\n"; };

  const nnvqe::RunResult result = nnvqe::run_experiment(cfg, log);
  std::cout << result.output_dir << "\n";
  for (const std::string& name : result.artifacts)
    std::cout << "  " << name << "\n";
  return 0;
}

int plot_command(const std::string& csv_path, std::string out_path,
                 const std::vector<std::string>& columns) {
  const nnvqe::CsvTable table = nnvqe::read_csv(csv_path);
  if (out_path.empty()) {
    out_path = csv_path;
    const auto dot = out_path.find_last_of('.');
    if (dot != std::string::npos) out_path.resize(dot);
    out_path += ".svg";
  }

  std::vector<std::size_t> ys;
  if (columns.empty()) {
    for (std::size_t c = 1; c < table.columns.size(); ++c) ys.push_back(c);
  } else {
    for (const std::string& want : columns) {
      std::size_t found = table.columns.size();
      for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] == want) found = c;
      if (found == table.columns.size())
        throw nnvqe::usage_error("no such column: \"" + want + "\"");
      ys.push_back(found);
    }
  }

  nnvqe::plot_csv(table, out_path, ys);
  std::cout << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Differentiable statevector toolkit for neural-network-encoded VQE "
      "on XXZ spin chains"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config file");
  std::string config_path;
  run_cmd->add_option("config", config_path, "JSON config file")->required();
  CommonOpts run_opts;
  add_common(run_cmd, run_opts);

  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "Preset name (see `presets`)")
      ->required();
  CommonOpts preset_opts;
  add_common(preset_cmd, preset_opts);

  auto* presets_cmd = app.add_subcommand("presets", "List built-in presets");

  auto* plot_cmd = app.add_subcommand("plot", "Render a CSV as an SVG plot");
  std::string csv_path, plot_out;
  std::vector<std::string> plot_columns;
  plot_cmd->add_option("csv", csv_path, "CSV produced by run/preset")->required();
  plot_cmd->add_option("--out", plot_out, "Output SVG path (default: beside CSV)");
  plot_cmd->add_option("--columns", plot_columns,
                       "Column names to plot (default: all but the first)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_config(nnvqe::load_config_file(config_path), run_opts);
    if (*preset_cmd)
      return run_config(nnvqe::preset_config(preset_name), preset_opts);
    if (*presets_cmd) {
      for (const nnvqe::PresetInfo& p : nnvqe::presets())
        std::printf("%-10s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    if (*plot_cmd) return plot_command(csv_path, plot_out, plot_columns);
  } catch (const nnvqe::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const nnvqe::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nnvqe::usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
