// Batch entry point: generate, simulate, report, export-model.
#include <CLI11.hpp>
#include <iostream>

#include "quartersim/engine.hpp"
#include "quartersim/error.hpp"
#include "quartersim/quarterdb.hpp"
#include "quartersim/realize.hpp"
#include "quartersim/report.hpp"
#include "quartersim/simgen.hpp"
#include "quartersim/version.hpp"

namespace qs = quartersim;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

void log_run(const char* command, std::uint64_t seed) {
  std::cout << "quartersim " << qs::kVersion << " " << command << " seed=" << seed << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Living-quarter scenario generator and quasi-stationary simulator", "quartersim"};
  app.require_subcommand(1);

  std::string config, grid_dir, out_dir, quarter_dir, weather_file, start_text = "2020-04-20T00:00:00", results_dir,
                                                                    formats_text = "csv,svg", setpoint_file;
  double hours = 48.0;
  double step_s = 900.0;
  std::optional<std::uint64_t> seed;

  auto* generate = app.add_subcommand("generate", "Realize a quarter bundle from a scenario and a SimBench grid");
  generate->add_option("--config", config, "Scenario file (JSON)")->required();
  generate->add_option("--grid", grid_dir, "SimBench grid directory")->required();
  generate->add_option("--out", out_dir, "Bundle directory")->required();
  generate->add_option("--seed", seed, "Overrides the scenario seed");

  auto* simulate = app.add_subcommand("simulate", "Run the time-series simulation of a quarter bundle");
  simulate->add_option("--quarter", quarter_dir, "Bundle directory")->required();
  simulate->add_option("--weather", weather_file, "Weather CSV (default: synthetic April series)");
  simulate->add_option("--start", start_text, "Start timestamp (ISO-8601)");
  simulate->add_option("--hours", hours, "Duration in hours")->check(CLI::PositiveNumber);
  simulate->add_option("--step-s", step_s, "Time step in seconds")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_dir, "Result directory")->required();
  simulate->add_option("--setpoints", setpoint_file, "Setpoint replay CSV (timestamp;device_id;target_kw)");
  simulate->add_option("--seed", seed, "Overrides the measurement-noise seed");

  auto* report = app.add_subcommand("report", "Derive loadings and congestion events and render CSV/SVG");
  report->add_option("--quarter", quarter_dir, "Bundle directory")->required();
  report->add_option("--results", results_dir, "Result directory")->required();
  report->add_option("--out", out_dir, "Report directory")->required();
  report->add_option("--formats", formats_text, "Comma-separated subset of csv,svg");

  auto* export_model = app.add_subcommand("export-model", "Emit the textual dynamic model of a quarter");
  export_model->add_option("--quarter", quarter_dir, "Bundle directory")->required();
  export_model->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*generate) {
      auto sd = qs::load_scenario_file(config);
      if (seed) sd.seed = *seed;
      const auto grid = qs::import_simbench(grid_dir);
      const auto q = qs::realize_quarter(sd, grid);
      const auto manifest = qs::save(q, out_dir);
      log_run("generate", sd.seed);
      std::cout << "households=" << q.households.size() << " pipes=" << q.pipes.size() << " files=" << manifest.digests.size()
                << " bundle=" << out_dir << "\n";
    } else if (*simulate) {
      const auto q = qs::load(quarter_dir);
      const auto start = qs::parse_timestamp(start_text);
      const auto weather = weather_file.empty()
                               ? qs::synthetic_april_weather(start, static_cast<int>(std::ceil(hours)) + 1, q.scenario.seed)
                               : qs::read_weather_csv(weather_file);
      auto model = qs::assemble_simulation(q, weather);
      if (seed) model.seed = *seed;
      std::optional<qs::ReplaySetpoints> replay;
      if (!setpoint_file.empty()) replay = qs::ReplaySetpoints::load(setpoint_file);
      const auto results = qs::run_simulation(model, start, hours, step_s, replay ? &*replay : nullptr);
      qs::save_results(results, out_dir);
      log_run("simulate", model.seed);
      std::cout << "steps=" << results.time.size() << " warnings=" << results.warnings.size() << " results=" << out_dir << "\n";
    } else if (*report) {
      const auto formats = qs::parse_formats(formats_text);
      const auto q = qs::load(quarter_dir);
      const auto results = qs::load_results(results_dir);
      const auto loadings = qs::compute_loadings(results, qs::simulation_grid(q));
      const auto events = qs::detect_congestion(loadings, results.at(qs::family::kBusVm), results.time, results.dt_s);
      const auto files = qs::render_outputs(results, loadings, events, formats, out_dir);
      log_run("report", results.seed);
      std::cout << "events=" << events.size() << " files=" << files.size() << "\n";
    } else if (*export_model) {
      const auto q = qs::load(quarter_dir);
      const auto files = qs::emit_dynamic_model_text(q, out_dir);
      log_run("export-model", q.scenario.seed);
      for (const auto& f : files) std::cout << f.string() << "\n";
    }
  } catch (const qs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& f : e.failures()) std::cerr << "  - " << f << "\n";
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kOk;
}
