#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "dmabeam/artifacts.hpp"
#include "dmabeam/commands.hpp"
#include "dmabeam/errors.hpp"
#include "dmabeam/version.hpp"

namespace {

int exit_code_for(const dmabeam::Error& e) {
  const std::string kind = e.kind();
  if (kind == "FeasibilityError") return 3;
  if (kind == "RankError" || kind == "ZeroFilterError" || kind == "NonPositiveDenominator") {
    return 4;
  }
  return 2;  // ConfigError, SpecError, usage
}

void print_error(const char* kind, const std::string& message) {
  std::cerr << "{\"error\":{\"class\":\"" << kind << "\",\"message\":\""
            << dmabeam::json_escape(message) << "\"}}\n";
}

}  // namespace

int main(int argc, char** argv) {
  using dmabeam::RunConfig;

  CLI::App app{"steerable differential beamformer design for uniform circular arrays"};
  app.set_version_flag("--version", dmabeam::kVersion);
  app.require_subcommand(1);

  std::string config_path, preset, out_dir, basename, method, freq_scale, filter_path;
  std::uint64_t seed = 0;
  int threads = 0, order = 0, freq_count = 0, mc_snapshots = 0;
  double freq_hz = 0, freq_start = 0, freq_stop = 0, step_deg = 0, diag_load = 0;
  double mc_noise_power = 0;
  std::vector<double> steering_deg, null_offsets_deg, nulls_absolute_deg, i_beta;
  std::vector<int> null_mults;

  auto* config_opt = app.add_option("--config", config_path, "JSON config file");
  auto* preset_opt =
      app.add_option("--preset", preset, "named experiment config (fig1, fig2, fig3, fig4, fig5)");
  config_opt->excludes(preset_opt);
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed for validation snapshots");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads for sweeps");

  auto* method_opt = app.add_option("--method", method, "DerivCon | Null | SymNull");
  auto* order_opt = app.add_option("--order", order, "differential order N");
  auto* steer_opt = app.add_option("--steering-deg", steering_deg, "steering direction(s), degrees");
  auto* offsets_opt =
      app.add_option("--null-offset-deg", null_offsets_deg, "null offsets from steering, degrees");
  auto* absolute_opt =
      app.add_option("--null-deg", nulls_absolute_deg, "absolute null directions, degrees");
  auto* mult_opt = app.add_option("--null-mult", null_mults, "null multiplicities");
  auto* ibeta_opt = app.add_option("--i-beta", i_beta, "derivative target vector (DerivCon)");
  auto* freq_opt = app.add_option("--freq-hz", freq_hz, "single design frequency, Hz");
  auto* fstart_opt = app.add_option("--freq-start", freq_start, "grid start, Hz");
  auto* fstop_opt = app.add_option("--freq-stop", freq_stop, "grid stop, Hz");
  auto* fcount_opt = app.add_option("--freq-count", freq_count, "grid point count");
  auto* fscale_opt = app.add_option("--freq-scale", freq_scale, "linear | log");
  auto* step_opt = app.add_option("--step-deg", step_deg, "beampattern grid step, degrees");
  auto* base_opt = app.add_option("--basename", basename, "output file basename");
  auto* load_opt = app.add_option("--diag-load", diag_load, "Tikhonov load on the Gram matrix");
  auto* mcs_opt = app.add_option("--mc-snapshots", mc_snapshots, "Monte-Carlo snapshot count");
  auto* mcp_opt = app.add_option("--mc-noise-power", mc_noise_power, "Monte-Carlo noise power");
  int elements = 0;
  double radius_m = 0, speed_of_sound = 0;
  auto* elements_opt = app.add_option("--elements", elements, "sensor count M");
  auto* radius_opt = app.add_option("--radius-m", radius_m, "array radius, meters");
  auto* speed_opt = app.add_option("--speed-of-sound", speed_of_sound, "meters/second");

  auto* design_cmd = app.add_subcommand("design", "solve filters and write a JSON artifact");
  auto* pattern_cmd = app.add_subcommand("pattern", "export beampattern CSVs");
  auto* sweep_cmd = app.add_subcommand("sweep", "export WNG/DF metrics over a frequency grid");
  auto* validate_cmd = app.add_subcommand("validate", "measure design invariants");
  validate_cmd->add_option("--filter", filter_path, "re-check a design artifact JSON");
  for (auto* cmd : {design_cmd, pattern_cmd, sweep_cmd, validate_cmd}) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    print_error("ConfigError", e.what());
    return 2;
  }

  try {
    RunConfig config;
    if (!preset.empty()) {
      config = dmabeam::preset_config(preset);
    } else if (!config_path.empty()) {
      config = dmabeam::parse_config_json(dmabeam::read_text_file(config_path));
    }

    if (out_opt->count()) config.out_dir = out_dir;
    if (seed_opt->count()) config.seed = seed;
    if (threads_opt->count()) config.threads = threads;
    if (method_opt->count()) config.method = method;
    if (order_opt->count()) config.order = order;
    if (steer_opt->count()) config.steering_deg = steering_deg;
    if (offsets_opt->count()) config.null_offsets_deg = null_offsets_deg;
    if (absolute_opt->count()) config.nulls_absolute_deg = nulls_absolute_deg;
    if (mult_opt->count()) config.null_multiplicities = null_mults;
    if (ibeta_opt->count()) config.i_beta = i_beta;
    if (freq_opt->count()) config.frequency = {freq_hz, freq_hz, 1, dmabeam::FrequencyGrid::Scale::Linear};
    if (fstart_opt->count()) config.frequency.start_hz = freq_start;
    if (fstop_opt->count()) config.frequency.stop_hz = freq_stop;
    if (fcount_opt->count()) config.frequency.count = freq_count;
    if (fscale_opt->count()) {
      if (freq_scale == "linear") {
        config.frequency.scale = dmabeam::FrequencyGrid::Scale::Linear;
      } else if (freq_scale == "log") {
        config.frequency.scale = dmabeam::FrequencyGrid::Scale::Log;
      } else {
        throw dmabeam::ConfigError("--freq-scale must be 'linear' or 'log'");
      }
    }
    if (step_opt->count()) config.pattern_step_deg = step_deg;
    if (base_opt->count()) config.basename = basename;
    if (load_opt->count()) config.diagonal_load = diag_load;
    if (mcs_opt->count()) config.mc_snapshots = mc_snapshots;
    if (mcp_opt->count()) config.mc_noise_power = mc_noise_power;
    if (elements_opt->count()) config.elements = elements;
    if (radius_opt->count()) config.radius_m = radius_m;
    if (speed_opt->count()) config.speed_of_sound = speed_of_sound;

    std::vector<std::string> paths;
    if (design_cmd->parsed()) {
      paths = dmabeam::run_design(config);
    } else if (pattern_cmd->parsed()) {
      paths = dmabeam::run_pattern(config);
    } else if (sweep_cmd->parsed()) {
      paths = dmabeam::run_sweep(config);
    } else if (validate_cmd->parsed()) {
      const dmabeam::ValidationReport report = dmabeam::run_validate(config, filter_path);
      std::cout << dmabeam::human_summary(report);
      std::cout << "wrote " << report.artifact_path << "\n";
      if (!report.all_passed) {
        print_error("ValidationFailure", "one or more invariant checks failed");
        return 5;
      }
      return 0;
    }
    for (const auto& path : paths) std::cout << "wrote " << path << "\n";
    return 0;
  } catch (const dmabeam::Error& e) {
    print_error(e.kind(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_error("Error", e.what());
    return 1;
  }
}
