#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmabeam/constraints.hpp"

namespace dmabeam {

struct FrequencyGrid {
  double start_hz = 1000.0;
  double stop_hz = 1000.0;
  int count = 1;
  enum class Scale { Linear, Log };
  Scale scale = Scale::Linear;

  std::vector<double> frequencies() const;
  bool operator==(const FrequencyGrid&) const = default;
};

/// Everything one run needs; angles in degrees at this boundary, converted
/// to radians when the design spec is materialized.
struct RunConfig {
  // geometry
  int elements = 8;
  double radius_m = 0.02;
  double speed_of_sound = 340.0;

  // design
  std::string method = "DerivCon";
  int order = 1;
  std::vector<double> steering_deg = {0.0};
  std::vector<double> null_offsets_deg;     // relative to steering (default path)
  std::vector<double> nulls_absolute_deg;   // alternative to offsets
  std::vector<int> null_multiplicities;     // parallel to the null list; empty = all 1
  std::vector<double> i_beta;               // DerivCon only; empty = default
  std::vector<std::string> sweep_methods;   // stacked methods for sweep/pattern

  FrequencyGrid frequency;

  std::string out_dir = "out";
  std::string basename = "run";
  double pattern_step_deg = 0.5;
  std::uint64_t seed = 1;
  int threads = 1;
  double diagonal_load = 0.0;
  int mc_snapshots = 100000;
  double mc_noise_power = 1.0;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on malformed or unknown keys.
RunConfig parse_config_json(const std::string& text);

/// Canonical emission: fixed key order, 17 significant digits.
/// parse_config_json(emit_config_json(c)) == c for every valid config.
std::string emit_config_json(const RunConfig& config);

/// Named experiment configurations: fig1..fig5.
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

ArrayGeometry make_geometry(const RunConfig& config);

/// Materialize the design for one (method, steering) pair. SymNull offsets
/// expand to mirrored pairs about the steering axis, deduplicated.
DesignSpec make_design_spec(const RunConfig& config, const std::string& method,
                            double steering_deg);

/// Methods a multi-method command iterates: sweep_methods if set, else the
/// single configured method.
std::vector<std::string> active_methods(const RunConfig& config);

/// Structural checks plus constraints-module feasibility for every
/// (method, steering) pair; runs before any computation.
void validate_config(const RunConfig& config);

}  // namespace dmabeam
