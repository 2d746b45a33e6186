#pragma once

#include <string>
#include <vector>

#include "dmabeam/config.hpp"
#include "dmabeam/metrics.hpp"

namespace dmabeam {

/// Design one filter per grid frequency; write the JSON artifact.
/// Returns the written paths.
std::vector<std::string> run_design(const RunConfig& config);

/// One beampattern CSV per (method, frequency, steering).
std::vector<std::string> run_pattern(const RunConfig& config);

/// WNG/DF/residual/condition CSV over the frequency grid, methods stacked.
std::vector<std::string> run_sweep(const RunConfig& config);

struct ValidationCheck {
  std::string name;
  std::string method;
  double steering_deg = 0.0;
  double frequency_hz = 0.0;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed = true;
  std::string artifact_path;
};

/// Re-derive the design from the config (or load a design artifact when
/// filter_path is given) and measure the invariant suite: distortionless
/// response, null depths, steering-direction stationarity, constraint
/// residual, and Monte-Carlo white-noise gain.
ValidationReport run_validate(const RunConfig& config, const std::string& filter_path = {});

std::string human_summary(const ValidationReport& report);

}  // namespace dmabeam
