#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmabeam/solver.hpp"

namespace dmabeam {

/// Complex beampattern samples on a uniform angle grid in [0, 2*pi).
struct BeampatternSamples {
  std::vector<double> angles;
  Eigen::VectorXcd values;
  double omega = 0.0;
  double steering = 0.0;
};

/// Frequency-independent target pattern sum_n a_n cos^n(theta - theta_s)
/// with sum_n a_n = 1.
struct IdealPattern {
  int order = 0;
  std::vector<double> coefficients;  // a_0..a_N
  double steering = 0.0;
};

/// Validates the coefficient sum before use.
IdealPattern make_ideal_pattern(std::vector<double> coefficients, double steering);

enum class MetricKind { WngDb, DfDb };

/// Per-frequency metric series, the carrier for sweep exports.
struct MetricCurve {
  std::vector<double> frequencies_hz;  // strictly increasing
  std::vector<double> values;          // dB
  MetricKind kind = MetricKind::WngDb;
  std::string spec_digest;
};

/// Uniform grid over [0, 2*pi) with the given step (radians).
std::vector<double> make_angle_grid(double step);

/// B[h, theta] = h^H d_theta(omega) over the grid.
BeampatternSamples beampattern(const Filter& filter, const ArrayGeometry& geom,
                               const std::vector<double>& grid);

struct Gain {
  double linear = 0.0;
  double db = 0.0;
};

/// White noise gain |h^H d_s|^2 / (h^H h).
Gain wng(const Filter& filter, const ArrayGeometry& geom);

/// Directivity factor |h^H d_s|^2 / (h^H Gamma_d h).
Gain df(const Filter& filter, const ArrayGeometry& geom);

double ideal_pattern_eval(const IdealPattern& pattern, double theta);

/// Angle of the grid point maximizing |B|; ties go to the smallest angle.
/// Requires grid resolution <= 1 degree.
double main_lobe_direction(const BeampatternSamples& samples);

/// q-th angular derivative of the beampattern at theta: h^H d_theta^{(q)}.
Complex pattern_derivative_at(const Filter& filter, const ArrayGeometry& geom, double theta,
                              int order);

/// Identifier of the snapshot noise generator, embedded in validation
/// artifacts so runs are reproducible.
inline constexpr const char* kNoiseAlgorithm = "mt19937_64-boxmuller-v1";

/// One observed snapshot y = d_{theta_s} * X + v with circularly symmetric
/// white noise of per-sensor variance noise_power. Deterministic per seed.
Eigen::VectorXcd simulate_snapshot(const ArrayGeometry& geom, double omega, double steering,
                                   Complex signal_amplitude, double noise_power,
                                   std::uint64_t seed);

/// Mean |h^H v|^2 over n noise-only snapshots; per-snapshot seeds are
/// derived from the master seed with a splitmix64 stream.
double monte_carlo_output_noise_power(const Filter& filter, const ArrayGeometry& geom,
                                      double noise_power, int snapshots, std::uint64_t seed);

}  // namespace dmabeam
