#include "dmabeam/metrics.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "dmabeam/errors.hpp"

namespace dmabeam {

namespace {

constexpr double kGridTol = 1e-12;

void require_uniform_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw SpecError("angle grid must be non-empty");
  if (grid.size() < 2) return;
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) throw SpecError("angle grid must be strictly increasing");
  for (size_t i = 1; i < grid.size(); ++i) {
    const double gap = grid[i] - grid[i - 1];
    if (!(gap > 0.0)) throw SpecError("angle grid must be strictly increasing");
    if (std::abs(gap - step) > kGridTol) throw SpecError("angle grid spacing must be uniform");
  }
}

double to_db_power(double linear) { return 10.0 * std::log10(linear); }

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

IdealPattern make_ideal_pattern(std::vector<double> coefficients, double steering) {
  if (coefficients.empty()) throw SpecError("ideal pattern needs at least one coefficient");
  const double sum = std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw SpecError("ideal pattern coefficients must sum to 1");
  }
  IdealPattern pattern;
  pattern.order = static_cast<int>(coefficients.size()) - 1;
  pattern.coefficients = std::move(coefficients);
  pattern.steering = steering;
  return pattern;
}

std::vector<double> make_angle_grid(double step) {
  if (!(step > 0.0)) throw SpecError("grid step must be positive");
  const int count = static_cast<int>(std::llround(kTwoPi / step));
  if (count < 1) throw SpecError("grid step too large");
  std::vector<double> grid(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) grid[static_cast<size_t>(i)] = i * step;
  return grid;
}

BeampatternSamples beampattern(const Filter& filter, const ArrayGeometry& geom,
                               const std::vector<double>& grid) {
  require_uniform_grid(grid);
  BeampatternSamples samples;
  samples.angles = grid;
  samples.values.resize(static_cast<Eigen::Index>(grid.size()));
  for (size_t i = 0; i < grid.size(); ++i) {
    const SteeringVector d = steering_vector(geom, filter.omega, grid[i]);
    samples.values[static_cast<Eigen::Index>(i)] = filter.coefficients.dot(d.values);
  }
  samples.omega = filter.omega;
  samples.steering = filter.steering;
  return samples;
}

Gain wng(const Filter& filter, const ArrayGeometry& geom) {
  const double power = filter.coefficients.squaredNorm();
  if (power == 0.0) throw ZeroFilterError("filter coefficients are all zero");
  const SteeringVector d = steering_vector(geom, filter.omega, filter.steering);
  const double numerator = std::norm(filter.coefficients.dot(d.values));
  const double linear = numerator / power;
  return Gain{linear, to_db_power(linear)};
}

Gain df(const Filter& filter, const ArrayGeometry& geom) {
  const double power = filter.coefficients.squaredNorm();
  if (power == 0.0) throw ZeroFilterError("filter coefficients are all zero");
  const Eigen::MatrixXd gamma = diffuse_coherence(geom, filter.omega);
  const Complex quad =
      filter.coefficients.dot(gamma.cast<Complex>() * filter.coefficients);
  const double denominator = quad.real();
  if (denominator <= 1e-13 * power) {
    throw NonPositiveDenominator("h^H Gamma_d h is not positive; numerical breakdown");
  }
  const SteeringVector d = steering_vector(geom, filter.omega, filter.steering);
  const double numerator = std::norm(filter.coefficients.dot(d.values));
  const double linear = numerator / denominator;
  return Gain{linear, to_db_power(linear)};
}

double ideal_pattern_eval(const IdealPattern& pattern, double theta) {
  const double x = std::cos(theta - pattern.steering);
  double value = 0.0;
  for (size_t n = pattern.coefficients.size(); n-- > 0;) {
    value = value * x + pattern.coefficients[n];
  }
  return value;
}

double main_lobe_direction(const BeampatternSamples& samples) {
  if (samples.angles.size() < 2) throw SpecError("main-lobe search needs at least two samples");
  const double step = samples.angles[1] - samples.angles[0];
  if (step > deg2rad(1.0) + kGridTol) {
    throw SpecError("main-lobe search needs grid resolution <= 1 degree");
  }
  size_t best = 0;
  double best_mag = std::abs(samples.values[0]);
  for (size_t i = 1; i < samples.angles.size(); ++i) {
    const double mag = std::abs(samples.values[static_cast<Eigen::Index>(i)]);
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  return samples.angles[best];
}

Complex pattern_derivative_at(const Filter& filter, const ArrayGeometry& geom, double theta,
                              int order) {
  if (order < 1) throw SpecError("pattern derivative order must be >= 1");
  const SteeringVector d = steering_vector_derivative(geom, filter.omega, theta, order);
  return filter.coefficients.dot(d.values);
}

Eigen::VectorXcd simulate_snapshot(const ArrayGeometry& geom, double omega, double steering,
                                   Complex signal_amplitude, double noise_power,
                                   std::uint64_t seed) {
  if (noise_power < 0.0) throw SpecError("noise power must be non-negative");
  const SteeringVector d = steering_vector(geom, omega, steering);
  Eigen::VectorXcd observation = d.values * signal_amplitude;
  if (noise_power > 0.0) {
    std::mt19937_64 rng(seed);
    const double scale = std::sqrt(noise_power / 2.0);
    auto uniform_open = [&rng]() {
      // (0, 1]; the +1 keeps log() away from zero
      return ((rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    for (int m = 0; m < geom.element_count; ++m) {
      const double u1 = uniform_open();
      const double u2 = uniform_open();
      const double radius = scale * std::sqrt(-2.0 * std::log(u1));
      observation[m] += Complex(radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2));
    }
  }
  return observation;
}

double monte_carlo_output_noise_power(const Filter& filter, const ArrayGeometry& geom,
                                      double noise_power, int snapshots, std::uint64_t seed) {
  if (snapshots < 1) throw SpecError("snapshot count must be >= 1");
  std::uint64_t stream = seed;
  double total = 0.0;
  for (int i = 0; i < snapshots; ++i) {
    const Eigen::VectorXcd y = simulate_snapshot(geom, filter.omega, filter.steering,
                                                 Complex(0.0, 0.0), noise_power,
                                                 splitmix64(stream));
    total += std::norm(filter.coefficients.dot(y));
  }
  return total / snapshots;
}

}  // namespace dmabeam
