#include "dmabeam/geometry.hpp"

#include <cmath>
#include <vector>

#include "dmabeam/errors.hpp"

namespace dmabeam {

double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_difference(double a, double b) { return std::remainder(a - b, kTwoPi); }

ArrayGeometry::ArrayGeometry(int element_count_, double radius_, double speed_of_sound_)
    : element_count(element_count_), radius(radius_), speed_of_sound(speed_of_sound_) {
  if (element_count < 1) throw SpecError("array needs at least one sensor");
  if (!(radius > 0.0)) throw SpecError("array radius must be positive");
  if (!(speed_of_sound > 0.0)) throw SpecError("speed of sound must be positive");
}

SteeringVector steering_vector(const ArrayGeometry& geom, double omega, double theta) {
  if (omega < 0.0) throw SpecError("angular frequency must be non-negative");
  const double varpi = geom.phase_scale(omega);
  Eigen::VectorXcd v(geom.element_count);
  for (int m = 0; m < geom.element_count; ++m) {
    v[m] = std::polar(1.0, varpi * std::cos(theta - geom.element_angle(m)));
  }
  return SteeringVector{std::move(v), omega, theta, 0};
}

SteeringVector steering_vector_derivative(const ArrayGeometry& geom, double omega,
                                          double theta, int order) {
  if (order < 1) throw SpecError("derivative order must be >= 1; use steering_vector for order 0");
  if (omega < 0.0) throw SpecError("angular frequency must be non-negative");
  const double varpi = geom.phase_scale(omega);
  Eigen::VectorXcd result(geom.element_count);
  std::vector<Complex> d(static_cast<size_t>(order) + 1);
  for (int m = 0; m < geom.element_count; ++m) {
    const double delta = theta - geom.element_angle(m);
    const double cd = std::cos(delta);
    const double sd = std::sin(delta);
    // g^{(p)} = j*varpi*cos(delta + p*pi/2); the cosine cycles through
    // {cd, -sd, -cd, sd} as p mod 4.
    const double cycle[4] = {cd, -sd, -cd, sd};
    auto g = [&](int p) { return Complex(0.0, varpi * cycle[p & 3]); };

    // Leibniz: D^{(p)} = sum_{k=0}^{p-1} C(p-1,k) g^{(p-k)} D^{(k)},
    // seeded by D^{(0)} = exp(g^{(0)}).
    d[0] = std::polar(1.0, varpi * cd);
    for (int p = 1; p <= order; ++p) {
      Complex acc(0.0, 0.0);
      double binom = 1.0;  // C(p-1, k), updated in place
      for (int k = 0; k < p; ++k) {
        acc += binom * g(p - k) * d[k];
        binom = binom * (p - 1 - k) / (k + 1);
      }
      d[p] = acc;
    }
    result[m] = d[order];
  }
  return SteeringVector{std::move(result), omega, theta, order};
}

namespace {

double unnormalized_sinc(double x) {
  // Series near zero keeps the removable singularity exact to machine eps.
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

Eigen::MatrixXd diffuse_coherence(const ArrayGeometry& geom, double omega) {
  if (omega < 0.0) throw SpecError("angular frequency must be non-negative");
  const int m = geom.element_count;
  Eigen::MatrixXd gamma(m, m);
  for (int i = 0; i < m; ++i) {
    gamma(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double delta = 2.0 * geom.radius * std::abs(std::sin((i - j) * kPi / m));
      const double value = unnormalized_sinc(omega * delta / geom.speed_of_sound);
      gamma(i, j) = value;
      gamma(j, i) = value;
    }
  }
  return gamma;
}

}  // namespace dmabeam
