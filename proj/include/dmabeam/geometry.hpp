#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace dmabeam {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wrap an angle to [0, 2*pi).
double wrap_angle(double theta);

/// Signed angular distance a-b wrapped to (-pi, pi].
double angle_difference(double a, double b);

/// Uniform circular array of omnidirectional sensors in the horizontal
/// plane. Sensor m (1-based in docs, 0-based here) sits at azimuth
/// psi_m = 2*pi*m/M on a circle of the given radius.
struct ArrayGeometry {
  int element_count;      // M
  double radius;          // meters
  double speed_of_sound;  // meters/second

  ArrayGeometry(int element_count, double radius, double speed_of_sound = 340.0);

  double element_angle(int index) const { return kTwoPi * index / element_count; }

  /// varpi = omega * r / c, the phase scale of the array at omega.
  double phase_scale(double omega) const { return omega * radius / speed_of_sound; }
};

/// Plane-wave array response d_theta(omega), or one of its angular
/// derivatives (derivative_order >= 1).
struct SteeringVector {
  Eigen::VectorXcd values;
  double omega = 0.0;
  double angle = 0.0;
  int derivative_order = 0;
};

/// Element m: exp(j * varpi * cos(theta - psi_m)).
SteeringVector steering_vector(const ArrayGeometry& geom, double omega, double theta);

/// Analytic order-th angular derivative of the steering vector, evaluated
/// by the Leibniz recurrence on D' = g' * D with g = j*varpi*cos(theta - psi_m).
/// Exact at every order; rejects order == 0.
SteeringVector steering_vector_derivative(const ArrayGeometry& geom, double omega,
                                          double theta, int order);

/// Spherically isotropic noise coherence: entry (i,j) = sinc(omega*delta_ij/c)
/// with delta_ij = 2r|sin((i-j)*pi/M)| and unnormalized sinc(x) = sin(x)/x.
Eigen::MatrixXd diffuse_coherence(const ArrayGeometry& geom, double omega);

}  // namespace dmabeam
