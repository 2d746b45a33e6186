#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmabeam/geometry.hpp"

namespace dmabeam {

enum class DesignMethod { DerivCon, Null, SymNull };

std::string to_string(DesignMethod method);
std::optional<DesignMethod> method_from_string(std::string_view name);

/// One beampattern null. Multiplicity Q > 1 additionally zeroes the first
/// Q-1 angular derivatives at the null direction.
struct NullSpec {
  double angle = 0.0;   // absolute radians (already offset by the steering direction)
  int multiplicity = 1;
};

struct DesignSpec {
  DesignMethod method = DesignMethod::DerivCon;
  int order = 1;                // N
  double steering = 0.0;        // theta_s, radians
  std::vector<NullSpec> nulls;  // absolute angles
  std::vector<double> i_beta;   // DerivCon only; empty selects the default pattern
};

/// Absolute null angles theta_s + offset, each wrapped to [0, 2*pi).
std::vector<double> derived_null_angles(double steering, const std::vector<double>& offsets);

/// Default derivative-target vector: [1, 0, -2, 0, -2, ...] — unit
/// distortionless entry, zero odd-order derivatives, -2 at even orders,
/// zeros for the null rows.
std::vector<double> default_i_beta(int order, int null_rows);

/// Provenance of one constraint row; replaying it through the geometry
/// operations reproduces the row exactly.
struct RowLabel {
  enum class Kind { Distortionless, Derivative, Null };
  Kind kind = Kind::Distortionless;
  double angle = 0.0;  // radians
  int order = 0;       // derivative order q (0 for plain rows)
};

/// D_C h = i_beta for one frequency. Row 0 is always d_{theta_s}^H.
struct ConstraintSystem {
  Eigen::MatrixXcd matrix;  // K x M
  Eigen::VectorXd rhs;      // length K, real by construction
  std::vector<RowLabel> row_labels;
  double omega = 0.0;
  double steering = 0.0;
  std::string spec_digest;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int sensors() const { return static_cast<int>(matrix.cols()); }
};

/// Count-level checks only (no row assembly): sensor budget, null validity,
/// i_beta shape. Throws FeasibilityError / SpecError.
void check_feasibility(const ArrayGeometry& geom, const DesignSpec& spec);

/// Distortionless row, derivative rows q=1..N at theta_s, then null rows
/// q=0..Q-1 per null. rhs = i_beta. Needs M >= 2N+1 and M >= K.
ConstraintSystem build_derivcon(const ArrayGeometry& geom, double omega, const DesignSpec& spec);

/// Distortionless row plus plain null rows (with multiplicity derivatives).
/// rhs = e_1.
ConstraintSystem build_null(const ArrayGeometry& geom, double omega, const DesignSpec& spec);

/// Like build_null but the null set must be symmetric about the steering
/// axis: pairs (theta+, theta-) with midpoint theta_s modulo pi.
ConstraintSystem build_symnull(const ArrayGeometry& geom, double omega, const DesignSpec& spec);

/// Dispatch on spec.method.
ConstraintSystem build_constraints(const ArrayGeometry& geom, double omega, const DesignSpec& spec);

/// Stable identifier of (geometry, design spec); embedded in every artifact.
std::string spec_digest(const ArrayGeometry& geom, const DesignSpec& spec);

}  // namespace dmabeam
