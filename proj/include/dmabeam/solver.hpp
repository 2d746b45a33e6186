#pragma once

#include <string>

#include "dmabeam/constraints.hpp"

namespace dmabeam {

/// Beamforming filter h(omega) for one frequency, with the provenance of
/// the design that produced it and the achieved constraint residual.
struct Filter {
  Eigen::VectorXcd coefficients;
  double omega = 0.0;
  double steering = 0.0;    // theta_s of the producing design
  std::string spec_digest;
  double residual = 0.0;    // max_k |(D_C h)_k - i_beta_k|
};

struct SolverOptions {
  /// Optional Tikhonov load added to the Gram diagonal. 0 keeps the exact
  /// interpolating solution; nonzero trades constraint accuracy for
  /// conditioning, and the residual gate is skipped.
  double diagonal_load = 0.0;
  double condition_limit = 1e12;
  double residual_limit = 1e-8;
};

/// Minimum-norm (max-WNG) solution h = D_C^H (D_C D_C^H)^{-1} i_beta.
/// Hermitian Cholesky on the K x K Gram matrix, pivoted-LU fallback.
/// Throws RankError when the Gram condition estimate exceeds the limit.
Filter solve_max_wng(const ConstraintSystem& sys, const SolverOptions& opts = {});

/// Exact 2-norm condition number of D_C D_C^H via its eigenvalue ratio.
double gram_condition(const ConstraintSystem& sys);

}  // namespace dmabeam
