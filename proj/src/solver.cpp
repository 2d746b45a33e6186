#include "dmabeam/solver.hpp"

#include <cmath>
#include <limits>

#include "dmabeam/errors.hpp"

namespace dmabeam {

namespace {

Eigen::MatrixXcd gram_matrix(const ConstraintSystem& sys, double load) {
  Eigen::MatrixXcd gram = sys.matrix * sys.matrix.adjoint();
  if (load != 0.0) gram.diagonal().array() += load;
  return gram;
}

double condition_of(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eigs(gram, Eigen::EigenvaluesOnly);
  const auto& values = eigs.eigenvalues();  // ascending, real
  const double largest = values(values.size() - 1);
  const double smallest = std::abs(values(0));
  if (!(largest > 0.0)) return std::numeric_limits<double>::infinity();
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return largest / smallest;
}

}  // namespace

double gram_condition(const ConstraintSystem& sys) {
  return condition_of(gram_matrix(sys, 0.0));
}

Filter solve_max_wng(const ConstraintSystem& sys, const SolverOptions& opts) {
  const int k = sys.rows();
  const int m = sys.sensors();
  if (k == 0) throw SpecError("constraint system has no rows");
  if (k > m) {
    throw FeasibilityError("constraint count " + std::to_string(k) + " exceeds sensor count " +
                           std::to_string(m));
  }

  const Eigen::MatrixXcd gram = gram_matrix(sys, opts.diagonal_load);
  const double condition = condition_of(gram);
  if (!(condition <= opts.condition_limit)) {
    throw RankError("constraint Gram matrix is numerically singular (condition estimate " +
                    std::to_string(condition) + "); check for conflicting or duplicate constraints");
  }

  const Eigen::VectorXcd rhs = sys.rhs.cast<Complex>();
  Eigen::VectorXcd multipliers;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() == Eigen::Success) {
    multipliers = llt.solve(rhs);
  } else {
    multipliers = gram.fullPivLu().solve(rhs);
  }
  Eigen::VectorXcd coefficients = sys.matrix.adjoint() * multipliers;

  const double residual = (sys.matrix * coefficients - rhs).cwiseAbs().maxCoeff();
  if (opts.diagonal_load == 0.0 && !(residual < opts.residual_limit)) {
    throw RankError("solve left constraint residual " + std::to_string(residual) +
                    ", above the " + std::to_string(opts.residual_limit) + " limit");
  }

  Filter filter;
  filter.coefficients = std::move(coefficients);
  filter.omega = sys.omega;
  filter.steering = sys.steering;
  filter.spec_digest = sys.spec_digest;
  filter.residual = residual;
  return filter;
}

}  // namespace dmabeam
