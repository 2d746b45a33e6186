#include <doctest.h>

#include <cmath>
#include <random>

#include "dmabeam/errors.hpp"
#include "dmabeam/solver.hpp"
#include "oracles.hpp"

using namespace dmabeam;

namespace {

const ArrayGeometry kPaperArray(8, 0.02, 340.0);
const double kOmega1k = kTwoPi * 1000.0;

DesignSpec paper_second_order() {
  DesignSpec spec;
  spec.method = DesignMethod::DerivCon;
  spec.order = 2;
  spec.steering = deg2rad(50.0);
  spec.nulls = {NullSpec{deg2rad(170.0), 1}, NullSpec{deg2rad(290.0), 1}};
  spec.i_beta = {1.0, 0.0, -2.0, 0.0, 0.0};
  return spec;
}

ConstraintSystem distortionless_only(const ArrayGeometry& geom, double omega, double steering) {
  DesignSpec spec;
  spec.method = DesignMethod::Null;
  spec.steering = steering;
  return build_null(geom, omega, spec);
}

}  // namespace

TEST_CASE("distortionless-only system gives h = d / M") {
  const double steering = deg2rad(30.0);
  const ConstraintSystem sys = distortionless_only(kPaperArray, kOmega1k, steering);
  const Filter filter = solve_max_wng(sys);

  const SteeringVector d = steering_vector(kPaperArray, kOmega1k, steering);
  CHECK((filter.coefficients - d.values / 8.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(filter.coefficients.squaredNorm() == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
  CHECK(filter.residual < 1e-10);
}

TEST_CASE("solver satisfies the paper's second-order constraints") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  const Filter filter = solve_max_wng(sys);

  auto response = [&](double theta_deg) {
    const SteeringVector d = steering_vector(kPaperArray, kOmega1k, deg2rad(theta_deg));
    return filter.coefficients.dot(d.values);
  };
  CHECK(std::abs(response(50.0) - 1.0) < 1e-10);
  CHECK(std::abs(response(170.0)) < 1e-8);
  CHECK(std::abs(response(290.0)) < 1e-8);
  CHECK(filter.residual < 1e-10);
  CHECK(filter.spec_digest == sys.spec_digest);
  CHECK(filter.omega == kOmega1k);
}

TEST_CASE("solution matches the independent KKT least-norm route") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  const Filter filter = solve_max_wng(sys);
  const Eigen::VectorXcd reference = oracles::least_norm_kkt(sys.matrix, sys.rhs.cast<Complex>());
  const double rel =
      (filter.coefficients - reference).norm() / reference.norm();
  CHECK(rel < 1e-12);
}

TEST_CASE("solution lies in the row space: null-space projection is tiny") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  const Filter filter = solve_max_wng(sys);
  // row-space projection via the oracle route
  const Eigen::VectorXcd projected =
      oracles::least_norm_kkt(sys.matrix, sys.matrix * filter.coefficients);
  const double leak = (filter.coefficients - projected).norm();
  CHECK(leak < 1e-10 * filter.coefficients.norm());
}

TEST_CASE("first-order optimality of the minimum-norm solution") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  const Filter filter = solve_max_wng(sys);
  std::mt19937 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd w(8);
    for (int m = 0; m < 8; ++m) w[m] = Complex(normal(rng), normal(rng));
    const Eigen::VectorXcd z = w - oracles::least_norm_kkt(sys.matrix, sys.matrix * w);
    if (z.norm() < 1e-12) continue;
    for (double eps : {1e-3, -1e-3}) {
      CHECK((filter.coefficients + eps * z).norm() >= filter.coefficients.norm());
    }
  }
}

TEST_CASE("gram condition of a single unit-modulus row is 1") {
  const ConstraintSystem sys = distortionless_only(kPaperArray, kOmega1k, 0.4);
  CHECK(gram_condition(sys) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("duplicated row drives the condition past 1e15 and solve throws") {
  ConstraintSystem sys = distortionless_only(kPaperArray, kOmega1k, 0.4);
  ConstraintSystem degenerate;
  degenerate.matrix.resize(2, 8);
  degenerate.matrix.row(0) = sys.matrix.row(0);
  degenerate.matrix.row(1) = sys.matrix.row(0);
  degenerate.rhs = Eigen::VectorXd::Zero(2);
  degenerate.rhs[0] = 1.0;
  degenerate.rhs[1] = 1.0;
  degenerate.omega = sys.omega;
  degenerate.steering = sys.steering;
  CHECK(gram_condition(degenerate) > 1e15);
  CHECK_THROWS_AS(solve_max_wng(degenerate), RankError);
}

TEST_CASE("gram condition regression baseline for the paper system") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  const double condition = gram_condition(sys);
  CHECK(std::isfinite(condition));
  // frozen from the first verified run
  CHECK(condition == doctest::Approx(916.98492369193559).epsilon(1e-6));
}

TEST_CASE("diagonal load relaxes the constraints but still solves") {
  const ConstraintSystem sys = build_derivcon(kPaperArray, kOmega1k, paper_second_order());
  SolverOptions opts;
  opts.diagonal_load = 1e-4;
  const Filter loaded = solve_max_wng(sys, opts);
  const Filter exact = solve_max_wng(sys);
  CHECK(loaded.residual > exact.residual);
  CHECK((loaded.coefficients - exact.coefficients).norm() > 0.0);
  // load shrinks the norm
  CHECK(loaded.coefficients.norm() <= exact.coefficients.norm());
}

TEST_CASE("oversized constraint sets are rejected") {
  ConstraintSystem sys;
  sys.matrix = Eigen::MatrixXcd::Random(4, 3);
  sys.rhs = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(solve_max_wng(sys), FeasibilityError);

  ConstraintSystem empty;
  empty.matrix.resize(0, 8);
  empty.rhs.resize(0);
  CHECK_THROWS_AS(solve_max_wng(empty), SpecError);
}

TEST_CASE("random feasible systems match the brute-force oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> sensors(3, 12);

  int produced = 0;
  while (produced < 30) {
    const int m = sensors(rng);
    const ArrayGeometry geom(m, 0.01 + 0.04 * uniform(rng));
    const double omega = kTwoPi * (500.0 + 3500.0 * uniform(rng));

    DesignSpec spec;
    const int which = static_cast<int>(uniform(rng) * 3.0);
    spec.method = which == 0   ? DesignMethod::DerivCon
                  : which == 1 ? DesignMethod::Null
                               : DesignMethod::SymNull;
    spec.steering = kTwoPi * uniform(rng);
    spec.order = 1 + static_cast<int>(uniform(rng) * 2.0);

    if (spec.method == DesignMethod::DerivCon && m < 2 * spec.order + 1) continue;

    // keep nulls at least 10 degrees apart from the steering axis and each other
    const int null_count = 1 + static_cast<int>(uniform(rng) * 2.0);
    if (spec.method == DesignMethod::SymNull) {
      for (int i = 0; i < null_count; ++i) {
        const double offset = deg2rad(20.0 + 140.0 * uniform(rng) + 15.0 * i);
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering + offset), 1});
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering - offset), 1});
      }
    } else {
      for (int i = 0; i < null_count; ++i) {
        const double offset = deg2rad(30.0 + 80.0 * uniform(rng) + 110.0 * i);
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering + offset), 1});
      }
    }

    int k = 1 + static_cast<int>(spec.nulls.size());
    if (spec.method == DesignMethod::DerivCon) k += spec.order;
    if (k > m) continue;

    const ConstraintSystem sys = build_constraints(geom, omega, spec);
    if (gram_condition(sys) > 1e9) continue;

    const Filter filter = solve_max_wng(sys);
    const Eigen::VectorXcd reference =
        oracles::least_norm_kkt(sys.matrix, sys.rhs.cast<Complex>());
    CHECK((filter.coefficients - reference).norm() / reference.norm() < 1e-9);
    ++produced;
  }
}
