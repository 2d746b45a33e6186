#include "dmabeam/constraints.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "dmabeam/errors.hpp"

namespace dmabeam {

namespace {

constexpr double kAngleTol = 1e-9;  // rad; duplicate / pairing tolerance

std::string angle_text(double rad) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g deg", rad2deg(rad));
  return buf;
}

int total_null_rows(const std::vector<NullSpec>& nulls) {
  int sum = 0;
  for (const auto& n : nulls) sum += n.multiplicity;
  return sum;
}

DesignSpec canonicalized(const DesignSpec& spec) {
  DesignSpec out = spec;
  for (auto& n : out.nulls) n.angle = wrap_angle(n.angle);
  return out;
}

void validate_nulls(const DesignSpec& spec) {
  for (size_t i = 0; i < spec.nulls.size(); ++i) {
    if (spec.nulls[i].multiplicity < 1) throw SpecError("null multiplicity must be >= 1");
    if (std::abs(angle_difference(spec.nulls[i].angle, spec.steering)) < kAngleTol) {
      throw SpecError("null at " + angle_text(spec.nulls[i].angle) +
                      " coincides with the steering direction; the system would be inconsistent");
    }
    for (size_t j = 0; j < i; ++j) {
      if (std::abs(angle_difference(spec.nulls[i].angle, spec.nulls[j].angle)) < kAngleTol) {
        throw SpecError("duplicate null angle " + angle_text(spec.nulls[i].angle));
      }
    }
  }
}

void validate_symnull_pairs(const DesignSpec& spec) {
  const auto& nulls = spec.nulls;
  std::vector<char> matched(nulls.size(), 0);
  for (size_t i = 0; i < nulls.size(); ++i) {
    if (matched[i]) continue;
    // theta == theta_s + pi is its own mirror (theta == theta_s was rejected already)
    if (std::abs(std::remainder(nulls[i].angle - spec.steering, kPi)) < kAngleTol) {
      matched[i] = 1;
      continue;
    }
    bool found = false;
    for (size_t j = i + 1; j < nulls.size() && !found; ++j) {
      if (matched[j]) continue;
      const double midpoint_err =
          std::remainder((nulls[i].angle + nulls[j].angle) / 2.0 - spec.steering, kPi);
      if (std::abs(midpoint_err) < kAngleTol) {
        if (nulls[i].multiplicity != nulls[j].multiplicity) {
          throw SpecError("symmetric null pair (" + angle_text(nulls[i].angle) + ", " +
                          angle_text(nulls[j].angle) + ") must share one multiplicity");
        }
        matched[i] = matched[j] = 1;
        found = true;
      }
    }
    if (!found) {
      throw SpecError("SymNull: null at " + angle_text(nulls[i].angle) +
                      " has no partner mirrored about the steering axis");
    }
  }
}

std::vector<double> resolve_i_beta(const DesignSpec& spec, int null_rows) {
  const int k = 1 + spec.order + null_rows;
  if (spec.i_beta.empty()) return default_i_beta(spec.order, null_rows);
  if (static_cast<int>(spec.i_beta.size()) != k) {
    throw SpecError("i_beta must have 1 + N + (total null rows) = " + std::to_string(k) +
                    " entries, got " + std::to_string(spec.i_beta.size()));
  }
  if (spec.i_beta[0] != 1.0) throw SpecError("i_beta[0] must be 1 (distortionless target)");
  if (spec.i_beta[1] != 0.0) {
    throw SpecError("the first-derivative target i_beta[1] must be 0 so the response is "
                    "stationary at the steering direction");
  }
  for (int idx = 1 + spec.order; idx < k; ++idx) {
    if (spec.i_beta[idx] != 0.0) throw SpecError("null-row targets in i_beta must be 0");
  }
  return spec.i_beta;
}

void append_constraint_row(ConstraintSystem& sys, const ArrayGeometry& geom, double omega,
                           double angle, int q, RowLabel::Kind kind, int& next_row) {
  const SteeringVector sv = (q == 0) ? steering_vector(geom, omega, angle)
                                     : steering_vector_derivative(geom, omega, angle, q);
  sys.matrix.row(next_row) = sv.values.adjoint();
  sys.row_labels.push_back(RowLabel{kind, angle, q});
  ++next_row;
}

ConstraintSystem make_system(const ArrayGeometry& geom, double omega, const DesignSpec& spec,
                             int row_count) {
  ConstraintSystem sys;
  sys.matrix.resize(row_count, geom.element_count);
  sys.rhs = Eigen::VectorXd::Zero(row_count);
  sys.row_labels.reserve(row_count);
  sys.omega = omega;
  sys.steering = spec.steering;
  sys.spec_digest = spec_digest(geom, spec);
  return sys;
}

void append_null_rows(ConstraintSystem& sys, const ArrayGeometry& geom, double omega,
                      const std::vector<NullSpec>& nulls, int& next_row) {
  for (const auto& null : nulls) {
    for (int q = 0; q < null.multiplicity; ++q) {
      append_constraint_row(sys, geom, omega, null.angle, q, RowLabel::Kind::Null, next_row);
    }
  }
}

}  // namespace

std::string to_string(DesignMethod method) {
  switch (method) {
    case DesignMethod::DerivCon: return "DerivCon";
    case DesignMethod::Null: return "Null";
    case DesignMethod::SymNull: return "SymNull";
  }
  return "?";
}

std::optional<DesignMethod> method_from_string(std::string_view name) {
  if (name == "DerivCon") return DesignMethod::DerivCon;
  if (name == "Null") return DesignMethod::Null;
  if (name == "SymNull") return DesignMethod::SymNull;
  return std::nullopt;
}

std::vector<double> derived_null_angles(double steering, const std::vector<double>& offsets) {
  std::vector<double> angles;
  angles.reserve(offsets.size());
  for (double offset : offsets) angles.push_back(wrap_angle(steering + offset));
  return angles;
}

std::vector<double> default_i_beta(int order, int null_rows) {
  std::vector<double> values(static_cast<size_t>(1 + order + null_rows), 0.0);
  values[0] = 1.0;
  for (int q = 2; q <= order; q += 2) values[static_cast<size_t>(q)] = -2.0;
  return values;
}

void check_feasibility(const ArrayGeometry& geom, const DesignSpec& spec) {
  if (spec.order < 1) throw SpecError("design order must be >= 1");
  const DesignSpec canon = canonicalized(spec);
  validate_nulls(canon);
  const int m = geom.element_count;
  const int null_rows = total_null_rows(canon.nulls);
  switch (canon.method) {
    case DesignMethod::DerivCon: {
      const int minimum = 2 * canon.order + 1;
      if (m < minimum) {
        throw FeasibilityError("an order-" + std::to_string(canon.order) +
                               " steerable design needs at least " + std::to_string(minimum) +
                               " sensors, array has " + std::to_string(m));
      }
      const int k = 1 + canon.order + null_rows;
      if (m < k) {
        throw FeasibilityError("constraint count " + std::to_string(k) + " exceeds sensor count " +
                               std::to_string(m));
      }
      resolve_i_beta(canon, null_rows);
      break;
    }
    case DesignMethod::Null:
    case DesignMethod::SymNull: {
      if (!spec.i_beta.empty()) throw SpecError("i_beta applies to the DerivCon method only");
      if (canon.method == DesignMethod::SymNull) validate_symnull_pairs(canon);
      const int k = 1 + null_rows;
      if (m < k) {
        throw FeasibilityError("constraint count " + std::to_string(k) + " exceeds sensor count " +
                               std::to_string(m));
      }
      break;
    }
  }
}

ConstraintSystem build_derivcon(const ArrayGeometry& geom, double omega, const DesignSpec& spec) {
  if (spec.method != DesignMethod::DerivCon) throw SpecError("build_derivcon requires method DerivCon");
  const DesignSpec canon = canonicalized(spec);
  check_feasibility(geom, canon);
  const int null_rows = total_null_rows(canon.nulls);
  const int k = 1 + canon.order + null_rows;
  const std::vector<double> targets = resolve_i_beta(canon, null_rows);

  ConstraintSystem sys = make_system(geom, omega, canon, k);
  int row = 0;
  append_constraint_row(sys, geom, omega, canon.steering, 0, RowLabel::Kind::Distortionless, row);
  for (int q = 1; q <= canon.order; ++q) {
    append_constraint_row(sys, geom, omega, canon.steering, q, RowLabel::Kind::Derivative, row);
  }
  append_null_rows(sys, geom, omega, canon.nulls, row);
  for (int i = 0; i < k; ++i) sys.rhs[i] = targets[static_cast<size_t>(i)];
  return sys;
}

ConstraintSystem build_null(const ArrayGeometry& geom, double omega, const DesignSpec& spec) {
  if (spec.method != DesignMethod::Null) throw SpecError("build_null requires method Null");
  const DesignSpec canon = canonicalized(spec);
  check_feasibility(geom, canon);
  const int k = 1 + total_null_rows(canon.nulls);

  ConstraintSystem sys = make_system(geom, omega, canon, k);
  int row = 0;
  append_constraint_row(sys, geom, omega, canon.steering, 0, RowLabel::Kind::Distortionless, row);
  append_null_rows(sys, geom, omega, canon.nulls, row);
  sys.rhs[0] = 1.0;
  return sys;
}

ConstraintSystem build_symnull(const ArrayGeometry& geom, double omega, const DesignSpec& spec) {
  if (spec.method != DesignMethod::SymNull) throw SpecError("build_symnull requires method SymNull");
  const DesignSpec canon = canonicalized(spec);
  check_feasibility(geom, canon);
  const int k = 1 + total_null_rows(canon.nulls);

  ConstraintSystem sys = make_system(geom, omega, canon, k);
  int row = 0;
  append_constraint_row(sys, geom, omega, canon.steering, 0, RowLabel::Kind::Distortionless, row);
  append_null_rows(sys, geom, omega, canon.nulls, row);
  sys.rhs[0] = 1.0;
  return sys;
}

ConstraintSystem build_constraints(const ArrayGeometry& geom, double omega, const DesignSpec& spec) {
  switch (spec.method) {
    case DesignMethod::DerivCon: return build_derivcon(geom, omega, spec);
    case DesignMethod::Null: return build_null(geom, omega, spec);
    case DesignMethod::SymNull: return build_symnull(geom, omega, spec);
  }
  throw SpecError("unknown design method");
}

std::string spec_digest(const ArrayGeometry& geom, const DesignSpec& spec) {
  const DesignSpec canon = canonicalized(spec);
  char buf[64];
  std::string text;
  auto add_num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    text += buf;
  };
  text += "uca;M=" + std::to_string(geom.element_count) + ";r=";
  add_num(geom.radius);
  text += ";c=";
  add_num(geom.speed_of_sound);
  text += ";method=" + to_string(canon.method) + ";N=" + std::to_string(canon.order) + ";steer=";
  add_num(wrap_angle(canon.steering));
  for (const auto& n : canon.nulls) {
    text += ";null=";
    add_num(n.angle);
    text += ":" + std::to_string(n.multiplicity);
  }
  if (canon.method == DesignMethod::DerivCon) {
    text += ";ib=";
    const auto targets = resolve_i_beta(canon, total_null_rows(canon.nulls));
    for (size_t i = 0; i < targets.size(); ++i) {
      if (i) text += ",";
      add_num(targets[i]);
    }
  }

  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace dmabeam
