// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any fail. argv[1] (optional) is the CLI binary, used by the
// determinism criterion; without it that criterion runs in-process.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dmabeam/commands.hpp"
#include "dmabeam/errors.hpp"
#include "dmabeam/metrics.hpp"
#include "oracles.hpp"

using namespace dmabeam;
namespace fs = std::filesystem;

namespace {

const ArrayGeometry kPaperArray(8, 0.02, 340.0);

DesignSpec experiment_spec(const std::string& method, int order, double steering_deg) {
  RunConfig config;
  config.order = order;
  config.null_offsets_deg = order == 1 ? std::vector<double>{120.0}
                                       : std::vector<double>{120.0, 240.0};
  return make_design_spec(config, method, steering_deg);
}

Filter solve_at(const ArrayGeometry& geom, const DesignSpec& spec, double f_hz) {
  return solve_max_wng(build_constraints(geom, kTwoPi * f_hz, spec));
}

std::string fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dmabeam_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

// --- criteria -------------------------------------------------------------

bool constraint_satisfaction(std::string& detail) {
  const std::vector<std::string> methods = {"DerivCon", "Null", "SymNull"};
  const std::vector<double> freqs = {250, 500, 1000, 2000, 4000, 8000};
  const std::vector<double> steerings = {0, 20, 50, 120, 240, 359};
  double worst_distortionless = 0.0, worst_null = 0.0;
  int designs = 0;
  for (const auto& method : methods) {
    for (int order : {1, 2}) {
      for (double f : freqs) {
        for (double steer : steerings) {
          const DesignSpec spec = experiment_spec(method, order, steer);
          const Filter h = solve_at(kPaperArray, spec, f);
          const SteeringVector d = steering_vector(kPaperArray, h.omega, spec.steering);
          worst_distortionless =
              std::max(worst_distortionless, std::abs(h.coefficients.dot(d.values) - 1.0));
          for (const auto& null : spec.nulls) {
            const SteeringVector dn = steering_vector(kPaperArray, h.omega, null.angle);
            worst_null = std::max(worst_null, std::abs(h.coefficients.dot(dn.values)));
          }
          ++designs;
        }
      }
    }
  }
  std::ostringstream os;
  os << designs << " designs, worst |B(ts)-1|=" << worst_distortionless
     << ", worst |B(null)|=" << worst_null;
  detail = os.str();
  return worst_distortionless < 1e-10 && worst_null < 1e-8;
}

bool null_design_pathology(std::string& detail) {
  DesignSpec spec;
  spec.method = DesignMethod::Null;
  spec.steering = deg2rad(50.0);
  spec.nulls = {NullSpec{deg2rad(122.0), 1}, NullSpec{deg2rad(194.0), 1}};
  const Filter h = solve_at(kPaperArray, spec, 1000.0);
  const BeampatternSamples bp = beampattern(h, kPaperArray, make_angle_grid(deg2rad(0.5)));
  const double max_mag = bp.values.cwiseAbs().maxCoeff();
  std::ostringstream os;
  os << "max |B| over the 0.5 deg grid = " << max_mag;
  detail = os.str();
  return max_mag > 1.05;
}

bool steering_reproduction(std::string& detail) {
  double worst_offset_deg = 0.0, worst_slope = 0.0;
  for (int order : {1, 2}) {
    for (double steer : {20.0, 50.0, 120.0, 240.0}) {
      const DesignSpec spec = experiment_spec("DerivCon", order, steer);
      const Filter h = solve_at(kPaperArray, spec, 1000.0);
      const BeampatternSamples bp = beampattern(h, kPaperArray, make_angle_grid(deg2rad(1.0)));
      const double lobe = main_lobe_direction(bp);
      const double offset_deg = std::abs(rad2deg(angle_difference(lobe, spec.steering)));
      worst_offset_deg = std::max(worst_offset_deg, offset_deg);
      worst_slope = std::max(
          worst_slope, std::abs(pattern_derivative_at(h, kPaperArray, spec.steering, 1)));
    }
  }
  std::ostringstream os;
  os << "worst lobe offset " << worst_offset_deg << " deg, worst |dB/dtheta(ts)| "
     << worst_slope;
  detail = os.str();
  return worst_offset_deg <= 2.0 + 1e-9 && worst_slope < 1e-8;
}

bool solver_oracle(std::string& detail) {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<int> sensors(3, 12);

  double worst_rel = 0.0, worst_leak = 0.0;
  int produced = 0, attempts = 0;
  while (produced < 100 && attempts < 10000) {
    ++attempts;
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

    const int null_count = 1 + static_cast<int>(uniform(rng) * 2.0);
    if (spec.method == DesignMethod::SymNull) {
      for (int i = 0; i < null_count; ++i) {
        const double offset = deg2rad(20.0 + 140.0 * uniform(rng) + 15.0 * i);
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering + offset), 1});
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering - offset), 1});
      }
    } else {
      const int mult = uniform(rng) < 0.2 ? 2 : 1;
      for (int i = 0; i < null_count; ++i) {
        const double offset = deg2rad(30.0 + 80.0 * uniform(rng) + 110.0 * i);
        spec.nulls.push_back(NullSpec{wrap_angle(spec.steering + offset), i == 0 ? mult : 1});
      }
    }

    int k = 1;
    for (const auto& n : spec.nulls) k += n.multiplicity;
    if (spec.method == DesignMethod::DerivCon) k += spec.order;
    if (k > m) continue;

    const ConstraintSystem sys = build_constraints(geom, omega, spec);
    if (gram_condition(sys) > 1e9) continue;

    const Filter h = solve_max_wng(sys);
    const Eigen::VectorXcd reference =
        oracles::least_norm_kkt(sys.matrix, sys.rhs.cast<Complex>());
    worst_rel = std::max(worst_rel,
                         (h.coefficients - reference).norm() / reference.norm());

    const Eigen::VectorXcd projected =
        oracles::least_norm_kkt(sys.matrix, sys.matrix * h.coefficients);
    worst_leak = std::max(worst_leak,
                          (h.coefficients - projected).norm() / h.coefficients.norm());
    ++produced;
  }
  std::ostringstream os;
  os << produced << " random specs, worst rel err " << worst_rel << ", worst null-space leak "
     << worst_leak;
  detail = os.str();
  return produced == 100 && worst_rel < 1e-9 && worst_leak < 1e-10;
}

bool derivative_oracle(std::string& detail) {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> freq(200.0, 8000.0);
  std::uniform_real_distribution<double> radius(0.005, 0.05);
  std::uniform_int_distribution<int> sensors(2, 16);

  double worst_rel = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ArrayGeometry geom(sensors(rng), radius(rng));
    const double omega = kTwoPi * freq(rng);
    const double theta = angle(rng);
    for (int q = 1; q <= 4; ++q) {
      auto lower = [&](double th) {
        return q == 1 ? steering_vector(geom, omega, th).values
                      : steering_vector_derivative(geom, omega, th, q - 1).values;
      };
      const Eigen::VectorXcd numeric = oracles::derivative_4th(lower, theta, 1e-4);
      const Eigen::VectorXcd analytic =
          steering_vector_derivative(geom, omega, theta, q).values;
      worst_rel = std::max(
          worst_rel, (analytic - numeric).cwiseAbs().maxCoeff() / analytic.cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream os;
  os << "1000 draws, q<=4, worst rel err " << worst_rel;
  detail = os.str();
  return worst_rel < 1e-6;
}

bool wng_consistency(std::string& detail) {
  double worst_identity = 0.0;
  for (int order : {1, 2}) {
    for (double steer : {20.0, 50.0, 120.0, 240.0}) {
      const DesignSpec spec = experiment_spec("DerivCon", order, steer);
      const Filter h = solve_at(kPaperArray, spec, 1000.0);
      const Gain gain = wng(h, kPaperArray);
      const double identity = 1.0 / h.coefficients.squaredNorm();
      worst_identity = std::max(worst_identity, std::abs(gain.linear - identity) / identity);
    }
  }

  const DesignSpec spec = experiment_spec("DerivCon", 2, 50.0);
  const Filter h = solve_at(kPaperArray, spec, 1000.0);
  const double noise_power = 1.0;
  const double measured =
      monte_carlo_output_noise_power(h, kPaperArray, noise_power, 100000, 777);
  const double expected = noise_power * h.coefficients.squaredNorm();
  const double deviation_db = std::abs(10.0 * std::log10(measured / expected));

  std::ostringstream os;
  os << "worst identity rel err " << worst_identity << ", Monte-Carlo deviation "
     << deviation_db << " dB over 1e5 snapshots";
  detail = os.str();
  return worst_identity < 1e-12 && deviation_db < 0.5;
}

bool feasibility_rule(std::string& detail) {
  double worst_residual = 0.0;
  for (int order : {1, 2, 3}) {
    std::vector<double> offsets;
    for (int i = 1; i <= order; ++i) offsets.push_back(360.0 * i / (order + 1));
    RunConfig config;
    config.order = order;
    config.null_offsets_deg = offsets;
    const DesignSpec spec = make_design_spec(config, "DerivCon", 50.0);

    bool rejected = false;
    try {
      const ArrayGeometry tight(2 * order, 0.02, 340.0);
      solve_at(tight, spec, 1000.0);
    } catch (const FeasibilityError&) {
      rejected = true;
    }
    if (!rejected) {
      detail = "M = 2N was not rejected for N = " + std::to_string(order);
      return false;
    }

    const ArrayGeometry minimal(2 * order + 1, 0.02, 340.0);
    const Filter h = solve_at(minimal, spec, 1000.0);
    worst_residual = std::max(worst_residual, h.residual);
  }
  std::ostringstream os;
  os << "M=2N rejected for N in {1,2,3}; worst M=2N+1 residual " << worst_residual;
  detail = os.str();
  return worst_residual < 1e-8;
}

bool coherence_oracle(std::string& detail) {
  const ArrayGeometry geom(4, 0.02, 340.0);
  double worst = 0.0;
  for (double f : {500.0, 2000.0}) {
    const double omega = kTwoPi * f;
    const Eigen::MatrixXd gamma = diffuse_coherence(geom, omega);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double distance = 2.0 * geom.radius * std::abs(std::sin((i - j) * kPi / 4.0));
        const double reference =
            oracles::sphere_coherence(distance, omega / geom.speed_of_sound);
        worst = std::max(worst, std::abs(gamma(i, j) - reference));
      }
    }
  }
  std::ostringstream os;
  os << "worst entry deviation from sphere quadrature " << worst;
  detail = os.str();
  return worst < 1e-6;
}

bool read_file(const std::string& path, std::string& out) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return false;
  std::fseek(f, 0, SEEK_END);
  const long size = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  out.resize(static_cast<size_t>(size));
  const size_t got = std::fread(out.data(), 1, out.size(), f);
  std::fclose(f);
  return got == out.size();
}

bool determinism(const std::string& cli, std::string& detail) {
  const std::string dir_a = fresh_dir("det_a");
  const std::string dir_b = fresh_dir("det_b");
  std::vector<std::string> names;

  if (!cli.empty()) {
    for (const std::string& dir : {dir_a, dir_b}) {
      const std::string command =
          cli + " pattern --preset fig2 --out " + dir + " > " + dir + "/stdout.txt";
      const int rc = std::system(command.c_str());
      if (rc != 0) {
        detail = "CLI run failed with status " + std::to_string(rc);
        return false;
      }
    }
    for (const auto& entry : fs::directory_iterator(dir_a)) {
      if (entry.path().extension() == ".csv") names.push_back(entry.path().filename().string());
    }
    detail = "CLI `pattern --preset fig2` run twice";
  } else {
    RunConfig config = preset_config("fig2");
    config.out_dir = dir_a;
    run_pattern(config);
    config.out_dir = dir_b;
    run_pattern(config);
    for (const auto& entry : fs::directory_iterator(dir_a)) {
      if (entry.path().extension() == ".csv") names.push_back(entry.path().filename().string());
    }
    detail = "in-process fig2 pattern run twice (no CLI path given)";
  }

  if (names.size() != 4) {
    detail += "; expected 4 CSVs, found " + std::to_string(names.size());
    return false;
  }
  for (const auto& name : names) {
    std::string a, b;
    if (!read_file((fs::path(dir_a) / name).string(), a) ||
        !read_file((fs::path(dir_b) / name).string(), b)) {
      detail += "; missing " + name;
      return false;
    }
    if (a != b || a.empty()) {
      detail += "; " + name + " differs between runs";
      return false;
    }
  }
  detail += "; 4 CSVs byte-identical";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "constraint satisfaction across methods, orders, frequencies, steerings",
       constraint_satisfaction},
      {2, "naive null-constrained design exceeds unit gain", null_design_pathology},
      {3, "derivative-constrained designs steer the main lobe correctly", steering_reproduction},
      {4, "min-norm solver matches the independent KKT oracle", solver_oracle},
      {5, "analytic steering-vector derivatives match finite differences", derivative_oracle},
      {6, "WNG identity and Monte-Carlo noise power", wng_consistency},
      {7, "2N+1 sensor feasibility rule", feasibility_rule},
      {8, "diffuse coherence matches sphere quadrature", coherence_oracle},
      {9, "pattern export is byte-deterministic",
       [&cli](std::string& detail) { return determinism(cli, detail); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion.id << ": "
              << criterion.title << " [" << detail << "]\n";
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " criteria FAILED")
            << "\n";
  return failures == 0 ? 0 : 1;
}
