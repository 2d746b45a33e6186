#include "dmabeam/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "dmabeam/artifacts.hpp"
#include "dmabeam/errors.hpp"
#include "dmabeam/version.hpp"

namespace dmabeam {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kDbFloor = -60.0;
constexpr double kDistortionlessTol = 1e-10;
constexpr double kNullDepthTol = 1e-8;
constexpr double kStationarityTol = 1e-8;
constexpr double kResidualTol = 1e-8;
constexpr double kMonteCarloTolDb = 0.5;

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int used = std::min(threads, count);
  pool.reserve(static_cast<size_t>(used));
  for (int t = 0; t < used; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string output_path(const RunConfig& config, const std::string& filename) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / filename).string();
}

struct SolvedDesign {
  DesignSpec spec;
  ConstraintSystem system;
  Filter filter;
  Gain wng_gain;
  Gain df_gain;
  double condition = 0.0;
};

SolvedDesign solve_design(const ArrayGeometry& geom, double frequency_hz, const DesignSpec& spec,
                          double diagonal_load) {
  SolvedDesign out;
  out.spec = spec;
  out.system = build_constraints(geom, kTwoPi * frequency_hz, spec);
  out.condition = gram_condition(out.system);
  SolverOptions opts;
  opts.diagonal_load = diagonal_load;
  out.filter = solve_max_wng(out.system, opts);
  out.wng_gain = wng(out.filter, geom);
  out.df_gain = df(out.filter, geom);
  return out;
}

void write_geometry(JsonWriter& w, const RunConfig& config) {
  w.begin_object();
  w.key("elements");
  w.value(config.elements);
  w.key("radius_m");
  w.value(config.radius_m);
  w.key("speed_of_sound");
  w.value(config.speed_of_sound);
  w.end_object();
}

// Angles are stored twice: degrees for people, radians (17 digits, exact
// round-trip) as the authoritative value a reload rebuilds from.
void write_spec(JsonWriter& w, const DesignSpec& spec, const Eigen::VectorXd& rhs) {
  w.begin_object();
  if (spec.method == DesignMethod::DerivCon) {
    w.key("i_beta");
    w.begin_array();
    for (Eigen::Index i = 0; i < rhs.size(); ++i) w.value(rhs[i]);
    w.end_array();
  }
  w.key("method");
  w.value(to_string(spec.method));
  w.key("nulls");
  w.begin_array();
  for (const auto& null : spec.nulls) {
    w.begin_object();
    w.key("angle_deg");
    w.value(rad2deg(null.angle));
    w.key("angle_rad");
    w.value(null.angle);
    w.key("multiplicity");
    w.value(null.multiplicity);
    w.end_object();
  }
  w.end_array();
  w.key("order");
  w.value(spec.order);
  w.key("steering_deg");
  w.value(rad2deg(spec.steering));
  w.key("steering_rad");
  w.value(spec.steering);
  w.end_object();
}

std::string geometry_comment(const RunConfig& config) {
  return "geometry: elements=" + std::to_string(config.elements) +
         " radius_m=" + format_double(config.radius_m, kCsvDigits) +
         " speed_of_sound=" + format_double(config.speed_of_sound, kCsvDigits);
}

}  // namespace

std::vector<std::string> run_design(const RunConfig& config) {
  validate_config(config);
  if (config.steering_deg.size() != 1) {
    throw ConfigError("design writes one artifact per run; give a single steering angle");
  }
  const ArrayGeometry geom = make_geometry(config);
  const DesignSpec spec = make_design_spec(config, config.method, config.steering_deg[0]);
  const std::vector<double> freqs = config.frequency.frequencies();

  std::vector<SolvedDesign> solved(freqs.size());
  for (size_t i = 0; i < freqs.size(); ++i) {
    solved[i] = solve_design(geom, freqs[i], spec, config.diagonal_load);
  }

  const bool single = freqs.size() == 1;
  JsonWriter w;
  w.begin_object();
  w.key("coefficients");
  w.begin_array();
  for (const auto& s : solved) {
    if (!single) w.begin_array();
    for (Eigen::Index m = 0; m < s.filter.coefficients.size(); ++m) {
      w.begin_array();
      w.value(s.filter.coefficients[m].real());
      w.value(s.filter.coefficients[m].imag());
      w.end_array();
    }
    if (!single) w.end_array();
  }
  w.end_array();
  w.key("digest");
  w.value(solved[0].system.spec_digest);
  if (single) {
    w.key("frequency_hz");
    w.value(freqs[0]);
  } else {
    w.key("frequencies");
    w.begin_array();
    for (double f : freqs) w.value(f);
    w.end_array();
  }
  w.key("geometry");
  write_geometry(w, config);
  w.key("metrics");
  w.begin_object();
  auto metric_values = [&](auto&& get) {
    if (single) {
      w.value(get(solved[0]));
    } else {
      w.begin_array();
      for (const auto& s : solved) w.value(get(s));
      w.end_array();
    }
  };
  w.key("df_db");
  metric_values([](const SolvedDesign& s) { return s.df_gain.db; });
  w.key("gram_condition");
  metric_values([](const SolvedDesign& s) { return s.condition; });
  w.key("wng_db");
  metric_values([](const SolvedDesign& s) { return s.wng_gain.db; });
  w.end_object();
  w.key("residual");
  metric_values([](const SolvedDesign& s) { return s.filter.residual; });
  w.key("spec");
  write_spec(w, spec, solved[0].system.rhs);
  w.key("version");
  w.value(kVersion);
  w.end_object();

  const std::string path = output_path(config, config.basename + "_design.json");
  write_text_file(path, w.take());
  return {path};
}

std::vector<std::string> run_pattern(const RunConfig& config) {
  validate_config(config);
  const ArrayGeometry geom = make_geometry(config);
  const std::vector<double> freqs = config.frequency.frequencies();
  const std::vector<double> grid = make_angle_grid(deg2rad(config.pattern_step_deg));

  std::vector<std::string> paths;
  for (const auto& method : active_methods(config)) {
    for (double freq : freqs) {
      for (double steering_deg : config.steering_deg) {
        const DesignSpec spec = make_design_spec(config, method, steering_deg);
        const SolvedDesign s = solve_design(geom, freq, spec, config.diagonal_load);
        const BeampatternSamples bp = beampattern(s.filter, geom, grid);

        CsvWriter csv;
        csv.comment(std::string("dmabeam pattern v") + kVersion);
        csv.comment("digest=" + s.system.spec_digest);
        csv.comment(geometry_comment(config));
        csv.comment("method=" + method + " order=" + std::to_string(config.order) +
                    " steering_deg=" + format_double(steering_deg, kCsvDigits) +
                    " frequency_hz=" + format_double(freq, kCsvDigits));
        csv.header({"angle_deg", "re", "im", "mag", "mag_db"});
        for (size_t i = 0; i < bp.angles.size(); ++i) {
          const Complex value = bp.values[static_cast<Eigen::Index>(i)];
          const double mag = std::abs(value);
          const double mag_db =
              mag > 0.0 ? std::max(20.0 * std::log10(mag), kDbFloor) : kDbFloor;
          csv.row({csv_field(rad2deg(bp.angles[i])), csv_field(value.real()),
                   csv_field(value.imag()), csv_field(mag), csv_field(mag_db)});
        }

        const std::string name = config.basename + "_pattern_" + method + "_f" +
                                 format_double(freq, kCsvDigits) + "_s" +
                                 format_double(steering_deg, kCsvDigits) + ".csv";
        const std::string path = output_path(config, name);
        write_text_file(path, csv.text());
        paths.push_back(path);
      }
    }
  }
  return paths;
}

std::vector<std::string> run_sweep(const RunConfig& config) {
  validate_config(config);
  if (config.frequency.count < 2) {
    throw ConfigError("sweep needs a frequency grid with at least 2 points");
  }
  if (config.steering_deg.size() != 1) {
    throw ConfigError("sweep uses a single steering angle");
  }
  const ArrayGeometry geom = make_geometry(config);
  const std::vector<double> freqs = config.frequency.frequencies();
  const std::vector<std::string> methods = active_methods(config);

  struct Row {
    double wng_db, df_db, residual, condition;
  };
  std::vector<std::vector<Row>> rows(methods.size());
  std::vector<std::string> digests(methods.size());

  for (size_t mi = 0; mi < methods.size(); ++mi) {
    const DesignSpec spec = make_design_spec(config, methods[mi], config.steering_deg[0]);
    rows[mi].resize(freqs.size());
    digests[mi] = spec_digest(geom, spec);
    auto& out = rows[mi];
    parallel_for(static_cast<int>(freqs.size()), config.threads, [&](int fi) {
      const SolvedDesign s =
          solve_design(geom, freqs[static_cast<size_t>(fi)], spec, config.diagonal_load);
      out[static_cast<size_t>(fi)] =
          Row{s.wng_gain.db, s.df_gain.db, s.filter.residual, s.condition};
    });
  }

  // MetricCurve is the exported carrier; rows below are serialized from it.
  std::vector<MetricCurve> curves;
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    for (MetricKind kind : {MetricKind::WngDb, MetricKind::DfDb}) {
      MetricCurve curve;
      curve.frequencies_hz = freqs;
      curve.kind = kind;
      curve.spec_digest = digests[mi];
      curve.values.reserve(freqs.size());
      for (const auto& row : rows[mi]) {
        curve.values.push_back(kind == MetricKind::WngDb ? row.wng_db : row.df_db);
      }
      curves.push_back(std::move(curve));
    }
  }

  CsvWriter csv;
  csv.comment(std::string("dmabeam sweep v") + kVersion);
  csv.comment(geometry_comment(config));
  csv.comment("steering_deg=" + format_double(config.steering_deg[0], kCsvDigits) +
              " order=" + std::to_string(config.order));
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    csv.comment("digest " + methods[mi] + "=" + digests[mi]);
  }
  csv.header({"freq_hz", "wng_db", "df_db", "residual", "gram_condition", "method"});
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    const MetricCurve& wng_curve = curves[2 * mi];
    const MetricCurve& df_curve = curves[2 * mi + 1];
    for (size_t fi = 0; fi < freqs.size(); ++fi) {
      csv.row({csv_field(freqs[fi]), csv_field(wng_curve.values[fi]),
               csv_field(df_curve.values[fi]), csv_field(rows[mi][fi].residual),
               csv_field(rows[mi][fi].condition), methods[mi]});
    }
  }

  const std::string path = output_path(config, config.basename + "_sweep.csv");
  write_text_file(path, csv.text());
  return {path};
}

namespace {

struct LoadedDesign {
  RunConfig geometry_config;  // geometry fields only
  DesignSpec spec;
  std::vector<double> frequencies_hz;
  std::vector<Eigen::VectorXcd> coefficients;
  std::string stored_digest;
};

Eigen::VectorXcd parse_coefficient_set(const json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty()) throw ConfigError(what + " must be a non-empty array");
  Eigen::VectorXcd h(arr.size());
  for (size_t m = 0; m < arr.size(); ++m) {
    const auto& pair = arr[m];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ConfigError(what + " entries must be [re, im] pairs");
    }
    h[static_cast<Eigen::Index>(m)] = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return h;
}

LoadedDesign load_design_artifact(const std::string& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("design artifact is not valid JSON: " + std::string(e.what()));
  }
  if (!root.is_object()) throw ConfigError("design artifact root must be an object");

  LoadedDesign out;
  try {
    const auto& g = root.at("geometry");
    out.geometry_config.elements = g.at("elements").get<int>();
    out.geometry_config.radius_m = g.at("radius_m").get<double>();
    out.geometry_config.speed_of_sound = g.at("speed_of_sound").get<double>();

    const auto& spec = root.at("spec");
    const auto method = method_from_string(spec.at("method").get<std::string>());
    if (!method) throw ConfigError("design artifact has an unknown method");
    out.spec.method = *method;
    out.spec.order = spec.at("order").get<int>();
    out.spec.steering = spec.at("steering_rad").get<double>();
    for (const auto& null : spec.at("nulls")) {
      out.spec.nulls.push_back(
          NullSpec{null.at("angle_rad").get<double>(), null.at("multiplicity").get<int>()});
    }
    if (spec.contains("i_beta")) {
      out.spec.i_beta = spec.at("i_beta").get<std::vector<double>>();
    }

    if (root.contains("frequency_hz")) {
      out.frequencies_hz = {root.at("frequency_hz").get<double>()};
      out.coefficients.push_back(parse_coefficient_set(root.at("coefficients"), "coefficients"));
    } else {
      out.frequencies_hz = root.at("frequencies").get<std::vector<double>>();
      const auto& sets = root.at("coefficients");
      if (!sets.is_array() || sets.size() != out.frequencies_hz.size()) {
        throw ConfigError("coefficients must hold one set per frequency");
      }
      for (const auto& set : sets) {
        out.coefficients.push_back(parse_coefficient_set(set, "coefficients"));
      }
    }
    out.stored_digest = root.at("digest").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError("design artifact is missing fields: " + std::string(e.what()));
  }
  return out;
}

}  // namespace

ValidationReport run_validate(const RunConfig& config, const std::string& filter_path) {
  ValidationReport report;
  const bool from_file = !filter_path.empty();

  RunConfig geo_config = config;
  std::vector<std::string> methods;
  std::vector<double> steerings_deg;
  LoadedDesign loaded;
  if (from_file) {
    loaded = load_design_artifact(filter_path);
    geo_config.elements = loaded.geometry_config.elements;
    geo_config.radius_m = loaded.geometry_config.radius_m;
    geo_config.speed_of_sound = loaded.geometry_config.speed_of_sound;
    methods = {to_string(loaded.spec.method)};
    steerings_deg = {rad2deg(loaded.spec.steering)};
  } else {
    validate_config(config);
    methods = active_methods(config);
    steerings_deg = config.steering_deg;
  }
  const ArrayGeometry geom = make_geometry(geo_config);

  auto add_check = [&](const std::string& name, const std::string& method, double steering_deg,
                       double freq, double measured, double threshold) {
    const bool passed = measured <= threshold;
    report.checks.push_back(
        ValidationCheck{name, method, steering_deg, freq, measured, threshold, passed});
    if (!passed) report.all_passed = false;
  };

  std::string digest;
  for (const auto& method : methods) {
    for (double steering_deg : steerings_deg) {
      DesignSpec spec;
      if (from_file) {
        spec = loaded.spec;
      } else {
        spec = make_design_spec(config, method, steering_deg);
      }
      const std::vector<double> freqs =
          from_file ? loaded.frequencies_hz : config.frequency.frequencies();

      for (size_t fi = 0; fi < freqs.size(); ++fi) {
        const double freq = freqs[fi];
        const ConstraintSystem sys = build_constraints(geom, kTwoPi * freq, spec);
        digest = sys.spec_digest;

        Filter filter;
        if (from_file) {
          filter.coefficients = loaded.coefficients[fi];
          filter.omega = kTwoPi * freq;
          filter.steering = spec.steering;
          filter.spec_digest = loaded.stored_digest;
          filter.residual =
              (sys.matrix * filter.coefficients - sys.rhs.cast<Complex>()).cwiseAbs().maxCoeff();
        } else {
          SolverOptions opts;
          opts.diagonal_load = config.diagonal_load;
          filter = solve_max_wng(sys, opts);
        }

        add_check("residual", method, steering_deg, freq, filter.residual, kResidualTol);

        const SteeringVector d = steering_vector(geom, filter.omega, spec.steering);
        const Complex response = filter.coefficients.dot(d.values);
        add_check("distortionless", method, steering_deg, freq, std::abs(response - 1.0),
                  kDistortionlessTol);

        if (!spec.nulls.empty()) {
          double worst = 0.0;
          for (const auto& null : spec.nulls) {
            const SteeringVector dn = steering_vector(geom, filter.omega, null.angle);
            worst = std::max(worst, std::abs(filter.coefficients.dot(dn.values)));
          }
          add_check("null_depth", method, steering_deg, freq, worst, kNullDepthTol);
        }

        if (spec.method == DesignMethod::DerivCon) {
          const double slope =
              std::abs(pattern_derivative_at(filter, geom, spec.steering, 1));
          add_check("stationarity", method, steering_deg, freq, slope, kStationarityTol);
        }

        // Monte-Carlo is the expensive check; run it once per design, at
        // the first grid frequency.
        if (fi == 0 && config.mc_noise_power > 0.0) {
          const double measured = monte_carlo_output_noise_power(
              filter, geom, config.mc_noise_power, config.mc_snapshots, config.seed);
          const double expected = config.mc_noise_power * filter.coefficients.squaredNorm();
          const double deviation_db = std::abs(10.0 * std::log10(measured / expected));
          add_check("monte_carlo_wng", method, steering_deg, freq, deviation_db, kMonteCarloTolDb);
        }
      }
    }
  }

  if (from_file) {
    const ArrayGeometry check_geom = make_geometry(geo_config);
    const std::string recomputed = spec_digest(check_geom, loaded.spec);
    const bool match = recomputed == loaded.stored_digest;
    report.checks.push_back(ValidationCheck{"digest_match", methods[0], steerings_deg[0],
                                            loaded.frequencies_hz[0], match ? 0.0 : 1.0, 0.5,
                                            match});
    if (!match) report.all_passed = false;
  }

  JsonWriter w;
  w.begin_object();
  w.key("all_passed");
  w.value(report.all_passed);
  w.key("checks");
  w.begin_array();
  for (const auto& check : report.checks) {
    w.begin_object();
    w.key("frequency_hz");
    w.value(check.frequency_hz);
    w.key("measured");
    w.value(check.measured);
    w.key("method");
    w.value(check.method);
    w.key("name");
    w.value(check.name);
    w.key("passed");
    w.value(check.passed);
    w.key("steering_deg");
    w.value(check.steering_deg);
    w.key("threshold");
    w.value(check.threshold);
    w.end_object();
  }
  w.end_array();
  w.key("digest");
  w.value(digest);
  w.key("geometry");
  write_geometry(w, geo_config);
  w.key("monte_carlo");
  w.begin_object();
  w.key("algorithm");
  w.value(kNoiseAlgorithm);
  w.key("noise_power");
  w.value(config.mc_noise_power);
  w.key("seed");
  w.value(config.seed);
  w.key("snapshots");
  w.value(config.mc_snapshots);
  w.end_object();
  w.key("source");
  w.value(from_file ? filter_path : std::string("config"));
  w.key("version");
  w.value(kVersion);
  w.end_object();

  report.artifact_path = output_path(config, config.basename + "_validate.json");
  write_text_file(report.artifact_path, w.take());
  return report;
}

std::string human_summary(const ValidationReport& report) {
  std::string text;
  for (const auto& check : report.checks) {
    text += check.passed ? "PASS " : "FAIL ";
    text += check.name + " method=" + check.method +
            " steering_deg=" + format_double(check.steering_deg, 6) +
            " f_hz=" + format_double(check.frequency_hz, 6) +
            " measured=" + format_double(check.measured, 6) +
            " threshold=" + format_double(check.threshold, 6) + "\n";
  }
  text += report.all_passed ? "all checks passed\n" : "validation FAILED\n";
  return text;
}

}  // namespace dmabeam
