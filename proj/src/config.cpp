#include "dmabeam/config.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "dmabeam/artifacts.hpp"
#include "dmabeam/errors.hpp"

namespace dmabeam {

namespace {

using nlohmann::json;

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) {
      throw ConfigError("config key '" + key + "' must be non-negative");
    }
    return v.get<std::uint64_t>();
  }
  throw ConfigError("config key '" + key + "' must be a non-negative integer");
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_double_list(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be a number or array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(as_double(item, key));
  return out;
}

std::vector<int> as_int_list(const json& v, const std::string& key) {
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an integer or array");
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(as_int(item, key));
  return out;
}

std::vector<std::string> as_string_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& item : v) out.push_back(as_string(item, key));
  return out;
}

// Pop a key from an object copy so leftovers can be reported as unknown.
json take(json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return json();
  json value = *it;
  obj.erase(it);
  return value;
}

void reject_unknown(const json& obj, const std::string& scope) {
  if (obj.empty()) return;
  std::string keys;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!keys.empty()) keys += ", ";
    keys += it.key();
  }
  throw ConfigError("unknown config key(s) in " + scope + ": " + keys);
}

}  // namespace

std::vector<double> FrequencyGrid::frequencies() const {
  std::vector<double> out(static_cast<size_t>(count));
  if (count == 1) {
    out[0] = start_hz;
    return out;
  }
  if (scale == Scale::Linear) {
    for (int i = 0; i < count; ++i) {
      out[static_cast<size_t>(i)] = start_hz + (stop_hz - start_hz) * i / (count - 1);
    }
  } else {
    const double ratio = stop_hz / start_hz;
    for (int i = 0; i < count; ++i) {
      out[static_cast<size_t>(i)] = start_hz * std::pow(ratio, static_cast<double>(i) / (count - 1));
    }
  }
  out.front() = start_hz;
  out.back() = stop_hz;
  return out;
}

RunConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");

  RunConfig c;
  try {
    if (json g = take(root, "geometry"); !g.is_null()) {
      if (!g.is_object()) throw ConfigError("'geometry' must be an object");
      if (json v = take(g, "elements"); !v.is_null()) c.elements = as_int(v, "geometry.elements");
      if (json v = take(g, "radius_m"); !v.is_null()) c.radius_m = as_double(v, "geometry.radius_m");
      if (json v = take(g, "speed_of_sound"); !v.is_null()) {
        c.speed_of_sound = as_double(v, "geometry.speed_of_sound");
      }
      reject_unknown(g, "geometry");
    }
    if (json d = take(root, "design"); !d.is_null()) {
      if (!d.is_object()) throw ConfigError("'design' must be an object");
      if (json v = take(d, "method"); !v.is_null()) c.method = as_string(v, "design.method");
      if (json v = take(d, "order"); !v.is_null()) c.order = as_int(v, "design.order");
      if (json v = take(d, "steering_deg"); !v.is_null()) {
        c.steering_deg = as_double_list(v, "design.steering_deg");
      }
      if (json v = take(d, "null_offsets_deg"); !v.is_null()) {
        c.null_offsets_deg = as_double_list(v, "design.null_offsets_deg");
      }
      if (json v = take(d, "nulls_absolute_deg"); !v.is_null()) {
        c.nulls_absolute_deg = as_double_list(v, "design.nulls_absolute_deg");
      }
      if (json v = take(d, "null_multiplicities"); !v.is_null()) {
        c.null_multiplicities = as_int_list(v, "design.null_multiplicities");
      }
      if (json v = take(d, "i_beta"); !v.is_null()) c.i_beta = as_double_list(v, "design.i_beta");
      reject_unknown(d, "design");
    }
    if (json v = take(root, "sweep_methods"); !v.is_null()) {
      c.sweep_methods = as_string_list(v, "sweep_methods");
    }
    if (json f = take(root, "frequency"); !f.is_null()) {
      if (!f.is_object()) throw ConfigError("'frequency' must be an object");
      if (json v = take(f, "start_hz"); !v.is_null()) c.frequency.start_hz = as_double(v, "frequency.start_hz");
      if (json v = take(f, "stop_hz"); !v.is_null()) c.frequency.stop_hz = as_double(v, "frequency.stop_hz");
      if (json v = take(f, "count"); !v.is_null()) c.frequency.count = as_int(v, "frequency.count");
      if (json v = take(f, "scale"); !v.is_null()) {
        const std::string scale = as_string(v, "frequency.scale");
        if (scale == "linear") {
          c.frequency.scale = FrequencyGrid::Scale::Linear;
        } else if (scale == "log") {
          c.frequency.scale = FrequencyGrid::Scale::Log;
        } else {
          throw ConfigError("frequency.scale must be 'linear' or 'log'");
        }
      }
      reject_unknown(f, "frequency");
    }
    if (json o = take(root, "output"); !o.is_null()) {
      if (!o.is_object()) throw ConfigError("'output' must be an object");
      if (json v = take(o, "dir"); !v.is_null()) c.out_dir = as_string(v, "output.dir");
      if (json v = take(o, "basename"); !v.is_null()) c.basename = as_string(v, "output.basename");
      reject_unknown(o, "output");
    }
    if (json m = take(root, "monte_carlo"); !m.is_null()) {
      if (!m.is_object()) throw ConfigError("'monte_carlo' must be an object");
      if (json v = take(m, "snapshots"); !v.is_null()) c.mc_snapshots = as_int(v, "monte_carlo.snapshots");
      if (json v = take(m, "noise_power"); !v.is_null()) {
        c.mc_noise_power = as_double(v, "monte_carlo.noise_power");
      }
      reject_unknown(m, "monte_carlo");
    }
    if (json v = take(root, "pattern_step_deg"); !v.is_null()) {
      c.pattern_step_deg = as_double(v, "pattern_step_deg");
    }
    if (json v = take(root, "seed"); !v.is_null()) c.seed = as_u64(v, "seed");
    if (json v = take(root, "threads"); !v.is_null()) c.threads = as_int(v, "threads");
    if (json v = take(root, "diagonal_load"); !v.is_null()) {
      c.diagonal_load = as_double(v, "diagonal_load");
    }
    reject_unknown(root, "config");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return c;
}

std::string emit_config_json(const RunConfig& c) {
  JsonWriter w;
  w.begin_object();
  w.key("design");
  w.begin_object();
  w.key("i_beta");
  w.begin_array();
  for (double v : c.i_beta) w.value(v);
  w.end_array();
  w.key("method");
  w.value(c.method);
  w.key("null_multiplicities");
  w.begin_array();
  for (int v : c.null_multiplicities) w.value(v);
  w.end_array();
  w.key("null_offsets_deg");
  w.begin_array();
  for (double v : c.null_offsets_deg) w.value(v);
  w.end_array();
  w.key("nulls_absolute_deg");
  w.begin_array();
  for (double v : c.nulls_absolute_deg) w.value(v);
  w.end_array();
  w.key("order");
  w.value(c.order);
  w.key("steering_deg");
  w.begin_array();
  for (double v : c.steering_deg) w.value(v);
  w.end_array();
  w.end_object();
  w.key("diagonal_load");
  w.value(c.diagonal_load);
  w.key("frequency");
  w.begin_object();
  w.key("count");
  w.value(c.frequency.count);
  w.key("scale");
  w.value(c.frequency.scale == FrequencyGrid::Scale::Linear ? "linear" : "log");
  w.key("start_hz");
  w.value(c.frequency.start_hz);
  w.key("stop_hz");
  w.value(c.frequency.stop_hz);
  w.end_object();
  w.key("geometry");
  w.begin_object();
  w.key("elements");
  w.value(c.elements);
  w.key("radius_m");
  w.value(c.radius_m);
  w.key("speed_of_sound");
  w.value(c.speed_of_sound);
  w.end_object();
  w.key("monte_carlo");
  w.begin_object();
  w.key("noise_power");
  w.value(c.mc_noise_power);
  w.key("snapshots");
  w.value(c.mc_snapshots);
  w.end_object();
  w.key("output");
  w.begin_object();
  w.key("basename");
  w.value(c.basename);
  w.key("dir");
  w.value(c.out_dir);
  w.end_object();
  w.key("pattern_step_deg");
  w.value(c.pattern_step_deg);
  w.key("seed");
  w.value(c.seed);
  w.key("sweep_methods");
  w.begin_array();
  for (const auto& m : c.sweep_methods) w.value(m);
  w.end_array();
  w.key("threads");
  w.value(c.threads);
  w.end_object();
  return w.take();
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.elements = 8;
  c.radius_m = 0.02;
  c.speed_of_sound = 340.0;
  if (name == "fig1") {
    // naive null-constrained design, mis-steered main lobe
    c.method = "Null";
    c.order = 2;
    c.steering_deg = {50.0};
    c.null_offsets_deg = {72.0, 144.0};
    c.frequency = {1000.0, 1000.0, 1, FrequencyGrid::Scale::Linear};
    c.basename = "fig1";
  } else if (name == "fig2") {
    c.method = "DerivCon";
    c.order = 1;
    c.steering_deg = {20.0, 50.0, 120.0, 240.0};
    c.null_offsets_deg = {120.0};
    c.i_beta = {1.0, 0.0, 0.0};
    c.frequency = {1000.0, 1000.0, 1, FrequencyGrid::Scale::Linear};
    c.basename = "fig2";
  } else if (name == "fig3") {
    c.method = "DerivCon";
    c.sweep_methods = {"DerivCon", "Null", "SymNull"};
    c.order = 1;
    c.steering_deg = {50.0};
    c.null_offsets_deg = {120.0};
    c.frequency = {200.0, 8000.0, 100, FrequencyGrid::Scale::Log};
    c.basename = "fig3";
  } else if (name == "fig4") {
    c.method = "DerivCon";
    c.order = 2;
    c.steering_deg = {20.0, 50.0, 120.0, 240.0};
    c.null_offsets_deg = {120.0, 240.0};
    c.i_beta = {1.0, 0.0, -2.0, 0.0, 0.0};
    c.frequency = {1000.0, 1000.0, 1, FrequencyGrid::Scale::Linear};
    c.basename = "fig4";
  } else if (name == "fig5") {
    c.method = "DerivCon";
    c.sweep_methods = {"DerivCon", "Null", "SymNull"};
    c.order = 2;
    c.steering_deg = {50.0};
    c.null_offsets_deg = {120.0, 240.0};
    c.frequency = {200.0, 8000.0, 100, FrequencyGrid::Scale::Log};
    c.basename = "fig5";
  } else {
    throw ConfigError("unknown preset '" + name + "' (available: fig1..fig5)");
  }
  return c;
}

ArrayGeometry make_geometry(const RunConfig& config) {
  return ArrayGeometry(config.elements, config.radius_m, config.speed_of_sound);
}

std::vector<std::string> active_methods(const RunConfig& config) {
  if (!config.sweep_methods.empty()) return config.sweep_methods;
  return {config.method};
}

namespace {

std::vector<int> resolved_multiplicities(const RunConfig& config, size_t null_count) {
  if (config.null_multiplicities.empty()) return std::vector<int>(null_count, 1);
  if (config.null_multiplicities.size() != null_count) {
    throw ConfigError("null_multiplicities must match the null list length");
  }
  for (int q : config.null_multiplicities) {
    if (q < 1) throw ConfigError("null multiplicities must be >= 1");
  }
  return config.null_multiplicities;
}

}  // namespace

DesignSpec make_design_spec(const RunConfig& config, const std::string& method_name,
                            double steering_deg) {
  const auto method = method_from_string(method_name);
  if (!method) {
    throw ConfigError("unknown method '" + method_name + "' (DerivCon, Null, SymNull)");
  }
  if (!config.null_offsets_deg.empty() && !config.nulls_absolute_deg.empty()) {
    throw ConfigError("give null_offsets_deg or nulls_absolute_deg, not both");
  }

  DesignSpec spec;
  spec.method = *method;
  spec.order = config.order;
  spec.steering = deg2rad(steering_deg);

  if (!config.nulls_absolute_deg.empty()) {
    const auto mults = resolved_multiplicities(config, config.nulls_absolute_deg.size());
    for (size_t i = 0; i < config.nulls_absolute_deg.size(); ++i) {
      spec.nulls.push_back(NullSpec{wrap_angle(deg2rad(config.nulls_absolute_deg[i])), mults[i]});
    }
  } else if (!config.null_offsets_deg.empty()) {
    const auto mults = resolved_multiplicities(config, config.null_offsets_deg.size());
    if (spec.method == DesignMethod::SymNull) {
      // each offset becomes the mirrored pair about the steering axis
      for (size_t i = 0; i < config.null_offsets_deg.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
          const double angle = wrap_angle(spec.steering + sign * deg2rad(config.null_offsets_deg[i]));
          bool duplicate = false;
          for (const auto& existing : spec.nulls) {
            if (std::abs(angle_difference(existing.angle, angle)) < 1e-9) {
              if (existing.multiplicity != mults[i]) {
                throw ConfigError("conflicting multiplicities for coincident SymNull nulls");
              }
              duplicate = true;
              break;
            }
          }
          if (!duplicate) spec.nulls.push_back(NullSpec{angle, mults[i]});
        }
      }
    } else {
      std::vector<double> offsets_rad;
      offsets_rad.reserve(config.null_offsets_deg.size());
      for (double deg : config.null_offsets_deg) offsets_rad.push_back(deg2rad(deg));
      const auto angles = derived_null_angles(spec.steering, offsets_rad);
      for (size_t i = 0; i < angles.size(); ++i) {
        spec.nulls.push_back(NullSpec{angles[i], mults[i]});
      }
    }
  }

  if (spec.method == DesignMethod::DerivCon) spec.i_beta = config.i_beta;
  return spec;
}

void validate_config(const RunConfig& config) {
  if (config.elements < 1) throw ConfigError("geometry.elements must be >= 1");
  if (!(config.radius_m > 0.0)) throw ConfigError("geometry.radius_m must be positive");
  if (!(config.speed_of_sound > 0.0)) throw ConfigError("geometry.speed_of_sound must be positive");
  if (!(config.frequency.start_hz > 0.0)) throw ConfigError("frequency.start_hz must be positive");
  if (config.frequency.count < 1) throw ConfigError("frequency.count must be >= 1");
  if (config.frequency.stop_hz < config.frequency.start_hz) {
    throw ConfigError("frequency.stop_hz must be >= frequency.start_hz");
  }
  if (config.frequency.count > 1 && !(config.frequency.stop_hz > config.frequency.start_hz)) {
    throw ConfigError("a multi-point frequency grid needs stop_hz > start_hz");
  }
  if (config.steering_deg.empty()) throw ConfigError("design.steering_deg must not be empty");
  if (!(config.pattern_step_deg > 0.0) || config.pattern_step_deg > 360.0) {
    throw ConfigError("pattern_step_deg must be in (0, 360]");
  }
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
  if (config.mc_snapshots < 1) throw ConfigError("monte_carlo.snapshots must be >= 1");
  if (config.mc_noise_power < 0.0) throw ConfigError("monte_carlo.noise_power must be >= 0");
  if (config.diagonal_load < 0.0) throw ConfigError("diagonal_load must be >= 0");

  const ArrayGeometry geom = make_geometry(config);
  for (const auto& method : active_methods(config)) {
    for (double steering : config.steering_deg) {
      const DesignSpec spec = make_design_spec(config, method, steering);
      check_feasibility(geom, spec);
    }
  }
}

}  // namespace dmabeam
