#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmabeam/constraints.hpp"
#include "dmabeam/errors.hpp"
#include "dmabeam/geometry.hpp"
#include "dmabeam/metrics.hpp"
#include "dmabeam/solver.hpp"
#include "dmabeam/version.hpp"

namespace py = pybind11;
using namespace dmabeam;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steerable differential beamformer design for uniform circular arrays";
  m.attr("__version__") = kVersion;
  m.attr("NOISE_ALGORITHM") = kNoiseAlgorithm;

  // exception translation; base first so subclasses take precedence
  py::register_exception<Error>(m, "Error");
  py::register_exception<SpecError>(m, "SpecError");
  py::register_exception<FeasibilityError>(m, "FeasibilityError");
  py::register_exception<RankError>(m, "RankError");
  py::register_exception<ZeroFilterError>(m, "ZeroFilterError");
  py::register_exception<NonPositiveDenominator>(m, "NonPositiveDenominator");

  m.def("deg2rad", &deg2rad, py::arg("deg"));
  m.def("rad2deg", &rad2deg, py::arg("rad"));
  m.def("wrap_angle", &wrap_angle, py::arg("theta"), "Wrap an angle to [0, 2*pi).");

  py::class_<ArrayGeometry>(m, "ArrayGeometry")
      .def(py::init<int, double, double>(), py::arg("element_count"), py::arg("radius"),
           py::arg("speed_of_sound") = 340.0)
      .def_readonly("element_count", &ArrayGeometry::element_count)
      .def_readonly("radius", &ArrayGeometry::radius)
      .def_readonly("speed_of_sound", &ArrayGeometry::speed_of_sound)
      .def("element_angle", &ArrayGeometry::element_angle, py::arg("index"))
      .def("phase_scale", &ArrayGeometry::phase_scale, py::arg("omega"))
      .def("__repr__", [](const ArrayGeometry& g) {
        return "ArrayGeometry(element_count=" + std::to_string(g.element_count) +
               ", radius=" + std::to_string(g.radius) + ")";
      });

  py::class_<SteeringVector>(m, "SteeringVector")
      .def_readonly("values", &SteeringVector::values)
      .def_readonly("omega", &SteeringVector::omega)
      .def_readonly("angle", &SteeringVector::angle)
      .def_readonly("derivative_order", &SteeringVector::derivative_order);

  m.def("steering_vector", &steering_vector, py::arg("geom"), py::arg("omega"), py::arg("theta"));
  m.def("steering_vector_derivative", &steering_vector_derivative, py::arg("geom"),
        py::arg("omega"), py::arg("theta"), py::arg("order"));
  m.def("diffuse_coherence", &diffuse_coherence, py::arg("geom"), py::arg("omega"),
        "Spherically isotropic noise coherence matrix.");

  py::enum_<DesignMethod>(m, "DesignMethod")
      .value("DerivCon", DesignMethod::DerivCon)
      .value("Null", DesignMethod::Null)
      .value("SymNull", DesignMethod::SymNull);

  py::class_<NullSpec>(m, "NullSpec")
      .def(py::init<double, int>(), py::arg("angle"), py::arg("multiplicity") = 1)
      .def_readwrite("angle", &NullSpec::angle)
      .def_readwrite("multiplicity", &NullSpec::multiplicity);

  py::class_<DesignSpec>(m, "DesignSpec")
      .def(py::init([](DesignMethod method, int order, double steering,
                       std::vector<NullSpec> nulls, std::vector<double> i_beta) {
             DesignSpec spec;
             spec.method = method;
             spec.order = order;
             spec.steering = steering;
             spec.nulls = std::move(nulls);
             spec.i_beta = std::move(i_beta);
             return spec;
           }),
           py::arg("method"), py::arg("order"), py::arg("steering"),
           py::arg("nulls") = std::vector<NullSpec>{}, py::arg("i_beta") = std::vector<double>{})
      .def_readwrite("method", &DesignSpec::method)
      .def_readwrite("order", &DesignSpec::order)
      .def_readwrite("steering", &DesignSpec::steering)
      .def_readwrite("nulls", &DesignSpec::nulls)
      .def_readwrite("i_beta", &DesignSpec::i_beta);

  m.def("derived_null_angles", &derived_null_angles, py::arg("steering"), py::arg("offsets"));
  m.def("default_i_beta", &default_i_beta, py::arg("order"), py::arg("null_rows"));

  py::class_<RowLabel> row_label(m, "RowLabel");
  py::enum_<RowLabel::Kind>(row_label, "Kind")
      .value("Distortionless", RowLabel::Kind::Distortionless)
      .value("Derivative", RowLabel::Kind::Derivative)
      .value("Null", RowLabel::Kind::Null);
  row_label.def_readonly("kind", &RowLabel::kind)
      .def_readonly("angle", &RowLabel::angle)
      .def_readonly("order", &RowLabel::order);

  py::class_<ConstraintSystem>(m, "ConstraintSystem")
      .def_readonly("matrix", &ConstraintSystem::matrix)
      .def_readonly("rhs", &ConstraintSystem::rhs)
      .def_readonly("row_labels", &ConstraintSystem::row_labels)
      .def_readonly("omega", &ConstraintSystem::omega)
      .def_readonly("steering", &ConstraintSystem::steering)
      .def_readonly("spec_digest", &ConstraintSystem::spec_digest)
      .def_property_readonly("rows", &ConstraintSystem::rows)
      .def_property_readonly("sensors", &ConstraintSystem::sensors);

  m.def("check_feasibility", &check_feasibility, py::arg("geom"), py::arg("spec"));
  m.def("build_derivcon", &build_derivcon, py::arg("geom"), py::arg("omega"), py::arg("spec"));
  m.def("build_null", &build_null, py::arg("geom"), py::arg("omega"), py::arg("spec"));
  m.def("build_symnull", &build_symnull, py::arg("geom"), py::arg("omega"), py::arg("spec"));
  m.def("build_constraints", &build_constraints, py::arg("geom"), py::arg("omega"), py::arg("spec"));
  m.def("spec_digest", &spec_digest, py::arg("geom"), py::arg("spec"));

  py::class_<Filter>(m, "Filter")
      .def(py::init([](Eigen::VectorXcd coefficients, double omega, double steering) {
             Filter f;
             f.coefficients = std::move(coefficients);
             f.omega = omega;
             f.steering = steering;
             f.spec_digest = "manual";
             return f;
           }),
           py::arg("coefficients"), py::arg("omega"), py::arg("steering"))
      .def_readonly("coefficients", &Filter::coefficients)
      .def_readonly("omega", &Filter::omega)
      .def_readonly("steering", &Filter::steering)
      .def_readonly("spec_digest", &Filter::spec_digest)
      .def_readonly("residual", &Filter::residual);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("diagonal_load", &SolverOptions::diagonal_load)
      .def_readwrite("condition_limit", &SolverOptions::condition_limit)
      .def_readwrite("residual_limit", &SolverOptions::residual_limit);

  m.def("solve_max_wng", &solve_max_wng, py::arg("system"), py::arg("options") = SolverOptions{},
        "Minimum-norm filter satisfying the constraint system.");
  m.def("gram_condition", &gram_condition, py::arg("system"));

  py::class_<BeampatternSamples>(m, "BeampatternSamples")
      .def_readonly("angles", &BeampatternSamples::angles)
      .def_readonly("values", &BeampatternSamples::values)
      .def_readonly("omega", &BeampatternSamples::omega)
      .def_readonly("steering", &BeampatternSamples::steering);

  py::class_<Gain>(m, "Gain")
      .def_readonly("linear", &Gain::linear)
      .def_readonly("db", &Gain::db)
      .def("__repr__", [](const Gain& g) {
        return "Gain(linear=" + std::to_string(g.linear) + ", db=" + std::to_string(g.db) + ")";
      });

  py::class_<IdealPattern>(m, "IdealPattern")
      .def_readonly("order", &IdealPattern::order)
      .def_readonly("coefficients", &IdealPattern::coefficients)
      .def_readonly("steering", &IdealPattern::steering);

  m.def("make_angle_grid", &make_angle_grid, py::arg("step"));
  m.def("beampattern", &beampattern, py::arg("filter"), py::arg("geom"), py::arg("grid"));
  m.def("wng", &wng, py::arg("filter"), py::arg("geom"));
  m.def("df", &df, py::arg("filter"), py::arg("geom"));
  m.def("make_ideal_pattern", &make_ideal_pattern, py::arg("coefficients"), py::arg("steering"));
  m.def("ideal_pattern_eval", &ideal_pattern_eval, py::arg("pattern"), py::arg("theta"));
  m.def("main_lobe_direction", &main_lobe_direction, py::arg("samples"));
  m.def("pattern_derivative_at", &pattern_derivative_at, py::arg("filter"), py::arg("geom"),
        py::arg("theta"), py::arg("order"));
  m.def("simulate_snapshot", &simulate_snapshot, py::arg("geom"), py::arg("omega"),
        py::arg("steering"), py::arg("signal_amplitude"), py::arg("noise_power"), py::arg("seed"));
  m.def("monte_carlo_output_noise_power", &monte_carlo_output_noise_power, py::arg("filter"),
        py::arg("geom"), py::arg("noise_power"), py::arg("snapshots"), py::arg("seed"));
}
