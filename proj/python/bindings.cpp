#include "nullrad/linrad.hpp"
#include "nullrad/radfield.hpp"
#include "nullrad/scatter.hpp"
#include "nullrad/slwave.hpp"
#include "nullrad/verify.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nullrad;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array &a) {
  if (a.ndim() != 1)
    throw py::value_error("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(std::span<const double> v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict energy_dict(const EnergyReport &e) {
  py::dict d;
  d["kinetic"] = e.kinetic;
  d["gradient"] = e.gradient;
  d["potential"] = e.potential;
  d["total"] = e.total;
  return d;
}

ExtractionOptions extraction(double buffer) {
  ExtractionOptions o;
  o.buffer = buffer;
  return o;
}

} // namespace

PYBIND11_MODULE(_nullrad, m) {
  m.doc() = "Radiation fields and scattering for the radial energy-critical wave equation";

  // Instances carry the failure category as .kind.
  static PyObject *error_type =
      PyErr_NewException("nullrad.NullradError", PyExc_RuntimeError, nullptr);
  m.attr("NullradError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const Error &e) {
      py::object inst = py::handle(error_type)(e.what());
      inst.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  py::class_<Nonlinearity>(m, "Nonlinearity")
      .def_static("quintic", &Nonlinearity::quintic, py::arg("c") = 1.0)
      .def_static("linear", &Nonlinearity::linear)
      .def_static("custom", &Nonlinearity::custom, py::arg("name"), py::arg("f0"),
                  py::arg("f0_prime"),
                  "f(u) = u f0(u^2); the callables are invoked from the solvers")
      .def_property_readonly("name", &Nonlinearity::name)
      .def_property_readonly("coupling", &Nonlinearity::coupling)
      .def_property_readonly("is_linear", &Nonlinearity::is_linear)
      .def("f", &Nonlinearity::f)
      .def("fprime", &Nonlinearity::fprime)
      .def("P", &Nonlinearity::P);

  py::class_<RadialProfile>(m, "RadialProfile")
      .def(py::init([](double dr, const Array &v) { return RadialProfile(dr, to_vector(v)); }),
           py::arg("dr"), py::arg("values"))
      .def_property_readonly("dr", &RadialProfile::dr)
      .def_property_readonly("r_max", &RadialProfile::r_max)
      .def_property_readonly("values", [](const RadialProfile &p) { return to_array(p.values()); })
      .def_property_readonly("r", [](const RadialProfile &p) {
        Array a(static_cast<py::ssize_t>(p.size()));
        for (std::size_t j = 0; j < p.size(); ++j)
          a.mutable_data()[j] = p.r(j);
        return a;
      })
      .def("at", &RadialProfile::at)
      .def("__len__", &RadialProfile::size);

  py::class_<RadiationProfile>(m, "RadiationProfile")
      .def(py::init([](double s_min, double ds, const Array &v) {
             return RadiationProfile(s_min, ds, to_vector(v));
           }),
           py::arg("s_min"), py::arg("ds"), py::arg("values"))
      .def_property_readonly("s_min", &RadiationProfile::s_min)
      .def_property_readonly("s_max", &RadiationProfile::s_max)
      .def_property_readonly("ds", &RadiationProfile::ds)
      .def_property_readonly("values", [](const RadiationProfile &F) { return to_array(F.values()); })
      .def_property_readonly("s", [](const RadiationProfile &F) {
        Array a(static_cast<py::ssize_t>(F.size()));
        for (std::size_t k = 0; k < F.size(); ++k)
          a.mutable_data()[k] = F.s(k);
        return a;
      })
      .def("at", &RadiationProfile::at)
      .def("support_min", &RadiationProfile::support_min, py::arg("rel_tol") = 1e-8)
      .def("__len__", &RadiationProfile::size);

  py::class_<CauchyData>(m, "CauchyData")
      .def(py::init([](double dr, const Array &phi, const Array &psi, double R) {
             return CauchyData(RadialProfile(dr, to_vector(phi)),
                               RadialProfile(dr, to_vector(psi)), R);
           }),
           py::arg("dr"), py::arg("phi"), py::arg("psi"), py::arg("support_radius"))
      .def_static("sample",
                  [](const std::function<double(double)> &phi,
                     const std::function<double(double)> &psi, double dr, double R) {
                    const double r_max = R + 2.0 * dr;
                    return CauchyData(RadialProfile::sample(phi, dr, r_max),
                                      RadialProfile::sample(psi, dr, r_max), R);
                  },
                  py::arg("phi"), py::arg("psi"), py::arg("dr"), py::arg("support_radius"),
                  "Samples phi and psi on [0, R + 2 dr]; both must vanish for r >= R.")
      .def_readonly("phi", &CauchyData::phi)
      .def_readonly("psi", &CauchyData::psi)
      .def_readonly("support_radius", &CauchyData::support_radius)
      .def_property_readonly("dr", &CauchyData::dr)
      .def("scaled", &CauchyData::scaled)
      .def("time_reversed", &CauchyData::time_reversed)
      .def("measured_support", &CauchyData::measured_support, py::arg("rel_tol") = 1e-8);

  m.def("energy", [](const CauchyData &d, const Nonlinearity &nl) {
    return energy_dict(energy(d, nl));
  });
  m.def("linear_energy_norm", &linear_energy_norm);
  m.def("linear_energy_distance", &linear_energy_distance);
  m.def("l2_norm_r3", &l2_norm_r3);
  m.def("l2_norm_cylinder", &l2_norm_cylinder);
  m.def("l2_distance", &l2_distance);

  m.def("linear_radiation", &linear_radiation);
  m.def("linear_radiation_minus", &linear_radiation_minus);
  m.def("inverse_linear_radiation",
        [](const RadiationProfile &F, double mean_tol) {
          InverseLinearOptions o;
          o.mean_tol = mean_tol;
          return inverse_linear_radiation(F, o);
        },
        py::arg("F"), py::arg("mean_tol") = 1e-5);

  m.def("forward_radiation",
        [](const CauchyData &d, const Nonlinearity &nl, double T, double buffer) {
          return forward_radiation(d, nl, T, extraction(buffer)).F;
        },
        py::arg("data"), py::arg("nl"), py::arg("T") = 8.0, py::arg("buffer") = 0.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("backward_radiation",
        [](const CauchyData &d, const Nonlinearity &nl, double T, double buffer) {
          return backward_radiation(d, nl, T, extraction(buffer)).F;
        },
        py::arg("data"), py::arg("nl"), py::arg("T") = 8.0, py::arg("buffer") = 0.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("forward_radiation_goursat",
        [](const CauchyData &d, const Nonlinearity &nl, double T_c) {
          return forward_radiation_goursat(solve_goursat(d, nl, T_c, d.dr()), d.dr());
        },
        py::arg("data"), py::arg("nl"), py::arg("T_c") = 8.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("forward_radiation_duhamel",
        [](const CauchyData &d, const Nonlinearity &nl, double T) {
          const SolutionField sol = solve_tr(prepare_domain(d, T), nl, T);
          return forward_radiation_duhamel(d, sol, nl).F;
        },
        py::arg("data"), py::arg("nl"), py::arg("T") = 8.0,
        py::call_guard<py::gil_scoped_release>());
  m.def("energy_history",
        [](const CauchyData &d, const Nonlinearity &nl, double T) {
          DiagnosticSeries ds;
          {
            py::gil_scoped_release release;
            ds = diagnostics(solve_tr(prepare_domain(d, T), nl, T), nl);
          }
          std::vector<double> total;
          for (const EnergyReport &e : ds.slices)
            total.push_back(e.total);
          return py::make_tuple(to_array(ds.t), to_array(total));
        },
        py::arg("data"), py::arg("nl"), py::arg("T") = 8.0,
        "Times and total energies of the (t, r) solution.");

  py::class_<ScatterConfig>(m, "ScatterConfig")
      .def(py::init<>())
      .def_readwrite("delta", &ScatterConfig::delta)
      .def_readwrite("T0_max", &ScatterConfig::T0_max)
      .def_readwrite("fp_tol", &ScatterConfig::fp_tol)
      .def_readwrite("max_outer", &ScatterConfig::max_outer)
      .def_readwrite("inner_duhamel_iters", &ScatterConfig::inner_duhamel_iters)
      .def_readwrite("buffer", &ScatterConfig::buffer)
      .def_readwrite("T", &ScatterConfig::T)
      .def_readwrite("T_A", &ScatterConfig::T_A)
      .def_readwrite("mean_tol", &ScatterConfig::mean_tol)
      .def_readwrite("seed", &ScatterConfig::seed);

  py::class_<InverseResult>(m, "InverseResult")
      .def_readonly("data", &InverseResult::data)
      .def_readonly("residual", &InverseResult::residual)
      .def_readonly("mean_defect", &InverseResult::mean_defect)
      .def_readonly("history", &InverseResult::history)
      .def_readonly("outer_iterations", &InverseResult::outer_iterations)
      .def_readonly("T0", &InverseResult::T0)
      .def_readonly("seed_used", &InverseResult::seed_used);

  py::class_<ScatteringResult>(m, "ScatteringResult")
      .def_readonly("AF", &ScatteringResult::AF)
      .def_readonly("past_data", &ScatteringResult::past_data)
      .def_readonly("unitarity_defect", &ScatteringResult::unitarity_defect)
      .def_readonly("tail_bound", &ScatteringResult::tail_bound);

  py::class_<ScatteringSResult>(m, "ScatteringSResult")
      .def_readonly("data", &ScatteringSResult::data)
      .def_readonly("energy_norm_defect", &ScatteringSResult::energy_norm_defect)
      .def_readonly("unitarity_defect", &ScatteringSResult::unitarity_defect);

  const ScatterConfig dflt;
  m.def("plus_map", &plus_map, py::arg("data"), py::arg("nl"), py::arg("T"),
        py::arg("buffer"), py::arg("k_lo"), py::arg("k_hi"),
        py::call_guard<py::gil_scoped_release>());
  m.def("inverse_radiation", &inverse_radiation, py::arg("F"), py::arg("nl"),
        py::arg("cfg") = dflt, py::call_guard<py::gil_scoped_release>());
  m.def("wave_operator_plus",
        [](const CauchyData &d, const Nonlinearity &nl, const ScatterConfig &c) {
          return wave_operator_plus(d, nl, c).inverse.data;
        },
        py::arg("data"), py::arg("nl"), py::arg("cfg") = dflt,
        py::call_guard<py::gil_scoped_release>());
  m.def("scattering_A", &scattering_A, py::arg("F"), py::arg("nl"), py::arg("cfg") = dflt,
        py::call_guard<py::gil_scoped_release>());
  m.def("scattering_A_formula", &scattering_A_formula, py::arg("F"), py::arg("nl"),
        py::arg("cfg") = dflt, py::call_guard<py::gil_scoped_release>());
  m.def("scattering_S", &scattering_S, py::arg("data"), py::arg("nl"), py::arg("cfg") = dflt,
        py::call_guard<py::gil_scoped_release>());
  m.def("reflect", &reflect);

  m.def("selftest_json", [] { return selftest().to_json().dump(); },
        "The quick example battery as a JSON string.");
}
