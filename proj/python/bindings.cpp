#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hberry/error.hpp"
#include "hberry/loop_io.hpp"
#include "hberry/phases.hpp"
#include "hberry/sampling.hpp"
#include "hberry/spectral.hpp"
#include "hberry/verify.hpp"
#include "hberry/wavefield.hpp"

namespace py = pybind11;
using namespace hberry;

namespace {

FockIndex to_nu(const std::array<unsigned, 3>& n) { return FockIndex{n}; }

ParameterLoop loop_from_text(const std::string& text) {
  try {
    return loop_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

py::dict terms_dict(const BerryTerms& t) {
  py::dict d;
  d["plane"] = t.plane;
  d["axial"] = t.axial;
  d["magnetic"] = t.magnetic;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Berry phases and Hannay angles for quadratic Hartree-type systems in a uniform magnetic field";

  // args are (code, message, s)
  static PyObject* error = PyErr_NewException("hberry._core.HberryError", PyExc_RuntimeError, nullptr);
  m.add_object("HberryError", py::handle(error));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(std::string(to_string(e.code())), e.what(),
                                      e.where() ? py::cast(*e.where()) : py::none());
      PyErr_SetObject(error, args.ptr());
    }
  });

  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init<>())
      .def_readwrite("hbar", &PhysicalConstants::hbar)
      .def_readwrite("e_charge", &PhysicalConstants::e_charge)
      .def_readwrite("c_light", &PhysicalConstants::c_light)
      .def_readwrite("kappa_tilde", &PhysicalConstants::kappa_tilde);

  py::class_<ParameterSet>(m, "ParameterSet")
      .def(py::init<>())
      .def_readwrite("m", &ParameterSet::m)
      .def_readwrite("k", &ParameterSet::k)
      .def_readwrite("rho", &ParameterSet::rho)
      .def_readwrite("H", &ParameterSet::H)
      .def_readwrite("a", &ParameterSet::a)
      .def_readwrite("b", &ParameterSet::b)
      .def_readwrite("c", &ParameterSet::c);

  py::class_<Frequencies>(m, "Frequencies")
      .def_readonly("omega_c", &Frequencies::omega_c)
      .def_readonly("omega_a", &Frequencies::omega_a)
      .def_readonly("Omega", &Frequencies::Omega)
      .def_readonly("Omega_nl", &Frequencies::Omega_nl);

  py::class_<ParameterLoop>(m, "ParameterLoop")
      .def_static("from_json", &loop_from_text, py::arg("text"))
      .def_static("load", &load_loop, py::arg("path"))
      .def("to_json", [](const ParameterLoop& l) { return loop_to_json(l).dump(); })
      .def("digest", &loop_digest)
      .def_property_readonly("period", &ParameterLoop::period)
      .def_property_readonly("constants", &ParameterLoop::constants)
      .def("with_period", &ParameterLoop::with_period)
      .def("with_constants", &ParameterLoop::with_constants)
      .def("with_latitude", &with_latitude, py::arg("theta0"))
      .def("reparameterized", &ParameterLoop::reparameterized, py::arg("epsilon"), py::arg("harmonic") = 1)
      .def("sample", [](const ParameterLoop& l, double s) { return l.sample(s).value; });

  m.def("latitude_loop", &latitude_loop, py::arg("theta0"), py::arg("H_mag") = 2.0, py::arg("m") = 1.0,
        py::arg("k") = 2.0, py::arg("rho") = 0.0, py::arg("kappa_tilde") = 0.0, py::arg("T") = 100.0);

  m.def("frequencies", &frequencies, py::arg("R"), py::arg("constants") = PhysicalConstants{});
  m.def(
      "eigenvalue",
      [](const ParameterSet& R, std::array<unsigned, 3> nu, const PhysicalConstants& c) {
        return eigenvalue(R, to_nu(nu), c);
      },
      py::arg("R"), py::arg("nu") = std::array<unsigned, 3>{0, 0, 0}, py::arg("constants") = PhysicalConstants{});

  m.def(
      "berry_phase",
      [](const ParameterLoop& loop, std::array<unsigned, 3> nu) {
        const PhaseResult r = berry_phase(loop, to_nu(nu));
        py::dict d;
        d["T"] = r.T;
        d["dynamic"] = r.dynamic;
        d["berry"] = r.berry;
        d["terms"] = terms_dict(r.terms);
        return d;
      },
      py::arg("loop"), py::arg("nu") = std::array<unsigned, 3>{0, 0, 0});

  m.def(
      "hannay_angles",
      [](const ParameterLoop& loop) {
        const HannayAngles h = hannay_angles(loop);
        py::dict d;
        d["theta"] = h.theta;
        d["terms"] = terms_dict(h.terms);
        d["solid_angle"] = h.solid_angle;
        d["solid_angle_mismatch"] = h.solid_angle_mismatch;
        return d;
      },
      py::arg("loop"));

  m.def("solid_angle", [](const ParameterLoop& loop) { return solid_angle(loop); }, py::arg("loop"));

  m.def(
      "extract_phase",
      [](const ParameterLoop& loop, int mode, double T, int samples) {
        PhaseExtraction e;
        {
          py::gil_scoped_release release;
          e = extract_phase_numeric(loop, mode, T, {}, samples);
        }
        py::dict d;
        d["estimate"] = e.estimate;
        d["closed_form"] = e.closed_form;
        d["max_modulus_deviation"] = e.max_modulus_deviation;
        d["adiabaticity_warning"] = e.adiabaticity_warning;
        return d;
      },
      py::arg("loop"), py::arg("mode"), py::arg("T"), py::arg("samples") = 1024);

  m.def(
      "fock_state",
      [](const ParameterSet& R, std::array<unsigned, 3> nu, int points, double half_width,
         const PhysicalConstants& c) {
        SpatialGrid grid;
        grid.points = {points, points, points};
        grid.lower = {-half_width, -half_width, -half_width};
        grid.upper = {half_width, half_width, half_width};
        ComplexField f;
        {
          py::gil_scoped_release release;
          f = fock_state(R, to_nu(nu), grid, c);
        }
        // values are x fastest, so the C-ordered array is indexed [z, y, x]
        py::array_t<cplx> out({points, points, points});
        std::copy(f.values.begin(), f.values.end(), out.mutable_data());
        return py::make_tuple(out, grid.cell_volume());
      },
      py::arg("R"), py::arg("nu"), py::arg("points") = 32, py::arg("half_width") = 6.0,
      py::arg("constants") = PhysicalConstants{});

  m.def(
      "verify_suite",
      [](const std::filesystem::path& suite) {
        SuiteReport r;
        {
          py::gil_scoped_release release;
          r = run_suite(suite);
        }
        return r.to_json().dump();
      },
      py::arg("suite"));
}
