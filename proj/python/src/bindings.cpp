// Copyright 2026 The gmoe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Density matrices cross as complex numpy arrays; reports
// cross as dicts built from their JSON form.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gmoe/cascade.hpp"
#include "gmoe/channels.hpp"
#include "gmoe/error.hpp"
#include "gmoe/gaussian.hpp"
#include "gmoe/lindblad.hpp"
#include "gmoe/optimizer.hpp"
#include "gmoe/sampling.hpp"
#include "gmoe/serialize.hpp"

namespace py = pybind11;
using namespace gmoe;

namespace {

py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ChannelSpec as_channel(const py::object& obj) {
  if (py::isinstance<ChannelSpec>(obj)) return obj.cast<ChannelSpec>();
  if (py::isinstance<py::str>(obj)) return parse_channel_argument(obj.cast<std::string>());
  if (py::isinstance<py::dict>(obj)) {
    const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return parse_channel_argument(text);
  }
  throw Error(ErrorKind::SpecError, "channel must be a ChannelSpec, a dict or a string");
}

DensityOperator as_state(const CMatrix& m) { return DensityOperator(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Output entropy of one-mode Gaussian channels";

  static py::handle error_type =
      py::exception<Error>(m, "GmoeError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = error_type(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::enum_<ChannelClass>(m, "ChannelClass")
      .value("C_att", ChannelClass::C_att)
      .value("C_amp", ChannelClass::C_amp)
      .value("B2", ChannelClass::B2)
      .value("D", ChannelClass::D)
      .value("A1", ChannelClass::A1)
      .value("A2", ChannelClass::A2)
      .value("B1", ChannelClass::B1);

  py::class_<ChannelSpec>(m, "ChannelSpec")
      .def_static("attenuator", &ChannelSpec::attenuator, py::arg("eta"), py::arg("N") = 0.0)
      .def_static("amplifier", &ChannelSpec::amplifier, py::arg("kappa2"), py::arg("N") = 0.0)
      .def_static("class_d", &ChannelSpec::class_d, py::arg("kappa2"), py::arg("N") = 0.0)
      .def_static("b2", &ChannelSpec::b2, py::arg("t"))
      .def_static("a1", &ChannelSpec::a1, py::arg("N"))
      .def_static("a2", &ChannelSpec::a2, py::arg("N"))
      .def_static("b1", &ChannelSpec::b1)
      .def_static("parse", [](const std::string& s) { return parse_channel_argument(s); })
      .def_readonly("cls", &ChannelSpec::cls)
      .def_property_readonly("kappa2", &ChannelSpec::kappa2_eff)
      .def_property_readonly("c", &ChannelSpec::c_eff)
      .def("to_dict", [](const ChannelSpec& ch) { return to_python(to_json(ch)); })
      .def("__repr__", &ChannelSpec::describe);

  m.def("g", &g_function, py::arg("N"));
  m.def("g_inverse", &g_inverse, py::arg("S"));
  m.def("gibbs_cutoff", &gibbs_cutoff, py::arg("N"), py::arg("mass") = 1e-13);
  m.def(
      "gibbs_state", [](double n, int d) { return gibbs_state(n, d).matrix(); }, py::arg("N"), py::arg("d"));
  m.def(
      "entropy", [](const CMatrix& rho) { return von_neumann_entropy(rho); }, py::arg("rho"));
  m.def(
      "mean_photon", [](const CMatrix& rho) { return mean_photon(rho); }, py::arg("rho"));
  m.def(
      "relative_entropy", [](const CMatrix& a, const CMatrix& b) { return relative_entropy(a, b); },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "trace_distance",
      [](const CMatrix& a, const CMatrix& b) { return trace_distance(as_state(a), as_state(b)); }, py::arg("a"),
      py::arg("b"));
  m.def(
      "sample_fixed_entropy_state",
      [](double S0, int d, std::uint64_t seed) { return sample_fixed_entropy_state(S0, d, seed).matrix(); },
      py::arg("S0"), py::arg("d"), py::arg("seed") = 0);

  m.def(
      "apply_channel",
      [](const CMatrix& rho, const py::object& ch, int env_cutoff) {
        ChannelOptions opts;
        opts.env_cutoff = env_cutoff;
        return apply_channel(as_state(rho), as_channel(ch), opts).state.matrix();
      },
      py::arg("rho"), py::arg("channel"), py::arg("env_cutoff") = 0);
  m.def(
      "predicted_output_photons",
      [](const py::object& ch, double n_in, double q2) { return predicted_output_photons(as_channel(ch), n_in, q2); },
      py::arg("channel"), py::arg("n_in"), py::arg("second_moment_q"));

  m.def(
      "run_cascade",
      [](const CMatrix& rho, int k, double N0, int d) { return to_python(to_json(run_cascade(as_state(rho), k, N0, d))); },
      py::arg("rho"), py::arg("k"), py::arg("N0"), py::arg("d"));

  m.def(
      "entropy_rate",
      [](double gamma_plus, double gamma_minus, const CMatrix& rho) {
        return entropy_rate(LindbladGenerator{gamma_plus, gamma_minus}, as_state(rho));
      },
      py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("rho"));
  m.def(
      "evolve",
      [](double gamma_plus, double gamma_minus, const CMatrix& rho, double T) {
        return evolve(LindbladGenerator{gamma_plus, gamma_minus}, as_state(rho), T).matrix();
      },
      py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("rho"), py::arg("T"));
  m.def(
      "infinitesimal_check",
      [](double gamma_plus, double gamma_minus, double S0, int samples, std::uint64_t seed, int cutoff) {
        return to_python(to_json(
            infinitesimal_conjecture_check(LindbladGenerator{gamma_plus, gamma_minus}, S0, samples, seed, cutoff)));
      },
      py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("S0"), py::arg("samples") = 8, py::arg("seed") = 0,
      py::arg("cutoff") = 0);

  m.def(
      "gaussian_output_entropy",
      [](const py::object& ch, double var_q, double var_p) {
        return gaussian_entropy(apply_gaussian_channel(GaussianState::diagonal(var_q, var_p), as_channel(ch)));
      },
      py::arg("channel"), py::arg("var_q"), py::arg("var_p"));
  m.def(
      "infimum_table",
      [](const py::object& ch, double S0, const std::vector<double>& sigmas) {
        Json rows = Json::array();
        for (const auto& r : infimum_limit_experiment(as_channel(ch), S0, sigmas)) rows.push_back(to_json(r));
        return to_python(rows);
      },
      py::arg("channel"), py::arg("S0"), py::arg("sigmas"));

  m.def(
      "conjectured_minimum", [](const py::object& ch, double S0) { return conjectured_minimum(as_channel(ch), S0); },
      py::arg("channel"), py::arg("S0"));
  m.def(
      "minimize_output_entropy",
      [](const py::object& ch, double S0, int d, int restarts, int iterations, std::uint64_t seed,
         const std::string& gradient) {
        OptimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.iterations = iterations;
        cfg.seed = seed;
        if (gradient == "fd") cfg.gradient = GradientMode::FiniteDifference;
        else if (gradient != "analytic") throw Error(ErrorKind::SpecError, "gradient must be 'analytic' or 'fd'");
        const ChannelSpec spec = as_channel(ch);
        OptimizationReport rep = [&] {
          py::gil_scoped_release release;
          return minimize_output_entropy(spec, S0, d, cfg);
        }();
        return to_python(to_json(rep));
      },
      py::arg("channel"), py::arg("S0"), py::arg("d") = 24, py::arg("restarts") = 8, py::arg("iterations") = 200,
      py::arg("seed") = 0, py::arg("gradient") = "analytic");
  m.def(
      "scan",
      [](const py::object& ch, double S0, int d, int samples, std::uint64_t seed, double tolerance) {
        return to_python(to_json(conjecture_v2_scan(as_channel(ch), S0, d, samples, seed, tolerance)));
      },
      py::arg("channel"), py::arg("S0"), py::arg("d") = 24, py::arg("samples") = 16, py::arg("seed") = 0,
      py::arg("tolerance") = kViolationTolerance);
  m.def(
      "relative_entropy_check",
      [](const py::object& ch, const CMatrix& rho, double N0, bool enforce_shell) {
        return to_python(to_json(equiv_identity_check(as_channel(ch), as_state(rho), N0, enforce_shell)));
      },
      py::arg("channel"), py::arg("rho"), py::arg("N0"), py::arg("enforce_shell") = true);
  m.def(
      "sufficient_condition_scan", [](int grid) { return to_python(to_json(scan_sufficient_condition(grid))); },
      py::arg("grid") = 24);
}
