#include "capspec/eigenbasis.hpp"
#include "capspec/grid.hpp"
#include "capspec/io.hpp"
#include "capspec/lindblad.hpp"
#include "capspec/scenario.hpp"
#include "capspec/spectra.hpp"
#include "capspec/twobody.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace capspec;

namespace {

py::dict spectrum_dict(const SpectrumResult& s) {
  py::dict d;
  d["energies"] = s.energies;
  d["dP2_dE"] = s.dP2_dE;
  d["dP1_dE"] = s.dP1_dE;
  d["P2"] = s.P2;
  d["P1"] = s.P1;
  d["neg_content"] = s.neg_content;
  d["extent"] = s.extent;
  d["duration"] = s.duration;
  d["duration_reached"] = s.duration_reached;
  return d;
}

py::dict record_dict(const RunRecord& r) {
  py::dict d = spectrum_dict(r.spectrum);
  d["gamma0"] = r.gamma0;
  d["config"] = r.config_json;
  d["config_hash"] = r.config_hash;
  d["p0_final"] = r.p0_final;
  d["norm2_final"] = r.norm2_final;
  d["trace_rho1_final"] = r.trace_rho1_final;
  d["residual_final"] = r.residual_final;
  d["max_abs_residual"] = r.max_abs_residual;
  d["t_end"] = r.t_end;
  d["steps"] = r.steps;
  d["extent_resolved"] = r.extent_resolved;
  d["initial_energy"] = r.initial_energy;
  d["wall_seconds"] = r.wall_seconds;
  std::vector<double> t, n2, tr, p0, res;
  for (const auto& s : r.ledger) {
    t.push_back(s.t);
    n2.push_back(s.norm2_psi);
    tr.push_back(s.trace_rho1);
    p0.push_back(s.p0);
    res.push_back(s.residual);
  }
  py::dict ledger;
  ledger["t"] = t;
  ledger["norm2_psi"] = n2;
  ledger["trace_rho1"] = tr;
  ledger["p0"] = p0;
  ledger["residual"] = res;
  d["ledger"] = ledger;
  d["files"] = r.files;
  return d;
}

SpectrumCurve curve_from(const RealVector& e, const RealVector& v) {
  if (e.size() != v.size()) throw std::invalid_argument("energies and density differ in length");
  return SpectrumCurve{e, v};
}

}  // namespace

PYBIND11_MODULE(_capspec, m) {
  m.doc() = "C++ core of capspec";
  m.attr("__version__") = CAPSPEC_VERSION;

  py::class_<Grid1D>(m, "Grid1D")
      .def_readonly("n", &Grid1D::n)
      .def_readonly("half_extent", &Grid1D::half_extent)
      .def_readonly("h", &Grid1D::h)
      .def_readonly("x", &Grid1D::x)
      .def_readonly("k", &Grid1D::k);
  m.def("build_grid", &build_grid, py::arg("half_extent"), py::arg("n"));

  py::enum_<PotentialKind>(m, "PotentialKind")
      .value("none", PotentialKind::none)
      .value("gaussian_well", PotentialKind::gaussian_well)
      .value("soft_coulomb", PotentialKind::soft_coulomb);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init([](PotentialKind kind, double strength, double width) {
             return PotentialSpec{kind, strength, width};
           }),
           py::arg("kind"), py::arg("strength"), py::arg("width"))
      .def_readwrite("kind", &PotentialSpec::kind)
      .def_readwrite("strength", &PotentialSpec::strength)
      .def_readwrite("width", &PotentialSpec::width);
  py::class_<InteractionSpec>(m, "InteractionSpec")
      .def(py::init([](double strength, double smoothness) {
             return InteractionSpec{strength, smoothness};
           }),
           py::arg("strength"), py::arg("smoothness"))
      .def_readwrite("strength", &InteractionSpec::strength)
      .def_readwrite("smoothness", &InteractionSpec::smoothness);
  py::class_<CapSpec>(m, "CapSpec")
      .def(py::init([](double gamma0, double onset) { return CapSpec{gamma0, onset}; }),
           py::arg("gamma0"), py::arg("onset"))
      .def_readwrite("gamma0", &CapSpec::gamma0)
      .def_readwrite("onset", &CapSpec::onset);
  py::class_<PulseSpec>(m, "PulseSpec")
      .def(py::init([](double peak_field, double omega, int n_cycles) {
             return PulseSpec{peak_field, omega, n_cycles};
           }),
           py::arg("peak_field"), py::arg("omega"), py::arg("n_cycles"))
      .def_readwrite("peak_field", &PulseSpec::peak_field)
      .def_readwrite("omega", &PulseSpec::omega)
      .def_readwrite("n_cycles", &PulseSpec::n_cycles)
      .def("duration", &PulseSpec::duration);
  py::class_<WavePacketSpec>(m, "WavePacketSpec")
      .def(py::init([](double center, double momentum, double momentum_width) {
             return WavePacketSpec{center, momentum, momentum_width};
           }),
           py::arg("center"), py::arg("momentum"), py::arg("momentum_width"))
      .def_readwrite("center", &WavePacketSpec::center)
      .def_readwrite("momentum", &WavePacketSpec::momentum)
      .def_readwrite("momentum_width", &WavePacketSpec::momentum_width);

  m.def("potential_values", &potential_values, py::arg("grid"), py::arg("potential"));
  m.def("cap_values", &cap_values, py::arg("grid"), py::arg("cap"));
  m.def("interaction_matrix", &interaction_matrix, py::arg("grid"), py::arg("interaction"));
  m.def("vector_potential", &vector_potential, py::arg("pulse"), py::arg("t"));

  py::class_<EigenBasis>(m, "EigenBasis")
      .def_readonly("h", &EigenBasis::h)
      .def_readonly("energies", &EigenBasis::energies)
      .def_readonly("states", &EigenBasis::states)
      .def_readonly("bound_count", &EigenBasis::bound_count)
      .def_property_readonly("odd", [](const EigenBasis& b) {
        std::vector<bool> odd;
        for (Parity p : b.parity) odd.push_back(p == Parity::odd);
        return odd;
      });
  m.def(
      "eigendecompose",
      [](const Grid1D& grid, const PotentialSpec& pot) {
        return eigendecompose(build_h0_dense(grid, pot), grid);
      },
      py::arg("grid"), py::arg("potential"));
  m.def("projection_basis", &projection_basis, py::arg("grid"), py::arg("potential"),
        py::arg("half_extent"));
  m.def("continuum_weights", &continuum_weights, py::arg("basis"));

  py::class_<SystemOperators>(m, "SystemOperators")
      .def_readonly("grid", &SystemOperators::grid)
      .def_readonly("potential", &SystemOperators::potential)
      .def_readonly("cap", &SystemOperators::cap);
  m.def("make_operators", &make_operators, py::arg("grid"), py::arg("potential"),
        py::arg("interaction"), py::arg("cap"), py::arg("pulse") = PulseSpec{});

  py::class_<TwoBodyState>(m, "TwoBodyState")
      .def_readwrite("psi", &TwoBodyState::psi)
      .def_readwrite("t", &TwoBodyState::t)
      .def_readonly("h", &TwoBodyState::h)
      .def("norm2", [](const TwoBodyState& s) { return norm2(s); });
  m.def("init_scattering_state", &init_scattering_state, py::arg("grid"), py::arg("packet"),
        py::arg("basis"), py::arg("cap_onset"));
  m.def("energy_expectation", &energy_expectation, py::arg("state"), py::arg("ops"),
        py::arg("field") = 0.0);

  py::class_<TwoBodyPropagator>(m, "TwoBodyPropagator")
      .def(py::init<const SystemOperators&, double>(), py::arg("ops"), py::arg("tau"))
      .def("step", &TwoBodyPropagator::step, py::arg("state"))
      .def(
          "run",
          [](TwoBodyPropagator& p, TwoBodyState& s, long steps) {
            py::gil_scoped_release release;
            for (long i = 0; i < steps; ++i) p.step(s);
          },
          py::arg("state"), py::arg("steps"));

  m.def(
      "relax_two_body",
      [](const SystemOperators& ops, double tau, double tolerance, int max_iterations) {
        const TwoBodyGroundState g =
            relax_two_body(ops, RelaxOptions{tau, tolerance, max_iterations});
        return py::make_tuple(g.state, g.energy, g.iterations);
      },
      py::arg("ops"), py::arg("tau") = 0.05, py::arg("tolerance") = 1e-10,
      py::arg("max_iterations") = 200000);

  m.def("source_matrix", &source_matrix, py::arg("psi"), py::arg("cap"), py::arg("h"));
  m.def(
      "project_first",
      [](const ComplexMatrix& phi, const RealVector& cap, const EigenBasis& basis) {
        return project_first(phi, cap, basis);
      },
      py::arg("phi"), py::arg("cap"), py::arg("basis"));
  m.def(
      "to_density",
      [](const EigenBasis& basis, const RealVector& weights, const RealVector& discrete) {
        const SpectrumCurve c = to_density(basis, weights, discrete);
        return py::make_tuple(c.energies, c.density);
      },
      py::arg("basis"), py::arg("weights"), py::arg("discrete"));
  m.def(
      "integrate",
      [](const RealVector& e, const RealVector& v) { return integrate(curve_from(e, v)); },
      py::arg("energies"), py::arg("density"));
  m.def(
      "negative_content",
      [](const RealVector& e, const RealVector& v) { return negative_content(curve_from(e, v)); },
      py::arg("energies"), py::arg("density"));

  m.def("preset_names", &preset_names);
  m.def(
      "preset_json", [](const std::string& name) { return config_to_json(preset(name)); },
      py::arg("name"));
  m.def(
      "validation_errors",
      [](const std::string& text) { return validation_errors(config_from_json(text)); },
      py::arg("config_json"));
  m.def(
      "config_hash", [](const std::string& text) { return config_hash(config_from_json(text)); },
      py::arg("config_json"));
  m.def(
      "_run",
      [](const std::string& text, double gamma0) {
        const ScenarioConfig cfg = config_from_json(text);
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = run_scenario(cfg, gamma0);
        }
        return record_dict(r);
      },
      py::arg("config_json"), py::arg("gamma0"));
  m.def(
      "_sweep",
      [](const std::string& text, int jobs) {
        const ScenarioConfig cfg = config_from_json(text);
        SweepResult s;
        {
          py::gil_scoped_release release;
          s = sweep_gamma(cfg, jobs);
        }
        py::list out;
        for (const auto& e : s.entries) {
          py::dict d = e.record ? record_dict(*e.record) : py::dict();
          d["gamma0"] = e.gamma0;
          d["error"] = e.error;
          d["l1_dP2"] = e.l1_first;
          d["l1_dP1"] = e.l1_second;
          out.append(d);
        }
        return out;
      },
      py::arg("config_json"), py::arg("jobs") = 1);
}
