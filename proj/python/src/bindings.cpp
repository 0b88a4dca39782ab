#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "tachys/brachistochrone.hpp"
#include "tachys/cli.hpp"
#include "tachys/dilation.hpp"
#include "tachys/errors.hpp"
#include "tachys/gates.hpp"
#include "tachys/metric.hpp"
#include "tachys/opendyn.hpp"
#include "tachys/smallmat.hpp"

namespace py = pybind11;
using namespace tachys;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

py::array_t<cplx> to_numpy(const CMat& m) {
  py::array_t<cplx> out({m.dim(), m.dim()});
  auto w = out.mutable_unchecked<2>();
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) w(r, c) = m(r, c);
  return out;
}

py::array_t<cplx> to_numpy(const PureState& v) {
  py::array_t<cplx> out(v.dim());
  auto w = out.mutable_unchecked<1>();
  for (int i = 0; i < v.dim(); ++i) w(i) = v[i];
  return out;
}

CMat to_mat(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw py::value_error("expected a square matrix");
  const int n = static_cast<int>(a.shape(0));
  return CMat(n, std::span<const cplx>(a.data(), static_cast<std::size_t>(n * n)));
}

PureState to_state(const ComplexArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a state vector");
  return PureState(std::span<const cplx>(a.data(), static_cast<std::size_t>(a.shape(0))));
}

py::dict hamiltonian_dict(const OptimalHamiltonianSpec& s) {
  py::dict d;
  d["omega"] = s.omega;
  d["s"] = s.s;
  d["theta"] = s.theta;
  d["H"] = to_numpy(s.H);
  d["convention"] = std::string(to_string(s.convention));
  return d;
}

py::dict efficiency_dict(const EfficiencyReport& r) {
  py::dict d;
  d["delta_t"] = r.delta_t;
  d["delta_E"] = r.delta_E;
  d["epsilon"] = r.epsilon;
  d["bound"] = r.bound();
  d["slack"] = r.slack();
  return d;
}

}  // namespace

PYBIND11_MODULE(_tachys, m) {
  m.doc() = "Native core of the tachys package";

  static PyObject* error_type = py::exception<Error>(m, "TachysError", PyExc_ValueError).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("module") = std::string(e.module());
      exc.attr("kind") = std::string(e.kind());
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("expm", [](const ComplexArray& a, double t) { return to_numpy(expm(to_mat(a), t)); }, py::arg("m"),
        py::arg("t"), "exp(-i m t) for a 2x2 or 4x4 complex matrix.");
  m.def("fidelity", [](const ComplexArray& u, const ComplexArray& v) { return fidelity(to_state(u), to_state(v)); });

  m.def("optimal_hamiltonian",
        [](const ComplexArray& target, double omega) {
          return hamiltonian_dict(optimal_hamiltonian(to_state(target), omega));
        },
        py::arg("target"), py::arg("omega"));
  m.def("solve_brachistochrone",
        [](const ComplexArray& target, double omega) {
          const BrachistochroneResult r = solve_brachistochrone(to_state(target), omega);
          py::dict d = hamiltonian_dict(r.spec);
          d["tau"] = r.tau;
          d["overlap_a"] = r.overlap_a;
          return d;
        },
        py::arg("target"), py::arg("omega"));
  m.def("minimal_time",
        [](const ComplexArray& u, const ComplexArray& v, double omega) {
          return minimal_time(to_state(u), to_state(v), omega);
        },
        py::arg("initial"), py::arg("final"), py::arg("omega"));
  m.def("first_passage_scan",
        [](const ComplexArray& H, const ComplexArray& u, const ComplexArray& v, double t_max, int steps) {
          return first_passage_scan(to_mat(H), to_state(u), to_state(v), t_max, steps);
        },
        py::arg("H"), py::arg("initial"), py::arg("final"), py::arg("t_max"), py::arg("steps") = kDefaultScanSteps,
        "Earliest time the evolution reaches the final ray, or None.");

  py::class_<Metric>(m, "Metric")
      .def_static("from_eta", [](const ComplexArray& eta) { return Metric::from_eta(to_mat(eta)); })
      .def_static("diagonal", &Metric::diagonal, py::arg("lam"))
      .def_static("from_fg", &Metric::from_fg, py::arg("f"), py::arg("g"))
      .def_property_readonly("eta", [](const Metric& x) { return to_numpy(x.eta()); })
      .def_property_readonly("sqrt_eta", [](const Metric& x) { return to_numpy(x.sqrt_eta()); })
      .def_property_readonly("det", &Metric::det)
      .def_property_readonly("normalization", [](const Metric& x) { return std::string(to_string(x.normalization())); })
      .def("with_unit_determinant", &Metric::with_unit_determinant)
      .def("scaled", &Metric::scaled, py::arg("alpha"));

  m.def("quasi_hamiltonian",
        [](const ComplexArray& h, const Metric& metric, double omega) {
          return to_numpy(quasi_hamiltonian(to_mat(h), metric, omega).H);
        },
        py::arg("h"), py::arg("metric"), py::arg("omega"));
  m.def("pseudo_hermiticity_defect", [](const ComplexArray& H, const ComplexArray& eta) {
    return pseudo_hermiticity_defect(to_mat(H), to_mat(eta));
  });

  m.def("split", [](const ComplexArray& H) {
    const OpenSplit s = split(to_mat(H));
    py::dict d;
    d["H1"] = to_numpy(s.H1);
    d["H2"] = to_numpy(s.H2);
    d["mu1"] = s.mu1;
    d["mu2"] = s.mu2;
    return d;
  });
  m.def("evolve_semigroup",
        [](const ComplexArray& H, const ComplexArray& rho0, const std::vector<double>& times, bool shifted) {
          const EvolutionTrace tr =
              evolve_semigroup(to_mat(H), to_mat(rho0), times, shifted ? Generator::shifted : Generator::raw);
          py::array_t<cplx> rho({static_cast<py::ssize_t>(tr.rho.size()), py::ssize_t{2}, py::ssize_t{2}});
          auto w = rho.mutable_unchecked<3>();
          for (std::size_t k = 0; k < tr.rho.size(); ++k)
            for (int r = 0; r < 2; ++r)
              for (int c = 0; c < 2; ++c) w(static_cast<py::ssize_t>(k), r, c) = tr.rho[k](r, c);
          py::dict d;
          d["mu1"] = tr.mu1;
          d["times"] = tr.times;
          d["rho"] = rho;
          d["trace"] = tr.trace_values;
          d["trace_slope"] = tr.trace_slopes;
          d["k"] = tr.k_values;
          return d;
        },
        py::arg("H"), py::arg("rho0"), py::arg("times"), py::arg("shifted") = false);
  m.def("shifted_generator", [](const ComplexArray& H) { return to_numpy(shifted_generator(to_mat(H)).H); });
  m.def("aligned_hamiltonian",
        [](const Metric& metric, double omega, const ComplexArray& psi_i, const ComplexArray& psi_f) {
          const AlignedHamiltonian a = aligned_hamiltonian(metric, omega, to_state(psi_i), to_state(psi_f));
          py::dict d;
          d["H"] = to_numpy(a.qh.H);
          d["tau"] = a.tau;
          d["a_prime"] = a.mapped.a_prime;
          d["frame"] = to_numpy(a.frame);
          return d;
        },
        py::arg("metric"), py::arg("omega"), py::arg("psi_i"), py::arg("psi_f"));
  m.def("energy_gap_sq", [](const ComplexArray& H) { return energy_gap_sq(to_mat(H)); });
  m.def("dissipative_factor", &dissipative_factor, py::arg("f"));
  m.def("dissipation_row",
        [](double f, double omega, double proximity) {
          const DissipationScanRow r = dissipation_row(f, omega, proximity);
          py::dict d;
          d["f"] = r.f;
          d["g"] = r.g;
          d["proximity"] = r.proximity;
          d["d_factor"] = r.d_factor;
          d["d_factor_finite"] = r.d_factor_finite;
          d["gap_sq"] = r.gap_sq;
          d["a_prime"] = r.a_prime;
          d["tau"] = r.tau;
          return d;
        },
        py::arg("f"), py::arg("omega") = 1.0, py::arg("proximity") = 1e-6);

  py::class_<DilationModel>(m, "DilationModel")
      .def_property_readonly("V", [](const DilationModel& x) { return to_numpy(x.V); })
      .def_property_readonly("Hbig", [](const DilationModel& x) { return to_numpy(x.Hbig); })
      .def_property_readonly("H", [](const DilationModel& x) { return to_numpy(x.H); })
      .def_property_readonly("basis", [](const DilationModel& x) { return to_numpy(x.basis); })
      .def_readonly("fnorm", &DilationModel::fnorm)
      .def_readonly("omega", &DilationModel::omega);
  m.def("build_dilation",
        [](const ComplexArray& h, const Metric& metric, double omega) {
          return build_dilation(to_mat(h), metric, omega);
        },
        py::arg("h"), py::arg("metric"), py::arg("omega"));
  m.def("evolve_dilated",
        [](const DilationModel& model, const ComplexArray& psi, double t) {
          const DilatedState s = evolve_dilated(model, to_state(psi), t);
          py::dict d;
          d["phi"] = to_numpy(s.phi);
          d["psi"] = to_numpy(s.psi);
          d["chi"] = to_numpy(s.chi);
          return d;
        },
        py::arg("model"), py::arg("psi"), py::arg("t"));
  m.def("visibility_ratio",
        [](const Metric& metric, const ComplexArray& psi) { return visibility_ratio(metric, to_state(psi)); });

  py::class_<BlochBasis>(m, "BlochBasis")
      .def_readonly("theta", &BlochBasis::theta)
      .def_property_readonly("psi0", [](const BlochBasis& b) { return to_numpy(b.psi0); })
      .def_property_readonly("psi1", [](const BlochBasis& b) { return to_numpy(b.psi1); })
      .def("overlap", &BlochBasis::overlap);
  m.def("make_bloch_basis", &make_bloch_basis, py::arg("theta"));
  m.def("discrimination_povm", [](const BlochBasis& b) {
    const Povm p = discrimination_povm(b);
    py::list effects;
    for (const CMat& e : p.effects) effects.append(to_numpy(e));
    py::dict d;
    d["labels"] = p.labels;
    d["effects"] = effects;
    d["completeness_defect"] = p.completeness_defect();
    d["min_eigenvalue"] = p.min_eigenvalue();
    d["p_psi0"] = p.probabilities(b.psi0);
    d["p_psi1"] = p.probabilities(b.psi1);
    return d;
  });
  m.def("not_roundtrip",
        [](const BlochBasis& b, double omega) {
          const NotGateReport r = not_roundtrip(b, omega);
          py::dict d;
          d["U"] = to_numpy(r.U);
          d["forward_tau"] = r.forward_tau;
          d["not_tau"] = r.not_tau;
          d["orthogonal_tau"] = r.orthogonal_tau;
          d["roundtrip_fidelity"] = r.roundtrip_fidelity;
          return d;
        },
        py::arg("basis"), py::arg("omega") = 1.0);
  m.def("cloning_defect", &cloning_defect);
  m.def("control_u_channel",
        [](const BlochBasis& b, double e_polar, double omega, const std::string& ancilla) {
          AncillaPreparation a = AncillaPreparation::psi1;
          if (ancilla == "e1")
            a = AncillaPreparation::e1;
          else if (ancilla != "psi1")
            throw py::value_error("ancilla must be 'psi1' or 'e1'");
          const ControlUReport r = control_u_channel(b, e_polar, omega, a);
          py::dict d;
          d["p"] = r.p;
          d["q"] = r.q;
          d["lhs"] = r.lhs;
          d["rhs"] = r.rhs;
          d["residual"] = r.residual;
          d["output_from_psi1"] = to_numpy(r.output_from_psi1);
          d["output_from_psi0"] = to_numpy(r.output_from_psi0);
          return d;
        },
        py::arg("basis"), py::arg("e_polar"), py::arg("omega") = 1.0, py::arg("ancilla") = "psi1");
  m.def("efficiency_bound", [](const BlochBasis& b, double omega) { return efficiency_dict(efficiency_bound(b, omega)); },
        py::arg("basis"), py::arg("omega") = 1.0);
  m.def("efficiency_of", [](const ComplexArray& H, const BlochBasis& b) -> py::object {
    const auto r = efficiency_of(to_mat(H), b);
    if (!r) return py::none();
    return efficiency_dict(*r);
  });

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"tachys"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a CLI command in-process and returns (exit_code, stdout, stderr).");
}
