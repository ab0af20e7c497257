#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qphase/equipartition.hpp"
#include "qphase/io.hpp"
#include "qphase/moyal.hpp"

namespace py = pybind11;
using namespace qphase;

namespace {

py::dict poly_terms(const PolySymbol& s) {
  py::dict out;
  for (const auto& [mn, c] : s.terms())
    out[py::make_tuple(mn.first, mn.second)] = c;
  return out;
}

py::dict report_dict(const EquipartitionReport& r) {
  py::dict d;
  d["beta"] = r.beta;
  d["E_q"] = r.E_q;
  d["E_p"] = r.E_p;
  d["kT"] = r.kT;
  d["beta_mod_q"] = r.beta_mod_q;
  d["beta_mod_p"] = r.beta_mod_p;
  d["route_spread"] = r.route_spread;
  if (r.exact_reference)
    d["exact_reference"] = *r.exact_reference;
  else
    d["exact_reference"] = py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weyl/Wigner transforms, Moyal calculus, thermal states and "
            "virial-type energy averages for one degree of freedom";

  py::class_<PolySymbol>(m, "PolySymbol")
      .def(py::init<>())
      .def(py::init<double>(), py::arg("constant"))
      .def_static("monomial", &PolySymbol::monomial, py::arg("m"), py::arg("n"),
                  py::arg("c") = 1.0)
      .def_static("parse", &parse_poly, py::arg("text"))
      .def("eval", &PolySymbol::eval, py::arg("q"), py::arg("p"))
      .def("degree", &PolySymbol::degree)
      .def("coefficient", &PolySymbol::coefficient, py::arg("m"), py::arg("n"))
      .def("terms", &poly_terms)
      .def("is_zero", &PolySymbol::is_zero)
      .def("__add__", [](const PolySymbol& a, const PolySymbol& b) { return a + b; })
      .def("__sub__", [](const PolySymbol& a, const PolySymbol& b) { return a - b; })
      .def("__mul__", [](const PolySymbol& a, const PolySymbol& b) { return a * b; })
      .def("__rmul__", [](const PolySymbol& a, double s) { return a * s; })
      .def("__neg__", [](const PolySymbol& a) { return -a; })
      .def("__eq__", [](const PolySymbol& a, const PolySymbol& b) { return a == b; })
      .def("__str__", [](const PolySymbol& s) { return format_poly(s, false); })
      .def("__repr__",
           [](const PolySymbol& s) { return "PolySymbol(" + format_poly(s) + ")"; });

  m.def("format_poly", &format_poly, py::arg("s"), py::arg("simplify") = false);
  m.def(
      "partial_derivative",
      [](const PolySymbol& s, const std::string& var, int order) {
        if (var != "q" && var != "p")
          throw std::invalid_argument("var must be 'q' or 'p'");
        return partial_derivative(s, var == "q" ? Var::q : Var::p, order);
      },
      py::arg("s"), py::arg("var"), py::arg("order") = 1);
  m.def("poisson_bracket",
        [](const PolySymbol& a, const PolySymbol& b) { return poisson_bracket(a, b); });

  py::class_<PhaseSpaceGrid>(m, "PhaseSpaceGrid")
      .def(py::init<double, double, int, double, double, int>(), py::arg("q_min"),
           py::arg("q_max"), py::arg("n_q"), py::arg("p_min"), py::arg("p_max"),
           py::arg("n_p"))
      .def_readonly("q_min", &PhaseSpaceGrid::q_min)
      .def_readonly("q_max", &PhaseSpaceGrid::q_max)
      .def_readonly("n_q", &PhaseSpaceGrid::n_q)
      .def_readonly("p_min", &PhaseSpaceGrid::p_min)
      .def_readonly("p_max", &PhaseSpaceGrid::p_max)
      .def_readonly("n_p", &PhaseSpaceGrid::n_p)
      .def("q_at", &PhaseSpaceGrid::q_at)
      .def("p_at", &PhaseSpaceGrid::p_at);

  py::class_<GridSymbol>(m, "GridSymbol")
      .def_readonly("grid", &GridSymbol::grid)
      .def_readonly("values", &GridSymbol::values);

  m.def("sample_on_grid", &sample_on_grid, py::arg("s"), py::arg("grid"));
  m.def("trapezoid_integral",
        [](const GridSymbol& s) { return trapezoid_integral(s); });

  // Moyal calculus
  m.def(
      "moyal_product",
      [](const PolySymbol& a, const PolySymbol& b, double hbar) {
        auto r = moyal_product(a, b, HbarContext(hbar));
        return py::make_tuple(real_part(r), imag_part(r));
      },
      py::arg("a"), py::arg("b"), py::arg("hbar") = 1.0,
      "star product split into (real, imaginary) polynomial parts");
  m.def(
      "moyal_bracket",
      [](const PolySymbol& a, const PolySymbol& b, double hbar) {
        return moyal_bracket(a, b, HbarContext(hbar));
      },
      py::arg("a"), py::arg("b"), py::arg("hbar") = 1.0);
  m.def(
      "bracket_order_term",
      [](const PolySymbol& a, const PolySymbol& b, int s, double hbar) {
        return bracket_order_term(a, b, s, HbarContext(hbar));
      },
      py::arg("a"), py::arg("b"), py::arg("s"), py::arg("hbar") = 1.0);

  // Weyl transforms
  py::class_<OscillatorBasis>(m, "OscillatorBasis")
      .def(py::init<double, double, double>(), py::arg("mass") = 1.0,
           py::arg("omega") = 1.0, py::arg("hbar") = 1.0)
      .def_readonly("mass", &OscillatorBasis::mass)
      .def_readonly("omega", &OscillatorBasis::omega)
      .def_readonly("hbar", &OscillatorBasis::hbar);

  py::class_<MatrixOperator>(m, "MatrixOperator")
      .def(py::init<Eigen::MatrixXcd, OscillatorBasis>(), py::arg("entries"),
           py::arg("basis"))
      .def_readonly("dim", &MatrixOperator::dim)
      .def_readonly("entries", &MatrixOperator::entries)
      .def_readonly("basis", &MatrixOperator::basis);

  py::class_<PositionKernel>(m, "PositionKernel")
      .def(py::init<double, double, Eigen::MatrixXcd>(), py::arg("x_min"),
           py::arg("x_max"), py::arg("values"))
      .def_readonly("x_min", &PositionKernel::x_min)
      .def_readonly("x_max", &PositionKernel::x_max)
      .def_readonly("n_x", &PositionKernel::n_x)
      .def_readonly("values", &PositionKernel::values);

  py::class_<WignerState>(m, "WignerState")
      .def_readonly("grid", &WignerState::grid)
      .def_readonly("values", &WignerState::values)
      .def_readonly("hbar", &WignerState::hbar);

  m.def("weyl_quantize", &weyl_quantize, py::arg("s"), py::arg("dim"),
        py::arg("basis"));
  m.def("inverse_weyl_polynomial", &inverse_weyl_polynomial, py::arg("op"),
        py::arg("max_degree"));
  m.def("commutator_symbol", &commutator_symbol, py::arg("a"), py::arg("b"),
        py::arg("dim"), py::arg("basis"),
        "Weyl symbol of (1/i hbar)[A, B] from the truncated eigenbasis");
  m.def("wigner_of_operator", &wigner_of_operator, py::arg("op"), py::arg("grid"));
  m.def(
      "wigner_from_kernel",
      [](const PositionKernel& k, double hbar,
         std::optional<std::tuple<double, double, int>> window) {
        std::optional<PWindow> w;
        if (window)
          w = PWindow{std::get<0>(*window), std::get<1>(*window),
                      std::get<2>(*window)};
        return wigner_from_kernel(k, hbar, w);
      },
      py::arg("kernel"), py::arg("hbar"), py::arg("p_window") = py::none());
  m.def("nyquist_momentum", &nyquist_momentum, py::arg("kernel"), py::arg("hbar"));

  // Thermal objects
  py::class_<OscillatorSpec>(m, "OscillatorSpec")
      .def(py::init<double, double, double, double, double>(),
           py::arg("mass") = 1.0, py::arg("omega") = 1.0, py::arg("beta") = 1.0,
           py::arg("hbar") = 1.0, py::arg("k_B") = 1.0)
      .def_readonly("mass", &OscillatorSpec::mass)
      .def_readonly("omega", &OscillatorSpec::omega)
      .def_readonly("beta", &OscillatorSpec::beta)
      .def_readonly("hbar", &OscillatorSpec::hbar)
      .def_readonly("k_B", &OscillatorSpec::k_B)
      .def("theta", &OscillatorSpec::theta);

  py::class_<BathCorrelation>(m, "BathCorrelation")
      .def_static("constant", &BathCorrelation::constant, py::arg("c"))
      .def_static("exponential", &BathCorrelation::exponential,
                  py::arg("amplitude"), py::arg("tau_c"))
      .def_static("table", &BathCorrelation::table, py::arg("tau"), py::arg("k"))
      .def("__call__", &BathCorrelation::operator(), py::arg("tau"));

  py::enum_<Provenance>(m, "Provenance")
      .value("gibbs", Provenance::gibbs)
      .value("second_order", Provenance::second_order);

  py::class_<EquilibriumState>(m, "EquilibriumState")
      .def_readonly("rho", &EquilibriumState::rho)
      .def_readonly("beta", &EquilibriumState::beta)
      .def_readonly("provenance", &EquilibriumState::provenance)
      .def_readonly("hermiticity_residual", &EquilibriumState::hermiticity_residual);

  m.def("mehler_kernel", &mehler_kernel, py::arg("spec"), py::arg("x_f"),
        py::arg("x_i"));
  m.def("mehler_position_kernel", &mehler_position_kernel, py::arg("spec"),
        py::arg("x_min"), py::arg("x_max"), py::arg("n_x"),
        py::arg("unit_trace") = true);
  m.def("ho_partition_function", &ho_partition_function, py::arg("spec"));
  m.def("ho_log_partition_function", &ho_log_partition_function, py::arg("spec"));
  m.def("ho_wigner_closed_form", &ho_wigner_closed_form, py::arg("spec"),
        py::arg("grid"));
  m.def("thermal_sigma_q", &thermal_sigma_q, py::arg("spec"));
  m.def("thermal_sigma_p", &thermal_sigma_p, py::arg("spec"));
  m.def(
      "classical_gibbs_density",
      [](const PolySymbol& h, double beta, const PhaseSpaceGrid& g) {
        auto r = classical_gibbs_density(h, beta, g);
        return py::make_tuple(r.density, r.Z);
      },
      py::arg("h"), py::arg("beta"), py::arg("grid"),
      "returns (density GridSymbol, grid normalizer Z)");
  m.def("gibbs_state", &gibbs_state, py::arg("h"), py::arg("beta"));
  m.def(
      "second_order_reduced_density",
      [](const MatrixOperator& h,
         const std::vector<std::pair<MatrixOperator, BathCorrelation>>& cpl,
         double beta, int n_tau) {
        std::vector<Coupling> cs;
        for (const auto& [S, k] : cpl) cs.push_back({S, k});
        return second_order_reduced_density(h, cs, beta, n_tau);
      },
      py::arg("h"), py::arg("couplings"), py::arg("beta"), py::arg("n_tau") = 32);

  // Equipartition
  py::class_<SeparableHamiltonian>(m, "SeparableHamiltonian")
      .def(py::init<PolySymbol, PolySymbol>(), py::arg("F"), py::arg("G"))
      .def_static("harmonic", &SeparableHamiltonian::harmonic, py::arg("spec"))
      .def_readonly("F", &SeparableHamiltonian::F)
      .def_readonly("G", &SeparableHamiltonian::G)
      .def("hamiltonian", &SeparableHamiltonian::hamiltonian);

  m.def("phase_space_average", &phase_space_average, py::arg("w"), py::arg("s"));
  m.def(
      "virial_q",
      [](const WignerState& w, const SeparableHamiltonian& h) {
        auto r = virial_q(w, h);
        return py::make_tuple(r.value, r.route_spread);
      },
      py::arg("w"), py::arg("h"));
  m.def(
      "virial_p",
      [](const WignerState& w, const SeparableHamiltonian& h) {
        auto r = virial_p(w, h);
        return py::make_tuple(r.value, r.route_spread);
      },
      py::arg("w"), py::arg("h"));
  m.def("beta_mod_extract", &beta_mod_extract, py::arg("e"));
  m.def("exact_ho_virial", &exact_ho_virial, py::arg("spec"));
  m.def(
      "auto_grid",
      [](const OscillatorSpec& s, int points, double min_sigma) {
        GridPolicy p;
        p.points = points;
        p.min_sigma = min_sigma;
        return auto_grid(s, p);
      },
      py::arg("spec"), py::arg("points") = 257, py::arg("min_sigma") = 6.0);
  m.def(
      "temperature_sweep",
      [](const OscillatorSpec& tmpl, const std::vector<double>& betas, int points,
         double min_sigma, bool refine_check) {
        GridPolicy p;
        p.points = points;
        p.min_sigma = min_sigma;
        p.refine_check = refine_check;
        py::list out;
        for (const auto& r : temperature_sweep(tmpl, betas, p))
          out.append(report_dict(r));
        return out;
      },
      py::arg("spec"), py::arg("betas"), py::arg("points") = 257,
      py::arg("min_sigma") = 6.0, py::arg("refine_check") = true);
}
