#include "qphase/equipartition.hpp"

#include <algorithm>
#include <cmath>

#include "qphase/moyal.hpp"

namespace qphase {

SeparableHamiltonian::SeparableHamiltonian(PolySymbol f, PolySymbol g)
    : F(std::move(f)), G(std::move(g)) {
  if (F.degree_in(Var::p) > 0)
    throw std::invalid_argument("SeparableHamiltonian: F must depend on q only");
  if (G.degree_in(Var::q) > 0)
    throw std::invalid_argument("SeparableHamiltonian: G must depend on p only");
}

SeparableHamiltonian SeparableHamiltonian::harmonic(const OscillatorSpec& s) {
  return {PolySymbol::monomial(2, 0, 0.5 * s.mass * s.omega * s.omega),
          PolySymbol::monomial(0, 2, 0.5 / s.mass)};
}

double phase_space_average(const WignerState& w, const PolySymbol& s) {
  GridSymbol f = sample_on_grid(s, w.grid);
  Eigen::MatrixXd integrand = w.values.cwiseProduct(f.values);
  const auto& g = w.grid;
  double leak = 0.0;
  for (int i = 0; i < g.n_q; ++i)
    leak = std::max({leak, std::abs(integrand(i, 0)),
                     std::abs(integrand(i, g.n_p - 1))});
  for (int j = 0; j < g.n_p; ++j)
    leak = std::max({leak, std::abs(integrand(0, j)),
                     std::abs(integrand(g.n_q - 1, j))});
  if (leak > 1e-10)
    throw std::runtime_error(
        "phase_space_average: integrand not negligible at the grid boundary "
        "(leak " + std::to_string(leak) + ")");
  return trapezoid_integral(g, integrand);
}

namespace {

VirialResult virial_impl(const WignerState& w, const PolySymbol& pot, Var v,
                         double sign) {
  // (a) direct: x * d(pot)/dx with x the potential's own variable
  PolySymbol x = v == Var::q ? PolySymbol::monomial(1, 0)
                             : PolySymbol::monomial(0, 1);
  PolySymbol direct = x * partial_derivative(pot, v);
  // (b)/(c): sign * {qp, pot} via Moyal and Poisson brackets
  PolySymbol qp = PolySymbol::monomial(1, 1);
  HbarContext ctx(w.hbar);
  PolySymbol via_moyal = sign * moyal_bracket(qp, pot, ctx);
  PolySymbol via_poisson = sign * poisson_bracket(qp, pot);

  double a = phase_space_average(w, direct);
  double b = phase_space_average(w, via_moyal);
  double c = phase_space_average(w, via_poisson);
  double spread = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
  if (spread >= 1e-9)
    throw std::runtime_error(
        "virial route disagreement (spread " + std::to_string(spread) +
        "); bracket calculus is inconsistent");
  return {a, spread};
}

}  // namespace

VirialResult virial_q(const WignerState& w, const SeparableHamiltonian& h) {
  return virial_impl(w, h.F, Var::q, -1.0);
}

VirialResult virial_p(const WignerState& w, const SeparableHamiltonian& h) {
  return virial_impl(w, h.G, Var::p, +1.0);
}

double beta_mod_extract(double e) {
  if (!(e > 0))
    throw std::invalid_argument("beta_mod_extract: average must be positive");
  return 1.0 / e;
}

double exact_ho_virial(const OscillatorSpec& s) {
  double t = 0.5 * s.theta();
  double cth;
  if (t > 350.0) {
    cth = 1.0;
  } else {
    double e = -std::expm1(-2.0 * t);
    cth = (2.0 - e) / e;
  }
  return 0.5 * s.hbar * s.omega * cth;
}

PhaseSpaceGrid auto_grid(const OscillatorSpec& s, const GridPolicy& policy) {
  if (policy.points < 8)
    throw std::invalid_argument("auto_grid: need at least 8 points per axis");
  // A Gaussian tail carrying a quartic weight needs (x/sigma)^2/2 >=
  // -ln(target) + 4 ln(x/sigma); solve crudely by iteration.
  double f = std::max(policy.min_sigma, 2.0);
  for (int it = 0; it < 32; ++it)
    f = std::sqrt(2.0 * (-std::log(policy.decay_target) + 4.0 * std::log(f)));
  f = std::max(f, policy.min_sigma);
  double sq = f * thermal_sigma_q(s), sp = f * thermal_sigma_p(s);
  return {-sq, sq, policy.points, -sp, sp, policy.points};
}

std::vector<EquipartitionReport> temperature_sweep(
    const OscillatorSpec& spec_template, const std::vector<double>& betas,
    const GridPolicy& policy) {
  for (size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0))
      throw std::invalid_argument("temperature_sweep: betas must be positive");
    if (i > 0 && betas[i] < betas[i - 1])
      throw std::invalid_argument("temperature_sweep: betas must be sorted");
  }
  std::vector<EquipartitionReport> out;
  out.reserve(betas.size());
  for (double beta : betas) {
    OscillatorSpec spec(spec_template.mass, spec_template.omega, beta,
                        spec_template.hbar, spec_template.k_B);
    SeparableHamiltonian h = SeparableHamiltonian::harmonic(spec);
    auto run = [&](const GridPolicy& pol) {
      WignerState w = ho_wigner_closed_form(spec, auto_grid(spec, pol));
      return std::pair{virial_q(w, h), virial_p(w, h)};
    };
    auto [vq, vp] = run(policy);
    if (policy.refine_check) {
      GridPolicy doubled = policy;
      doubled.points = 2 * policy.points - 1;
      doubled.refine_check = false;
      auto [vq2, vp2] = run(doubled);
      double drift = std::max(std::abs(vq2.value - vq.value),
                              std::abs(vp2.value - vp.value));
      if (drift > 1e-8)
        throw std::runtime_error(
            "temperature_sweep: doubled-resolution self-check failed "
            "(drift " + std::to_string(drift) + ")");
    }
    EquipartitionReport r;
    r.beta = beta;
    r.E_q = vq.value;
    r.E_p = vp.value;
    r.kT = 1.0 / (spec.k_B * beta);
    r.beta_mod_q = beta_mod_extract(vq.value);
    r.beta_mod_p = beta_mod_extract(vp.value);
    r.route_spread = std::max(vq.route_spread, vp.route_spread);
    r.exact_reference = exact_ho_virial(spec);
    out.push_back(r);
  }
  return out;
}

}  // namespace qphase
