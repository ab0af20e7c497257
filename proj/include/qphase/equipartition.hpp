#pragma once

#include <optional>

#include "qphase/thermal.hpp"

namespace qphase {

/// H = F(q) + G(p); F must be free of p-powers and G free of q-powers.
struct SeparableHamiltonian {
  PolySymbol F;
  PolySymbol G;

  SeparableHamiltonian(PolySymbol f, PolySymbol g);
  PolySymbol hamiltonian() const { return F + G; }
  static SeparableHamiltonian harmonic(const OscillatorSpec& s);
};

struct EquipartitionReport {
  double beta;
  double E_q;
  double E_p;
  double kT;
  double beta_mod_q;
  double beta_mod_p;
  double route_spread;
  std::optional<double> exact_reference;
};

/// Trapezoid integral of w * s over the state's grid.  The integrand must
/// be negligible at the grid boundary; a leak is reported with magnitude.
double phase_space_average(const WignerState& w, const PolySymbol& s);

struct VirialResult {
  double value;
  double route_spread;
};

/// <q dH/dq> by three routes: (a) <q F'(q)> directly, (b) -<{qp, F}_M>,
/// (c) -<{qp, F}_PB>.  The three integrands are symbol-identical; a spread
/// above 1e-9 signals a calculus bug and throws.
VirialResult virial_q(const WignerState& w, const SeparableHamiltonian& h);
/// <p dH/dp> via (a) <p G'(p)>, (b) +<{pq, G}_M>, (c) +<{pq, G}_PB>.
VirialResult virial_p(const WignerState& w, const SeparableHamiltonian& h);

/// beta_mod = 1/E for a positive virial average.
double beta_mod_extract(double e);

/// (hbar w / 2) coth(hbar w beta / 2): the closed-form oscillator virial,
/// interpolating k_B T at small hbar w beta and hbar w / 2 at large.
double exact_ho_virial(const OscillatorSpec& s);

struct GridPolicy {
  int points = 257;          // per axis
  double min_sigma = 6.0;    // minimum half-extent in thermal sigmas
  double decay_target = 1e-12;  // boundary decay for polynomial-weighted tails
  bool refine_check = true;  // doubled-resolution self-check (1e-8)
};

/// Centered grid sized so a thermal Gaussian times a low-degree polynomial
/// decays below decay_target at the boundary (never less than min_sigma
/// standard deviations).
PhaseSpaceGrid auto_grid(const OscillatorSpec& s, const GridPolicy& policy = {});

/// One report per beta: closed-form thermal state on an auto-sized grid,
/// virials by all routes, exact_reference from the closed-form virial.
std::vector<EquipartitionReport> temperature_sweep(
    const OscillatorSpec& spec_template, const std::vector<double>& betas,
    const GridPolicy& policy = {});

}  // namespace qphase
