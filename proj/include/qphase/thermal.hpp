#pragma once

#include <functional>
#include <vector>

#include "qphase/weyl.hpp"

namespace qphase {

struct OscillatorSpec {
  double mass = 1.0;
  double omega = 1.0;
  double beta = 1.0;
  double hbar = 1.0;
  double k_B = 1.0;

  OscillatorSpec(double m = 1.0, double w = 1.0, double b = 1.0,
                 double h = 1.0, double kB = 1.0)
      : mass(m), omega(w), beta(b), hbar(h), k_B(kB) {
    if (!(mass > 0) || !(omega > 0) || !(beta > 0) || !(hbar > 0) || !(k_B > 0))
      throw std::invalid_argument("OscillatorSpec fields must be positive");
  }

  /// Dimensionless hbar*omega*beta, the control parameter of every closed form.
  double theta() const { return hbar * omega * beta; }
  OscillatorBasis basis() const { return {mass, omega, hbar}; }
};

/// Imaginary-time bath correlation k(tau), evaluable on [-hbar beta, hbar beta].
class BathCorrelation {
 public:
  static BathCorrelation constant(double c);
  /// amplitude * exp(-|tau| / tau_c)
  static BathCorrelation exponential(double amplitude, double tau_c);
  /// Sampled table with linear interpolation; extended symmetrically to
  /// negative tau.  Nodes must be strictly increasing starting at 0.
  static BathCorrelation table(std::vector<double> tau, std::vector<double> k);

  double operator()(double tau) const { return f_(tau); }

 private:
  explicit BathCorrelation(std::function<double(double)> f) : f_(std::move(f)) {}
  std::function<double(double)> f_;
};

enum class Provenance { gibbs, second_order };

struct EquilibriumState {
  MatrixOperator rho;
  double beta;
  Provenance provenance;
  /// max |rho - rho^dagger|; measured, not enforced, for second_order.
  double hermiticity_residual;
};

/// Endpoint form of the oscillator imaginary-time kernel
///   <x_f| e^{-beta H} |x_i> =
///     sqrt(m w / (2 pi hbar sinh(t))) *
///     exp(-(m w / 2 hbar) [ (x_f^2 + x_i^2) coth(t) - 2 x_f x_i / sinh(t) ]),
/// t = hbar beta w.  Evaluated through logs so large t cannot overflow.
double mehler_kernel(const OscillatorSpec& s, double x_f, double x_i);

/// Kernel sampled on a uniform x-grid; with unit_trace the values are
/// divided by the analytic partition function.
PositionKernel mehler_position_kernel(const OscillatorSpec& s, double x_min,
                                      double x_max, int n_x,
                                      bool unit_trace = true);

/// Z = 1 / (2 sinh(hbar w beta / 2)), log-space guarded.
double ho_partition_function(const OscillatorSpec& s);
double ho_log_partition_function(const OscillatorSpec& s);

/// Closed-form thermal Wigner distribution
///   W(q,p) = tanh(t/2)/(pi hbar) exp(-(tanh(t/2)/(w hbar)) (p^2/m + m w^2 q^2)).
/// The grid must cover at least 6 thermal standard deviations per axis.
WignerState ho_wigner_closed_form(const OscillatorSpec& s,
                                  const PhaseSpaceGrid& g);

double thermal_sigma_q(const OscillatorSpec& s);
double thermal_sigma_p(const OscillatorSpec& s);

struct ClassicalDensity {
  GridSymbol density;  // exp(-beta H)/Z on the grid
  double Z;            // grid-trapezoid normalizer (no Planck-cell factor)
};

/// Classical Gibbs density for a polynomial Hamiltonian.  exp(-beta H)
/// must decay below 1e-10 of its maximum at the grid boundary.
ClassicalDensity classical_gibbs_density(const PolySymbol& h, double beta,
                                         const PhaseSpaceGrid& g);

/// e^{-beta h}/Tr for a Hermitian matrix operator.
EquilibriumState gibbs_state(const MatrixOperator& h, double beta);

struct Coupling {
  MatrixOperator S;
  BathCorrelation k;
};

/// Second-order reduced density
///   rho ~ e^{-beta h} [ 1 + (1/hbar) sum_a Int_0^{hbar beta} dt1
///                        Int_0^{t1} dt2 S_a(-i t1) S_a(-i t2) k_a(t1 - t2) ]
/// with S(-i tau) = e^{tau h/hbar} S e^{-tau h/hbar} evaluated in the
/// eigenbasis of h; composite trapezoid on the triangular (t1, t2) lattice
/// with n_tau panels per axis; trace-normalized.  Hermiticity of the
/// correction is measured and reported, not enforced.
EquilibriumState second_order_reduced_density(const MatrixOperator& h,
                                              const std::vector<Coupling>& couplings,
                                              double beta, int n_tau);

}  // namespace qphase
