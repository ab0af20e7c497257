#pragma once

#include <optional>

#include "qphase/symbols.hpp"

namespace qphase {

/// Truncated harmonic-oscillator eigenbasis parameters.
struct OscillatorBasis {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  OscillatorBasis(double m = 1.0, double w = 1.0, double h = 1.0)
      : mass(m), omega(w), hbar(h) {
    if (!(mass > 0) || !(omega > 0) || !(hbar > 0))
      throw std::invalid_argument("OscillatorBasis parameters must be positive");
  }
};

/// Dense operator in a truncated oscillator eigenbasis.
struct MatrixOperator {
  int dim;
  Eigen::MatrixXcd entries;
  OscillatorBasis basis;

  MatrixOperator(Eigen::MatrixXcd e, OscillatorBasis b);
};

/// Sampled position-basis matrix elements <x_f|O|x_i> on a uniform grid.
struct PositionKernel {
  double x_min, x_max;
  int n_x;
  Eigen::MatrixXcd values;  // values(a, b) = <x_a|O|x_b>

  PositionKernel(double xmin, double xmax, Eigen::MatrixXcd v);
  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double x_at(int a) const { return x_min + a * dx(); }
};

/// Grid-sampled Wigner distribution, normalized to unit integral.
struct WignerState {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;
  double hbar;

  WignerState(PhaseSpaceGrid g, Eigen::MatrixXd v, double h);
};

/// Position / momentum matrices in the truncated eigenbasis.
Eigen::MatrixXcd position_matrix(int dim, const OscillatorBasis& b);
Eigen::MatrixXcd momentum_matrix(int dim, const OscillatorBasis& b);

/// Weyl quantization: each monomial q^m p^n maps to the fully symmetrized
/// operator product (the average over all interleavings of m position and
/// n momentum factors), built with the McCoy identity
///   W(q^m p^n) = 2^{-m} sum_k C(m,k) Q^k P^n Q^{m-k}.
/// Requires dim > total degree + 2 so the block used downstream stays clean.
MatrixOperator weyl_quantize(const PolySymbol& s, int dim,
                             const OscillatorBasis& b);

/// Recover the polynomial Weyl symbol of an operator assembled from
/// quantized polynomials.  Entries of such operators are exact away from
/// the truncation edge, so a least-squares fit of quantized monomials
/// against the safe upper-left block reproduces the symbol to roundoff.
/// Throws if the residual says the block is not polynomial up to
/// max_degree, or if the imaginary residue of the coefficients exceeds
/// 1e-10 (non-Hermitian input).
PolySymbol inverse_weyl_polynomial(const MatrixOperator& o, int max_degree);

/// Fock-basis commutator oracle: the Weyl symbol of (1/i hbar)[A, B] with
/// A, B the quantizations of a and b.  Independent of the Moyal series.
PolySymbol commutator_symbol(const PolySymbol& a, const PolySymbol& b,
                             int dim, const OscillatorBasis& basis);

/// Weyl symbol of an operator sampled on a grid (no normalization).
GridSymbol wigner_of_operator(const MatrixOperator& o, const PhaseSpaceGrid& g);

struct PWindow {
  double p_min, p_max;
  int n_p;
};

/// Wigner distribution from a position kernel:
///   W(q, p) = (1 / 2 pi hbar) Int du e^{-i p u / hbar} K(q + u/2, q - u/2)
/// with the u-integral discretized on the offset lattice induced by the
/// x-grid (offsets y = u/2 step by dx, so the usable p range has total
/// width pi hbar / dx, i.e. |p| <= pi hbar / (2 dx)).  The q-grid is the
/// kernel's diagonal grid; the result is normalized to unit integral.
WignerState wigner_from_kernel(const PositionKernel& k, double hbar,
                               std::optional<PWindow> p_window = std::nullopt);

/// Nyquist momentum bound pi hbar / (2 dx) of a kernel's offset lattice.
double nyquist_momentum(const PositionKernel& k, double hbar);

}  // namespace qphase
