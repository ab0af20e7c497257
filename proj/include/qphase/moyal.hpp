#pragma once

#include "qphase/symbols.hpp"

namespace qphase {

struct HbarContext {
  double hbar = 1.0;
  explicit HbarContext(double h = 1.0) : hbar(h) {
    if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  }
};

/// Star product a *_M b expanded as the terminating series
///   sum_k (1/k!) (i hbar / 2)^k J_k(a, b),
/// J_k the binomially expanded bidifferential
///   J_k(a,b) = sum_t (-1)^t C(k,t) [d_q^{k-t} d_p^t a][d_q^t d_p^{k-t} b].
/// Terminates at k = min(deg a, deg b) for polynomials.
ComplexPolySymbol moyal_product(const ComplexPolySymbol& a,
                                const ComplexPolySymbol& b,
                                const HbarContext& ctx);
ComplexPolySymbol moyal_product(const PolySymbol& a, const PolySymbol& b,
                                const HbarContext& ctx);

/// Moyal bracket {a,b}_M = (a*b - b*a)/(i hbar), normalized so that
/// {q,p}_M = 1 = {q,p}_PB.  Real for real inputs; the imaginary residue is
/// checked against 1e-12 and discarded.
PolySymbol moyal_bracket(const PolySymbol& a, const PolySymbol& b,
                         const HbarContext& ctx);

/// s-th term of the sine-series form of the bracket:
///   term_s = (-1)^s hbar^{2s} / (4^s (2s+1)!) * J_{2s+1}(a, b),
/// so term_0 is exactly the Poisson bracket and
/// moyal_bracket = sum_s term_s (the sum truncates).
PolySymbol bracket_order_term(const PolySymbol& a, const PolySymbol& b, int s,
                              const HbarContext& ctx);

/// Smallest bound B with bracket_order_term(s) = 0 whenever 2s+1 > B.
int bracket_termination_bound(const PolySymbol& a, const PolySymbol& b);

}  // namespace qphase
