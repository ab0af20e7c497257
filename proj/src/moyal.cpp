#include "qphase/moyal.hpp"

#include <algorithm>

namespace qphase {

namespace {

double binom(int k, int t) {
  double out = 1.0;
  for (int i = 0; i < t; ++i) out = out * (k - i) / (i + 1);
  return out;
}

// J_k(a, b) = sum_t (-1)^t C(k,t) [d_q^{k-t} d_p^t a][d_q^t d_p^{k-t} b]
template <typename C>
BasicPoly<C> bidifferential(const BasicPoly<C>& a, const BasicPoly<C>& b,
                            int k) {
  BasicPoly<C> out;
  for (int t = 0; t <= k; ++t) {
    auto da = partial_derivative(partial_derivative(a, Var::q, k - t), Var::p, t);
    if (da.is_zero()) continue;
    auto db = partial_derivative(partial_derivative(b, Var::q, t), Var::p, k - t);
    if (db.is_zero()) continue;
    C sign = (t % 2 == 0) ? C(1) : C(-1);
    out += (sign * C(binom(k, t))) * (da * db);
  }
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ComplexPolySymbol moyal_product(const ComplexPolySymbol& a,
                                const ComplexPolySymbol& b,
                                const HbarContext& ctx) {
  if (!a.is_zero() && !b.is_zero() &&
      a.degree() + b.degree() > max_poly_degree())
    throw std::domain_error("moyal_product exceeds degree bound");
  int kmax = std::min(a.degree(), b.degree());
  ComplexPolySymbol out;
  std::complex<double> pref(1.0, 0.0);
  const std::complex<double> step(0.0, ctx.hbar / 2.0);
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) pref *= step / double(k);
    auto jk = bidifferential(a, b, k);
    if (!jk.is_zero()) out += pref * jk;
  }
  return out;
}

ComplexPolySymbol moyal_product(const PolySymbol& a, const PolySymbol& b,
                                const HbarContext& ctx) {
  return moyal_product(to_complex(a), to_complex(b), ctx);
}

PolySymbol moyal_bracket(const PolySymbol& a, const PolySymbol& b,
                         const HbarContext& ctx) {
  ComplexPolySymbol comm =
      moyal_product(a, b, ctx) - moyal_product(b, a, ctx);
  // divide by i hbar: (x + iy)/(i hbar) = y/hbar - i x/hbar
  PolySymbol re;
  double residue = 0.0;
  for (const auto& [mn, c] : comm.terms()) {
    residue = std::max(residue, std::abs(c.real() / ctx.hbar));
    re += PolySymbol::monomial(mn.first, mn.second, c.imag() / ctx.hbar);
  }
  if (residue >= 1e-12)
    throw std::runtime_error(
        "moyal_bracket: non-negligible imaginary residue " +
        std::to_string(residue));
  return re;
}

PolySymbol bracket_order_term(const PolySymbol& a, const PolySymbol& b, int s,
                              const HbarContext& ctx) {
  if (s < 0) throw std::invalid_argument("bracket_order_term: s < 0");
  int order = 2 * s + 1;
  auto j = bidifferential(a, b, order);
  if (j.is_zero()) return {};
  double pref = ((s % 2 == 0) ? 1.0 : -1.0) *
                std::pow(ctx.hbar, 2 * s) /
                (std::pow(4.0, s) * factorial(order));
  return pref * j;
}

int bracket_termination_bound(const PolySymbol& a, const PolySymbol& b) {
  return std::min(a.degree(), b.degree());
}

}  // namespace qphase
