#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qphase {

/// Coefficients with magnitude below this are dropped after arithmetic so
/// the sparse term map stays canonical (no stored zeros).
inline constexpr double kCoeffPrune = 1e-15;

/// Global cap on the total degree a polynomial operation may produce.
/// Default 16; set once at startup if a larger working degree is needed.
int max_poly_degree();
void set_max_poly_degree(int d);

enum class Var { q, p };

/// Exponent pair (m, n) of a monomial q^m p^n.
using Exponents = std::pair<int, int>;

namespace detail {

template <typename C>
bool negligible(const C& c) {
  return std::abs(c) < kCoeffPrune;
}

}  // namespace detail

/// Sparse polynomial sum c_{mn} q^m p^n over the canonical pair.
/// Immutable in spirit: every operation returns a new value.
template <typename C>
class BasicPoly {
 public:
  BasicPoly() = default;
  explicit BasicPoly(C constant) {
    if (!detail::negligible(constant)) terms_[{0, 0}] = constant;
  }

  static BasicPoly monomial(int m, int n, C c = C(1)) {
    if (m < 0 || n < 0) throw std::invalid_argument("monomial: negative exponent");
    if (m + n > max_poly_degree())
      throw std::domain_error("monomial: degree exceeds bound");
    BasicPoly out;
    if (!detail::negligible(c)) out.terms_[{m, n}] = c;
    return out;
  }

  const std::map<Exponents, C>& terms() const { return terms_; }

  C coefficient(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? C(0) : it->second;
  }

  bool is_zero() const { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [mn, c] : terms_) d = std::max(d, mn.first + mn.second);
    return d;
  }

  int degree_in(Var v) const {
    int d = 0;
    for (const auto& [mn, c] : terms_)
      d = std::max(d, v == Var::q ? mn.first : mn.second);
    return d;
  }

  /// Horner-by-variable evaluation: inner Horner in q per p-power, outer
  /// Horner in p.
  C eval(double q, double p) const {
    if (terms_.empty()) return C(0);
    int max_n = degree_in(Var::p);
    int max_m = degree_in(Var::q);
    std::vector<std::vector<C>> by_p(max_n + 1, std::vector<C>(max_m + 1, C(0)));
    for (const auto& [mn, c] : terms_) by_p[mn.second][mn.first] = c;
    C acc(0);
    for (int n = max_n; n >= 0; --n) {
      C row(0);
      for (int m = max_m; m >= 0; --m) row = row * q + by_p[n][m];
      acc = acc * p + row;
    }
    return acc;
  }

  BasicPoly& operator+=(const BasicPoly& o) {
    for (const auto& [mn, c] : o.terms_) terms_[mn] += c;
    prune();
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    for (const auto& [mn, c] : o.terms_) terms_[mn] -= c;
    prune();
    return *this;
  }
  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator-(const BasicPoly& a) { return a * C(-1); }

  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    if (!a.terms_.empty() && !b.terms_.empty() &&
        a.degree() + b.degree() > max_poly_degree())
      throw std::domain_error("polynomial product exceeds degree bound");
    BasicPoly out;
    for (const auto& [mn1, c1] : a.terms_)
      for (const auto& [mn2, c2] : b.terms_)
        out.terms_[{mn1.first + mn2.first, mn1.second + mn2.second}] += c1 * c2;
    out.prune();
    return out;
  }
  friend BasicPoly operator*(const BasicPoly& a, C s) {
    BasicPoly out;
    for (const auto& [mn, c] : a.terms_)
      if (!detail::negligible(c * s)) out.terms_[mn] = c * s;
    return out;
  }
  friend BasicPoly operator*(C s, const BasicPoly& a) { return a * s; }

  bool operator==(const BasicPoly& o) const { return terms_ == o.terms_; }

 private:
  std::map<Exponents, C> terms_;

  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = detail::negligible(it->second) ? terms_.erase(it) : std::next(it);
  }

  template <typename T>
  friend BasicPoly<T> partial_derivative(const BasicPoly<T>&, Var, int);
};

using PolySymbol = BasicPoly<double>;
using ComplexPolySymbol = BasicPoly<std::complex<double>>;

/// Exact coefficient-level derivative; order 0 is the identity.
template <typename C>
BasicPoly<C> partial_derivative(const BasicPoly<C>& s, Var v, int order = 1) {
  if (order < 0) throw std::invalid_argument("partial_derivative: order < 0");
  BasicPoly<C> cur = s;
  for (int k = 0; k < order; ++k) {
    BasicPoly<C> next;
    for (const auto& [mn, c] : cur.terms_) {
      auto [m, n] = mn;
      if (v == Var::q && m > 0) next.terms_[{m - 1, n}] += c * C(m);
      if (v == Var::p && n > 0) next.terms_[{m, n - 1}] += c * C(n);
    }
    next.prune();
    cur = std::move(next);
    if (cur.is_zero()) break;
  }
  return cur;
}

/// {a, b}_PB = d_q a d_p b - d_p a d_q b, exact in coefficients.
template <typename C>
BasicPoly<C> poisson_bracket(const BasicPoly<C>& a, const BasicPoly<C>& b) {
  return partial_derivative(a, Var::q) * partial_derivative(b, Var::p) -
         partial_derivative(a, Var::p) * partial_derivative(b, Var::q);
}

ComplexPolySymbol to_complex(const PolySymbol& re, const PolySymbol& im = {});
PolySymbol real_part(const ComplexPolySymbol& s);
PolySymbol imag_part(const ComplexPolySymbol& s);

/// Text form: `c*q^m*p^n` terms joined by `+`, whitespace-insensitive.
PolySymbol parse_poly(const std::string& text);
/// Canonical text form. With simplify=true, q^0/p^0 factors are omitted
/// (display form used by the CLI).
std::string format_poly(const PolySymbol& s, bool simplify = false);

/// Uniform rectangular phase-space grid with inclusive endpoints.
struct PhaseSpaceGrid {
  double q_min, q_max;
  int n_q;
  double p_min, p_max;
  int n_p;

  PhaseSpaceGrid(double qmin, double qmax, int nq, double pmin, double pmax,
                 int np);

  double dq() const { return (q_max - q_min) / (n_q - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
  double q_at(int i) const { return q_min + i * dq(); }
  double p_at(int j) const { return p_min + j * dp(); }
  bool operator==(const PhaseSpaceGrid&) const = default;
};

/// Real-valued field sampled on a PhaseSpaceGrid (n_q x n_p).
struct GridSymbol {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;

  GridSymbol(PhaseSpaceGrid g, Eigen::MatrixXd v);
};

GridSymbol sample_on_grid(const PolySymbol& s, const PhaseSpaceGrid& g);

/// 2-D trapezoid integral of a sampled field over its grid.
double trapezoid_integral(const PhaseSpaceGrid& g, const Eigen::MatrixXd& v);
inline double trapezoid_integral(const GridSymbol& s) {
  return trapezoid_integral(s.grid, s.values);
}

}  // namespace qphase
