#include "qphase/symbols.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <sstream>

namespace qphase {

namespace {
std::atomic<int> g_max_degree{16};
}

int max_poly_degree() { return g_max_degree.load(); }

void set_max_poly_degree(int d) {
  if (d < 1) throw std::invalid_argument("max_poly_degree must be >= 1");
  g_max_degree.store(d);
}

ComplexPolySymbol to_complex(const PolySymbol& re, const PolySymbol& im) {
  ComplexPolySymbol out;
  for (const auto& [mn, c] : re.terms())
    out += ComplexPolySymbol::monomial(mn.first, mn.second, {c, 0.0});
  for (const auto& [mn, c] : im.terms())
    out += ComplexPolySymbol::monomial(mn.first, mn.second, {0.0, c});
  return out;
}

PolySymbol real_part(const ComplexPolySymbol& s) {
  PolySymbol out;
  for (const auto& [mn, c] : s.terms())
    out += PolySymbol::monomial(mn.first, mn.second, c.real());
  return out;
}

PolySymbol imag_part(const ComplexPolySymbol& s) {
  PolySymbol out;
  for (const auto& [mn, c] : s.terms())
    out += PolySymbol::monomial(mn.first, mn.second, c.imag());
  return out;
}

namespace {

// One term of the text format: [sign] coeff [*q^m] [*p^n]
void parse_term(const std::string& t, PolySymbol& acc) {
  size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse polynomial term '" + t + "': " + why);
  };
  if (t.empty()) fail("empty term");

  size_t coeff_end = 0;
  double coeff;
  try {
    coeff = std::stod(t, &coeff_end);
  } catch (const std::exception&) {
    fail("expected leading coefficient");
    return;
  }
  pos = coeff_end;

  int m = 0, n = 0;
  bool saw_q = false, saw_p = false;
  while (pos < t.size()) {
    if (t[pos] != '*') fail("expected '*'");
    ++pos;
    if (pos >= t.size()) fail("dangling '*'");
    char v = t[pos];
    if (v != 'q' && v != 'p') fail("expected variable q or p");
    ++pos;
    int expo = 1;
    if (pos < t.size() && t[pos] == '^') {
      ++pos;
      size_t used = 0;
      try {
        expo = std::stoi(t.substr(pos), &used);
      } catch (const std::exception&) {
        fail("bad exponent");
      }
      if (expo < 0) fail("negative exponent");
      pos += used;
    }
    if (v == 'q') {
      if (saw_q) fail("repeated q factor");
      saw_q = true;
      m = expo;
    } else {
      if (saw_p) fail("repeated p factor");
      saw_p = true;
      n = expo;
    }
  }
  acc += PolySymbol::monomial(m, n, coeff);
}

}  // namespace

PolySymbol parse_poly(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return {};
  if (s == "0") return {};

  PolySymbol out;
  std::string term;
  // split on '+' that starts a new term; '+'/'-' directly after 'e'/'E'
  // belongs to a float exponent.
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool in_float_exp = i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E');
    if (c == '+' && !in_float_exp && !term.empty()) {
      parse_term(term, out);
      term.clear();
    } else if (c == '+' && !in_float_exp && term.empty()) {
      // leading '+': ignore
    } else {
      term.push_back(c);
    }
  }
  if (!term.empty()) parse_term(term, out);
  return out;
}

namespace {
std::string fmt_coeff(double c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", c);
  return buf;
}
}  // namespace

std::string format_poly(const PolySymbol& s, bool simplify) {
  if (s.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mn, c] : s.terms()) {
    if (!first) out << " + ";
    first = false;
    out << fmt_coeff(c);
    auto [m, n] = mn;
    if (!simplify || m > 0) out << "*q^" << m;
    if (!simplify || n > 0) out << "*p^" << n;
  }
  return out.str();
}

PhaseSpaceGrid::PhaseSpaceGrid(double qmin, double qmax, int nq, double pmin,
                               double pmax, int np)
    : q_min(qmin), q_max(qmax), n_q(nq), p_min(pmin), p_max(pmax), n_p(np) {
  if (n_q < 8 || n_p < 8)
    throw std::invalid_argument("PhaseSpaceGrid needs at least 8 points per axis");
  if (!(q_max > q_min) || !(p_max > p_min))
    throw std::invalid_argument("PhaseSpaceGrid needs q_max > q_min and p_max > p_min");
}

GridSymbol::GridSymbol(PhaseSpaceGrid g, Eigen::MatrixXd v)
    : grid(g), values(std::move(v)) {
  if (values.rows() != grid.n_q || values.cols() != grid.n_p)
    throw std::invalid_argument("GridSymbol: value matrix does not match grid");
  if (!values.allFinite())
    throw std::invalid_argument("GridSymbol: non-finite values");
}

GridSymbol sample_on_grid(const PolySymbol& s, const PhaseSpaceGrid& g) {
  Eigen::MatrixXd v(g.n_q, g.n_p);
  for (int i = 0; i < g.n_q; ++i) {
    double q = g.q_at(i);
    for (int j = 0; j < g.n_p; ++j) v(i, j) = s.eval(q, g.p_at(j));
  }
  return {g, std::move(v)};
}

double trapezoid_integral(const PhaseSpaceGrid& g, const Eigen::MatrixXd& v) {
  if (v.rows() != g.n_q || v.cols() != g.n_p)
    throw std::invalid_argument("trapezoid_integral: shape mismatch");
  double acc = 0.0;
  for (int i = 0; i < g.n_q; ++i) {
    double wi = (i == 0 || i == g.n_q - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.n_p; ++j) {
      double wj = (j == 0 || j == g.n_p - 1) ? 0.5 : 1.0;
      acc += wi * wj * v(i, j);
    }
  }
  return acc * g.dq() * g.dp();
}

}  // namespace qphase
