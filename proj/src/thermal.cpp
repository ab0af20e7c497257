#include "qphase/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qphase {

namespace {

// log(sinh x) for x > 0 without overflow
double log_sinh(double x) {
  return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

// stable coth / csch via expm1; saturate for very large arguments
double coth(double x) {
  if (x > 350.0) return 1.0;
  double e = -std::expm1(-2.0 * x);  // 1 - exp(-2x)
  return (2.0 - e) / e;
}

double csch(double x) {
  if (x > 700.0) return 0.0;
  return 2.0 * std::exp(-x) / -std::expm1(-2.0 * x);
}

}  // namespace

BathCorrelation BathCorrelation::constant(double c) {
  return BathCorrelation([c](double) { return c; });
}

BathCorrelation BathCorrelation::exponential(double amplitude, double tau_c) {
  if (!(tau_c > 0)) throw std::invalid_argument("BathCorrelation: tau_c <= 0");
  return BathCorrelation(
      [amplitude, tau_c](double tau) { return amplitude * std::exp(-std::abs(tau) / tau_c); });
}

BathCorrelation BathCorrelation::table(std::vector<double> tau,
                                       std::vector<double> k) {
  if (tau.size() != k.size() || tau.size() < 2)
    throw std::invalid_argument("BathCorrelation table needs >= 2 matching samples");
  if (std::abs(tau.front()) > 1e-12)
    throw std::invalid_argument("BathCorrelation table must start at tau = 0");
  for (size_t i = 1; i < tau.size(); ++i)
    if (!(tau[i] > tau[i - 1]))
      throw std::invalid_argument("BathCorrelation table nodes must increase");
  for (double v : k)
    if (!std::isfinite(v))
      throw std::invalid_argument("BathCorrelation table has non-finite values");
  return BathCorrelation([tau = std::move(tau), k = std::move(k)](double t) {
    double a = std::abs(t);
    if (a > tau.back() * (1.0 + 1e-12))
      throw std::out_of_range("BathCorrelation table evaluated outside range");
    auto it = std::upper_bound(tau.begin(), tau.end(), a);
    if (it == tau.begin()) return k.front();
    if (it == tau.end()) return k.back();
    size_t hi = it - tau.begin(), lo = hi - 1;
    double f = (a - tau[lo]) / (tau[hi] - tau[lo]);
    return (1.0 - f) * k[lo] + f * k[hi];
  });
}

double mehler_kernel(const OscillatorSpec& s, double x_f, double x_i) {
  double t = s.theta();
  double log_pref = 0.5 * (std::log(s.mass * s.omega) -
                           std::log(2.0 * std::numbers::pi * s.hbar) -
                           log_sinh(t));
  double expo = -(s.mass * s.omega / (2.0 * s.hbar)) *
                ((x_f * x_f + x_i * x_i) * coth(t) - 2.0 * x_f * x_i * csch(t));
  return std::exp(log_pref + expo);
}

PositionKernel mehler_position_kernel(const OscillatorSpec& s, double x_min,
                                      double x_max, int n_x, bool unit_trace) {
  Eigen::MatrixXcd v(n_x, n_x);
  double dx = (x_max - x_min) / (n_x - 1);
  double scale = unit_trace ? 1.0 / ho_partition_function(s) : 1.0;
  for (int a = 0; a < n_x; ++a) {
    double xa = x_min + a * dx;
    for (int b = 0; b <= a; ++b) {
      double val = scale * mehler_kernel(s, xa, x_min + b * dx);
      v(a, b) = val;
      v(b, a) = val;
    }
  }
  return {x_min, x_max, std::move(v)};
}

double ho_log_partition_function(const OscillatorSpec& s) {
  double t = s.theta();
  // -log(2 sinh(t/2)) = -t/2 - log(1 - e^{-t})
  return -0.5 * t - std::log1p(-std::exp(-t));
}

double ho_partition_function(const OscillatorSpec& s) {
  return std::exp(ho_log_partition_function(s));
}

double thermal_sigma_q(const OscillatorSpec& s) {
  return std::sqrt(s.hbar * coth(0.5 * s.theta()) / (2.0 * s.mass * s.omega));
}

double thermal_sigma_p(const OscillatorSpec& s) {
  return std::sqrt(s.mass * s.omega * s.hbar * coth(0.5 * s.theta()) / 2.0);
}

WignerState ho_wigner_closed_form(const OscillatorSpec& s,
                                  const PhaseSpaceGrid& g) {
  double sq = 6.0 * thermal_sigma_q(s), sp = 6.0 * thermal_sigma_p(s);
  if (g.q_min > -sq || g.q_max < sq || g.p_min > -sp || g.p_max < sp)
    throw std::invalid_argument(
        "ho_wigner_closed_form: grid must cover 6 thermal standard deviations");
  double th = std::tanh(0.5 * s.theta());
  double pref = th / (std::numbers::pi * s.hbar);
  double c = th / (s.omega * s.hbar);
  Eigen::MatrixXd v(g.n_q, g.n_p);
  for (int i = 0; i < g.n_q; ++i) {
    double q = g.q_at(i);
    double hq = s.mass * s.omega * s.omega * q * q;
    for (int j = 0; j < g.n_p; ++j) {
      double p = g.p_at(j);
      v(i, j) = pref * std::exp(-c * (p * p / s.mass + hq));
    }
  }
  double integral = trapezoid_integral(g, v);
  if (std::abs(integral - 1.0) > 1e-6)
    throw std::runtime_error(
        "ho_wigner_closed_form: grid integral deviates from 1 by " +
        std::to_string(integral - 1.0));
  return {g, std::move(v), s.hbar};
}

ClassicalDensity classical_gibbs_density(const PolySymbol& h, double beta,
                                         const PhaseSpaceGrid& g) {
  if (!(beta > 0)) throw std::invalid_argument("classical_gibbs_density: beta <= 0");
  GridSymbol hs = sample_on_grid(h, g);
  double hmin = hs.values.minCoeff();
  Eigen::MatrixXd w =
      (-(beta) * (hs.values.array() - hmin)).exp().matrix();
  // boundary decay check relative to the max (which is 1 after the shift)
  double edge = 0.0;
  for (int i = 0; i < g.n_q; ++i)
    edge = std::max({edge, w(i, 0), w(i, g.n_p - 1)});
  for (int j = 0; j < g.n_p; ++j)
    edge = std::max({edge, w(0, j), w(g.n_q - 1, j)});
  if (edge > 1e-10)
    throw std::invalid_argument(
        "classical_gibbs_density: exp(-beta H) does not decay at the grid "
        "boundary (edge value " + std::to_string(edge) + ")");
  double zs = trapezoid_integral(g, w);  // shifted normalizer
  double Z = zs * std::exp(-beta * hmin);
  w /= zs;
  return {GridSymbol{g, std::move(w)}, Z};
}

namespace {

void require_hermitian(const Eigen::MatrixXcd& m, const char* what) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument(std::string(what) + " must be Hermitian");
}

}  // namespace

EquilibriumState gibbs_state(const MatrixOperator& h, double beta) {
  if (!(beta > 0)) throw std::invalid_argument("gibbs_state: beta <= 0");
  require_hermitian(h.entries, "gibbs_state: hamiltonian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
  Eigen::VectorXd E = es.eigenvalues();
  Eigen::VectorXd w = (-(beta) * (E.array() - E.minCoeff())).exp();
  Eigen::MatrixXcd rho = es.eigenvectors() * w.asDiagonal() *
                         es.eigenvectors().adjoint();
  rho /= rho.trace().real();
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  return {MatrixOperator{std::move(rho), h.basis}, beta, Provenance::gibbs, herm};
}

EquilibriumState second_order_reduced_density(
    const MatrixOperator& h, const std::vector<Coupling>& couplings,
    double beta, int n_tau) {
  if (!(beta > 0))
    throw std::invalid_argument("second_order_reduced_density: beta <= 0");
  if (n_tau < 8)
    throw std::invalid_argument("second_order_reduced_density: n_tau < 8");
  require_hermitian(h.entries, "second_order_reduced_density: hamiltonian");
  for (const auto& c : couplings) {
    require_hermitian(c.S.entries, "second_order_reduced_density: coupling");
    if (c.S.dim != h.dim)
      throw std::invalid_argument(
          "second_order_reduced_density: coupling dimension mismatch");
  }

  const double hbar = h.basis.hbar;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries);
  Eigen::VectorXd E = es.eigenvalues();
  double spread = E.maxCoeff() - E.minCoeff();
  if (beta * spread > 700.0)
    throw std::runtime_error(
        "second_order_reduced_density: imaginary-time propagator overflows "
        "(beta * spectral spread = " + std::to_string(beta * spread) + ")");
  const Eigen::MatrixXcd& U = es.eigenvectors();
  const int d = h.dim;
  const int nodes = n_tau + 1;
  const double dtau = hbar * beta / n_tau;

  Eigen::MatrixXcd corr = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& cpl : couplings) {
    Eigen::MatrixXcd S = U.adjoint() * cpl.S.entries * U;
    // S(-i tau) in the eigenbasis picks up e^{tau (E_i - E_j)/hbar}
    std::vector<Eigen::MatrixXcd> st(nodes);
    for (int k = 0; k < nodes; ++k) {
      double tau = k * dtau;
      st[k].resize(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          st[k](i, j) = S(i, j) * std::exp(tau * (E[i] - E[j]) / hbar);
    }
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 1; k < nodes; ++k) {  // outer tau_1 node (k = 0 inner is empty)
      Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(d, d);
      for (int j = 0; j <= k; ++j) {
        double w = (j == 0 || j == k) ? 0.5 : 1.0;
        inner += (w * cpl.k((k - j) * dtau)) * st[j];
      }
      double wk = (k == n_tau) ? 0.5 : 1.0;
      acc += wk * (st[k] * inner) * dtau;
    }
    corr += acc * dtau;
  }

  Eigen::VectorXd gw = (-(beta) * (E.array() - E.minCoeff())).exp();
  Eigen::MatrixXcd rho_eig =
      gw.asDiagonal() *
      (Eigen::MatrixXcd::Identity(d, d) + corr / hbar);
  Eigen::MatrixXcd rho = U * rho_eig * U.adjoint();
  std::complex<double> tr = rho.trace();
  if (!(std::abs(tr) > 0) || !std::isfinite(std::abs(tr)))
    throw std::runtime_error("second_order_reduced_density: degenerate trace");
  rho /= tr;
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  return {MatrixOperator{std::move(rho), h.basis}, beta,
          Provenance::second_order, herm};
}

}  // namespace qphase
