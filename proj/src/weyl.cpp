#include "qphase/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qphase {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

double binom(int k, int t) {
  double out = 1.0;
  for (int i = 0; i < t; ++i) out = out * (k - i) / (i + 1);
  return out;
}
}  // namespace

MatrixOperator::MatrixOperator(Eigen::MatrixXcd e, OscillatorBasis b)
    : dim(static_cast<int>(e.rows())), entries(std::move(e)), basis(b) {
  if (entries.rows() != entries.cols())
    throw std::invalid_argument("MatrixOperator must be square");
  if (!entries.allFinite())
    throw std::invalid_argument("MatrixOperator has non-finite entries");
}

PositionKernel::PositionKernel(double xmin, double xmax, Eigen::MatrixXcd v)
    : x_min(xmin), x_max(xmax), n_x(static_cast<int>(v.rows())),
      values(std::move(v)) {
  if (values.rows() != values.cols())
    throw std::invalid_argument("PositionKernel must be square");
  if (n_x < 16 || n_x % 2 != 0)
    throw std::invalid_argument("PositionKernel needs n_x >= 16 and even");
  if (!(x_max > x_min))
    throw std::invalid_argument("PositionKernel needs x_max > x_min");
  if (!values.allFinite())
    throw std::invalid_argument("PositionKernel has non-finite values");
}

WignerState::WignerState(PhaseSpaceGrid g, Eigen::MatrixXd v, double h)
    : grid(g), values(std::move(v)), hbar(h) {
  if (values.rows() != grid.n_q || values.cols() != grid.n_p)
    throw std::invalid_argument("WignerState: value matrix does not match grid");
  if (!(hbar > 0)) throw std::invalid_argument("WignerState: hbar must be positive");
  if (!values.allFinite())
    throw std::invalid_argument("WignerState: non-finite values");
}

Eigen::MatrixXcd position_matrix(int dim, const OscillatorBasis& b) {
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(dim, dim);
  double s = std::sqrt(b.hbar / (2.0 * b.mass * b.omega));
  for (int n = 0; n + 1 < dim; ++n) {
    double v = s * std::sqrt(double(n + 1));
    Q(n, n + 1) = v;
    Q(n + 1, n) = v;
  }
  return Q;
}

Eigen::MatrixXcd momentum_matrix(int dim, const OscillatorBasis& b) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  double s = std::sqrt(b.mass * b.omega * b.hbar / 2.0);
  for (int n = 0; n + 1 < dim; ++n) {
    double v = s * std::sqrt(double(n + 1));
    P(n, n + 1) = -kI * v;  // a term
    P(n + 1, n) = kI * v;   // a^dagger term
  }
  return P;
}

MatrixOperator weyl_quantize(const PolySymbol& s, int dim,
                             const OscillatorBasis& b) {
  int deg = std::max(s.degree(), 0);
  if (dim <= deg + 2)
    throw std::invalid_argument(
        "weyl_quantize: dim too small, truncation would corrupt the top block");

  Eigen::MatrixXcd Q = position_matrix(dim, b);
  Eigen::MatrixXcd P = momentum_matrix(dim, b);
  int max_m = s.degree_in(Var::q);
  std::vector<Eigen::MatrixXcd> qpow(max_m + 1);
  qpow[0] = Eigen::MatrixXcd::Identity(dim, dim);
  for (int k = 1; k <= max_m; ++k) qpow[k] = qpow[k - 1] * Q;

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [mn, c] : s.terms()) {
    auto [m, n] = mn;
    Eigen::MatrixXcd pn = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 0; k < n; ++k) pn *= P;
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k <= m; ++k) w += binom(m, k) * qpow[k] * pn * qpow[m - k];
    out += (c / std::pow(2.0, m)) * w;
  }
  return {std::move(out), b};
}

PolySymbol inverse_weyl_polynomial(const MatrixOperator& o, int max_degree) {
  if (max_degree < 0)
    throw std::invalid_argument("inverse_weyl_polynomial: max_degree < 0");
  // Entries of products of quantized polynomials are corrupted by the
  // truncation only near the top of the basis; fit on the clean block.
  int margin = max_degree + 4;
  int block = o.dim - margin;
  std::vector<Exponents> mons;
  for (int d = 0; d <= max_degree; ++d)
    for (int m = 0; m <= d; ++m) mons.push_back({m, d - m});
  if (block < 4 || block * block < static_cast<int>(mons.size()))
    throw std::invalid_argument(
        "inverse_weyl_polynomial: dim too small for requested degree");

  Eigen::MatrixXcd A(block * block, mons.size());
  std::vector<double> scale(mons.size());
  for (size_t c = 0; c < mons.size(); ++c) {
    auto w = weyl_quantize(
        PolySymbol::monomial(mons[c].first, mons[c].second), o.dim, o.basis);
    Eigen::MatrixXcd blk = w.entries.topLeftCorner(block, block);
    Eigen::Map<Eigen::VectorXcd> col(blk.data(), block * block);
    scale[c] = col.norm();
    A.col(c) = col / scale[c];
  }
  Eigen::MatrixXcd tgt = o.entries.topLeftCorner(block, block);
  Eigen::Map<Eigen::VectorXcd> bvec(tgt.data(), block * block);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  Eigen::VectorXcd coef = svd.solve(bvec);

  double resid = (A * coef - bvec).norm();
  double bnorm = std::max(1.0, bvec.norm());
  if (resid > 1e-8 * bnorm)
    throw std::runtime_error(
        "inverse_weyl_polynomial: block is not polynomial within tolerance "
        "(residual " + std::to_string(resid / bnorm) + ")");

  PolySymbol out;
  double imax = 0.0, rmax = 0.0;
  for (size_t c = 0; c < mons.size(); ++c) {
    std::complex<double> v = coef[c] / scale[c];
    imax = std::max(imax, std::abs(v.imag()));
    rmax = std::max(rmax, std::abs(v.real()));
    out += PolySymbol::monomial(mons[c].first, mons[c].second, v.real());
  }
  if (imax > 1e-10 * std::max(1.0, rmax))
    throw std::runtime_error(
        "inverse_weyl_polynomial: imaginary residue in coefficients "
        "(operator not Hermitian)");
  return out;
}

PolySymbol commutator_symbol(const PolySymbol& a, const PolySymbol& b,
                             int dim, const OscillatorBasis& basis) {
  auto A = weyl_quantize(a, dim, basis);
  auto B = weyl_quantize(b, dim, basis);
  Eigen::MatrixXcd comm =
      (A.entries * B.entries - B.entries * A.entries) / (kI * basis.hbar);
  int da = std::max(a.degree(), 0), db = std::max(b.degree(), 0);
  MatrixOperator C{std::move(comm), basis};
  return inverse_weyl_polynomial(C, std::max(da + db - 2, 0));
}

GridSymbol wigner_of_operator(const MatrixOperator& o,
                              const PhaseSpaceGrid& g) {
  int max_degree = std::min(12, o.dim - 8);
  if (max_degree < 0)
    throw std::invalid_argument("wigner_of_operator: dim too small");
  PolySymbol s = inverse_weyl_polynomial(o, max_degree);
  return sample_on_grid(s, g);
}

double nyquist_momentum(const PositionKernel& k, double hbar) {
  return std::numbers::pi * hbar / (2.0 * k.dx());
}

WignerState wigner_from_kernel(const PositionKernel& k, double hbar,
                               std::optional<PWindow> p_window) {
  if (!(hbar > 0)) throw std::invalid_argument("wigner_from_kernel: hbar <= 0");
  double vmax = k.values.cwiseAbs().maxCoeff();
  double herm = (k.values - k.values.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10 * std::max(1.0, vmax))
    throw std::invalid_argument("wigner_from_kernel: kernel not Hermitian");

  double dx = k.dx();
  std::complex<double> trace = 0.0;
  for (int a = 0; a < k.n_x; ++a) {
    double w = (a == 0 || a == k.n_x - 1) ? 0.5 : 1.0;
    trace += w * k.values(a, a);
  }
  trace *= dx;
  if (std::abs(trace) < 1e-12 * std::max(1.0, vmax))
    throw std::invalid_argument("wigner_from_kernel: kernel trace is zero");

  double p_nyq = nyquist_momentum(k, hbar);
  PWindow win = p_window.value_or(PWindow{-p_nyq, p_nyq, k.n_x});
  if (win.p_max > p_nyq * (1.0 + 1e-12) || win.p_min < -p_nyq * (1.0 + 1e-12))
    throw std::invalid_argument(
        "wigner_from_kernel: grid too coarse, Nyquist p-range is smaller "
        "than the requested window");

  PhaseSpaceGrid grid(k.x_min, k.x_max, k.n_x, win.p_min, win.p_max, win.n_p);
  Eigen::MatrixXd values(grid.n_q, grid.n_p);
  double imag_resid = 0.0;
  // offsets y = u/2 on the x-lattice; u-step 2 dx
  for (int i = 0; i < grid.n_q; ++i) {
    int mrange = std::min(i, k.n_x - 1 - i);
    for (int j = 0; j < grid.n_p; ++j) {
      double p = grid.p_at(j);
      double step_angle = -p * 2.0 * dx / hbar;
      std::complex<double> step = std::polar(1.0, step_angle);
      std::complex<double> z = std::polar(1.0, -step_angle * mrange);
      std::complex<double> acc = 0.0;
      for (int m = -mrange; m <= mrange; ++m) {
        double w = (std::abs(m) == mrange && mrange > 0) ? 0.5 : 1.0;
        acc += w * z * k.values(i + m, i - m);
        z *= step;
      }
      std::complex<double> v = acc * (2.0 * dx) / (2.0 * std::numbers::pi * hbar);
      values(i, j) = v.real();
      imag_resid = std::max(imag_resid, std::abs(v.imag()));
    }
  }
  double scale = values.cwiseAbs().maxCoeff();
  if (imag_resid > 1e-10 * std::max(1.0, scale))
    throw std::runtime_error("wigner_from_kernel: imaginary residue " +
                             std::to_string(imag_resid));

  double norm = trapezoid_integral(grid, values);
  if (!(std::abs(norm) > 0))
    throw std::runtime_error("wigner_from_kernel: vanishing normalization");
  values /= norm;
  return {grid, std::move(values), hbar};
}

}  // namespace qphase
