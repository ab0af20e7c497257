#include "qphase/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qphase/equipartition.hpp"
#include "qphase/io.hpp"
#include "qphase/moyal.hpp"

namespace qphase::cli {

namespace {

struct CommonOpts {
  double mass = 1.0, omega = 1.0, hbar = 1.0, kB = 1.0;
  std::vector<double> betas;
  std::string beta_log;
  int grid_n = 257;
  double grid_sigma = 6.0;
  std::string out;
  std::string format = "csv";
};

void add_spec_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--mass", o.mass, "oscillator mass");
  cmd->add_option("--omega", o.omega, "angular frequency");
  cmd->add_option("--hbar", o.hbar, "reduced Planck constant");
  cmd->add_option("--kB", o.kB, "Boltzmann constant");
}

void add_output_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::vector<double> resolve_betas(const CommonOpts& o) {
  std::vector<double> betas = o.betas;
  if (!o.beta_log.empty()) {
    double lo, hi;
    int n;
    if (std::sscanf(o.beta_log.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 ||
        !(lo > 0) || !(hi > lo) || n < 2)
      throw std::invalid_argument("--beta-log expects lo:hi:n with 0 < lo < hi, n >= 2");
    for (int i = 0; i < n; ++i)
      betas.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  }
  if (betas.empty())
    throw std::invalid_argument("no temperatures given; use --beta or --beta-log");
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  return betas;
}

// stream either to --out or to stdout
class OutStream {
 public:
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file: " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_ho_sweep(const CommonOpts& o) {
  std::vector<double> betas = resolve_betas(o);
  OscillatorSpec spec(o.mass, o.omega, betas.front(), o.hbar, o.kB);
  GridPolicy policy;
  policy.points = o.grid_n;
  policy.min_sigma = o.grid_sigma;
  auto reports = temperature_sweep(spec, betas, policy);
  OutStream out(o.out);
  if (o.format == "json")
    io::write_reports_json(out.get(), reports);
  else
    io::write_reports_csv(out.get(), reports);
  return 0;
}

int cmd_wigner_grid(const CommonOpts& o, bool closed_form, bool compare) {
  std::vector<double> betas = resolve_betas(o);
  if (betas.size() != 1)
    throw std::invalid_argument("wigner-grid expects exactly one --beta");
  OscillatorSpec spec(o.mass, o.omega, betas.front(), o.hbar, o.kB);
  int n = o.grid_n % 2 == 0 ? o.grid_n : o.grid_n + 1;  // kernel wants even
  GridPolicy policy;
  policy.points = n;
  policy.min_sigma = o.grid_sigma;
  PhaseSpaceGrid grid = auto_grid(spec, policy);

  auto pipeline = [&]() {
    PositionKernel kern =
        mehler_position_kernel(spec, grid.q_min, grid.q_max, grid.n_q, true);
    return wigner_from_kernel(kern, spec.hbar,
                              PWindow{grid.p_min, grid.p_max, grid.n_p});
  };

  std::optional<WignerState> w;
  double sup_diff = 0.0;
  if (compare || !closed_form) {
    w = pipeline();
    if (compare) {
      WignerState cf = ho_wigner_closed_form(spec, w->grid);
      sup_diff = (w->values - cf.values).cwiseAbs().maxCoeff();
      if (closed_form) w = std::move(cf);
    }
  } else {
    w = ho_wigner_closed_form(spec, grid);
  }

  OutStream out(o.out);
  if (o.format == "json")
    io::write_wigner_json(out.get(), *w);
  else
    io::write_wigner_csv(out.get(), *w);

  char line[64];
  std::snprintf(line, sizeof(line), "integral=%.6f",
                trapezoid_integral(w->grid, w->values));
  std::cout << line << '\n';
  if (compare) {
    std::cout << "supnorm_diff=" << io::fmt_g12(sup_diff) << '\n';
    if (sup_diff > 1e-6)
      throw std::runtime_error("wigner-grid: pipeline and closed form differ by " +
                               io::fmt_g12(sup_diff));
  }
  return 0;
}

PolySymbol parse_pair_side(const std::string& text) {
  PolySymbol s = parse_poly(text);
  if (s.is_zero()) throw std::invalid_argument("pair polynomial is zero: " + text);
  return s;
}

int cmd_moyal_check(const CommonOpts& o, const std::vector<std::string>& pairs) {
  HbarContext ctx(o.hbar);
  OscillatorBasis basis(o.mass, o.omega, o.hbar);
  std::vector<std::pair<PolySymbol, PolySymbol>> jobs = {
      {PolySymbol::monomial(3, 0), PolySymbol::monomial(0, 3)},
      {PolySymbol::monomial(1, 0), PolySymbol::monomial(0, 1)},
      {PolySymbol::monomial(1, 1), PolySymbol::monomial(4, 0)},
  };
  for (const auto& p : pairs) {
    auto bar = p.find('|');
    if (bar == std::string::npos)
      throw std::invalid_argument("pair must be `A | B` polynomials: " + p);
    jobs.emplace_back(parse_pair_side(p.substr(0, bar)),
                      parse_pair_side(p.substr(bar + 1)));
  }

  bool ok = true;
  for (const auto& [a, b] : jobs) {
    PolySymbol bracket = moyal_bracket(a, b, ctx);
    PolySymbol pb = poisson_bracket(a, b);
    PolySymbol oracle = commutator_symbol(a, b, 40, basis);

    auto max_diff = [](const PolySymbol& x, const PolySymbol& y) {
      double d = 0.0;
      for (const auto& [mn, c] : x.terms())
        d = std::max(d, std::abs(c - y.coefficient(mn.first, mn.second)));
      for (const auto& [mn, c] : y.terms())
        d = std::max(d, std::abs(c - x.coefficient(mn.first, mn.second)));
      return d;
    };
    double fock_dev = max_diff(bracket, oracle);
    double poisson_dev = max_diff(bracket, pb);

    // display: hbar-graded terms, constant hbar powers factored out
    std::ostringstream disp;
    bool first = true;
    for (int s = 0; 2 * s + 1 <= bracket_termination_bound(a, b); ++s) {
      PolySymbol term = bracket_order_term(a, b, s, HbarContext(1.0));
      if (term.is_zero()) continue;
      if (!first) disp << " + ";
      first = false;
      std::string t = format_poly(term, true);
      disp << t;
      if (s > 0) disp << "*hbar^" << 2 * s;
    }
    std::cout << "pair: " << format_poly(a, true) << " | " << format_poly(b, true)
              << '\n';
    std::cout << "bracket: " << (first ? "0" : disp.str()) << '\n';
    std::cout << "fock_deviation: " << io::fmt_g12(fock_dev) << '\n';
    std::cout << "poisson_deviation: " << io::fmt_g12(poisson_dev) << '\n';
    if (fock_dev > 1e-8) ok = false;
  }
  if (!ok)
    throw std::runtime_error("moyal-check: series bracket deviates from the "
                             "Fock-basis oracle beyond 1e-8");
  return 0;
}

BathCorrelation parse_bath(const std::string& spec) {
  if (spec.rfind("const:", 0) == 0)
    return BathCorrelation::constant(std::stod(spec.substr(6)));
  if (spec.rfind("exp:", 0) == 0) {
    double a, tc;
    if (std::sscanf(spec.c_str(), "exp:%lf:%lf", &a, &tc) != 2)
      throw std::invalid_argument("--bath exp form is exp:amplitude:tau_c");
    return BathCorrelation::exponential(a, tc);
  }
  return io::load_bath_csv(spec);
}

int cmd_second_order(const CommonOpts& o, const std::string& h_path,
                     const std::vector<std::string>& coupling_paths,
                     const std::vector<std::string>& bath_specs, int n_tau) {
  std::vector<double> betas = resolve_betas(o);
  if (betas.size() != 1)
    throw std::invalid_argument("second-order expects exactly one --beta");
  double beta = betas.front();

  OscillatorBasis basis(o.mass, o.omega, o.hbar);
  Eigen::MatrixXd hm = io::load_matrix_csv(h_path);
  MatrixOperator h{hm.cast<std::complex<double>>(), basis};

  if (!coupling_paths.empty() && bath_specs.size() != coupling_paths.size() &&
      bath_specs.size() != 1)
    throw std::invalid_argument(
        "supply one --bath per --coupling (or a single --bath for all)");
  std::vector<Coupling> couplings;
  for (size_t i = 0; i < coupling_paths.size(); ++i) {
    Eigen::MatrixXd sm = io::load_matrix_csv(coupling_paths[i]);
    BathCorrelation k =
        parse_bath(bath_specs.size() == 1 ? bath_specs[0] : bath_specs[i]);
    couplings.push_back({MatrixOperator{sm.cast<std::complex<double>>(), basis},
                         std::move(k)});
  }

  EquilibriumState st = second_order_reduced_density(h, couplings, beta, n_tau);
  EquilibriumState st2 =
      second_order_reduced_density(h, couplings, beta, 2 * n_tau);
  double richardson = (st.rho.entries - st2.rho.entries).cwiseAbs().sum();

  double comm_resid =
      (st.rho.entries * h.entries - h.entries * st.rho.entries)
          .cwiseAbs()
          .maxCoeff();
  double imag_resid = st.rho.entries.imag().cwiseAbs().maxCoeff();

  OutStream out(o.out);
  io::write_matrix_csv(out.get(), st.rho.entries.real());
  std::cout << "trace=" << io::fmt_g12(st.rho.entries.trace().real()) << '\n';
  std::cout << "hermiticity_residual=" << io::fmt_g12(st.hermiticity_residual)
            << '\n';
  std::cout << "commutator_residual=" << io::fmt_g12(comm_resid) << '\n';
  std::cout << "imag_residual=" << io::fmt_g12(imag_resid) << '\n';
  std::cout << "richardson=" << io::fmt_g12(richardson) << '\n';
  if (richardson > 1e-6)
    throw std::runtime_error(
        "second-order: quadrature Richardson check failed (" +
        io::fmt_g12(richardson) + " trace-norm drift)");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"phase-space thermal averages for a single quantum degree of freedom"};
  app.set_config("--config", "", "key=value config file; flags override");
  app.require_subcommand(1);

  CommonOpts o;

  auto* sweep = app.add_subcommand("ho-sweep",
                                   "oscillator virial averages over temperatures");
  add_spec_options(sweep, o);
  add_output_options(sweep, o);
  sweep->add_option("--beta", o.betas, "inverse temperature (repeatable)");
  sweep->add_option("--beta-log", o.beta_log, "log-spaced betas lo:hi:n");
  sweep->add_option("--grid-n", o.grid_n, "grid points per axis");
  sweep->add_option("--grid-sigma", o.grid_sigma, "minimum half-extent in sigmas");

  auto* wig = app.add_subcommand("wigner-grid",
                                 "thermal Wigner distribution on a grid");
  bool closed_form = false, compare = false;
  add_spec_options(wig, o);
  add_output_options(wig, o);
  wig->add_option("--beta", o.betas, "inverse temperature");
  wig->add_option("--grid-n", o.grid_n, "grid points per axis");
  wig->add_option("--grid-sigma", o.grid_sigma, "minimum half-extent in sigmas");
  wig->add_flag("--closed-form", closed_form, "emit the closed-form state");
  wig->add_flag("--compare", compare,
                "also run the kernel pipeline and print the sup-norm difference");

  auto* moy = app.add_subcommand("moyal-check",
                                 "bracket self-checks against the Fock oracle");
  std::vector<std::string> pairs;
  add_spec_options(moy, o);
  moy->add_option("pairs", pairs, "extra polynomial pairs `A | B`");

  auto* sec = app.add_subcommand("second-order",
                                 "second-order reduced thermal density matrix");
  std::string h_path;
  std::vector<std::string> coupling_paths, bath_specs;
  int n_tau = 32;
  add_spec_options(sec, o);
  add_output_options(sec, o);
  sec->add_option("--beta", o.betas, "inverse temperature");
  sec->add_option("--hamiltonian", h_path, "system Hamiltonian CSV")->required();
  sec->add_option("--coupling", coupling_paths, "coupling operator CSV (repeatable)");
  sec->add_option("--bath", bath_specs,
                  "bath correlation: table CSV path, const:c, or exp:A:tau_c");
  sec->add_option("--n-tau", n_tau, "imaginary-time quadrature panels");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return cmd_ho_sweep(o);
    if (wig->parsed()) return cmd_wigner_grid(o, closed_form, compare);
    if (moy->parsed()) return cmd_moyal_check(o, pairs);
    if (sec->parsed())
      return cmd_second_order(o, h_path, coupling_paths, bath_specs, n_tau);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical check failed: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace qphase::cli
