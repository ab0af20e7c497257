#include "qphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qphase::io {

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return in;
}

}  // namespace

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line, ','))
      row.push_back(std::stod(strip(f)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("matrix CSV has ragged rows: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows.front().size())
    throw std::invalid_argument("matrix CSV must be square: " + path);
  Eigen::MatrixXd m(rows.size(), rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt_g12(m(i, j));
    }
    out << '\n';
  }
}

BathCorrelation load_bath_csv(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<double> tau, k;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 2)
      throw std::invalid_argument("bath table rows must be `tau,k`: " + path);
    if (first) {
      first = false;
      if (strip(fields[0]) == "tau") continue;  // header
    }
    tau.push_back(std::stod(strip(fields[0])));
    k.push_back(std::stod(strip(fields[1])));
  }
  return BathCorrelation::table(std::move(tau), std::move(k));
}

OscillatorSpec load_spec_file(const std::string& path) {
  auto in = open_or_throw(path);
  double m = 1, omega = 1, beta = 1, hbar = 1, kB = 1;
  std::string line;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec file lines must be key=value: " + line);
    std::string key = strip(line.substr(0, eq));
    double val = std::stod(strip(line.substr(eq + 1)));
    if (key == "m") m = val;
    else if (key == "omega") omega = val;
    else if (key == "beta") beta = val;
    else if (key == "hbar") hbar = val;
    else if (key == "kB") kB = val;
    else throw std::invalid_argument("unknown spec file key: " + key);
  }
  return {m, omega, beta, hbar, kB};
}

void write_wigner_csv(std::ostream& out, const WignerState& w) {
  out << "q,p,w\n";
  for (int i = 0; i < w.grid.n_q; ++i)
    for (int j = 0; j < w.grid.n_p; ++j)
      out << fmt_g12(w.grid.q_at(i)) << ',' << fmt_g12(w.grid.p_at(j)) << ','
          << fmt_g12(w.values(i, j)) << '\n';
}

void write_wigner_json(std::ostream& out, const WignerState& w) {
  nlohmann::json j;
  j["grid"] = {{"q_min", w.grid.q_min}, {"q_max", w.grid.q_max},
               {"n_q", w.grid.n_q},     {"p_min", w.grid.p_min},
               {"p_max", w.grid.p_max}, {"n_p", w.grid.n_p}};
  j["hbar"] = w.hbar;
  auto& rows = j["values"] = nlohmann::json::array();
  for (int i = 0; i < w.grid.n_q; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int jj = 0; jj < w.grid.n_p; ++jj) row.push_back(w.values(i, jj));
    rows.push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

namespace {
constexpr const char* kReportHeader =
    "beta,E_q,E_p,kT,beta_mod_q,beta_mod_p,route_spread,exact_reference";
}

void write_reports_csv(std::ostream& out,
                       const std::vector<EquipartitionReport>& reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << fmt_g12(r.beta) << ',' << fmt_g12(r.E_q) << ',' << fmt_g12(r.E_p)
        << ',' << fmt_g12(r.kT) << ',' << fmt_g12(r.beta_mod_q) << ','
        << fmt_g12(r.beta_mod_p) << ',' << fmt_g12(r.route_spread) << ',';
    if (r.exact_reference) out << fmt_g12(*r.exact_reference);
    out << '\n';
  }
}

void write_reports_json(std::ostream& out,
                        const std::vector<EquipartitionReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j = {{"beta", r.beta},
                        {"E_q", r.E_q},
                        {"E_p", r.E_p},
                        {"kT", r.kT},
                        {"beta_mod_q", r.beta_mod_q},
                        {"beta_mod_p", r.beta_mod_p},
                        {"route_spread", r.route_spread}};
    if (r.exact_reference) j["exact_reference"] = *r.exact_reference;
    else j["exact_reference"] = nullptr;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace qphase::io
