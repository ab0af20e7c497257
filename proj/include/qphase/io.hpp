#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qphase/equipartition.hpp"

namespace qphase::io {

/// %.12g rendering used for every numeric field the CLI emits.
std::string fmt_g12(double v);

/// Square numeric CSV, no header.
Eigen::MatrixXd load_matrix_csv(const std::string& path);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// Bath correlation table: `tau,k` rows (header optional), tau ascending
/// from 0.
BathCorrelation load_bath_csv(const std::string& path);

/// Key-value text: m=..., omega=..., beta=..., hbar=..., kB=...
OscillatorSpec load_spec_file(const std::string& path);

void write_wigner_csv(std::ostream& out, const WignerState& w);
void write_wigner_json(std::ostream& out, const WignerState& w);

void write_reports_csv(std::ostream& out,
                       const std::vector<EquipartitionReport>& reports);
void write_reports_json(std::ostream& out,
                        const std::vector<EquipartitionReport>& reports);

}  // namespace qphase::io
