#pragma once

//! \file io.hpp
//! \brief JSON parameter files and CSV curve files.

#include "fabricplast/material.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fabricplast::io {

struct ParamFile {
  material::ElastoplasticParams ep;
  material::HyperelasticParams hp;
};

/// Parses a JSON object with the fields mu_f, tau_y, A, a, B, b, C, c (all
/// required) and eps_L, beta_n, beta_g, beta_tau (optional, default 0).
/// Unknown keys are rejected. Throws ParseError / InvalidParameterError.
ParamFile parse_params(const std::string& json_text);
ParamFile load_params(const std::string& path);

std::string params_to_json(const material::ElastoplasticParams& ep,
                           const material::HyperelasticParams& hp);
void save_params(const std::string& path, const material::ElastoplasticParams& ep,
                 const material::HyperelasticParams& hp);

/// "%.17g"
std::string fmt(double v);

/// Writes one CSV row of values at 17 significant digits.
void write_row(std::ostream& os, const std::vector<double>& values);

struct CurvePoint {
  double gamma_deg;
  double force_norm;
};

/// Reads a `gamma_deg,force_norm` CSV. Blank lines and lines starting with
/// '#' are skipped. Throws ParseError on malformed rows.
std::vector<CurvePoint> read_curve_csv(std::istream& is);
std::vector<CurvePoint> load_curve_csv(const std::string& path);

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts);

}  // namespace fabricplast::io
