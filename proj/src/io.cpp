#include "fabricplast/io.hpp"

#include "fabricplast/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fabricplast::io {

namespace {

constexpr const char* kElastoplasticKeys[] = {"mu_f", "tau_y", "A", "a", "B", "b", "C", "c"};
constexpr const char* kHyperelasticKeys[] = {"eps_L", "beta_n", "beta_g", "beta_tau"};

double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& tok, int line) {
  const std::string t = trim(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size())
    throw ParseError("line " + std::to_string(line) + ": bad number '" + t + "'");
  return v;
}

}  // namespace

ParamFile parse_params(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("parameter file must hold a JSON object");

  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kElastoplasticKeys) known = known || key == k;
    for (const char* k : kHyperelasticKeys) known = known || key == k;
    if (!known) throw ParseError("unknown parameter '" + key + "'");
  }
  for (const char* k : kElastoplasticKeys)
    if (!j.contains(k)) throw ParseError(std::string("missing parameter '") + k + "'");

  ParamFile pf;
  pf.ep = material::ElastoplasticParams::make(
      number_field(j, "mu_f"), number_field(j, "tau_y"), number_field(j, "A"),
      number_field(j, "a"), number_field(j, "B"), number_field(j, "b"), number_field(j, "C"),
      number_field(j, "c"));
  if (j.contains("eps_L")) pf.hp.eps_L = number_field(j, "eps_L");
  if (j.contains("beta_n")) pf.hp.beta_n = number_field(j, "beta_n");
  if (j.contains("beta_g")) pf.hp.beta_g = number_field(j, "beta_g");
  if (j.contains("beta_tau")) pf.hp.beta_tau = number_field(j, "beta_tau");
  pf.hp.validate();
  return pf;
}

ParamFile load_params(const std::string& path) { return parse_params(read_file(path)); }

std::string params_to_json(const material::ElastoplasticParams& ep,
                           const material::HyperelasticParams& hp) {
  nlohmann::ordered_json j;
  j["mu_f"] = ep.mu_f;
  j["tau_y"] = ep.tau_y;
  j["A"] = ep.A;
  j["a"] = ep.a;
  j["B"] = ep.B;
  j["b"] = ep.b;
  j["C"] = ep.C;
  j["c"] = ep.c;
  j["eps_L"] = hp.eps_L;
  j["beta_n"] = hp.beta_n;
  j["beta_g"] = hp.beta_g;
  j["beta_tau"] = hp.beta_tau;
  return j.dump(2) + "\n";
}

void save_params(const std::string& path, const material::ElastoplasticParams& ep,
                 const material::HyperelasticParams& hp) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << params_to_json(ep, hp);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << fmt(values[i]);
  }
  os << '\n';
}

std::vector<CurvePoint> read_curve_csv(std::istream& is) {
  std::vector<CurvePoint> pts;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (t.find_first_of("0123456789") != 0 && t[0] != '-' && t[0] != '+' && t[0] != '.') {
        std::string h = t;
        h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
        if (h != "gamma_deg,force_norm")
          throw ParseError("expected header 'gamma_deg,force_norm', got '" + t + "'");
        continue;
      }
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected two columns");
    CurvePoint p{parse_double(t.substr(0, comma), lineno),
                 parse_double(t.substr(comma + 1), lineno)};
    if (!std::isfinite(p.gamma_deg) || !std::isfinite(p.force_norm))
      throw ParseError("line " + std::to_string(lineno) + ": non-finite value");
    pts.push_back(p);
  }
  return pts;
}

std::vector<CurvePoint> load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_curve_csv(in);
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts) {
  os << "gamma_deg,force_norm\n";
  for (const auto& p : pts) write_row(os, {p.gamma_deg, p.force_norm});
}

}  // namespace fabricplast::io
