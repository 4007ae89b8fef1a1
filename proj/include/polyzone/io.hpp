#pragma once

// JSON encodings:
//   complex         [re, im]
//   ComplexPoly     {"coeffs": [[re, im], ...], "n": int | null}
//   OperatorSpec    {"n": int, "m": int, "lambdas": [[re, im], ...], "sigma": [re, im]}
//   Apollonius      {"s": double, "sigma": [re, im]}
//   Disk            {"r": double}
//   RootSet         {"roots": [...], "residuals": [...], "converged": [...], "iterations": k}
//   CircleMax       {"value": double, "arg_angle": double, "samples": int}

#include <charconv>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polyzone/maxmod.hpp"
#include "polyzone/operators.hpp"
#include "polyzone/poly.hpp"
#include "polyzone/regions.hpp"
#include "polyzone/roots.hpp"

namespace polyzone {

using json = nlohmann::json;

/// Malformed external input (bad JSON shape, non-finite numbers, bad "re,im").
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

inline double finite_number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ParseError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + ": non-finite value");
  return v;
}

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {finite_number(j[0], "re"), finite_number(j[1], "im")};
}

inline json complex_list(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(complex_to_json(c));
  return a;
}

inline std::vector<Complex> complex_list_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of [re, im] pairs");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

/// "re,im" or "re" (imaginary part zero).
inline Complex parse_complex(std::string_view text) {
  const auto to_double = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
      throw ParseError("cannot parse complex number '" + std::string(text) + "'");
    return v;
  };
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {to_double(text), 0.0};
  return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
}

inline json to_json(const ComplexPoly& p) {
  json j;
  j["coeffs"] = complex_list(std::vector<Complex>(p.coeffs().begin(), p.coeffs().end()));
  j["n"] = p.ambient_degree() ? json(*p.ambient_degree()) : json(nullptr);
  return j;
}

inline ComplexPoly poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs")) throw ParseError("polynomial needs a \"coeffs\" field");
  auto coeffs = complex_list_from_json(j.at("coeffs"));
  if (coeffs.empty()) throw ParseError("polynomial needs at least one coefficient");
  std::optional<int> n;
  if (j.contains("n") && !j.at("n").is_null()) {
    if (!j.at("n").is_number_integer()) throw ParseError("\"n\" must be an integer or null");
    n = j.at("n").get<int>();
  }
  return ComplexPoly(std::move(coeffs), n);
}

inline json to_json(const OperatorSpec<double>& s) {
  return json{{"n", s.n}, {"m", s.m}, {"lambdas", complex_list(s.lambdas)}, {"sigma", complex_to_json(s.sigma)}};
}

inline OperatorSpec<double> spec_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("operator spec must be an object");
  for (const char* key : {"n", "lambdas", "sigma"})
    if (!j.contains(key)) throw ParseError(std::string("operator spec missing \"") + key + "\"");
  if (!j.at("n").is_number_integer()) throw ParseError("\"n\" must be an integer");
  auto lambdas = complex_list_from_json(j.at("lambdas"));
  if (j.contains("m") && j.at("m").get<int>() + 1 != static_cast<int>(lambdas.size()))
    throw ParseError("\"m\" disagrees with the number of lambdas");
  return OperatorSpec<double>(j.at("n").get<int>(), std::move(lambdas), complex_from_json(j.at("sigma")));
}

inline json to_json(const ApolloniusRegion<double>& r) { return json{{"s", r.s}, {"sigma", complex_to_json(r.sigma)}}; }

inline ApolloniusRegion<double> region_from_json(const json& j) {
  if (!j.is_object() || !j.contains("s") || !j.contains("sigma")) throw ParseError("region needs \"s\" and \"sigma\"");
  return {finite_number(j.at("s"), "s"), complex_from_json(j.at("sigma"))};
}

inline json to_json(const Disk<double>& d) { return json{{"r", d.r}}; }

inline Disk<double> disk_from_json(const json& j) {
  if (!j.is_object() || !j.contains("r")) throw ParseError("disk needs \"r\"");
  return Disk<double>(finite_number(j.at("r"), "r"));
}

inline json to_json(const RootSet<double>& rs) {
  json conv = json::array();
  for (bool b : rs.converged) conv.push_back(b);
  return json{{"roots", complex_list(rs.roots)}, {"residuals", rs.residuals}, {"converged", conv},
              {"iterations", rs.iterations}};
}

inline json to_json(const CircleMax<double>& m) {
  return json{{"value", m.value}, {"arg_angle", m.arg_angle}, {"samples", m.samples}};
}

}  // namespace io
}  // namespace polyzone
