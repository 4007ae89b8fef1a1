#pragma once

// Command-line front end. Exit codes: 0 success, 1 a verification failed,
// 2 usage or input error, 3 numerical inconclusiveness.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyzone/io.hpp"
#include "polyzone/maxmod.hpp"
#include "polyzone/operators.hpp"
#include "polyzone/roots.hpp"
#include "polyzone/verify.hpp"

namespace polyzone::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kInconclusive = 3 };

namespace detail {

/// Inline JSON (starts with '{' or '['), "-" for standard input, or a file path.
inline json load_json(const std::string& source, std::istream& in) {
  std::string text;
  if (!source.empty() && (source.front() == '{' || source.front() == '[')) {
    text = source;
  } else if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream file(source);
    if (!file) throw ParseError("cannot open '" + source + "'");
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline std::string poly_csv(const ComplexPoly& p) {
  std::ostringstream os;
  os << "k,re,im\n";
  const auto c = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) os << k << ',' << json(c[k].real()).dump() << ',' << json(c[k].imag()).dump() << '\n';
  return os.str();
}

inline std::string roots_csv(const RootSet<double>& rs) {
  std::ostringstream os;
  os << "re,im,residual,converged\n";
  for (std::size_t i = 0; i < rs.size(); ++i)
    os << json(rs.roots[i].real()).dump() << ',' << json(rs.roots[i].imag()).dump() << ','
       << json(rs.residuals[i]).dump() << ',' << (rs.converged[i] ? "true" : "false") << '\n';
  return os.str();
}

inline std::vector<Complex> lambdas_from_text(const std::string& source, std::istream& in) {
  return io::complex_list_from_json(load_json(source, in));
}

}  // namespace detail

struct Options {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 7;
  int trials = 100;
  std::optional<double> tol;
  int samples = 0;
  int jobs = 0;
  int degree_min = 1;
  int degree_max = 12;

  // inputs
  std::string f, g, p, spec, lambdas, sigma, witness;
  std::optional<int> n;
  bool allow_lower_degree = false;
  double radius = 1.0;
  int max_iter = 500;
  std::string theorem = "T1";
  std::string kind = "zeros-in-disk";
  bool full_degree_g = false;
};

/// Runs one command line. Output goes to `out` unless --out names a file.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
               std::istream& in = std::cin) {
  Options o;
  CLI::App app{"polyzone: composite polynomials, the operator N, and verification of their zero and growth bounds"};
  app.require_subcommand(1, 1);

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--out", o.out, "Output path (default: standard output)");
  };
  const auto add_gen = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed (POLYZONE_SEED overrides)")->capture_default_str();
    sub->add_option("--degree-min", o.degree_min, "Smallest generated degree")->capture_default_str();
    sub->add_option("--degree-max", o.degree_max, "Largest generated degree (<= 64)")->capture_default_str();
  };

  auto* compose = app.add_subcommand("compose", "h(z) = sum lambda_k f^(k)(z) (sigma z)^k / k! from f and g");
  compose->add_option("--f", o.f, "f as JSON (inline, file, or -)")->required();
  auto* g_opt = compose->add_option("--g", o.g, "g as JSON; lambda_k = g_k / C(n,k)");
  compose->add_option("--lambdas", o.lambdas, "lambdas as [[re,im],...] instead of --g")->excludes(g_opt);
  compose->add_option("--sigma", o.sigma, "sigma as re,im")->required();
  compose->add_flag("--allow-lower-degree", o.allow_lower_degree, "Accept deg f < n");
  add_output(compose);

  auto* apply_n = app.add_subcommand("apply-n", "N[P](z) = sum lambda_i (n z/2)^i P^(i)(z) / i!");
  apply_n->add_option("--p", o.p, "P as JSON")->required();
  auto* spec_opt = apply_n->add_option("--spec", o.spec, "operator spec as JSON");
  apply_n->add_option("--lambdas", o.lambdas, "lambdas as [[re,im],...]")->excludes(spec_opt);
  apply_n->add_option("--n", o.n, "ambient degree (default: P's n, else its degree)");
  add_output(apply_n);

  auto* roots = app.add_subcommand("roots", "Aberth-Ehrlich roots with residual certificates");
  roots->add_option("--p", o.p, "polynomial as JSON")->required();
  roots->add_option("--tol", o.tol, "correction tolerance (default 1e-13)");
  roots->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
  add_output(roots);

  auto* maxmod = app.add_subcommand("maxmod", "max |p| on |z| = radius");
  maxmod->add_option("--p", o.p, "polynomial as JSON")->required();
  maxmod->add_option("--radius", o.radius, "circle radius")->capture_default_str();
  maxmod->add_option("--samples", o.samples, "samples (default max(4096, 64 n))");
  add_output(maxmod);

  auto* verify_cmd = app.add_subcommand("verify", "randomized or single-instance verification");
  verify_cmd->add_option("--theorem", o.theorem, "T1 T2 C1 T3 T4 L3 L4 R1 R2 R3 or all")->capture_default_str();
  verify_cmd->add_option("--trials", o.trials, "trials per theorem")->capture_default_str();
  verify_cmd->add_option("--tol", o.tol, "pass tolerance (default 1e-6 for T1, 1e-9 otherwise)");
  verify_cmd->add_option("--samples", o.samples, "circle samples for M (default max(4096, 64 n))");
  verify_cmd->add_option("--jobs", o.jobs, "worker threads (default: hardware concurrency)");
  verify_cmd->add_flag("--full-degree-g", o.full_degree_g, "T1: draw g of degree exactly n");
  verify_cmd->add_option("--p", o.p, "single instance: P (T1: f) as JSON");
  verify_cmd->add_option("--f", o.f, "single instance: majorant f for T2");
  verify_cmd->add_option("--spec", o.spec, "single instance: operator spec (default lambda = [1])");
  verify_cmd->add_option("--witness", o.witness, "replay the witness of a report JSON");
  add_gen(verify_cmd);
  add_output(verify_cmd);

  auto* gen = app.add_subcommand("gen", "draw a random instance");
  gen->add_option("--kind", o.kind, "zeros-in-disk, zero-free, self-inversive, unrestricted, spec")
      ->check(CLI::IsMember({"zeros-in-disk", "zero-free", "self-inversive", "unrestricted", "spec"}))
      ->capture_default_str();
  gen->add_option("--radius", o.radius, "zero radius for zeros-in-disk")->capture_default_str();
  gen->add_option("--n", o.n, "degree for --kind spec (default: drawn from the degree range)");
  add_gen(gen);
  add_output(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (const char* env = std::getenv("POLYZONE_SEED"); env && *env) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: POLYZONE_SEED is not an unsigned integer\n";
      return kUsage;
    }
  }

  const auto emit = [&](const std::string& text) {
    if (o.out.empty()) {
      out << text;
      return;
    }
    std::ofstream file(o.out);
    if (!file) throw ParseError("cannot write '" + o.out + "'");
    file << text;
  };
  const auto emit_json = [&](const json& j) { emit(j.dump(2) + "\n"); };
  const bool csv = o.format == "csv";

  try {
    if (*compose) {
      const ComplexPoly f = io::poly_from_json(detail::load_json(o.f, in));
      const int n = f.ambient_degree().value_or(f.degree());
      std::vector<Complex> lambdas;
      if (!o.lambdas.empty())
        lambdas = detail::lambdas_from_text(o.lambdas, in);
      else if (!o.g.empty())
        lambdas = lambdas_from_g(io::poly_from_json(detail::load_json(o.g, in)), n);
      else
        throw ParseError("compose needs --g or --lambdas");
      const OperatorSpec<double> spec(n, std::move(lambdas), io::parse_complex(o.sigma));
      const ComplexPoly h = compose_h(f, spec, o.allow_lower_degree ? DegreeCheck::at_most : DegreeCheck::exact);
      csv ? emit(detail::poly_csv(h)) : emit_json(io::to_json(h));
      return kOk;
    }

    if (*apply_n) {
      const ComplexPoly P = io::poly_from_json(detail::load_json(o.p, in));
      OperatorSpec<double> spec;
      if (!o.spec.empty()) {
        spec = io::spec_from_json(detail::load_json(o.spec, in));
      } else {
        const int n = o.n.value_or(P.ambient_degree().value_or(P.degree()));
        auto lambdas = o.lambdas.empty() ? std::vector<Complex>{Complex{1}} : detail::lambdas_from_text(o.lambdas, in);
        spec = OperatorSpec<double>::for_N(n, std::move(lambdas));
      }
      const ComplexPoly result = apply_N(P, spec);
      csv ? emit(detail::poly_csv(result)) : emit_json(io::to_json(result));
      return kOk;
    }

    if (*roots) {
      const ComplexPoly p = io::poly_from_json(detail::load_json(o.p, in));
      RootOptions ropt;
      if (o.tol) ropt.tol = *o.tol;
      ropt.max_iter = o.max_iter;
      const auto rs = find_roots(p, ropt);
      csv ? emit(detail::roots_csv(rs)) : emit_json(io::to_json(rs));
      if (!rs.all_converged()) {
        err << "error: some roots failed residual certification\n";
        return kInconclusive;
      }
      return kOk;
    }

    if (*maxmod) {
      const ComplexPoly p = io::poly_from_json(detail::load_json(o.p, in));
      if (!(o.radius > 0)) throw ParseError("--radius must be positive");
      const int deg = std::max(p.degree(), p.ambient_degree().value_or(0));
      const auto cm = max_on_circle(p, o.radius, o.samples > 0 ? o.samples : default_samples(deg));
      if (csv) {
        emit("value,arg_angle,samples\n" + json(cm.value).dump() + "," + json(cm.arg_angle).dump() + "," +
             std::to_string(cm.samples) + "\n");
      } else {
        emit_json(io::to_json(cm));
      }
      return kOk;
    }

    if (*gen) {
      GenConfig cfg;
      cfg.seed = o.seed;
      cfg.degree_min = o.degree_min;
      cfg.degree_max = o.degree_max;
      cfg.validate();
      Rng rng(cfg.seed);
      if (o.kind == "spec") {
        const int n = o.n.value_or(gen_degree(cfg, rng));
        if (n < 1) throw ParseError("--n must be positive");
        const auto spec = gen_admissible_spec(n, rng);
        emit_json(io::to_json(spec));
        return kOk;
      }
      ComplexPoly p;
      if (o.kind == "zeros-in-disk") {
        if (!(o.radius > 0)) throw ParseError("--radius must be positive");
        p = gen_poly_zeros_in_disk(cfg, o.radius, rng);
      } else if (o.kind == "zero-free") {
        p = gen_poly_zero_free_unit_disk(cfg, rng);
      } else if (o.kind == "self-inversive") {
        p = gen_self_inversive(cfg, rng);
      } else {
        p = gen_unrestricted(cfg, rng);
      }
      csv ? emit(detail::poly_csv(p)) : emit_json(io::to_json(p));
      return kOk;
    }

    // verify
    GenConfig cfg;
    cfg.seed = o.seed;
    cfg.trials = o.trials;
    cfg.degree_min = o.degree_min;
    cfg.degree_max = o.degree_max;
    cfg.samples = o.samples;
    cfg.validate();
    if (o.tol && !(*o.tol > 0)) throw ParseError("--tol must be positive");

    std::vector<TheoremId> theorems;
    if (o.theorem == "all") {
      theorems.assign(std::begin(kAllTheorems), std::end(kAllTheorems));
    } else if (auto t = parse_theorem(o.theorem)) {
      theorems.push_back(*t);
    } else {
      throw ParseError("unknown theorem '" + o.theorem + "'");
    }

    if (!o.witness.empty()) {
      if (theorems.size() != 1) throw ParseError("--witness needs a single --theorem");
      const json report = detail::load_json(o.witness, in);
      const json& w = report.contains("witness") ? report.at("witness") : report;
      const double value = replay_witness(theorems.front(), w, cfg);
      emit_json(json{{"theorem", o.theorem}, {"replayed_margin", value}});
      return kOk;
    }

    std::vector<VerificationReport> reports;
    if (!o.p.empty()) {
      if (theorems.size() != 1) throw ParseError("single-instance mode needs a single --theorem");
      const ComplexPoly P = io::poly_from_json(detail::load_json(o.p, in));
      std::optional<ComplexPoly> f;
      if (!o.f.empty()) f = io::poly_from_json(detail::load_json(o.f, in));
      const int n = P.ambient_degree().value_or(P.degree());
      const OperatorSpec<double> spec = !o.spec.empty() ? io::spec_from_json(detail::load_json(o.spec, in))
                                                        : OperatorSpec<double>::for_N(std::max(n, 1), {Complex{1}});
      reports.push_back(verify_instance(theorems.front(), P, f, spec, cfg, o.tol));
    } else {
      VerifyOptions vopt;
      vopt.tol = o.tol;
      vopt.full_degree_g = o.full_degree_g;
      vopt.jobs = o.jobs > 0 ? o.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      for (auto t : theorems) reports.push_back(verify(t, cfg, vopt));
    }

    if (csv) {
      std::string text = csv_header() + "\n";
      for (const auto& r : reports) text += to_csv_row(r) + "\n";
      emit(text);
    } else if (reports.size() == 1) {
      emit_json(to_json(reports.front()));
    } else {
      json a = json::array();
      for (const auto& r : reports) a.push_back(to_json(r));
      emit_json(a);
    }

    bool failed = false, inconclusive = false;
    for (const auto& r : reports) {
      failed = failed || r.failed();
      inconclusive = inconclusive || r.inconclusive > 0;
    }
    if (failed) {
      err << "error: verification failed\n";
      return kVerificationFailed;
    }
    if (inconclusive) {
      err << "error: some trials stayed inconclusive after resampling\n";
      return kInconclusive;
    }
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? kInconclusive : kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace polyzone::cli
