#pragma once

// Randomized falsification harness for the zero-containment theorem and the
// inequalities satisfied by N. Each trial draws an instance satisfying the
// hypothesis, evaluates the conclusion, and records a replayable witness.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "polyzone/error.hpp"
#include "polyzone/io.hpp"
#include "polyzone/maxmod.hpp"
#include "polyzone/operators.hpp"
#include "polyzone/poly.hpp"
#include "polyzone/regions.hpp"
#include "polyzone/roots.hpp"

namespace polyzone {

enum class TheoremId { T1, T2, C1, T3, T4, L3, L4, R1, R2, R3 };

inline constexpr TheoremId kAllTheorems[] = {TheoremId::T1, TheoremId::T2, TheoremId::C1, TheoremId::T3,
                                             TheoremId::T4, TheoremId::L3, TheoremId::L4, TheoremId::R1,
                                             TheoremId::R2, TheoremId::R3};

constexpr std::string_view to_string(TheoremId t) noexcept {
  switch (t) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::C1: return "C1";
    case TheoremId::T3: return "T3";
    case TheoremId::T4: return "T4";
    case TheoremId::L3: return "L3";
    case TheoremId::L4: return "L4";
    case TheoremId::R1: return "R1";
    case TheoremId::R2: return "R2";
    case TheoremId::R3: return "R3";
  }
  return "?";
}

inline std::optional<TheoremId> parse_theorem(std::string_view s) {
  for (auto t : kAllTheorems)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

/// Default pass tolerance: containment slack for T1, scaled margin floor otherwise.
constexpr double default_tolerance(TheoremId t) noexcept { return t == TheoremId::T1 ? 1e-6 : kMarginTolerance; }

struct GenConfig {
  int degree_min = 1;
  int degree_max = 12;
  double coefficient_scale = 1.0;
  double zero_radius = 1.0;
  std::uint64_t seed = 7;
  int trials = 100;
  /// Circle samples for M; 0 selects default_samples(n).
  int samples = 0;

  void validate() const {
    if (degree_min < 1 || degree_max > 64 || degree_min > degree_max)
      throw Error(Errc::invalid_spec, "degree range must lie within [1, 64]");
    if (!(coefficient_scale > 0) || !(zero_radius > 0)) throw Error(Errc::invalid_spec, "scales must be positive");
    if (trials < 1) throw Error(Errc::invalid_spec, "trials must be >= 1");
    if (samples < 0) throw Error(Errc::invalid_spec, "samples must be >= 0");
  }

  int samples_for(int n) const { return samples > 0 ? std::max(samples, 16) : default_samples(n); }
};

inline json to_json(const GenConfig& c) {
  return json{{"degree_min", c.degree_min}, {"degree_max", c.degree_max}, {"coefficient_scale", c.coefficient_scale},
              {"zero_radius", c.zero_radius}, {"seed", c.seed}, {"trials", c.trials}, {"samples", c.samples}};
}

/// Seeded generator. Uniform variates are formed from raw 64-bit engine output
/// so sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Complex unit_phase() { return std::polar(1.0, uniform(0.0, 2 * std::numbers::pi)); }
  /// Uniform in |z| <= r, by rejection from the bounding square.
  Complex in_disk(double r, Complex centre = {}) {
    for (;;) {
      const Complex z{uniform(-r, r), uniform(-r, r)};
      if (std::abs(z) <= r) return centre + z;
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream per (trial, attempt); serial and parallel runs agree.
inline Rng trial_rng(std::uint64_t seed, int trial, int attempt = 0) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64((static_cast<std::uint64_t>(trial) << 8) |
                                                      static_cast<std::uint64_t>(attempt))));
}

// -- generators --------------------------------------------------------------

inline int gen_degree(const GenConfig& cfg, Rng& rng) { return rng.uniform_int(cfg.degree_min, cfg.degree_max); }

inline Complex gen_leading(Rng& rng) { return rng.uniform(0.5, 2.0) * rng.unit_phase(); }

inline ComplexPoly gen_poly_zeros_in_disk(int n, double r, Rng& rng) {
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (auto& w : roots) w = rng.in_disk(r);
  return from_roots(roots, gen_leading(rng));
}

inline ComplexPoly gen_poly_zeros_in_disk(const GenConfig& cfg, double r, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  return gen_poly_zeros_in_disk(n, r, rng);
}

inline ComplexPoly gen_poly_zeros_in_disk(const GenConfig& cfg, double r) {
  Rng rng(cfg.seed);
  return gen_poly_zeros_in_disk(cfg, r, rng);
}

/// Roots with modulus uniform in [1, 4]: no zeros in |z| < 1.
inline ComplexPoly gen_poly_zero_free_unit_disk(int n, Rng& rng) {
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (auto& w : roots) w = rng.uniform(1.0, 4.0) * rng.unit_phase();
  return from_roots(roots, gen_leading(rng));
}

inline ComplexPoly gen_poly_zero_free_unit_disk(const GenConfig& cfg, Rng& rng) {
  return gen_poly_zero_free_unit_disk(gen_degree(cfg, rng), rng);
}

inline ComplexPoly gen_poly_zero_free_unit_disk(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_poly_zero_free_unit_disk(cfg, rng);
}

/// Expands leading * prod(z - root) and rotates by the unimodular phase that
/// makes the result equal its conjugate-inverse. The root multiset must be
/// closed under w -> 1/conj(w).
inline ComplexPoly make_self_inversive(const std::vector<Complex>& roots, Complex leading) {
  const ComplexPoly p = from_roots(roots, leading);
  const int n = static_cast<int>(roots.size());
  const Complex trailing = p[0];
  if (std::abs(trailing) < 1e-300 * std::abs(leading) || std::abs(trailing) == 0)
    throw Error(Errc::degenerate_instance, "trailing coefficient underflow");
  // P* = kappa P with kappa = conj(p_0) / p_n; omega^2 = kappa makes omega P self-inversive.
  const Complex kappa = std::conj(trailing) / p[static_cast<std::size_t>(n)];
  const Complex omega = std::polar(1.0, std::arg(kappa) / 2);
  return p * omega;
}

inline ComplexPoly gen_self_inversive(int n, Rng& rng) {
  std::vector<Complex> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n / 2; ++k) {
    const Complex beta = rng.uniform(1.1, 3.0) * rng.unit_phase();
    roots.push_back(beta);
    roots.push_back(1.0 / std::conj(beta));
  }
  if (n % 2 == 1) roots.push_back(rng.unit_phase());
  return make_self_inversive(roots, gen_leading(rng));
}

inline ComplexPoly gen_self_inversive(const GenConfig& cfg, Rng& rng) { return gen_self_inversive(gen_degree(cfg, rng), rng); }

inline ComplexPoly gen_self_inversive(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_self_inversive(cfg, rng);
}

/// Any member of P_n: coefficients uniform in the disk of radius
/// coefficient_scale, with the top coefficient dropped a quarter of the time.
inline ComplexPoly gen_unrestricted(int n, double scale, Rng& rng) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (auto& x : c) x = rng.in_disk(scale);
  if (n > 0 && rng.uniform() < 0.25) c.back() = 0;
  return ComplexPoly(std::move(c), n);
}

inline ComplexPoly gen_unrestricted(const GenConfig& cfg, Rng& rng) {
  return gen_unrestricted(gen_degree(cfg, rng), cfg.coefficient_scale, rng);
}

/// Admissible spec for N on P_n: phi's zeros drawn from the disk of radius n
/// about -n/4, rejected unless |w| <= |w - n/2|.
inline OperatorSpec<double> gen_admissible_spec(int n, Rng& rng, int max_order = 8) {
  const int m = rng.uniform_int(0, std::min(n, max_order));
  const double half = n / 2.0;
  std::vector<Complex> roots;
  while (static_cast<int>(roots.size()) < m) {
    const Complex w = rng.in_disk(static_cast<double>(n), Complex{-n / 4.0, 0});
    if (std::abs(w) <= std::abs(w - half)) roots.push_back(w);
  }
  const ComplexPoly phi = from_roots(roots, gen_leading(rng));
  return OperatorSpec<double>::for_N(n, lambdas_from_g(phi, n));
}

inline OperatorSpec<double> gen_admissible_spec(const GenConfig& cfg, int n) {
  Rng rng(cfg.seed);
  return gen_admissible_spec(n, rng);
}

/// Radii {1, 1.1, 1.5, 2, 5} x 64 angles (angle 0 first), then 100 random
/// points with |z| in [1, 10].
inline std::vector<Complex> standard_grid(Rng& rng) {
  std::vector<Complex> grid;
  grid.reserve(5 * 64 + 100);
  for (double radius : {1.0, 1.1, 1.5, 2.0, 5.0})
    for (int j = 0; j < 64; ++j) grid.push_back(std::polar(radius, 2 * std::numbers::pi * j / 64.0));
  for (int j = 0; j < 100; ++j) grid.push_back(rng.uniform(1.0, 10.0) * rng.unit_phase());
  return grid;
}

// -- reports ----------------------------------------------------------------

/// Equality-case check run alongside the random trials. "equality" requires
/// |margin| within threshold at every grid point; "attainment" requires the
/// grid minimum of the margin to fall within threshold.
struct SharpnessCheck {
  std::string kind;
  double threshold = 0;
  double worst = 0;
  bool passed = true;
};

struct VerificationReport {
  TheoremId theorem = TheoremId::T1;
  int trials = 0;
  int passes = 0;
  int failures = 0;
  int inconclusive = 0;
  /// Scaled: for T1 the largest (max|w| - R) / max(1, R); otherwise the
  /// smallest margin / (1 + bound). NaN when no trial was conclusive.
  double worst_margin = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0;
  json witness;
  std::uint64_t seed = 0;
  GenConfig config;
  std::optional<SharpnessCheck> sharpness;

  bool passed() const { return failures == 0 && inconclusive == 0 && (!sharpness || sharpness->passed); }
  bool failed() const { return failures > 0 || (sharpness && !sharpness->passed); }
};

inline json to_json(const VerificationReport& r) {
  json j;
  j["theorem"] = std::string(to_string(r.theorem));
  j["trials"] = r.trials;
  j["passes"] = r.passes;
  j["failures"] = r.failures;
  j["inconclusive"] = r.inconclusive;
  j["worst_margin"] = std::isfinite(r.worst_margin) ? json(r.worst_margin) : json(nullptr);
  j["tolerance"] = r.tolerance;
  j["witness"] = r.witness;
  j["seed"] = r.seed;
  j["config"] = to_json(r.config);
  if (r.sharpness)
    j["sharpness"] = json{{"kind", r.sharpness->kind}, {"threshold", r.sharpness->threshold},
                          {"worst", r.sharpness->worst}, {"passed", r.sharpness->passed}};
  else
    j["sharpness"] = nullptr;
  return j;
}

inline std::string csv_header() { return "theorem_id,trials,passes,worst_margin,seed"; }

inline std::string to_csv_row(const VerificationReport& r) {
  const std::string w = std::isfinite(r.worst_margin) ? json(r.worst_margin).dump() : "nan";
  return std::string(to_string(r.theorem)) + "," + std::to_string(r.trials) + "," + std::to_string(r.passes) + "," +
         w + "," + std::to_string(r.seed);
}

struct VerifyOptions {
  int jobs = 1;
  std::optional<double> tol;
  /// T1 only: draw g of full degree m = n (the equal-degree setting).
  bool full_degree_g = false;
};

namespace detail {

enum class Status { pass, fail, inconclusive };

struct TrialOutcome {
  Status status = Status::inconclusive;
  double worst = std::numeric_limits<double>::quiet_NaN();
  json witness;
  std::optional<double> sharpness;
};

/// Raised inside a trial to force a resample.
struct Resample {};

/// Tracks the minimum scaled margin and its witness point.
struct GridScan {
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;
  json point;

  void add(const Margin<double>& m, double tol, json where) {
    if (!m.holds(tol)) ok = false;
    if (m.scaled() < worst) {
      worst = m.scaled();
      point = std::move(where);
    }
  }
};

inline json z_witness(Complex z, std::string_view form) {
  return json{{"form", std::string(form)}, {"z", io::complex_to_json(z)}};
}

/// Minimum scaled margin over the grid (attainment) or max |scaled| (equality).
template <class F>
double sharpness_stat(const std::vector<Complex>& grid, bool equality, F&& margin_at) {
  double stat = equality ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& z : grid) {
    const double s = margin_at(z).scaled();
    stat = equality ? std::max(stat, std::abs(s)) : std::min(stat, s);
  }
  return stat;
}

inline double circle_M(const ComplexPoly& P, const GenConfig& cfg, int n) {
  return max_on_circle(P, 1.0, cfg.samples_for(n)).value;
}

inline TrialOutcome finish(GridScan& scan, json instance, std::optional<double> sharp = std::nullopt) {
  TrialOutcome out;
  out.status = scan.ok ? Status::pass : Status::fail;
  out.worst = scan.worst;
  instance["point"] = scan.point;
  out.witness = std::move(instance);
  out.sharpness = sharp;
  return out;
}

// T1 -------------------------------------------------------------------------

struct T1Instance {
  ComplexPoly f;
  OperatorSpec<double> spec;
  double r = 1;
  double s = 1;
};

inline double t1_scaled_excess(const T1Instance& in, bool* conclusive = nullptr) {
  const ComplexPoly h = compose_h(in.f, in.spec);
  const double R = in.r * std::max(1.0, in.s);
  if (conclusive) *conclusive = true;
  if (h.is_zero()) {
    if (conclusive) *conclusive = false;
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (h.degree() == 0) return -R / std::max(1.0, R);  // nonzero constant: no zeros at all
  const auto rs = find_roots(h);
  if (!rs.all_converged()) {
    if (conclusive) *conclusive = false;
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (max_root_modulus(rs) - R) / std::max(1.0, R);
}

inline json t1_witness(const T1Instance& in, const std::vector<Complex>& g_roots) {
  return json{{"f", io::to_json(in.f)}, {"spec", io::to_json(in.spec)}, {"r", in.r}, {"s", in.s},
              {"g_roots", io::complex_list(g_roots)}};
}

inline TrialOutcome theorem1_trial(const GenConfig& cfg, const VerifyOptions& opt, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  T1Instance in;
  in.r = rng.uniform(0.3, 2.0);
  in.f = gen_poly_zeros_in_disk(n, in.r, rng);
  const int m = opt.full_degree_g ? n : rng.uniform_int(0, n);
  std::vector<Complex> g_roots(static_cast<std::size_t>(m));
  for (auto& b : g_roots) b = rng.in_disk(3.0);
  const ComplexPoly g = from_roots(g_roots, gen_leading(rng));
  const Complex sigma = rng.uniform(0.2, 2.0) * rng.unit_phase();
  if (m > 0) {
    const auto s = min_s_for(g_roots, sigma);
    if (!s) throw Resample{};
    in.s = *s;
  } else {
    in.s = kMinSFloor;
  }
  in.spec = OperatorSpec<double>(n, lambdas_from_g(g, n), sigma);

  bool conclusive = true;
  const double excess = t1_scaled_excess(in, &conclusive);
  if (!conclusive) throw Resample{};
  TrialOutcome out;
  out.status = excess <= tol ? Status::pass : Status::fail;
  out.worst = excess;
  out.witness = t1_witness(in, g_roots);
  return out;
}

// T2 -------------------------------------------------------------------------

/// |P| <= |f| - slack * max|f| at 4096 equispaced circle points.
inline bool majorized_on_circle(const ComplexPoly& P, const ComplexPoly& f, double slack = 1e-6) {
  constexpr int kSamples = 4096;
  double fmax = 0;
  std::vector<double> fa(kSamples), pa(kSamples);
  for (int j = 0; j < kSamples; ++j) {
    const Complex z = std::polar(1.0, 2 * std::numbers::pi * j / kSamples);
    fa[static_cast<std::size_t>(j)] = std::abs(f(z));
    pa[static_cast<std::size_t>(j)] = std::abs(P(z));
    fmax = std::max(fmax, fa[static_cast<std::size_t>(j)]);
  }
  for (int j = 0; j < kSamples; ++j)
    if (pa[static_cast<std::size_t>(j)] > fa[static_cast<std::size_t>(j)] - slack * fmax) return false;
  return true;
}

/// P with |P| <= |f| on the unit circle, by one of three recipes:
/// c f with |c| <= 1; c f* with |c| <= 1 (|f*| = |f| on the circle); or
/// ((z + u)/2) f / (z - a) for the smallest root a of f, |a| < 1/2 and
/// |u| <= 1 - 2|a|, which is majorized since |z + u|/2 <= 1 - |a| <= |z - a|.
inline ComplexPoly gen_majorized(const ComplexPoly& f, const std::vector<Complex>& f_roots, Rng& rng) {
  const int n = f.degree();
  const int recipe = rng.uniform_int(0, 2);
  const Complex c = rng.in_disk(1.0);
  if (recipe == 0) return (f * c).with_ambient_degree(n);
  if (recipe == 1) return conj_inverse(f.with_ambient_degree(n)) * c;

  std::size_t a_idx = 0;
  for (std::size_t i = 1; i < f_roots.size(); ++i)
    if (std::abs(f_roots[i]) < std::abs(f_roots[a_idx])) a_idx = i;
  const Complex a = f_roots[a_idx];
  if (std::abs(a) < 0.5) {
    const Complex u = rng.in_disk(1.0 - 2 * std::abs(a));
    std::vector<Complex> rest;
    for (std::size_t i = 0; i < f_roots.size(); ++i)
      if (i != a_idx) rest.push_back(f_roots[i]);
    ComplexPoly P = from_roots(rest, f.leading()) * ComplexPoly({u / 2.0, Complex{0.5}});
    P = P.with_ambient_degree(n);
    if (majorized_on_circle(P, f)) return P;
  }
  return (f * c).with_ambient_degree(n);
}

inline TrialOutcome theorem2_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  std::vector<Complex> f_roots(static_cast<std::size_t>(n));
  for (auto& w : f_roots) w = rng.in_disk(1.0);
  const ComplexPoly f = from_roots(f_roots, gen_leading(rng));
  const auto spec = gen_admissible_spec(n, rng);
  const ComplexPoly P = gen_majorized(f, f_roots, rng);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(theorem2_margin(P, f, spec, z), tol, z_witness(z, "operator"));

  const ComplexPoly Q = f * rng.unit_phase();
  const double sharp = sharpness_stat(grid, true, [&](Complex z) { return theorem2_margin(Q, f, spec, z); });
  return finish(scan, json{{"P", io::to_json(P)}, {"f", io::to_json(f)}, {"spec", io::to_json(spec)}}, sharp);
}

// C1, T3, T4, L3, L4 --------------------------------------------------------

inline TrialOutcome corollary1_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const ComplexPoly P = gen_unrestricted(n, cfg.coefficient_scale, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const double M = circle_M(P, cfg, n);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(corollary1_margin(P, spec, z, M), tol, z_witness(z, "operator"));

  const ComplexPoly Q = psi<double>(n) * (rng.uniform(0.5, 2.0) * rng.unit_phase());
  const double MQ = circle_M(Q, cfg, n);
  const double sharp = sharpness_stat(grid, true, [&](Complex z) { return corollary1_margin(Q, spec, z, MQ); });
  return finish(scan, json{{"P", io::to_json(P)}, {"spec", io::to_json(spec)}}, sharp);
}

inline TrialOutcome theorem3_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const ComplexPoly P = gen_poly_zero_free_unit_disk(n, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const double M = circle_M(P, cfg, n);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(theorem3_margin(P, spec, z, M), tol, z_witness(z, "operator"));

  // a z^n + b with |a| = |b| = 1, phased so N[P](1) aligns its two terms.
  const Complex phi_half = phi_of(spec)(n / 2.0);
  const Complex lambda0 = spec.lambdas.front();
  const Complex b = rng.unit_phase();
  const Complex a = b * std::polar(1.0, std::arg(lambda0) - std::arg(phi_half));
  std::vector<Complex> qc(static_cast<std::size_t>(n) + 1);
  qc.front() = b;
  qc.back() = a;
  const ComplexPoly Q(std::move(qc), n);
  const double MQ = circle_M(Q, cfg, n);
  const double sharp = sharpness_stat(grid, false, [&](Complex z) { return theorem3_margin(Q, spec, z, MQ); });
  return finish(scan, json{{"P", io::to_json(P)}, {"spec", io::to_json(spec)}}, sharp);
}

inline ComplexPoly z_n_plus_one(int n) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  c.front() = 1;
  c.back() = 1;
  return ComplexPoly(std::move(c), n);
}

inline TrialOutcome theorem4_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const ComplexPoly P = gen_self_inversive(n, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const double M = circle_M(P, cfg, n);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(theorem4_margin(P, spec, z, M), tol, z_witness(z, "operator"));

  const ComplexPoly Q = z_n_plus_one(n);
  const auto identity = OperatorSpec<double>::for_N(n, {Complex{1}});
  const double MQ = circle_M(Q, cfg, n);
  const double sharp = sharpness_stat(grid, false, [&](Complex z) { return theorem4_margin(Q, identity, z, MQ); });
  return finish(scan, json{{"P", io::to_json(P)}, {"spec", io::to_json(spec)}}, sharp);
}

inline TrialOutcome lemma3_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const ComplexPoly P = gen_poly_zero_free_unit_disk(n, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(lemma3_margin(P, spec, z), tol, z_witness(z, "operator"));

  // All zeros on the circle: P = P*, so the margin vanishes identically.
  std::vector<Complex> unimodular(static_cast<std::size_t>(n));
  for (auto& w : unimodular) w = rng.unit_phase();
  const ComplexPoly Q = make_self_inversive(unimodular, gen_leading(rng));
  const double sharp = sharpness_stat(grid, true, [&](Complex z) { return lemma3_margin(Q, spec, z); });
  return finish(scan, json{{"P", io::to_json(P)}, {"spec", io::to_json(spec)}}, sharp);
}

inline TrialOutcome lemma4_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const ComplexPoly P = gen_unrestricted(n, cfg.coefficient_scale, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const double M = circle_M(P, cfg, n);
  const auto grid = standard_grid(rng);

  GridScan scan;
  for (const auto& z : grid) scan.add(lemma4_margin(P, spec, z, M), tol, z_witness(z, "operator"));

  const ComplexPoly Q = psi<double>(n);
  const double sharp = sharpness_stat(grid, true, [&](Complex z) { return lemma4_margin(Q, spec, z, 1.0); });
  return finish(scan, json{{"P", io::to_json(P)}, {"spec", io::to_json(spec)}}, sharp);
}

// Remarks ----------------------------------------------------------------------

/// lambda = e_m, the operator (n z / 2)^m P^(m)(z) / m!.
inline OperatorSpec<double> unit_lambda_spec(int n, int m) {
  std::vector<Complex> l(static_cast<std::size_t>(m) + 1);
  l.back() = 1;
  return OperatorSpec<double>::for_N(n, std::move(l));
}

/// max over the circle of |P^(m)| against factor * n!/(n-m)! * M.
inline Margin<double> circle_derivative_margin(const ComplexPoly& P, int n, int m, double M, double factor,
                                               int samples) {
  const double falling = std::abs(derivative(psi<double>(n), m)(Complex{1}));
  return {falling * factor * M, max_on_circle(derivative(P, m), 1.0, samples).value};
}

/// Derivative-form remark check. For factor 1/2 and m = 0 the growth bound
/// (|z|^n + 1) M / 2 replaces the derivative form.
inline TrialOutcome remark_trial(const ComplexPoly& P, int n, int m, double factor, const GenConfig& cfg, double tol,
                                 Rng& rng, const ComplexPoly& sharp_instance) {
  const double M = circle_M(P, cfg, n);
  const auto spec = unit_lambda_spec(n, m);
  const auto grid = standard_grid(rng);
  const bool growth = factor < 1 && m == 0;

  GridScan scan;
  for (const auto& z : grid) {
    if (growth) {
      scan.add(growth_margin(P, n, z, M), tol, z_witness(z, "growth"));
      scan.add(theorem3_margin(P, spec, z, M), tol, z_witness(z, "operator"));
    } else {
      scan.add(derivative_margin(P, n, m, z, M, factor), tol, z_witness(z, "derivative"));
      if (factor < 1)
        scan.add(theorem3_margin(P, spec, z, M), tol, z_witness(z, "operator"));
      else
        scan.add(corollary1_margin(P, spec, z, M), tol, z_witness(z, "operator"));
    }
  }
  if (!growth) {
    const int samples = cfg.samples_for(n);
    scan.add(circle_derivative_margin(P, n, m, M, factor, samples), tol, json{{"form", "circle"}});
  }

  const double MQ = circle_M(sharp_instance, cfg, n);
  const double sharp = sharpness_stat(grid, false, [&](Complex z) {
    return growth ? growth_margin(sharp_instance, n, z, MQ) : derivative_margin(sharp_instance, n, m, z, MQ, factor);
  });
  return finish(scan, json{{"P", io::to_json(P)}, {"m", m}, {"factor", factor}}, sharp);
}

inline TrialOutcome remark1_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const int m = rng.uniform_int(1, n);
  const ComplexPoly P = gen_unrestricted(n, cfg.coefficient_scale, rng);
  const ComplexPoly Q = psi<double>(n) * (rng.uniform(0.5, 2.0) * rng.unit_phase());
  return remark_trial(P, n, m, 1.0, cfg, tol, rng, Q);
}

inline TrialOutcome remark2_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const int m = rng.uniform_int(0, n);
  const ComplexPoly P = gen_poly_zero_free_unit_disk(n, rng);
  return remark_trial(P, n, m, 0.5, cfg, tol, rng, z_n_plus_one(n));
}

inline TrialOutcome remark3_trial(const GenConfig& cfg, double tol, Rng& rng) {
  const int n = gen_degree(cfg, rng);
  const int m = rng.uniform_int(0, n);
  const ComplexPoly P = gen_self_inversive(n, rng);
  return remark_trial(P, n, m, 0.5, cfg, tol, rng, z_n_plus_one(n));
}

struct SharpnessRule {
  const char* kind;
  double threshold;
};

inline std::optional<SharpnessRule> sharpness_rule(TheoremId t) {
  switch (t) {
    case TheoremId::T1: return std::nullopt;
    case TheoremId::T2:
    case TheoremId::C1:
    case TheoremId::L3:
    case TheoremId::L4: return SharpnessRule{"equality", 1e-9};
    default: return SharpnessRule{"attainment", 1e-6};
  }
}

inline TrialOutcome run_one(TheoremId t, const GenConfig& cfg, const VerifyOptions& opt, double tol, Rng& rng) {
  switch (t) {
    case TheoremId::T1: return theorem1_trial(cfg, opt, tol, rng);
    case TheoremId::T2: return theorem2_trial(cfg, tol, rng);
    case TheoremId::C1: return corollary1_trial(cfg, tol, rng);
    case TheoremId::T3: return theorem3_trial(cfg, tol, rng);
    case TheoremId::T4: return theorem4_trial(cfg, tol, rng);
    case TheoremId::L3: return lemma3_trial(cfg, tol, rng);
    case TheoremId::L4: return lemma4_trial(cfg, tol, rng);
    case TheoremId::R1: return remark1_trial(cfg, tol, rng);
    case TheoremId::R2: return remark2_trial(cfg, tol, rng);
    case TheoremId::R3: return remark3_trial(cfg, tol, rng);
  }
  return {};
}

/// Up to three resamples on numerical trouble before the trial is skipped.
inline constexpr int kResampleBudget = 3;

inline TrialOutcome run_trial(TheoremId t, const GenConfig& cfg, const VerifyOptions& opt, double tol, int trial) {
  for (int attempt = 0; attempt <= kResampleBudget; ++attempt) {
    Rng rng = trial_rng(cfg.seed, trial, attempt);
    try {
      auto out = run_one(t, cfg, opt, tol, rng);
      out.witness["trial"] = trial;
      out.witness["attempt"] = attempt;
      return out;
    } catch (const Resample&) {
    } catch (const Error& e) {
      if (!e.is_numerical()) throw;
    }
  }
  return {};
}

}  // namespace detail

/// Runs cfg.trials independent trials, in parallel when opt.jobs > 1. The
/// reduction walks trials in index order so the report does not depend on jobs.
inline VerificationReport verify(TheoremId t, const GenConfig& cfg, const VerifyOptions& opt = {}) {
  cfg.validate();
  const double tol = opt.tol.value_or(default_tolerance(t));
  std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));

  const int jobs = std::clamp(opt.jobs, 1, cfg.trials);
  if (jobs == 1) {
    for (int i = 0; i < cfg.trials; ++i) outcomes[static_cast<std::size_t>(i)] = detail::run_trial(t, cfg, opt, tol, i);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (int i = w; i < cfg.trials; i += jobs)
            outcomes[static_cast<std::size_t>(i)] = detail::run_trial(t, cfg, opt, tol, i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  VerificationReport rep;
  rep.theorem = t;
  rep.trials = cfg.trials;
  rep.tolerance = tol;
  rep.seed = cfg.seed;
  rep.config = cfg;
  const bool higher_is_worse = t == TheoremId::T1;
  const auto rule = detail::sharpness_rule(t);
  if (rule) rep.sharpness = SharpnessCheck{rule->kind, rule->threshold, 0.0, true};

  bool have_worst = false;
  for (const auto& o : outcomes) {
    switch (o.status) {
      case detail::Status::pass: ++rep.passes; break;
      case detail::Status::fail: ++rep.failures; break;
      case detail::Status::inconclusive: ++rep.inconclusive; continue;
    }
    const bool worse = !have_worst || (higher_is_worse ? o.worst > rep.worst_margin : o.worst < rep.worst_margin);
    if (worse) {
      rep.worst_margin = o.worst;
      rep.witness = o.witness;
      have_worst = true;
    }
    if (rep.sharpness && o.sharpness) rep.sharpness->worst = std::max(rep.sharpness->worst, *o.sharpness);
  }
  if (rep.sharpness) {
    // For attainment the statistic is a grid minimum; the worst trial is the largest.
    rep.sharpness->passed = rep.sharpness->worst <= rep.sharpness->threshold;
  }
  return rep;
}

inline VerificationReport verify_theorem1(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::T1, cfg, opt); }
inline VerificationReport verify_theorem2(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::T2, cfg, opt); }
inline VerificationReport verify_corollary1(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::C1, cfg, opt); }
inline VerificationReport verify_theorem3(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::T3, cfg, opt); }
inline VerificationReport verify_theorem4(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::T4, cfg, opt); }
inline VerificationReport verify_lemma3(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::L3, cfg, opt); }
inline VerificationReport verify_lemma4(const GenConfig& cfg, const VerifyOptions& opt = {}) { return verify(TheoremId::L4, cfg, opt); }

/// R1, R2 and R3 in sequence.
inline std::vector<VerificationReport> verify_remarks(const GenConfig& cfg, const VerifyOptions& opt = {}) {
  return {verify(TheoremId::R1, cfg, opt), verify(TheoremId::R2, cfg, opt), verify(TheoremId::R3, cfg, opt)};
}

/// Checks one caller-supplied instance on the standard grid (grid points drawn
/// from cfg.seed). The hypothesis of the theorem is checked first; an instance
/// that does not satisfy it raises Error(invalid_spec). For T1, f and the
/// spec's phi play the roles of f and g, with r and s taken as tight as the
/// computed roots allow.
inline VerificationReport verify_instance(TheoremId t, const ComplexPoly& P, const std::optional<ComplexPoly>& f,
                                          const OperatorSpec<double>& spec, const GenConfig& cfg = {},
                                          std::optional<double> tol_override = std::nullopt) {
  const double tol = tol_override.value_or(default_tolerance(t));
  const int n = spec.n;
  const auto hypothesis = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::invalid_spec, std::string("instance violates hypothesis: ") + what);
  };
  const auto zero_free = [](const ComplexPoly& p) {
    if (p.degree() == 0) return !p.is_zero();
    const auto rs = find_roots(p);
    if (!rs.all_converged()) throw Error(Errc::root_finding_failed, "roots of P");
    for (const auto& w : rs.roots)
      if (std::abs(w) < 1 - 1e-9) return false;
    return true;
  };

  VerificationReport rep;
  rep.theorem = t;
  rep.trials = 1;
  rep.tolerance = tol;
  rep.seed = cfg.seed;
  rep.config = cfg;
  rep.config.trials = 1;

  detail::TrialOutcome out;
  if (t == TheoremId::T1) {
    const ComplexPoly& F = f ? *f : P;
    const auto frs = find_roots(F);
    if (!frs.all_converged()) throw Error(Errc::root_finding_failed, "roots of f");
    const ComplexPoly g = phi_of(spec);
    std::vector<Complex> g_roots;
    std::optional<double> s = kMinSFloor;
    if (g.degree() > 0) {
      const auto grs = find_roots(g);
      if (!grs.all_converged()) throw Error(Errc::root_finding_failed, "roots of g");
      g_roots = grs.roots;
      s = min_s_for(g_roots, spec.sigma);
    }
    hypothesis(s.has_value(), "a zero of g coincides with sigma");
    detail::T1Instance in{F.with_ambient_degree(n), spec, max_root_modulus(frs), *s};
    bool conclusive = true;
    out.worst = detail::t1_scaled_excess(in, &conclusive);
    if (!conclusive) throw Error(Errc::root_finding_failed, "roots of h");
    out.status = out.worst <= tol ? detail::Status::pass : detail::Status::fail;
    out.witness = detail::t1_witness(in, g_roots);
  } else {
    if (t != TheoremId::R1 && t != TheoremId::R2 && t != TheoremId::R3)
      hypothesis(check_N_admissible(spec, 1e-9), "phi has a zero outside |z| <= |z - n/2|");
    const ComplexPoly Pn = P.with_ambient_degree(n);
    Rng rng(cfg.seed);
    const auto grid = standard_grid(rng);
    const double M = detail::circle_M(Pn, cfg, n);
    detail::GridScan scan;
    json instance{{"P", io::to_json(Pn)}, {"spec", io::to_json(spec)}};
    const auto each = [&](auto&& margin_at) {
      for (const auto& z : grid) scan.add(margin_at(z), tol, detail::z_witness(z, "operator"));
    };
    switch (t) {
      case TheoremId::T2: {
        hypothesis(f.has_value(), "T2 needs the majorant f");
        const ComplexPoly fn = f->with_ambient_degree(n);
        require_exact_degree(fn, n);
        hypothesis(zeros_in_disk(fn, 1.0, 1e-9), "f has a zero outside the closed unit disk");
        hypothesis(detail::majorized_on_circle(Pn, fn, 0.0), "|P| > |f| somewhere on the unit circle");
        instance["f"] = io::to_json(fn);
        each([&](Complex z) { return theorem2_margin(Pn, fn, spec, z); });
        break;
      }
      case TheoremId::C1: each([&](Complex z) { return corollary1_margin(Pn, spec, z, M); }); break;
      case TheoremId::T3:
        hypothesis(zero_free(Pn), "P vanishes in |z| < 1");
        each([&](Complex z) { return theorem3_margin(Pn, spec, z, M); });
        break;
      case TheoremId::T4:
        hypothesis(is_self_inversive(Pn, 1e-10), "P is not self-inversive");
        each([&](Complex z) { return theorem4_margin(Pn, spec, z, M); });
        break;
      case TheoremId::L3:
        hypothesis(zero_free(Pn), "P vanishes in |z| < 1");
        each([&](Complex z) { return lemma3_margin(Pn, spec, z); });
        break;
      case TheoremId::L4: each([&](Complex z) { return lemma4_margin(Pn, spec, z, M); }); break;
      default: {
        // Remarks: spec must be lambda = e_m.
        const int m = spec.m;
        for (int k = 0; k < m; ++k) hypothesis(spec.lambdas[static_cast<std::size_t>(k)] == Complex{}, "remarks need lambda = e_m");
        const double factor = t == TheoremId::R1 ? 1.0 : 0.5;
        if (t == TheoremId::R2) hypothesis(zero_free(Pn), "P vanishes in |z| < 1");
        if (t == TheoremId::R3) hypothesis(is_self_inversive(Pn, 1e-10), "P is not self-inversive");
        instance = json{{"P", io::to_json(Pn)}, {"m", m}, {"factor", factor}};
        for (const auto& z : grid) {
          if (factor < 1 && m == 0)
            scan.add(growth_margin(Pn, n, z, M), tol, detail::z_witness(z, "growth"));
          else
            scan.add(derivative_margin(Pn, n, m, z, M, factor), tol, detail::z_witness(z, "derivative"));
        }
        if (!(factor < 1 && m == 0))
          scan.add(detail::circle_derivative_margin(Pn, n, m, M, factor, cfg.samples_for(n)), tol,
                   json{{"form", "circle"}});
        break;
      }
    }
    out = detail::finish(scan, std::move(instance));
  }

  rep.passes = out.status == detail::Status::pass ? 1 : 0;
  rep.failures = out.status == detail::Status::fail ? 1 : 0;
  rep.worst_margin = out.worst;
  rep.witness = out.witness;
  return rep;
}

/// Recomputes the scaled margin recorded in a report witness.
inline double replay_witness(TheoremId t, const json& w, const GenConfig& cfg = {}) {
  if (t == TheoremId::T1) {
    detail::T1Instance in{io::poly_from_json(w.at("f")), io::spec_from_json(w.at("spec")), w.at("r").get<double>(),
                          w.at("s").get<double>()};
    return detail::t1_scaled_excess(in);
  }
  const ComplexPoly P = io::poly_from_json(w.at("P"));
  const auto& point = w.at("point");
  const std::string form = point.at("form").get<std::string>();

  if (t == TheoremId::R1 || t == TheoremId::R2 || t == TheoremId::R3) {
    const int m = w.at("m").get<int>();
    const double factor = w.at("factor").get<double>();
    const int n = *P.ambient_degree();
    const double M = detail::circle_M(P, cfg, n);
    if (form == "circle") return detail::circle_derivative_margin(P, n, m, M, factor, cfg.samples_for(n)).scaled();
    const Complex z = io::complex_from_json(point.at("z"));
    if (form == "growth") return growth_margin(P, n, z, M).scaled();
    if (form == "derivative") return derivative_margin(P, n, m, z, M, factor).scaled();
    const auto spec = detail::unit_lambda_spec(n, m);
    return (factor < 1 ? theorem3_margin(P, spec, z, M) : corollary1_margin(P, spec, z, M)).scaled();
  }

  const auto spec = io::spec_from_json(w.at("spec"));
  const Complex z = io::complex_from_json(point.at("z"));
  const int n = spec.n;
  switch (t) {
    case TheoremId::T2: return theorem2_margin(P, io::poly_from_json(w.at("f")), spec, z).scaled();
    case TheoremId::C1: return corollary1_margin(P, spec, z, detail::circle_M(P, cfg, n)).scaled();
    case TheoremId::T3: return theorem3_margin(P, spec, z, detail::circle_M(P, cfg, n)).scaled();
    case TheoremId::T4: return theorem4_margin(P, spec, z, detail::circle_M(P, cfg, n)).scaled();
    case TheoremId::L3: return lemma3_margin(P, spec, z).scaled();
    case TheoremId::L4: return lemma4_margin(P, spec, z, detail::circle_M(P, cfg, n)).scaled();
    default: break;
  }
  throw Error(Errc::invalid_spec, "no replay for theorem");
}

}  // namespace polyzone
