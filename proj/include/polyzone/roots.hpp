#pragma once

// Aberth-Ehrlich simultaneous root finding with backward-error certification.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <vector>

#include "polyzone/error.hpp"
#include "polyzone/poly.hpp"

namespace polyzone {

/// A root is certified when |p(w)| <= kCertificationThreshold * sum |c_k| max(1,|w|)^k.
inline constexpr double kCertificationThreshold = 1e-8;

template <std::floating_point Real>
struct RootSet {
  std::vector<std::complex<Real>> roots;
  std::vector<Real> residuals;
  std::vector<bool> converged;
  int iterations = 0;

  std::size_t size() const noexcept { return roots.size(); }
  bool all_converged() const noexcept {
    return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
  }
};

/// |p(w)| divided by the coefficient-magnitude bound sum |c_k| max(1,|w|)^k.
template <std::floating_point Real>
Real scaled_residual(const Polynomial<Real>& p, std::complex<Real> w) {
  const Real rho = std::max(Real{1}, std::abs(w));
  Real bound = 0;
  const auto c = p.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) bound = bound * rho + std::abs(c[k]);
  if (bound == 0) return 0;
  return std::abs(p(w)) / bound;
}

struct RootOptions {
  double tol = 1e-13;
  int max_iter = 500;
};

/// All effective-degree many roots of p.
template <std::floating_point Real>
RootSet<Real> find_roots(const Polynomial<Real>& p, RootOptions opt = {}) {
  using C = std::complex<Real>;
  if (!p.is_finite()) throw Error(Errc::non_finite_coefficient, "find_roots");
  const int deg = p.degree();
  if (deg < 1) throw Error(Errc::degree_zero, "constant polynomial has no roots");
  if (!(opt.tol > 0) || opt.max_iter < 1) throw Error(Errc::invalid_spec, "find_roots needs tol > 0, max_iter >= 1");

  const auto all = p.coeffs();
  // Roots at the origin come off exactly.
  std::size_t zeros = 0;
  while (zeros < static_cast<std::size_t>(deg) && all[zeros] == C{}) ++zeros;

  std::vector<C> c(all.begin() + static_cast<std::ptrdiff_t>(zeros), all.begin() + deg + 1);
  const C lead = c.back();
  for (auto& x : c) x /= lead;
  const int n = static_cast<int>(c.size()) - 1;
  const Polynomial<Real> q(c);

  RootSet<Real> out;
  out.roots.reserve(static_cast<std::size_t>(deg));

  if (n > 0) {
    std::vector<C> z(static_cast<std::size_t>(n));
    const Real radius = Real(1.05) * std::pow(std::abs(c.front()), Real{1} / static_cast<Real>(n));
    const Real start = radius > 0 ? radius : Real{1};
    for (int k = 0; k < n; ++k) {
      const Real theta = 2 * std::numbers::pi_v<Real> * static_cast<Real>(k) / static_cast<Real>(n) + Real(0.4);
      z[static_cast<std::size_t>(k)] = std::polar(start, theta);
    }

    int it = 0;
    for (; it < opt.max_iter; ++it) {
      bool done = true;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const auto [val, der] = evaluate_with_derivative(q, z[i]);
        if (val == C{}) continue;
        const C ratio = val / der;
        C repulsion{};
        for (std::size_t j = 0; j < z.size(); ++j)
          if (j != i) repulsion += Real{1} / (z[i] - z[j]);
        C step = ratio / (Real{1} - ratio * repulsion);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
          // der == 0 at a non-root: nudge off the critical point.
          step = C{Real(1e-3) * std::max(Real{1}, std::abs(z[i])), 0};
        }
        z[i] -= step;
        if (std::abs(step) > static_cast<Real>(opt.tol) * std::max(Real{1}, std::abs(z[i]))) done = false;
      }
      if (done) {
        ++it;
        break;
      }
    }
    out.iterations = it;
    out.roots = std::move(z);
  }
  out.roots.insert(out.roots.end(), zeros, C{});

  const Polynomial<Real> trimmed = p.trimmed();
  for (const auto& w : out.roots) {
    const Real r = scaled_residual(trimmed, w);
    out.residuals.push_back(r);
    out.converged.push_back(std::isfinite(w.real()) && std::isfinite(w.imag()) &&
                            r <= static_cast<Real>(kCertificationThreshold));
  }
  return out;
}

template <std::floating_point Real>
Real max_root_modulus(const RootSet<Real>& rs) {
  if (rs.roots.empty()) throw Error(Errc::degree_zero, "empty root set");
  if (!rs.all_converged()) throw Error(Errc::unconverged, "root set has unconverged entries");
  Real m = 0;
  for (const auto& w : rs.roots) m = std::max(m, std::abs(w));
  return m;
}

template <std::floating_point Real>
struct Containment {
  bool contained;
  /// max |root| - r; negative means strictly inside.
  Real worst_margin;
};

template <std::floating_point Real>
Containment<Real> contained_in_disk(const RootSet<Real>& rs, std::type_identity_t<Real> r, std::type_identity_t<Real> tol) {
  const Real worst = max_root_modulus(rs) - r;
  return {worst <= tol * std::max(Real{1}, r), worst};
}

}  // namespace polyzone
