#pragma once

// Max-modulus estimation on circles and pointwise margins of the
// Bernstein-type inequalities for N. Every margin is (bound side) minus
// (operator side), so a nonnegative margin means the inequality holds at z.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>

#include "polyzone/operators.hpp"
#include "polyzone/poly.hpp"

namespace polyzone {

/// Margins down to -kMarginTolerance * (1 + bound) are rounding, not violations.
inline constexpr double kMarginTolerance = 1e-9;

inline int default_samples(int degree) { return std::max(4096, 64 * degree); }

/// Golden-section search for a maximum of f on [lo, hi]. Returns the best
/// abscissa seen; f is assumed unimodal on the bracket.
template <std::floating_point Real, class F>
Real golden_section_maximize(F&& f, Real lo, Real hi, Real tol) {
  const Real inv_phi = (std::sqrt(Real{5}) - 1) / 2;
  Real c = hi - inv_phi * (hi - lo);
  Real d = lo + inv_phi * (hi - lo);
  Real fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

template <std::floating_point Real>
struct CircleMax {
  Real value = 0;
  Real arg_angle = 0;
  int samples = 0;
  bool refined = false;
};

/// max |p| on |z| = radius: equispaced sampling, then golden-section refinement
/// around the best sample. The value is always attained at arg_angle.
template <std::floating_point Real>
CircleMax<Real> max_on_circle(const Polynomial<Real>& p, std::type_identity_t<Real> radius, int samples,
                              bool refine = true) {
  constexpr Real two_pi = 2 * std::numbers::pi_v<Real>;
  samples = std::max(samples, 16);
  const auto modulus = [&](Real theta) { return std::abs(p(std::polar(radius, theta))); };

  CircleMax<Real> best;
  best.samples = samples;
  int best_j = 0;
  for (int j = 0; j < samples; ++j) {
    const Real theta = two_pi * static_cast<Real>(j) / static_cast<Real>(samples);
    const Real v = modulus(theta);
    if (v > best.value) {
      best.value = v;
      best.arg_angle = theta;
      best_j = j;
    }
  }
  if (!refine || best.value == 0) return best;

  const Real step = two_pi / static_cast<Real>(samples);
  const Real centre = step * static_cast<Real>(best_j);
  const Real theta = golden_section_maximize(modulus, centre - step, centre + step, Real(1e-12));
  const Real v = modulus(theta);
  if (v > best.value) {
    best.value = v;
    best.arg_angle = std::fmod(theta + two_pi, two_pi);
    best.refined = true;
  }
  return best;
}

template <std::floating_point Real>
CircleMax<Real> max_on_circle(const Polynomial<Real>& p, std::type_identity_t<Real> radius = 1) {
  return max_on_circle(p, radius, default_samples(std::max(p.degree(), p.ambient_degree().value_or(0))));
}

/// bound - lhs at one point.
template <std::floating_point Real>
struct Margin {
  Real bound = 0;
  Real lhs = 0;

  Real value() const noexcept { return bound - lhs; }
  Real scale() const noexcept { return 1 + std::abs(bound); }
  Real scaled() const noexcept { return value() / scale(); }
  bool holds(Real tol = static_cast<Real>(kMarginTolerance)) const noexcept { return value() >= -tol * scale(); }
};

template <std::floating_point Real>
Polynomial<Real> psi(int n) {
  return Polynomial<Real>::monomial(n, std::complex<Real>{1}, n);
}

namespace detail {

template <std::floating_point Real>
Real abs_N_at(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z) {
  return std::abs(apply_N(P, spec)(z));
}

template <std::floating_point Real>
Polynomial<Real> in_class(const Polynomial<Real>& P, int n) {
  return P.ambient_degree() == n ? P : P.with_ambient_degree(n);
}

}  // namespace detail

/// |N[f](z)| - |N[P](z)| for |P| <= |f| on the unit circle.
template <std::floating_point Real>
Margin<Real> theorem2_margin(const Polynomial<Real>& P, const Polynomial<Real>& f, const OperatorSpec<Real>& spec,
                             std::complex<Real> z) {
  return {detail::abs_N_at(f, spec, z), detail::abs_N_at(P, spec, z)};
}

/// |N[psi_n](z)| M - |N[P](z)|.
template <std::floating_point Real>
Margin<Real> corollary1_margin(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z,
                               Real M) {
  return {detail::abs_N_at(psi<Real>(spec.n), spec, z) * M, detail::abs_N_at(P, spec, z)};
}

/// (|N[psi_n](z)| + |lambda_0|) M / 2 - |N[P](z)|, for P zero-free in |z| < 1.
template <std::floating_point Real>
Margin<Real> theorem3_margin(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z, Real M) {
  const Real bound = (detail::abs_N_at(psi<Real>(spec.n), spec, z) + std::abs(spec.lambdas.front())) * M / 2;
  return {bound, detail::abs_N_at(P, spec, z)};
}

/// Same bound as theorem3_margin; P must be self-inversive.
template <std::floating_point Real>
Margin<Real> theorem4_margin(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z, Real M,
                             Real self_inversive_tol = Real(1e-10)) {
  if (!is_self_inversive(detail::in_class(P, spec.n), self_inversive_tol))
    throw Error(Errc::not_self_inversive, "theorem4_margin");
  return theorem3_margin(P, spec, z, M);
}

/// |N[P*](z)| - |N[P](z)|, for P zero-free in |z| < 1.
template <std::floating_point Real>
Margin<Real> lemma3_margin(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z) {
  const auto Pn = detail::in_class(P, spec.n);
  return {detail::abs_N_at(conj_inverse(Pn), spec, z), detail::abs_N_at(Pn, spec, z)};
}

/// (|N[psi_n](z)| + |lambda_0|) M - |N[P](z)| - |N[P*](z)|.
template <std::floating_point Real>
Margin<Real> lemma4_margin(const Polynomial<Real>& P, const OperatorSpec<Real>& spec, std::complex<Real> z, Real M) {
  const auto Pn = detail::in_class(P, spec.n);
  const Real bound = (detail::abs_N_at(psi<Real>(spec.n), spec, z) + std::abs(spec.lambdas.front())) * M;
  return {bound, detail::abs_N_at(Pn, spec, z) + detail::abs_N_at(conj_inverse(Pn), spec, z)};
}

/// |d^m/dz^m z^n| * factor * M - |P^(m)(z)|: the derivative form of the bounds
/// with lambda = e_m (factor 1 for arbitrary P, 1/2 for zero-free or
/// self-inversive P).
template <std::floating_point Real>
Margin<Real> derivative_margin(const Polynomial<Real>& P, int n, int m, std::complex<Real> z, Real M, Real factor) {
  const Real bound = std::abs(derivative(psi<Real>(n), m)(z)) * factor * M;
  return {bound, std::abs(derivative(P, m)(z))};
}

/// (|z|^n + 1) M / 2 - |P(z)|: growth of polynomials without zeros in |z| < 1.
template <std::floating_point Real>
Margin<Real> growth_margin(const Polynomial<Real>& P, int n, std::complex<Real> z, Real M) {
  return {(std::pow(std::abs(z), static_cast<Real>(n)) + 1) * M / 2, std::abs(P(z))};
}

}  // namespace polyzone
