#pragma once

// The composite polynomial
//
//   h(z) = sum_{k=0}^{m} lambda_k f^(k)(z) (sigma z)^k / k!
//
// and its sigma = n/2 specialization N[P], together with the admissibility
// polynomial phi(z) = sum_k C(n,k) lambda_k z^k (the g of the composition).

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "polyzone/error.hpp"
#include "polyzone/poly.hpp"
#include "polyzone/regions.hpp"
#include "polyzone/roots.hpp"

namespace polyzone {

/// Largest n for which every C(n,k) is computed exactly in 64-bit integers.
inline constexpr int kExactBinomialLimit = 62;

/// C(n,k): exact for n <= 62, multiplicative floating point above.
template <std::floating_point Real = double>
Real binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  if (n <= kExactBinomialLimit) {
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return static_cast<Real>(c);
  }
  Real c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<Real>(n - i) / static_cast<Real>(i + 1);
  return c;
}

template <std::floating_point Real>
struct OperatorSpec {
  int n = 1;
  int m = 0;
  std::vector<std::complex<Real>> lambdas{std::complex<Real>{1}};
  std::complex<Real> sigma{};

  OperatorSpec() = default;

  OperatorSpec(int n_, std::vector<std::complex<Real>> lambdas_, std::complex<Real> sigma_)
      : n(n_), m(static_cast<int>(lambdas_.size()) - 1), lambdas(std::move(lambdas_)), sigma(sigma_) {
    validate();
  }

  /// Spec of the Bernstein-type operator N: sigma = n/2.
  static OperatorSpec for_N(int n, std::vector<std::complex<Real>> lambdas) {
    return OperatorSpec(n, std::move(lambdas), std::complex<Real>{static_cast<Real>(n) / 2});
  }

  void validate() const {
    if (n < 1) throw Error(Errc::invalid_spec, "n must be positive");
    if (m < 0 || static_cast<std::size_t>(m) + 1 != lambdas.size())
      throw Error(Errc::invalid_spec, "lambdas must have m+1 entries");
    if (m > n) throw Error(Errc::degree_exceeds_n, "operator order m exceeds n");
    bool any = false;
    for (const auto& l : lambdas) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) throw Error(Errc::invalid_spec, "non-finite lambda");
      any = any || l != std::complex<Real>{};
    }
    if (!any) throw Error(Errc::invalid_spec, "lambdas are all zero");
  }
};

/// lambda_k = g_k / C(n,k) for k up to deg g.
template <std::floating_point Real>
std::vector<std::complex<Real>> lambdas_from_g(const Polynomial<Real>& g, int n) {
  const int m = g.degree();
  if (m > n) throw Error(Errc::degree_exceeds_n, "deg g = " + std::to_string(m) + " > n = " + std::to_string(n));
  std::vector<std::complex<Real>> out(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) out[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(k)] / binomial<Real>(n, k);
  return out;
}

/// sum_k C(n,k) lambda_k z^k, with ambient degree m.
template <std::floating_point Real>
Polynomial<Real> g_from_lambdas(const std::vector<std::complex<Real>>& lambdas, int n) {
  if (lambdas.empty()) throw Error(Errc::invalid_spec, "no lambdas");
  const int m = static_cast<int>(lambdas.size()) - 1;
  if (m > n) throw Error(Errc::degree_exceeds_n, "m = " + std::to_string(m) + " > n = " + std::to_string(n));
  std::vector<std::complex<Real>> c(lambdas.size());
  for (int k = 0; k <= m; ++k) c[static_cast<std::size_t>(k)] = binomial<Real>(n, k) * lambdas[static_cast<std::size_t>(k)];
  return Polynomial<Real>(std::move(c), m);
}

template <std::floating_point Real>
Polynomial<Real> phi_of(const OperatorSpec<Real>& spec) {
  spec.validate();
  return g_from_lambdas(spec.lambdas, spec.n);
}

enum class DegreeCheck { exact, at_most, none };

/// h(z) = sum_k lambda_k f^(k)(z) (sigma z)^k / k!, ambient degree n.
/// The exact check enforces deg f == n.
template <std::floating_point Real>
Polynomial<Real> compose_h(const Polynomial<Real>& f, const OperatorSpec<Real>& spec,
                           DegreeCheck check = DegreeCheck::exact) {
  using C = std::complex<Real>;
  spec.validate();
  const int n = spec.n;
  if (check == DegreeCheck::exact) require_exact_degree(f, n);
  if (check != DegreeCheck::none && f.degree() > n)
    throw Error(Errc::degree_exceeds_n, "operand degree exceeds n");

  const auto size = std::max<std::size_t>(static_cast<std::size_t>(n) + 1, static_cast<std::size_t>(f.degree()) + 1);
  std::vector<C> h(size);
  const Polynomial<Real> base = f.trimmed().with_ambient_degree(std::nullopt);

  // fk = f^(k) / k!, built one derivative at a time so no factorial is formed.
  Polynomial<Real> fk = base;
  C sigma_pow{1};
  for (int k = 0; k <= spec.m; ++k) {
    if (k > 0) {
      fk = derivative(fk, 1) * C{Real{1} / static_cast<Real>(k)};
      sigma_pow *= spec.sigma;
    }
    const C weight = spec.lambdas[static_cast<std::size_t>(k)] * sigma_pow;
    if (weight == C{}) continue;
    const auto c = fk.coeffs();
    for (std::size_t j = 0; j < c.size() && j + static_cast<std::size_t>(k) < size; ++j)
      h[j + static_cast<std::size_t>(k)] += weight * c[j];
  }
  return Polynomial<Real>(std::move(h), std::max(n, f.degree()));
}

/// N[P](z) = sum_i lambda_i (n z / 2)^i P^(i)(z) / i!, for P of degree at most n.
template <std::floating_point Real>
Polynomial<Real> apply_N(const Polynomial<Real>& P, const OperatorSpec<Real>& spec) {
  const std::complex<Real> half_n{static_cast<Real>(spec.n) / 2};
  if (std::abs(spec.sigma - half_n) > Real(1e-12) * std::max(Real{1}, half_n.real()))
    throw Error(Errc::sigma_mismatch, "N requires sigma = n/2");
  return compose_h(P, spec, DegreeCheck::at_most);
}

/// Zeros of phi lie in the half-plane |z| <= |z - n/2| (within tol).
template <std::floating_point Real>
bool check_N_admissible(const OperatorSpec<Real>& spec, std::type_identity_t<Real> tol) {
  const auto phi = phi_of(spec);
  if (phi.degree() == 0) return true;
  const auto rs = find_roots(phi);
  if (!rs.all_converged()) throw Error(Errc::root_finding_failed, "roots of phi");
  const ApolloniusRegion<Real> half_plane(Real{1}, std::complex<Real>{static_cast<Real>(spec.n) / 2});
  for (const auto& w : rs.roots)
    if (!in_apollonius(w, half_plane, tol)) return false;
  return true;
}

}  // namespace polyzone
