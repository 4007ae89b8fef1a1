#pragma once

// Complex polynomials in ascending coefficient order, with an optional
// ambient degree n that fixes the class P_n a polynomial is considered in.
// The conjugate-inverse P*(z) = z^n conj(P(1/conj z)) depends on n, not on
// the effective degree, so n is carried explicitly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "polyzone/error.hpp"

namespace polyzone {

/// Coefficients at or below this fraction of the largest one are treated as
/// zero when computing the effective degree.
inline constexpr double kDegreeThreshold = 1e-12;

template <std::floating_point Real>
class Polynomial {
 public:
  using real_type = Real;
  using value_type = std::complex<Real>;

  Polynomial() : coeffs_{value_type{}} {}

  explicit Polynomial(std::vector<value_type> coeffs, std::optional<int> ambient_degree = std::nullopt)
      : coeffs_(std::move(coeffs)), ambient_(ambient_degree) {
    if (coeffs_.empty()) coeffs_.push_back(value_type{});
    if (ambient_) {
      if (*ambient_ < 0) throw Error(Errc::degree_exceeds_n, "ambient degree must be nonnegative");
      if (degree() > *ambient_)
        throw Error(Errc::degree_exceeds_n, "effective degree " + std::to_string(degree()) +
                                                " exceeds ambient degree " + std::to_string(*ambient_));
    }
  }

  Polynomial(std::initializer_list<value_type> coeffs) : Polynomial(std::vector<value_type>(coeffs)) {}

  /// c * z^k
  static Polynomial monomial(int k, value_type c = value_type{1}, std::optional<int> ambient = std::nullopt) {
    std::vector<value_type> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return Polynomial(std::move(v), ambient);
  }

  std::span<const value_type> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::optional<int> ambient_degree() const noexcept { return ambient_; }

  /// Coefficient of z^k; zero beyond the stored range.
  value_type operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : value_type{}; }

  Real max_abs_coeff() const noexcept {
    Real m = 0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Largest k whose coefficient is above the degree threshold; 0 for constants.
  int degree() const noexcept {
    const Real scale = max_abs_coeff();
    const Real cut = static_cast<Real>(kDegreeThreshold) * (scale > 0 ? scale : Real{1});
    for (std::size_t k = coeffs_.size(); k-- > 1;)
      if (std::abs(coeffs_[k]) > cut) return static_cast<int>(k);
    return 0;
  }

  bool is_zero() const noexcept { return max_abs_coeff() == 0; }

  value_type leading() const noexcept { return coeffs_[static_cast<std::size_t>(degree())]; }

  bool is_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const value_type& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }

  Polynomial with_ambient_degree(std::optional<int> n) const { return Polynomial(coeffs_, n); }

  /// Coefficients 0..degree(), dropping negligible high-order entries.
  Polynomial trimmed() const {
    std::vector<value_type> v(coeffs_.begin(), coeffs_.begin() + degree() + 1);
    return Polynomial(std::move(v), ambient_);
  }

  value_type operator()(std::type_identity_t<value_type> z) const noexcept {
    value_type acc{};
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<value_type> v(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
    return Polynomial(std::move(v), merged_ambient(a, b));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator-(const Polynomial& a) { return a * value_type{-1}; }

  friend Polynomial operator*(const Polynomial& a, std::type_identity_t<value_type> c) {
    std::vector<value_type> v(a.coeffs_);
    for (auto& x : v) x *= c;
    return Polynomial(std::move(v), a.ambient_);
  }

  friend Polynomial operator*(std::type_identity_t<value_type> c, const Polynomial& a) { return a * c; }

  /// Product; the ambient degree is the sum when both operands carry one.
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<value_type> v(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    std::optional<int> n;
    if (a.ambient_ && b.ambient_) n = *a.ambient_ + *b.ambient_;
    return Polynomial(std::move(v), n);
  }

 private:
  static std::optional<int> merged_ambient(const Polynomial& a, const Polynomial& b) {
    if (a.ambient_ && b.ambient_) return std::max(*a.ambient_, *b.ambient_);
    return a.ambient_ ? a.ambient_ : b.ambient_;
  }

  std::vector<value_type> coeffs_;
  std::optional<int> ambient_;
};

using ComplexPoly = Polynomial<double>;
using Complex = std::complex<double>;

/// Horner evaluation of sum coeffs[k] z^k.
template <std::floating_point Real>
std::complex<Real> evaluate(const Polynomial<Real>& p, std::type_identity_t<std::complex<Real>> z) noexcept {
  return p(z);
}

/// p(z) and p'(z) in one Horner pass.
template <std::floating_point Real>
std::pair<std::complex<Real>, std::complex<Real>> evaluate_with_derivative(
    const Polynomial<Real>& p, std::type_identity_t<std::complex<Real>> z) noexcept {
  std::complex<Real> val{}, der{};
  const auto c = p.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) {
    der = der * z + val;
    val = val * z + c[k];
  }
  return {val, der};
}

/// k-th formal derivative. The ambient degree drops by k (floored at 0).
template <std::floating_point Real>
Polynomial<Real> derivative(const Polynomial<Real>& p, int k = 1) {
  using C = std::complex<Real>;
  std::optional<int> n = p.ambient_degree();
  if (n) n = std::max(0, *n - k);
  const auto c = p.coeffs();
  if (k <= 0) return p;
  if (static_cast<std::size_t>(k) >= c.size()) return Polynomial<Real>({C{}}, n);
  std::vector<C> out(c.size() - static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < out.size(); ++j) {
    // (j+k)! / j!
    Real falling = 1;
    for (std::size_t i = j + 1; i <= j + static_cast<std::size_t>(k); ++i) falling *= static_cast<Real>(i);
    out[j] = c[j + static_cast<std::size_t>(k)] * falling;
  }
  return Polynomial<Real>(std::move(out), n);
}

/// P*(z) = z^n conj(P(1/conj z)): coefficient k is conj(coeffs[n-k]).
template <std::floating_point Real>
Polynomial<Real> conj_inverse(const Polynomial<Real>& p) {
  const auto n = p.ambient_degree();
  if (!n) throw Error(Errc::missing_ambient_degree, "conj_inverse needs the ambient degree n");
  std::vector<std::complex<Real>> out(static_cast<std::size_t>(*n) + 1);
  for (int k = 0; k <= *n; ++k) out[static_cast<std::size_t>(k)] = std::conj(p[static_cast<std::size_t>(*n - k)]);
  return Polynomial<Real>(std::move(out), n);
}

/// P == P* up to tol relative to the largest coefficient. The zero polynomial
/// counts as self-inversive.
template <std::floating_point Real>
bool is_self_inversive(const Polynomial<Real>& p, Real tol) {
  const auto n = p.ambient_degree();
  if (!n) throw Error(Errc::missing_ambient_degree, "is_self_inversive needs the ambient degree n");
  const Real scale = p.max_abs_coeff();
  if (scale == 0) return true;
  Real worst = 0;
  for (int k = 0; k <= *n; ++k)
    worst = std::max(worst, std::abs(p[static_cast<std::size_t>(k)] - std::conj(p[static_cast<std::size_t>(*n - k)])));
  return worst <= tol * scale;
}

/// leading * prod (z - root_i), expanded by repeated linear multiplication.
/// The ambient degree is set to the number of roots.
template <std::floating_point Real>
Polynomial<Real> from_roots(std::span<const std::complex<Real>> roots, std::type_identity_t<std::complex<Real>> leading) {
  if (leading == std::complex<Real>{}) throw Error(Errc::zero_leading_coefficient, "from_roots");
  std::vector<std::complex<Real>> c{leading};
  c.reserve(roots.size() + 1);
  for (const auto& r : roots) {
    c.push_back(c.back());
    for (std::size_t k = c.size() - 2; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial<Real>(std::move(c), static_cast<int>(roots.size()));
}

template <std::floating_point Real>
Polynomial<Real> from_roots(const std::vector<std::complex<Real>>& roots, std::type_identity_t<std::complex<Real>> leading) {
  return from_roots(std::span<const std::complex<Real>>(roots), leading);
}

/// Throws DegreeMismatch unless the effective degree is exactly n.
template <std::floating_point Real>
void require_exact_degree(const Polynomial<Real>& p, int n) {
  if (p.degree() != n || p.is_zero())
    throw Error(Errc::degree_mismatch,
                "expected degree " + std::to_string(n) + ", got " + std::to_string(p.degree()));
}

}  // namespace polyzone
