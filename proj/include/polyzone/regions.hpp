#pragma once

// Closed circular regions: origin-centred disks |z| <= r and Apollonius
// regions |z| <= s|z - sigma|. For s = 1 the latter is the half-plane of
// points no farther from 0 than from sigma.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <span>

#include "polyzone/error.hpp"
#include "polyzone/poly.hpp"
#include "polyzone/roots.hpp"

namespace polyzone {

/// Returned by min_s_for when all points sit at the origin (any s > 0 works).
inline constexpr double kMinSFloor = 1e-12;

template <std::floating_point Real>
struct ApolloniusRegion {
  Real s;
  std::complex<Real> sigma;

  ApolloniusRegion(Real s_, std::complex<Real> sigma_) : s(s_), sigma(sigma_) {
    if (!(s > 0)) throw Error(Errc::invalid_region, "Apollonius region needs s > 0");
  }
};

template <std::floating_point Real>
struct Disk {
  Real r;

  explicit Disk(Real r_) : r(r_) {
    if (!(r >= 0)) throw Error(Errc::invalid_region, "disk radius must be nonnegative");
  }
};

template <std::floating_point Real>
bool in_apollonius(std::complex<Real> z, const ApolloniusRegion<Real>& region, std::type_identity_t<Real> tol = 0) {
  const Real scale = std::max({Real{1}, std::abs(z), std::abs(region.sigma)});
  return std::abs(z) <= region.s * std::abs(z - region.sigma) + tol * scale;
}

/// Least s with every point inside |z| <= s|z - sigma|; nullopt when unbounded
/// (a nonzero point coincides with sigma).
template <std::floating_point Real>
std::optional<Real> min_s_for(std::span<const std::complex<Real>> points, std::type_identity_t<std::complex<Real>> sigma) {
  if (points.empty()) throw Error(Errc::empty_point_set, "min_s_for");
  Real best = 0;
  for (const auto& b : points) {
    const Real num = std::abs(b);
    if (num == 0) continue;
    const Real den = std::abs(b - sigma);
    if (den == 0) return std::nullopt;
    best = std::max(best, num / den);
  }
  return best > 0 ? best : static_cast<Real>(kMinSFloor);
}

template <std::floating_point Real>
std::optional<Real> min_s_for(const std::vector<std::complex<Real>>& points, std::type_identity_t<std::complex<Real>> sigma) {
  return min_s_for(std::span<const std::complex<Real>>(points), sigma);
}

/// Every root of p has modulus <= r + tol max(1, r). Nonzero constants pass
/// vacuously.
template <std::floating_point Real>
bool zeros_in_disk(const Polynomial<Real>& p, std::type_identity_t<Real> r, std::type_identity_t<Real> tol) {
  if (p.is_zero()) throw Error(Errc::zero_polynomial, "zeros_in_disk");
  if (p.degree() == 0) return true;
  const auto rs = find_roots(p);
  if (!rs.all_converged()) throw Error(Errc::root_finding_failed, "zeros_in_disk");
  return max_root_modulus(rs) <= r + tol * std::max(Real{1}, r);
}

}  // namespace polyzone
