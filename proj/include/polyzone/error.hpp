#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyzone {

enum class Errc {
  missing_ambient_degree,
  zero_leading_coefficient,
  degree_mismatch,
  degree_exceeds_n,
  sigma_mismatch,
  invalid_spec,
  invalid_region,
  empty_point_set,
  degree_zero,
  non_finite_coefficient,
  root_finding_failed,
  unconverged,
  not_self_inversive,
  degenerate_instance,
  zero_polynomial,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::missing_ambient_degree: return "MissingAmbientDegree";
    case Errc::zero_leading_coefficient: return "ZeroLeadingCoefficient";
    case Errc::degree_mismatch: return "DegreeMismatch";
    case Errc::degree_exceeds_n: return "DegreeExceedsN";
    case Errc::sigma_mismatch: return "SigmaMismatch";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::invalid_region: return "InvalidRegion";
    case Errc::empty_point_set: return "EmptyPointSet";
    case Errc::degree_zero: return "DegreeZero";
    case Errc::non_finite_coefficient: return "NonFiniteCoefficient";
    case Errc::root_finding_failed: return "RootFindingFailed";
    case Errc::unconverged: return "Unconverged";
    case Errc::not_self_inversive: return "NotSelfInversive";
    case Errc::degenerate_instance: return "DegenerateInstance";
    case Errc::zero_polynomial: return "ZeroPolynomial";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// Numerical failures (as opposed to malformed input).
  bool is_numerical() const noexcept {
    return code_ == Errc::root_finding_failed || code_ == Errc::unconverged ||
           code_ == Errc::degenerate_instance;
  }

 private:
  Errc code_;
};

}  // namespace polyzone
