#include <cmath>
#include <complex>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "polyzone/operators.hpp"
#include "polyzone/verify.hpp"

using namespace polyzone;

namespace {

using Spec = OperatorSpec<double>;
constexpr Complex I{0, 1};

std::vector<Complex> as_vector(const ComplexPoly& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

bool coeffs_close(const ComplexPoly& a, const ComplexPoly& b, double rel) {
  const double scale = std::max({1.0, a.max_abs_coeff(), b.max_abs_coeff()});
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k)
    if (std::abs(a[k] - b[k]) > rel * scale) return false;
  return true;
}

ComplexPoly random_poly(Rng& rng, int n) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (auto& x : c) x = rng.in_disk(1.0);
  c.back() = gen_leading(rng);
  return ComplexPoly(std::move(c), n);
}

std::vector<Complex> random_lambdas(Rng& rng, int m) {
  std::vector<Complex> l(static_cast<std::size_t>(m) + 1);
  for (auto& x : l) x = rng.in_disk(1.0);
  l.back() += 0.5;  // keep them from all being zero
  return l;
}

}  // namespace

TEST_CASE("binomial matches Pascal's triangle", "[operators]") {
  const auto tri = oracle::pascal(kExactBinomialLimit);
  for (int n = 0; n <= kExactBinomialLimit; ++n)
    for (int k = 0; k <= n; ++k) {
      const double b = binomial(n, k);
      CHECK(std::abs(b - static_cast<double>(tri[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)])) <=
            1e-15 * b);
    }
  CHECK(binomial(5, -1) == 0.0);
  CHECK(binomial(5, 6) == 0.0);
  CHECK(binomial(2, 1) == 2.0);
}

TEST_CASE("lambdas_from_g and g_from_lambdas", "[operators]") {
  const auto l = lambdas_from_g(ComplexPoly({0.0, 2.0}), 2);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == Complex{0, 0});
  CHECK(l[1] == Complex{1, 0});
  const auto one = lambdas_from_g(ComplexPoly({1.0}), 7);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Complex{1, 0});

  CHECK(coeffs_close(g_from_lambdas<double>({1.0}, 5), ComplexPoly({1.0}), 0));
  CHECK(coeffs_close(g_from_lambdas<double>({0.0, 1.0}, 2), ComplexPoly({0.0, 2.0}), 0));
  CHECK(coeffs_close(g_from_lambdas<double>({1.0, 1.0, 1.0}, 3), ComplexPoly({1.0, 3.0, 3.0}), 0));

  CHECK_THROWS_AS(lambdas_from_g(ComplexPoly({1.0, 1.0, 1.0}), 1), Error);
  CHECK_THROWS_AS(g_from_lambdas<double>({1.0, 1.0, 1.0}, 1), Error);

  SECTION("round trip") {
    Rng rng(41);
    for (int t = 0; t < 100; ++t) {
      const int n = rng.uniform_int(1, 30);
      const auto lam = random_lambdas(rng, rng.uniform_int(0, n));
      const auto back = lambdas_from_g(g_from_lambdas(lam, n), n);
      REQUIRE(back.size() == lam.size());
      for (std::size_t k = 0; k < lam.size(); ++k) CHECK(std::abs(back[k] - lam[k]) <= 1e-14 * (1 + std::abs(lam[k])));
    }
  }
}

TEST_CASE("OperatorSpec validation", "[operators]") {
  CHECK_NOTHROW(Spec(3, {1.0, 2.0}, 1.0));
  CHECK_THROWS_AS(Spec(0, {1.0}, 1.0), Error);
  CHECK_THROWS_AS(Spec(2, {0.0, 0.0}, 1.0), Error);
  try {
    Spec(1, {1.0, 1.0, 1.0}, 1.0);
    FAIL("expected DegreeExceedsN");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degree_exceeds_n);
  }
  CHECK_THROWS_AS(Spec(2, {std::nan("")}, 1.0), Error);
  CHECK(Spec::for_N(5, {1.0}).sigma == Complex{2.5, 0});
}

TEST_CASE("compose_h", "[operators]") {
  SECTION("identity operator") {
    Rng rng(42);
    const auto f = random_poly(rng, 6);
    CHECK(coeffs_close(compose_h(f, Spec(6, {1.0}, Complex{0.3, 2})), f, 0));
  }
  SECTION("f = z^2 - 1, lambda = [0, 1], sigma = 1 gives 2 z^2") {
    const auto h = compose_h(ComplexPoly({-1.0, 0.0, 1.0}, 2), Spec(2, {0.0, 1.0}, 1.0));
    CHECK(coeffs_close(h, ComplexPoly({0.0, 0.0, 2.0}), 0));
    CHECK(h.ambient_degree() == 2);
  }
  SECTION("monomials are eigenvectors with eigenvalue g(sigma)") {
    Rng rng(43);
    for (int t = 0; t < 50; ++t) {
      const int n = rng.uniform_int(1, 15);
      const Spec spec(n, random_lambdas(rng, rng.uniform_int(0, n)), rng.in_disk(2.0));
      const auto h = compose_h(ComplexPoly::monomial(n, 1.0, n), spec);
      const Complex eig = oracle::power_sum(as_vector(g_from_lambdas(spec.lambdas, n)), spec.sigma);
      for (int j = 0; j < 8; ++j) {
        const Complex z = rng.in_disk(1.5);
        const Complex expect = eig * std::pow(z, n);
        CHECK(std::abs(h(z) - expect) <= 1e-12 * (1 + std::abs(expect)));
      }
    }
  }
  SECTION("degree checks") {
    const Spec spec(3, {1.0, 1.0}, 1.0);
    try {
      compose_h(ComplexPoly({1.0, 1.0}, 1), spec);
      FAIL("expected DegreeMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degree_mismatch);
    }
    CHECK_NOTHROW(compose_h(ComplexPoly({1.0, 1.0}, 1), spec, DegreeCheck::at_most));
    CHECK_THROWS_AS(compose_h(ComplexPoly({1.0, 1.0, 1.0, 1.0, 1.0}), spec, DegreeCheck::at_most), Error);
    CHECK(compose_h(ComplexPoly({1.0, 1.0, 1.0, 1.0, 1.0}), spec, DegreeCheck::none).degree() == 4);
  }
}

TEST_CASE("apply_N", "[operators]") {
  Rng rng(44);
  const auto P = random_poly(rng, 5);
  CHECK(coeffs_close(apply_N(P, Spec::for_N(5, {1.0})), P, 0));

  SECTION("lambda = [0, 1], n = 2 gives z P'") {
    const auto Q = random_poly(rng, 2);
    const auto expect = ComplexPoly::monomial(1) * derivative(Q, 1);
    CHECK(coeffs_close(apply_N(Q, Spec::for_N(2, {0.0, 1.0})), expect, 1e-15));
  }
  SECTION("N[z^n] = phi(n/2) z^n against the series oracle") {
    for (int t = 0; t < 30; ++t) {
      const int n = rng.uniform_int(1, 20);
      const auto spec = gen_admissible_spec(n, rng);
      const auto psi = ComplexPoly::monomial(n, 1.0, n);
      const auto Npsi = apply_N(psi, spec);
      const Complex eig = phi_of(spec)(Complex{n / 2.0, 0});
      for (int j = 0; j < 8; ++j) {
        const Complex z = rng.in_disk(2.0);
        const Complex direct = oracle::series_at(as_vector(psi), spec.lambdas, spec.sigma, z);
        CHECK(std::abs(Npsi(z) - direct) <= 1e-11 * (1 + std::abs(direct)));
        CHECK(std::abs(eig * std::pow(z, n) - direct) <= 1e-11 * (1 + std::abs(direct)));
      }
    }
  }
  SECTION("sigma must be n/2") {
    try {
      apply_N(P, Spec(5, {1.0}, 2.0));
      FAIL("expected SigmaMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::sigma_mismatch);
    }
  }
  SECTION("lower-degree operands are accepted") { CHECK_NOTHROW(apply_N(ComplexPoly({1.0, 2.0}), Spec::for_N(4, {1.0, 1.0}))); }
}

TEST_CASE("phi_of and check_N_admissible", "[operators]") {
  CHECK(coeffs_close(phi_of(Spec::for_N(5, {1.0})), ComplexPoly({1.0}), 0));
  CHECK(coeffs_close(phi_of(Spec::for_N(2, {0.0, 1.0})), ComplexPoly({0.0, 2.0}), 0));
  CHECK(coeffs_close(phi_of(Spec::for_N(3, {1.0, 1.0, 1.0})), ComplexPoly({1.0, 3.0, 3.0}), 0));

  CHECK(check_N_admissible(Spec::for_N(2, {1.0, 1.0}), 1e-9));
  CHECK(check_N_admissible(Spec::for_N(4, {1.0}), 1e-9));
  CHECK_FALSE(check_N_admissible(Spec::for_N(2, {-2.0, 1.0}), 1e-9));
  // phi = z^2 + 1 for n = 2: roots +-i, Re = 0 <= 1/2
  CHECK(check_N_admissible(Spec::for_N(2, {1.0, 0.0, 1.0}), 1e-9));
}

TEST_CASE("property: coefficients agree with the series oracle and the diagonal form", "[operators]") {
  Rng rng(45);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.uniform_int(1, 16);
    const auto f = random_poly(rng, n);
    const Spec spec(n, random_lambdas(rng, rng.uniform_int(0, n)), rng.in_disk(2.0));
    const auto h = compose_h(f, spec);
    const auto fv = as_vector(f);

    const auto diag = oracle::diagonal_h(fv, spec.lambdas, spec.sigma);
    const ComplexPoly hd(diag);
    CHECK(coeffs_close(h, hd, 1e-12));

    for (int j = 0; j < 4; ++j) {
      const Complex z = rng.in_disk(1.5);
      const Complex direct = oracle::series_at(fv, spec.lambdas, spec.sigma, z);
      const double scale = oracle::power_sum(std::vector<Complex>(diag.size(), 1.0), std::abs(z)).real() *
                           std::max(1.0, h.max_abs_coeff());
      CHECK(std::abs(h(z) - direct) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("property: linearity", "[operators]") {
  Rng rng(46);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 12);
    const auto a = random_poly(rng, n), b = random_poly(rng, n);
    const Complex alpha = rng.in_disk(2.0), beta = rng.in_disk(2.0);
    const Spec spec(n, random_lambdas(rng, rng.uniform_int(0, n)), rng.in_disk(2.0));
    const auto lhs = compose_h(a * alpha + b * beta, spec, DegreeCheck::at_most);
    const auto rhs = compose_h(a, spec) * alpha + compose_h(b, spec) * beta;
    CHECK(coeffs_close(lhs, rhs, 1e-12));
  }
}

TEST_CASE("property: lambda = e_m reduces to a scaled m-th derivative", "[operators]") {
  Rng rng(47);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 12);
    const int m = rng.uniform_int(0, n);
    std::vector<Complex> lam(static_cast<std::size_t>(m) + 1);
    lam.back() = 1;
    const auto P = random_poly(rng, n);
    const auto NP = apply_N(P, Spec::for_N(n, lam));
    for (int j = 0; j < 4; ++j) {
      const Complex z = rng.in_disk(1.5);
      const Complex expect(oracle::kth_derivative_at(as_vector(P), m, z) *
                           std::pow(oracle::LC(n / 2.0) * oracle::LC(z), m) / oracle::factorial(m));
      CHECK(std::abs(NP(z) - expect) <= 1e-11 * (1 + std::abs(expect)) * std::pow(1 + n / 2.0, m));
    }
  }
}

TEST_CASE("property: degree of h never exceeds n", "[operators]") {
  Rng rng(48);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.uniform_int(1, 20);
    const int d = rng.uniform_int(0, n);
    const auto h = compose_h(random_poly(rng, d), Spec(n, random_lambdas(rng, rng.uniform_int(0, n)), rng.in_disk(2.0)),
                             DegreeCheck::at_most);
    CHECK(h.degree() <= n);
    CHECK(h.ambient_degree() == n);
  }
  // A complex sigma with i^2 = -1 cancels: f = z^2, lambda = [1, 0, 1], sigma = i -> h = (1 - 1) z^2 = 0.
  CHECK(compose_h(ComplexPoly::monomial(2, 1.0, 2), Spec(2, {1.0, 0.0, 1.0}, I)).is_zero());
}
