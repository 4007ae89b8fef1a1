#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "polyzone/maxmod.hpp"
#include "polyzone/verify.hpp"

using namespace polyzone;

namespace {

using Spec = OperatorSpec<double>;
constexpr Complex I{0, 1};

std::vector<Complex> as_vector(const ComplexPoly& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

ComplexPoly random_poly(Rng& rng, int n) {
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (auto& x : c) x = rng.in_disk(1.0);
  c.back() = gen_leading(rng);
  return ComplexPoly(std::move(c), n);
}

Complex point_outside(Rng& rng) { return std::polar(rng.uniform(1.0, 3.0), rng.uniform(0.0, 2 * std::numbers::pi)); }

}  // namespace

TEST_CASE("max_on_circle", "[maxmod]") {
  for (int n : {1, 3, 8}) {
    const auto r = max_on_circle(ComplexPoly::monomial(n, 1.0, n));
    CHECK(r.value == Catch::Approx(1.0).margin(1e-15));
    CHECK(r.samples == default_samples(n));
  }
  const auto zn1 = max_on_circle(ComplexPoly({1.0, 0.0, 0.0, 0.0, 1.0}, 4));
  CHECK(zn1.value == Catch::Approx(2.0).margin(1e-15));
  CHECK(zn1.arg_angle == 0.0);
  const auto lin = max_on_circle(ComplexPoly({1.0, 2.0}));
  CHECK(lin.value == Catch::Approx(3.0).margin(1e-15));
  CHECK(lin.arg_angle == 0.0);

  CHECK(max_on_circle(ComplexPoly({0.0}, 2)).value == 0.0);
  CHECK(max_on_circle(ComplexPoly({1.0, 1.0}), 2.0).value == Catch::Approx(3.0).margin(1e-14));
  CHECK(default_samples(100) == 6400);
}

TEST_CASE("golden_section_maximize", "[maxmod]") {
  const auto x = golden_section_maximize([](double t) { return -(t - 0.3) * (t - 0.3); }, -1.0, 2.0, 1e-12);
  CHECK(x == Catch::Approx(0.3).margin(1e-8));
  const auto c = golden_section_maximize([](double t) { return std::cos(t); }, -1.0, 0.5, 1e-12);
  CHECK(std::abs(c) <= 1e-6);
  // Monotone function: the maximum sits at the bracket end.
  const auto e = golden_section_maximize([](double t) { return t; }, 0.0, 1.0, 1e-10);
  CHECK(e == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("property: max_on_circle against dense sampling", "[maxmod]") {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(1, 16);
    const auto p = random_poly(rng, n);
    const double radius = rng.uniform(0.5, 2.0);
    const auto r = max_on_circle(p, radius);
    const double dense = oracle::dense_circle_max(as_vector(p), radius);
    CHECK(r.value >= dense * (1 - 1e-9));  // refined value should not be beaten by sampling
    CHECK(r.value <= dense * (1 + 1e-6));  // and dense sampling gets close to the true max
    // The value is attained at the reported angle.
    CHECK(std::abs(p(std::polar(radius, r.arg_angle))) == Catch::Approx(r.value).epsilon(1e-14));
  }
}

TEST_CASE("property: sampling monotonicity and refinement", "[maxmod]") {
  Rng rng(52);
  for (int t = 0; t < 50; ++t) {
    const auto p = random_poly(rng, rng.uniform_int(1, 12));
    for (int k : {16, 64, 256, 1024}) {
      const auto coarse = max_on_circle(p, 1.0, k, false);
      const auto fine = max_on_circle(p, 1.0, 2 * k, false);
      CHECK(fine.value >= coarse.value);
      CHECK(max_on_circle(p, 1.0, k, true).value >= coarse.value);
    }
  }
}

TEST_CASE("Margin arithmetic", "[maxmod]") {
  const Margin<double> m{2.0, 2.0 + 2e-9};
  CHECK(m.value() == Catch::Approx(-2e-9).margin(1e-20));
  CHECK(m.scale() == 3.0);
  CHECK(m.holds());
  CHECK_FALSE((Margin<double>{2.0, 2.0 + 1e-8}.holds()));
}

TEST_CASE("majorant margin", "[maxmod]") {
  Rng rng(53);
  const int n = 5;
  const auto f = gen_poly_zeros_in_disk(n, 1.0, rng);
  const auto spec = gen_admissible_spec(n, rng);
  const Complex phase = std::polar(1.0, 0.7);
  for (int j = 0; j < 20; ++j) {
    const Complex z = point_outside(rng);
    CHECK(std::abs(theorem2_margin(f * phase, f, spec, z).value()) <= 1e-9 * theorem2_margin(f, f, spec, z).scale());
    const auto half = theorem2_margin(f * 0.5, f, spec, z);
    CHECK(half.value() == Catch::Approx(std::abs(apply_N(f, spec)(z)) / 2).epsilon(1e-12));
  }
  SECTION("P = z^(n-1) under f = z^n at z = 2") {
    const auto spec2 = Spec::for_N(n, {1.0, 0.5, 0.25});
    const auto P = ComplexPoly::monomial(n - 1, 1.0, n);
    const auto F = ComplexPoly::monomial(n, 1.0, n);
    const Complex z{2, 0};
    const double expect = std::abs(oracle::series_at(as_vector(F), spec2.lambdas, spec2.sigma, z)) -
                          std::abs(oracle::series_at(as_vector(P), spec2.lambdas, spec2.sigma, z));
    const auto got = theorem2_margin(P, F, spec2, z);
    CHECK(got.value() == Catch::Approx(expect).epsilon(1e-12));
    CHECK(got.value() >= 0);
  }
}

TEST_CASE("monomial bound margin: equality for M e^{ia} z^n", "[maxmod]") {
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(1, 12);
    const auto spec = gen_admissible_spec(n, rng);
    const double M = rng.uniform(0.5, 3.0);
    const auto P = ComplexPoly::monomial(n, M * rng.unit_phase(), n);
    const Complex z = point_outside(rng);
    const auto m = corollary1_margin(P, spec, z, M);
    CHECK(std::abs(m.value()) <= 1e-9 * m.scale());
  }
}

TEST_CASE("half-sum margin for zero-free P", "[maxmod]") {
  const Spec id = Spec::for_N(4, {1.0});
  SECTION("a z^n + b is tight at aligned points") {
    const auto P = ComplexPoly({1.0, 0.0, 0.0, 0.0, 1.0}, 4);
    for (double x : {1.0, 1.5, 3.0}) {
      const auto m = theorem3_margin(P, id, Complex{x, 0}, 2.0);
      CHECK(std::abs(m.value()) <= 1e-12 * m.scale());
    }
  }
  SECTION("constants") {
    const Complex c{0.6, -0.8};
    const auto m = theorem3_margin(ComplexPoly({c}, 4), id, Complex{0, 2}, std::abs(c));
    CHECK(m.value() == Catch::Approx(0.5 * (16 + 1) * 1.0 - 1.0).epsilon(1e-14));
  }
  SECTION("zero-free quartic with lambda = [1, 0, 1]") {
    const auto P = from_roots(std::vector<Complex>{2.0, 3.0 * I, -2.0, -1.5}, 1.0);
    const auto spec = Spec::for_N(4, {1.0, 0.0, 1.0});
    REQUIRE(check_N_admissible(spec, 1e-12));
    const auto m = theorem3_margin(P, spec, Complex{1.2, 0.1}, max_on_circle(P).value);
    CHECK(m.holds());
  }
}

TEST_CASE("half-sum margin for self-inversive P", "[maxmod]") {
  for (int n : {1, 4, 7}) {
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    c.front() = c.back() = 1;
    const ComplexPoly P(c, n);
    const auto spec = Spec::for_N(n, {1.0});
    CHECK(std::abs(theorem4_margin(P, spec, Complex{1, 0}, 2.0).value()) <= 1e-12);
    const auto at3 = theorem4_margin(P, spec, Complex{3, 0}, 2.0);
    CHECK(std::abs(at3.value()) <= 1e-12 * at3.scale());
  }
  try {
    theorem4_margin(ComplexPoly({2.0, 1.0}, 1), Spec::for_N(1, {1.0}), Complex{1, 0}, 3.0);
    FAIL("expected NotSelfInversive");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_self_inversive);
  }
  Rng rng(55);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.uniform_int(1, 10);
    const auto P = gen_self_inversive(n, rng);
    const auto spec = gen_admissible_spec(n, rng);
    CHECK(theorem4_margin(P, spec, point_outside(rng), max_on_circle(P).value).holds());
  }
}

TEST_CASE("conjugate-inverse margin", "[maxmod]") {
  const auto m = lemma3_margin(ComplexPoly({2.0, 1.0}, 1), Spec::for_N(1, {1.0}), Complex{2, 0});
  CHECK(m.value() == Catch::Approx(1.0).epsilon(1e-15));

  const Complex c{-1.5, 2};
  const auto k = lemma3_margin(ComplexPoly({c}, 3), Spec::for_N(3, {1.0}), Complex{0, 2});
  CHECK(k.value() == Catch::Approx(std::abs(c) * (8 - 1)).epsilon(1e-14));

  Rng rng(56);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.uniform_int(1, 8);
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (auto& w : roots) w = rng.unit_phase();
    const auto P = from_roots(roots, 1.0);
    // Roots on the circle: P* is a unimodular multiple of P, so the margin vanishes.
    const auto mm = lemma3_margin(P, gen_admissible_spec(n, rng), point_outside(rng));
    CHECK(std::abs(mm.value()) <= 1e-9 * mm.scale());
  }
}

TEST_CASE("summed conjugate-inverse margin", "[maxmod]") {
  for (int n : {1, 3, 6}) {
    const auto spec = Spec::for_N(n, {1.0});
    const auto psi_n = psi<double>(n);
    for (double x : {1.0, 1.7, 4.0}) {
      const auto m = lemma4_margin(psi_n, spec, Complex{x, 0}, 1.0);
      CHECK(std::abs(m.value()) <= 1e-12 * m.scale());
      std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
      c.front() = c.back() = 1;
      const auto e = lemma4_margin(ComplexPoly(c, n), spec, Complex{x, 0}, 2.0);
      CHECK(std::abs(e.value()) <= 1e-12 * e.scale());
    }
  }
  Rng rng(57);
  const auto spec = Spec::for_N(5, {1.0, 2.0, 1.0});
  REQUIRE(check_N_admissible(spec, 1e-12));
  for (int t = 0; t < 20; ++t) {
    const auto P = random_poly(rng, 5);
    CHECK(lemma4_margin(P, spec, Complex{0, 1.7}, max_on_circle(P).value).holds());
  }
}

TEST_CASE("growth and derivative specializations", "[maxmod]") {
  Rng rng(58);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.uniform_int(1, 10);
    const auto P = gen_poly_zero_free_unit_disk(n, rng);
    const double M = max_on_circle(P).value;
    const Complex z = point_outside(rng);
    const auto g = growth_margin(P, n, z, M);
    CHECK(g.holds());
    // The growth bound is the lambda = [1] case of theorem3_margin.
    const auto t3 = theorem3_margin(P, Spec::for_N(n, {1.0}), z, M);
    CHECK(g.value() == Catch::Approx(t3.value()).epsilon(1e-12).margin(1e-12 * t3.scale()));

    // Erdos-Lax on the circle and its generalisation outside it.
    const auto el = derivative_margin(P, n, 1, z, M, 0.5);
    CHECK(el.holds());
  }
  for (int t = 0; t < 30; ++t) {
    const int n = rng.uniform_int(1, 10);
    const int m = rng.uniform_int(1, n);
    const auto P = random_poly(rng, n);
    const double M = max_on_circle(P).value;
    const Complex z = point_outside(rng);
    CHECK(derivative_margin(P, n, m, z, M, 1.0).holds());
    // With lambda = e_m, corollary1_margin is the derivative margin scaled by (n/2)^m |z|^m / m!.
    std::vector<Complex> lam(static_cast<std::size_t>(m) + 1);
    lam.back() = 1;
    const double factor = std::pow(n / 2.0 * std::abs(z), m) / static_cast<double>(oracle::factorial(m));
    const auto c1 = corollary1_margin(P, Spec::for_N(n, lam), z, M);
    const auto dm = derivative_margin(P, n, m, z, M, 1.0);
    CHECK(c1.value() == Catch::Approx(dm.value() * factor).epsilon(1e-9).margin(1e-12 * c1.scale()));
  }
  // Bernstein on the circle: z^n is extremal.
  const auto b = derivative_margin(psi<double>(6), 6, 1, Complex{1, 0}, 1.0, 1.0);
  CHECK(std::abs(b.value()) <= 1e-14);
}
