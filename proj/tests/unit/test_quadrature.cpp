#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "patholab/quadrature.hpp"

using namespace patholab;

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int m : {4, 8, 16, 24}) {
    const GaussRule& rule = gauss_legendre(m);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2m-1
    const int deg = 2 * m - 1;
    const double val = gauss_integrate([deg](double x) { return std::pow(x, deg); }, 0.0,
                                       1.0, m);
    CHECK(val == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive integrator handles an endpoint-singular integrand") {
  // int_0^1 1/sqrt(x) dx = 2
  const AdaptiveResult res =
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-300); }, 0.0, 1.0,
                         1e-10, 1e-14, 20000);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-6));

  // smooth case to near machine precision
  const AdaptiveResult s =
      integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-13);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(s.error_estimate <= 1e-10);
}

TEST_CASE("unit-sphere areas: gamma closed form and special values") {
  CHECK(surface_area_unit_sphere(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
  CHECK(surface_area_unit_sphere(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(surface_area_unit_sphere(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(surface_area_unit_sphere(1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("unit-sphere areas agree with Monte Carlo within 3 standard errors") {
  for (int n : {2, 3, 4}) {
    const oracles::McEstimate mc = oracles::mc_sphere_area(n, 400000, 1234 + n);
    CHECK(std::abs(mc.value - surface_area_unit_sphere(n)) <= 3.0 * mc.std_error);
  }
}

TEST_CASE("sphere rules integrate low-degree polynomials exactly") {
  for (int n : {2, 3}) {
    const SphereRule rule = sphere_rule(n, 48);
    double area = 0.0, x1 = 0.0, x1sq = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      area += rule.weights[i];
      x1 += rule.weights[i] * rule.nodes[i](0);
      x1sq += rule.weights[i] * rule.nodes[i](0) * rule.nodes[i](0);
    }
    CHECK(area == doctest::Approx(surface_area_unit_sphere(n)).epsilon(1e-13));
    CHECK(x1 == doctest::Approx(0.0));
    // int omega_1^2 = |S^{n-1}| / n
    CHECK(x1sq == doctest::Approx(surface_area_unit_sphere(n) / n).epsilon(1e-13));
  }
}

TEST_CASE("polar rules reproduce angular moments for n = 2, 3, 4") {
  for (int n : {2, 3, 4}) {
    const PolarRule rule = polar_rule(n, 64);
    double total = 0.0, t2 = 0.0, abs_t = 0.0;
    for (std::size_t i = 0; i < rule.t.size(); ++i) {
      total += rule.w[i];
      t2 += rule.w[i] * rule.t[i] * rule.t[i];
      abs_t += rule.w[i] * std::abs(rule.t[i]);
    }
    const double sn = surface_area_unit_sphere(n);
    CHECK(total == doctest::Approx(sn).epsilon(1e-12));
    CHECK(t2 == doctest::Approx(sn / n).epsilon(1e-12));
    // int |omega_1| dsigma = 2 |S^{n-2}| / (n-1); the kink at t = 0 limits a
    // fixed rule to ~1e-3 relative
    CHECK(abs_t ==
          doctest::Approx(2.0 * surface_area_unit_sphere(n - 1) / (n - 1)).epsilon(2e-3));
  }
}
