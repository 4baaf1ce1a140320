#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "patholab/identity.hpp"

using namespace patholab;

namespace {

VecN point(std::initializer_list<double> coords) {
  VecN x(static_cast<int>(coords.size()));
  int i = 0;
  for (double c : coords) x(i++) = c;
  return x;
}

}  // namespace

TEST_CASE("harmonic catalog: harmonicity and homogeneity") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (int n : {2, 3}) {
    for (const auto& P : harmonic_catalog(n)) {
      for (int s = 0; s < 100; ++s) {
        VecN x(n);
        for (int i = 0; i < n; ++i) x(i) = gauss(rng);
        x *= 0.5 / x.norm();
        // homogeneity P(tx) = t^k P(x)
        const double t = 0.3 + 0.4 * (s / 100.0);
        CHECK(P.eval(VecN(t * x)) ==
              doctest::Approx(std::pow(t, P.k) * P.eval(x)).epsilon(1e-12));
        // harmonicity by finite differences
        const double lap = oracles::fd_laplacian(P.eval, x, 1e-4);
        const double scale = std::abs(P.eval(x)) + x.norm() + 1.0;
        CHECK(std::abs(lap) <= 1e-8 * scale * 100);
        // gradient consistency
        const VecN g = P.grad(x);
        const VecN gfd = oracles::fd_gradient(P.eval, x, 1e-6);
        CHECK((g - gfd).norm() <= 1e-7 * (g.norm() + 1.0));
      }
    }
  }
}

TEST_CASE("k=1 analytic bracket reduces to the base identity coefficients") {
  // With P = x1 (k=1): coefficients are (n+1) and (n-1).
  const auto params = make_w11(3, 2.0);
  const auto P = harmonic_by_id(3, "x1");
  const VecN x = point({0.2, 0.1, -0.15});
  const double r = x.norm();
  const RadialProfile p = eval_profile(params, r);
  const double expected =
      x(0) * (p.ddv + 4.0 * p.dv / r - 2.0 * p.alpha * p.v / (r * r));
  CHECK(div_A_grad_analytic(x, params, P) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("matched families annihilate the k=1 bracket") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (const auto& params : {make_w11(2, 2.0), make_w11(3, 1.5), make_lipschitz_log(2),
                             make_bmo_logsq(3), make_power(3, -0.5)}) {
    const auto P = harmonic_by_id(params.n, "x1");
    for (int s = 0; s < 200; ++s) {
      VecN x(params.n);
      for (int i = 0; i < params.n; ++i) x(i) = gauss(rng);
      x *= std::exp(std::log(1e-3) * (s / 200.0)) * 0.9 / x.norm();
      const double analytic = div_A_grad_analytic(x, params, P);
      const double scale = identity_term_scale(x, params, P);
      CHECK(std::abs(analytic) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("power family with k-matched constant alpha has zero bracket") {
  // a(a-1) + (n+2k-1)a = k(n+k-2) alpha  =>  alpha = a(a + n + 2k - 2)/(k(n+k-2))
  const int n = 3, k = 2;
  const double a = 1.0;
  const auto params = make_power(n, a);
  const auto P = harmonic_by_id(n, "x1x2");
  const double alpha_matched = a * (a + n + 2 * k - 2) / (k * (n + k - 2.0));
  const double shift = alpha_matched - alpha_at(params, 0.5);
  const VecN x = point({0.3, 0.2, -0.1});
  CHECK(std::abs(div_A_grad_analytic(x, params, P, shift)) <=
        1e-12 * identity_term_scale(x, params, P, shift));
}

TEST_CASE("flux-form numeric divergence: trivial and polynomial cases") {
  // alpha = 0, u = x1: constant flux, zero divergence
  const auto flat = make_power(2, 0.0);
  const auto P2 = harmonic_by_id(2, "x1");
  CHECK(std::abs(div_A_grad_numeric(point({0.3, 0.2}), flat, P2, 1e-4)) <= 1e-10);

  // power a=2 (v = r^2, u cubic) with matched alpha: numeric near machine zero
  const auto cubic = make_power(3, 2.0);
  const auto P3 = harmonic_by_id(3, "x1");
  const VecN x = point({0.25, -0.2, 0.3});
  const double numeric = div_A_grad_numeric(x, cubic, P3, 1e-5);
  const double analytic = div_A_grad_analytic(x, cubic, P3);
  CHECK(std::abs(analytic) <= 1e-13);
  CHECK(std::abs(numeric - analytic) <= 1e-8);
}

TEST_CASE("numeric divergence is second order against the analytic bracket") {
  // Lemma 1 holds for any (v, alpha) pair: shift alpha on both sides.
  const auto params = make_w11(3, 2.0);
  const auto P = harmonic_by_id(3, "x1x2");
  const VecN x = point({0.28, 0.31, -0.17});
  const double shift = 0.2;
  const double analytic = div_A_grad_analytic(x, params, P, shift);
  double errs[3], hs[3] = {1e-3, 5e-4, 2.5e-4};
  for (int i = 0; i < 3; ++i)
    errs[i] = std::abs(div_A_grad_numeric(x, params, P, hs[i], shift) - analytic);
  const double order01 = oracles::fd_order(errs[0], errs[1]);
  const double order12 = oracles::fd_order(errs[1], errs[2]);
  CHECK(order01 >= 1.7);
  CHECK(order01 <= 2.3);
  CHECK(order12 >= 1.7);
  CHECK(order12 <= 2.3);
}

TEST_CASE("stencil guard rejects steps that leave the domain") {
  const auto params = make_w11(2, 2.0);
  const auto P = harmonic_by_id(2, "x1");
  CHECK_THROWS_AS(div_A_grad_numeric(point({1e-4, 0.0}), params, P, 1e-3),
                  std::domain_error);
  CHECK_THROWS_AS(div_A_grad_numeric(point({0.999, 0.0}), params, P, 1e-2),
                  std::domain_error);
}

TEST_CASE("with alpha = 0 the flux form matches a plain FD Laplacian") {
  const auto params = make_power(3, 2.0);  // v = r^2, smooth u
  const auto P = harmonic_by_id(3, "x1");
  auto u = [&](const VecN& y) { return y(0) * eval_profile(params, y.norm()).v; };
  const VecN x = point({0.2, 0.25, -0.3});
  const double h = 1e-4;
  // kill alpha by shifting it to zero
  const double shift = -alpha_at(params, x.norm());
  const double flux_div = div_A_grad_numeric(x, params, P, h, shift);
  const double lap = oracles::fd_laplacian(u, x, h);
  CHECK(flux_div == doctest::Approx(lap).epsilon(1e-6));
}

TEST_CASE("residual sweep: matched families, order fit, skipped samples") {
  const auto params = make_w11(2, 2.0);
  const auto P = harmonic_by_id(2, "x1");
  SweepOptions opts;
  opts.samples = 400;
  const ResidualReport rep = identity_residual_sweep(params, P, 0.05, 0.9, opts);
  CHECK(rep.sample_count == 400);
  CHECK(rep.skipped == 0);
  CHECK(rep.bracket_sup_rel <= 1e-9);
  CHECK(rep.convergence_order >= 1.7);
  CHECK(rep.convergence_order <= 2.3);
  // generalized identity, k = 2
  const ResidualReport rep2 =
      identity_residual_sweep(params, harmonic_by_id(2, "x1x2"), 0.05, 0.9, opts);
  CHECK(rep2.convergence_order >= 1.7);
  CHECK(rep2.convergence_order <= 2.3);
}

TEST_CASE("sweep negative control: mismatched field leaves a persistent residual") {
  const auto params = make_w11(2, 2.0);
  const auto P = harmonic_by_id(2, "x1");
  SweepOptions opts;
  opts.samples = 100;
  opts.alpha_shift_field = 0.1;  // field perturbed, bracket not
  const ResidualReport rep = identity_residual_sweep(params, P, 0.1, 0.9, opts);
  // residual does not vanish as h -> 0
  CHECK(rep.mean_by_step.back() >= 0.5 * rep.mean_by_step.front());
  CHECK(rep.mean_by_step.back() > 1e-4);
  // sanity: matching the bracket to the shifted field restores order-2 decay
  SweepOptions both = opts;
  both.alpha_shift_bracket = 0.1;
  const ResidualReport ok = identity_residual_sweep(params, P, 0.1, 0.9, both);
  CHECK(ok.mean_by_step.back() < 0.25 * ok.mean_by_step.front());
}
