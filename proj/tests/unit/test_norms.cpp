#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "patholab/identity.hpp"
#include "patholab/norms.hpp"

using namespace patholab;

TEST_CASE("constant-gradient annulus partials equal annulus volumes") {
  // power a=0: u = x1, |grad u| = 1; L^p partial = annulus volume for any p
  const auto params = make_power(2, 0.0);
  for (int j : {1, 5, 20}) {
    const AnnulusRow row = annulus_functional(params, Functional::lp(2.0), j);
    const double vol = M_PI * (row.outer * row.outer - row.inner * row.inner);
    CHECK(row.partial == doctest::Approx(vol).epsilon(1e-12));
  }
}

TEST_CASE("reduced quadrature agrees with Monte Carlo within 3 standard errors") {
  for (int n : {2, 3}) {
    const FamilyParams fams[] = {make_power(n, -0.5), make_w11(n, 2.0),
                                 make_lipschitz_log(n), make_bmo_logsq(n)};
    for (const auto& params : fams) {
      for (int j : {1, 2, 3, 4, 5}) {
        const AnnulusRow row = annulus_functional(params, Functional::lp(1.0), j);
        auto f = [&](const VecN& x) {
          return grad_u(x, params, harmonic_by_id(n, "x1")).norm();
        };
        const oracles::McEstimate mc =
            oracles::mc_annulus(n, row.inner, row.outer, f, 200000,
                                1000 + 13 * j + n + static_cast<int>(params.family));
        INFO("n=" << n << " family=" << family_name(params.family) << " j=" << j);
        CHECK(std::abs(mc.value - row.partial) <= 3.0 * mc.std_error);
      }
    }
  }
}

TEST_CASE("power-family partials follow the exact geometric recurrence") {
  // partial_{j+1}/partial_j = 2^{-(n + a p)}
  for (int n : {2, 3}) {
    for (double a : {-0.5, -1.2}) {
      if (1.0 + a * (a + n) / (n - 1.0) <= 0.0) continue;  // keep it elliptic
      const auto params = make_power(n, a);
      for (double p : {1.0, 2.0}) {
        const double expected = std::pow(2.0, -(n + a * p));
        double prev = annulus_functional(params, Functional::lp(p), 3).partial;
        for (int j = 4; j <= 8; ++j) {
          const double cur = annulus_functional(params, Functional::lp(p), j).partial;
          CHECK(cur / prev == doctest::Approx(expected).epsilon(0.01));
          prev = cur;
        }
      }
    }
  }
}

TEST_CASE("w11 membership: L1 converges, L^p diverges, LlogL splits at beta=2") {
  const auto b15 = make_w11(2, 1.5);
  CHECK(classify(b15, Functional::lp(1.0)).verdict == DivergenceVerdict::Kind::Converges);
  CHECK(classify(b15, Functional::lp(1.01)).verdict == DivergenceVerdict::Kind::Diverges);
  CHECK(classify(b15, Functional::lp(1.05)).verdict == DivergenceVerdict::Kind::Diverges);
  CHECK(classify(b15, Functional::lp(2.0)).verdict == DivergenceVerdict::Kind::Diverges);
  CHECK(classify(b15, Functional::llogl()).verdict == DivergenceVerdict::Kind::Diverges);

  const auto b25 = make_w11(2, 2.5);
  CHECK(classify(b25, Functional::lp(1.0)).verdict == DivergenceVerdict::Kind::Converges);
  CHECK(classify(b25, Functional::llogl()).verdict == DivergenceVerdict::Kind::Converges);
  CHECK(classify(b25, Functional::lp(1.05)).verdict == DivergenceVerdict::Kind::Diverges);
}

TEST_CASE("verdicts are stable when the table deepens by 10 annuli") {
  const auto params = make_w11(2, 1.5);
  for (const Functional& f :
       {Functional::lp(1.0), Functional::lp(1.05), Functional::llogl()}) {
    CHECK(classify(params, f, 48).verdict == classify(params, f, 58).verdict);
  }
}

TEST_CASE("lipschitz-log: all L^p converge, sup grows linearly, exp splits at c=n") {
  const auto params = make_lipschitz_log(2);
  for (double p : {1.0, 1.5, 2.0, 4.0, 10.0})
    CHECK(classify(params, Functional::lp(p)).verdict ==
          DivergenceVerdict::Kind::Converges);

  // sup over annulus j is log(r0) + (j+1) log 2: slope log 2 in j
  std::vector<double> js, sups;
  for (int j = 1; j <= 20; ++j) {
    js.push_back(j);
    sups.push_back(sup_gradient(params, j).value);
    // closed form: max(|v|, |v + r v'|) at the inner radius
    const double L_inner = std::log(params.r0) + (j + 1) * std::log(2.0);
    CHECK(sups.back() == doctest::Approx(L_inner).epsilon(1e-12));
  }
  const oracles::LineFit fit = oracles::fit_line(js, sups);
  CHECK(fit.slope == doctest::Approx(std::log(2.0)).epsilon(1e-10));

  // John-Nirenberg consistency: exp(c|Du|) integrable iff c < n
  CHECK(classify(params, Functional::exp_c(0.1)).verdict ==
        DivergenceVerdict::Kind::Converges);
  CHECK(classify(params, Functional::exp_c(1.0)).verdict ==
        DivergenceVerdict::Kind::Converges);
  CHECK(classify(params, Functional::exp_c(10.0)).verdict ==
        DivergenceVerdict::Kind::Diverges);
}

TEST_CASE("bmo-logsq: exp(c|Du|) diverges for every c in the grid") {
  for (int n : {2, 3}) {
    const auto params = make_bmo_logsq(n);
    for (double c : {0.1, 1.0, 10.0}) {
      const DivergenceVerdict v = classify(params, Functional::exp_c(c));
      INFO("n=" << n << " c=" << c);
      CHECK(v.verdict == DivergenceVerdict::Kind::Diverges);
    }
    // and all L^p still converge
    for (double p : {1.0, 2.0, 10.0})
      CHECK(classify(params, Functional::lp(p)).verdict ==
            DivergenceVerdict::Kind::Converges);
  }
}

TEST_CASE("sup_gradient: constant field and quadratic growth") {
  const auto flat = make_power(2, 0.0);
  for (int j : {1, 7, 15}) CHECK(sup_gradient(flat, j).value == doctest::Approx(1.0));

  const auto bmo = make_bmo_logsq(2);
  // sup ~ L^2 at the inner radius: quadratic in j
  const double s10 = sup_gradient(bmo, 10).value;
  const double L10 = std::log(bmo.r0) + 11 * std::log(2.0);
  CHECK(s10 == doctest::Approx(L10 * L10).epsilon(1e-10));
}

TEST_CASE("mean oscillation: constant gradient gives zero") {
  const auto params = make_power(2, 0.0);
  const OscillationResult osc =
      mean_oscillation(params, VecN(VecN::Zero(2)), 0.25);
  CHECK(std::abs(osc.value) <= 1e-12);
}

TEST_CASE("mean oscillation: scale-invariant for lipschitz-log, growing for bmo") {
  for (int n : {2, 3}) {
    const auto lip = make_lipschitz_log(n);
    std::vector<double> oscs;
    for (int j = 1; j <= 20; ++j)
      oscs.push_back(mean_oscillation(lip, VecN(VecN::Zero(n)), std::pow(2.0, -j)).value);
    double lo = oscs[0], hi = oscs[0];
    for (double o : oscs) {
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    INFO("n=" << n << " lo=" << lo << " hi=" << hi);
    CHECK(hi / lo <= 1.01);  // exactly scale-invariant up to quadrature error

    const auto bmo = make_bmo_logsq(n);
    std::vector<double> js, bosc;
    for (int j = 1; j <= 20; ++j) {
      js.push_back(j);
      bosc.push_back(mean_oscillation(bmo, VecN(VecN::Zero(n)), std::pow(2.0, -j)).value);
    }
    const oracles::LineFit fit = oracles::fit_line(js, bosc);
    CHECK(fit.slope > 0.0);
    CHECK(fit.r2 >= 0.95);
    CHECK(bosc.back() / bosc.front() >= 2.0);
  }
}

TEST_CASE("off-center oscillation: smooth region gives small values") {
  const auto params = make_lipschitz_log(2);
  VecN c(2);
  c << 0.25, 0.0;
  const OscillationResult osc = mean_oscillation(params, c, 0.1);
  CHECK(osc.value > 0.0);
  CHECK(osc.value < 1.0);
  // the ball must avoid the origin and stay inside B(0,1/2)
  CHECK_THROWS_AS(mean_oscillation(params, c, 0.3), std::domain_error);
  VecN far(2);
  far << 0.45, 0.1;
  CHECK_THROWS_AS(mean_oscillation(params, far, 0.1), std::domain_error);
}

TEST_CASE("membership matrix matches the propositions' pattern") {
  MembershipOptions opts;

  const auto rows15 = membership_matrix(make_w11(2, 1.5), opts);
  for (const auto& row : rows15) {
    INFO(row.label << " -> " << row.verdict << " expected " << row.expected);
    CHECK(row.match);
    CHECK(row.verdict != "INCONCLUSIVE");
  }

  const auto rows_lip = membership_matrix(make_lipschitz_log(2), opts);
  for (const auto& row : rows_lip) {
    INFO(row.label << " -> " << row.verdict << " expected " << row.expected);
    CHECK(row.match);
    CHECK(row.verdict != "INCONCLUSIVE");
  }

  const auto rows_bmo = membership_matrix(make_bmo_logsq(2), opts);
  for (const auto& row : rows_bmo) {
    INFO(row.label << " -> " << row.verdict << " expected " << row.expected);
    CHECK(row.match);
    CHECK(row.verdict != "INCONCLUSIVE");
  }
}

TEST_CASE("hessian functional: lipschitz-log second derivatives in L^p iff p < n") {
  for (int n : {2, 3}) {
    const auto params = make_lipschitz_log(n);
    CHECK(classify(params, Functional::hess_lp(n - 0.5)).verdict ==
          DivergenceVerdict::Kind::Converges);
    CHECK(classify(params, Functional::hess_lp(n + 0.5)).verdict ==
          DivergenceVerdict::Kind::Diverges);
  }
}

TEST_CASE("shell_integral_grad_p matches the annulus table for closed-form profiles") {
  const auto params = make_w11(2, 2.0);
  auto vf = [&](double r) {
    const RadialProfile p = eval_profile(params, r);
    return std::make_pair(p.v, p.dv);
  };
  const AnnulusRow row = annulus_functional(params, Functional::lp(1.0), 3);
  const double direct = shell_integral_grad_p(2, vf, 1.0, row.inner, row.outer);
  CHECK(direct == doctest::Approx(row.partial).epsilon(1e-10));
}
