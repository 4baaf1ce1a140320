#include "patholab/identity.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "patholab/coefficients.hpp"
#include "patholab/parallel.hpp"

namespace patholab {

namespace {

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

VecN grad_u(const VecN& x, const FamilyParams& params, const HarmonicPolynomial& P) {
  const double r = x.norm();
  const RadialProfile prof = eval_profile(params, r);
  return prof.v * P.grad(x) + P.eval(x) * prof.dv / r * x;
}

double div_A_grad_analytic(const VecN& x, const FamilyParams& params,
                           const HarmonicPolynomial& P, double alpha_shift) {
  const double r = x.norm();
  if (r == 0.0) throw std::domain_error("div_A_grad_analytic: x = 0");
  const RadialProfile prof = eval_profile(params, r);
  const int n = params.n, k = P.k;
  const double alpha = prof.alpha + alpha_shift;
  const double bracket = prof.ddv + (n + 2.0 * k - 1.0) * prof.dv / r -
                         k * (n + k - 2.0) * alpha * prof.v / (r * r);
  return P.eval(x) * bracket;
}

double identity_term_scale(const VecN& x, const FamilyParams& params,
                           const HarmonicPolynomial& P, double alpha_shift) {
  const double r = x.norm();
  const RadialProfile prof = eval_profile(params, r);
  const int n = params.n, k = P.k;
  const double alpha = prof.alpha + alpha_shift;
  const double scale = std::abs(prof.ddv) + (n + 2.0 * k - 1.0) * std::abs(prof.dv) / r +
                       std::abs(k * (n + k - 2.0) * alpha * prof.v) / (r * r) +
                       std::abs(prof.v) / (r * r);
  return std::abs(P.eval(x)) * scale + std::abs(prof.v);
}

double div_A_grad_numeric(const VecN& x, const FamilyParams& params,
                          const HarmonicPolynomial& P, double h, double alpha_shift) {
  const int n = params.n;
  const double r = x.norm();
  const double reach = (1.0 + std::sqrt(static_cast<double>(n))) * h;
  if (r - reach <= 0.0 || r + reach >= 1.0)
    throw std::domain_error("div_A_grad_numeric: stencil leaves B(0,1) \\ {0}");

  auto flux = [&](const VecN& y) -> VecN {
    const double ry = y.norm();
    const double alpha = alpha_at(params, ry) + alpha_shift;
    const VecN g = grad_u(y, params, P);
    // A g = g + alpha (g - (g.yhat) yhat)
    const VecN yhat = y / ry;
    return g + alpha * (g - g.dot(yhat) * yhat);
  };

  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    VecN xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    div += (flux(xp)(i) - flux(xm)(i)) / (2.0 * h);
  }
  return div;
}

ResidualReport identity_residual_sweep(const FamilyParams& params, const HarmonicPolynomial& P,
                                       double r_min, double r_max, const SweepOptions& opts) {
  if (!(0.0 < r_min && r_min < r_max && r_max < 1.0))
    throw std::domain_error("identity_residual_sweep: need 0 < r_min < r_max < 1");
  ResidualReport rep;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.steps = opts.steps;

  // Quasi-uniform in log|x| so small radii are represented.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<VecN> pts;
  pts.reserve(opts.samples);
  for (int s = 0; s < opts.samples; ++s) {
    const double r = std::exp(std::log(r_min) + (std::log(r_max) - std::log(r_min)) * unif(rng));
    VecN dir(params.n);
    for (int i = 0; i < params.n; ++i) dir(i) = gauss(rng);
    pts.push_back(VecN(r * dir / dir.norm()));
  }

  struct PointResult {
    std::vector<double> resid;  // per step
    double bracket_rel = 0.0;
    bool skipped = false;
  };
  std::vector<PointResult> results(pts.size());
  const std::size_t nsteps = opts.steps.size();

  parallel_for(pts.size(), [&](std::size_t i) {
    PointResult& pr = results[i];
    pr.resid.assign(nsteps, 0.0);
    const VecN& x = pts[i];
    try {
      const double analytic = div_A_grad_analytic(x, params, P, opts.alpha_shift_bracket);
      const double scale = identity_term_scale(x, params, P, opts.alpha_shift_bracket);
      pr.bracket_rel = std::abs(analytic) / scale;
      for (std::size_t s = 0; s < nsteps; ++s) {
        const double h = std::max(1e-5, opts.steps[s] * x.norm());
        const double numeric = div_A_grad_numeric(x, params, P, h, opts.alpha_shift_field);
        pr.resid[s] = std::abs(analytic - numeric);
      }
    } catch (const std::domain_error&) {
      pr.skipped = true;
    }
  });

  std::vector<double> mean_by_step(nsteps, 0.0), sup_by_step(nsteps, 0.0);
  int used = 0;
  for (const auto& pr : results) {
    if (pr.skipped) {
      ++rep.skipped;
      continue;
    }
    ++used;
    rep.bracket_sup_rel = std::max(rep.bracket_sup_rel, pr.bracket_rel);
    for (std::size_t s = 0; s < nsteps; ++s) {
      mean_by_step[s] += pr.resid[s];
      sup_by_step[s] = std::max(sup_by_step[s], pr.resid[s]);
    }
  }
  rep.sample_count = used;
  if (used > 0)
    for (auto& m : mean_by_step) m /= used;
  rep.mean_by_step = mean_by_step;
  rep.sup_by_step = sup_by_step;
  rep.convergence_order = fit_loglog_slope(opts.steps, mean_by_step);
  const std::size_t last = nsteps - 1;
  rep.fd_step = opts.steps[last];
  rep.sup_residual = sup_by_step[last];
  rep.mean_residual = mean_by_step[last];
  return rep;
}

}  // namespace patholab
