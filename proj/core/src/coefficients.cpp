#include "patholab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "patholab/quadrature.hpp"

namespace patholab {

CoefficientMatrix assemble_A(const VecN& x, double alpha_at_r) {
  const int n = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) throw std::domain_error("assemble_A: x = 0 (use continuity_extension)");
  CoefficientMatrix out;
  out.n = n;
  out.x = x;
  out.entries = MatN::Identity(n, n) +
                alpha_at_r * (MatN::Identity(n, n) - (x * x.transpose()) / r2);
  // Symmetrize exactly; the outer product is symmetric but rounding can leave
  // last-bit asymmetry in the scaled sum.
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

CoefficientMatrix assemble_A_kappa(const VecN& x, double kappa_at_r) {
  const int n = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  if (r2 == 0.0) throw std::domain_error("assemble_A_kappa: x = 0");
  CoefficientMatrix out;
  out.n = n;
  out.x = x;
  out.entries = (1.0 + kappa_at_r) * MatN::Identity(n, n);
  out.entries(0, 0) -= kappa_at_r * n * x(0) * x(0) / r2;
  return out;
}

bool coefficient_continuous_at_origin(const FamilyParams& params) {
  if (params.family == Family::Power)
    return params.a * (params.a + params.n) == 0.0;
  return true;  // alpha(0+) = 0 for every log family
}

std::optional<MatN> continuity_extension(const FamilyParams& params) {
  if (!coefficient_continuous_at_origin(params)) return std::nullopt;
  return MatN::Identity(params.n, params.n);
}

EllipticityBounds ellipticity_bounds(const FamilyParams& params, double r_lo, double r_hi,
                                     int grid) {
  EllipticityBounds out;
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  double lo = alpha_at(params, r_lo);
  double hi = lo;
  // Log-uniform scan; the log families vary on the log(r) scale.
  const double s0 = std::log(r_lo), s1 = std::log(r_hi);
  for (int i = 1; i < grid; ++i) {
    const double a = alpha_at(params, std::exp(s0 + (s1 - s0) * i / (grid - 1.0)));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  // Closed-form endpoints over the full interval (0,1) when the scan covers it.
  if (r_lo <= 1e-8 && r_hi >= 1.0 - 1e-8) {
    lo = std::min(lo, inf_alpha(params));
    hi = std::max(hi, sup_alpha(params));
  }
  out.inf_alpha = lo;
  out.sup_alpha = hi;
  out.lambda = std::min(1.0, 1.0 + lo);
  out.Lambda = std::max(1.0, 1.0 + hi);
  out.elliptic = out.lambda > 0.0;
  return out;
}

namespace {

VecN radial_point(int n, double r, int axis) {
  VecN x = VecN::Zero(n);
  x(axis) = r;
  return x;
}

double pair_diff_norm(const FamilyParams& params, const VecN& x, const VecN& y) {
  const MatN ax = assemble_A(x, alpha_at(params, x.norm())).entries;
  const MatN ay = assemble_A(y, alpha_at(params, y.norm())).entries;
  return spectral_norm_symmetric(MatN(ax - ay));
}

}  // namespace

ModulusSample modulus_of_continuity(const FamilyParams& params, double t, int sample_budget,
                                    std::uint64_t seed) {
  if (!(t > 0.0) || t > 1.0) throw std::domain_error("modulus scale t must be in (0,1]");
  const int n = params.n;
  double omega = 0.0;

  // Same-ray pairs (eps, t') reaching toward the origin, where alpha varies
  // fastest; |x - y| = t' - eps <= t.
  for (int k = 1; k <= 24; ++k) {
    const double eps = t * std::pow(2.0, -k);
    const VecN x = radial_point(n, eps + (t - eps) * 0.999, 0);
    const VecN y = radial_point(n, eps, 0);
    omega = std::max(omega, pair_diff_norm(params, x, y));
  }
  // Orthogonal directions at radius t/sqrt(2): |x - y| = t exactly, and the
  // angular projector change is maximal there.
  {
    const double rho = t / std::sqrt(2.0);
    if (rho < 1.0) {
      const VecN x = radial_point(n, rho, 0);
      const VecN y = radial_point(n, rho, 1);
      omega = std::max(omega, pair_diff_norm(params, x, y));
    }
  }
  // Random pairs: y = x + t*u with both points inside the unit ball.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < sample_budget; ++s) {
    VecN x(n), u(n);
    for (int i = 0; i < n; ++i) {
      x(i) = gauss(rng);
      u(i) = gauss(rng);
    }
    const double rx = std::exp(std::log(1e-8) * unif(rng));  // log-uniform radius in (1e-8, 1)
    x *= 0.999 * rx / x.norm();
    u *= t * unif(rng) / u.norm();
    VecN y = x + u;
    const double ry = y.norm();
    if (ry == 0.0 || ry >= 1.0) continue;
    omega = std::max(omega, pair_diff_norm(params, x, y));
  }

  ModulusSample out;
  out.t = t;
  out.omega = omega;
  out.alpha_abs = std::abs(alpha_at(params, std::min(t, 1.0 - 1e-12)));
  out.c_ratio = out.alpha_abs > 0.0 ? omega / out.alpha_abs : 0.0;
  return out;
}

ModulusModel fit_modulus_model(const FamilyParams& params, int sample_budget,
                               std::uint64_t seed) {
  ModulusModel model;
  model.discontinuous_at_origin = !coefficient_continuous_at_origin(params);
  const double scales[] = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  double envelope = 0.0;
  for (double t : scales) {
    ModulusSample s = modulus_of_continuity(params, t, sample_budget, seed);
    // Nondecreasing-in-t envelope, as a modulus must be.
    envelope = std::max(envelope, s.omega);
    s.omega = envelope;
    s.c_ratio = s.alpha_abs > 0.0 ? s.omega / s.alpha_abs : 0.0;
    model.samples.push_back(s);
  }
  if (params.family == Family::Power) {
    // Constant model: the angular projector keeps |A(x)-A(y)| ~ |alpha| at
    // every scale, so A has no continuous extension unless alpha = 0.
    double c = 0.0;
    for (const auto& s : model.samples) c = std::max(c, s.omega);
    model.c_fit = c;
    return model;
  }
  // Least squares of omega(t) against |alpha(t)|.
  double num = 0.0, den = 0.0;
  for (const auto& s : model.samples) {
    num += s.omega * s.alpha_abs;
    den += s.alpha_abs * s.alpha_abs;
  }
  model.c_fit = den > 0.0 ? num / den : 0.0;
  return model;
}

DiniPartial dini_partial(const FamilyParams& params, const ModulusModel& model, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::domain_error("dini_partial: delta must be in (0,1)");
  DiniPartial out;
  out.delta = delta;
  out.loglog_term = 0.0;
  if (params.family == Family::Power) {
    // omega_hat constant: integral = c * log(1/delta).
    out.value = model.c_fit * std::log(1.0 / delta);
    return out;
  }
  const double r0 = params.r0;
  out.loglog_term = std::log(std::log(r0 / delta)) - std::log(std::log(r0));
  // integral of c |alpha(s)| / s over [delta, 1]; substitute s = e^{-w} so the
  // integrand is smooth and slowly varying.
  const double c = model.c_fit;
  const FamilyParams p = params;
  auto integrand = [&p, c](double w) { return c * std::abs(alpha_at(p, std::exp(-w))); };
  out.value = integrate_adaptive(integrand, 0.0, std::log(1.0 / delta), 1e-11).value;
  return out;
}

}  // namespace patholab
