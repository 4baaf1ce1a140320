#include "patholab/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "patholab/quadrature.hpp"

namespace patholab {

BumpTestFunction::BumpTestFunction(const VecN& c, double R) : center(c), radius(R) {
  if (!(R > 0.0)) throw std::invalid_argument("bump radius must be positive");
  if (c.norm() + R >= 1.0)
    throw std::invalid_argument("bump support must lie strictly inside B(0,1)");
}

double BumpTestFunction::value(const VecN& x) const {
  const double q = (x - center).squaredNorm() / (radius * radius);
  if (q >= 1.0) return 0.0;
  const double w = 1.0 - q;
  return w * w * w;
}

VecN BumpTestFunction::gradient(const VecN& x) const {
  const VecN d = x - center;
  const double q = d.squaredNorm() / (radius * radius);
  if (q >= 1.0) return VecN(VecN::Zero(center.size()));
  const double w = 1.0 - q;
  return VecN(-6.0 * w * w / (radius * radius) * d);
}

double BumpTestFunction::lipschitz() const { return 96.0 / (25.0 * std::sqrt(5.0) * radius); }

bool BumpTestFunction::on_axis() const {
  for (int i = 1; i < center.size(); ++i)
    if (center(i) != 0.0) return false;
  return true;
}

namespace {

constexpr double kTiny = 1e-290;

// ---- on-axis reduced integrands -------------------------------------------
//
// With c = c1 e1 everything depends on (r, th) with t = cos th = x1/|x|:
//   grad(phi).(A grad u) = s(d) [ (x1-c1) (1+alpha) v + (r - c1 t) x1 (v' - alpha v / r) ]
// where d = |x - c|, s(d) = -6 (1-d^2/R^2)^2 / R^2 and x1 = r t.

struct AxisVolumeIntegrand {
  const BumpTestFunction* phi;
  const FamilyParams* params;
  double c1;

  double operator()(double r, double t) const {
    const double R = phi->radius;
    const double d2 = r * r - 2.0 * r * c1 * t + c1 * c1;
    const double q = d2 / (R * R);
    if (q >= 1.0) return 0.0;
    const double w = 1.0 - q;
    const double s = -6.0 * w * w / (R * R);
    const RadialProfile p = eval_profile(*params, r);
    const double x1 = r * t;
    const double radial_part = x1 * (p.dv - p.alpha * p.v / r);
    return s * ((x1 - c1) * (1.0 + p.alpha) * p.v + (r - c1 * t) * radial_part);
  }
};

double phi_axis_value(const BumpTestFunction& phi, double r, double t, double c1) {
  const double R = phi.radius;
  const double q = (r * r - 2.0 * r * c1 * t + c1 * c1) / (R * R);
  if (q >= 1.0) return 0.0;
  const double w = 1.0 - q;
  return w * w * w;
}

// Polar arc [lo, hi] where the sphere of radius r meets the bump support.
// For c1 > 0 the support sits around th = 0, for c1 < 0 around th = pi; the
// boundary angle satisfies cos(th) = (r^2 + c1^2 - R^2) / (2 r c1).
struct PolarArc {
  double lo, hi;
};

PolarArc bump_arc(double r, double c1, double R) {
  if (c1 == 0.0) return r <= R ? PolarArc{0.0, M_PI} : PolarArc{0.0, 0.0};
  const double u = (r * r + c1 * c1 - R * R) / (2.0 * r * c1);
  if (c1 > 0.0) {
    if (u >= 1.0) return {0.0, 0.0};
    if (u <= -1.0) return {0.0, M_PI};
    return {0.0, std::acos(u)};
  }
  // c1 < 0: inside iff cos(th) <= u
  if (u <= -1.0) return {0.0, 0.0};
  if (u >= 1.0) return {0.0, M_PI};
  return {std::acos(u), M_PI};
}

// Angular integral  |S^{n-2}| int_{lo}^{hi} f(r, cos th) sin(th)^{n-2} dth,
// Gauss on the support arc: the cut keeps the integrand analytic.
template <typename F>
double angular_reduced(const F& f, int n, double r, double th_lo, double th_hi, int m) {
  if (th_hi <= th_lo) return 0.0;
  const GaussRule& g = gauss_legendre(m);
  const double half = 0.5 * (th_hi - th_lo), mid = 0.5 * (th_hi + th_lo);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double th = mid + half * g.nodes[i];
    sum += g.weights[i] * f(r, std::cos(th)) * std::pow(std::sin(th), n - 2);
  }
  return surface_area_unit_sphere(n - 1) * half * sum;
}

// ---- generic (off-axis) integrand ------------------------------------------

struct GenericVolumeIntegrand {
  const BumpTestFunction* phi;
  const FamilyParams* params;

  double operator()(const VecN& x) const {
    const VecN g = phi->gradient(x);
    if (g.isZero(0.0)) return 0.0;
    const double r = x.norm();
    const RadialProfile p = eval_profile(*params, r);
    // A grad u = (1+alpha) v e1 + x1 (v' - alpha v/r) xhat
    const double x1 = x(0);
    double dot = (1.0 + p.alpha) * p.v * g(0);
    dot += x1 * (p.dv - p.alpha * p.v / r) * (g.dot(x) / r);
    return dot;
  }
};

struct Panel {
  double s0, s1;
  double value, err;
  double mass;  // integral of the absolute angular mass: the cancellation-free scale
};

// Radial panel in s = log r:  int e^{n s} G(e^s) ds, where G(r) is the
// angular integral at radius r and G_abs its absolute-value counterpart.
template <typename AngularFn, typename AbsFn>
Panel eval_panel(double s0, double s1, int n, int radial_m, const AngularFn& G,
                 const AbsFn& G_abs) {
  auto shell = [&](double s) { return std::exp(n * s) * G(std::exp(s)); };
  Panel p{s0, s1, 0.0, 0.0, 0.0};
  const double coarse = gauss_integrate(shell, s0, s1, radial_m);
  const double fine = gauss_integrate(shell, s0, s1, radial_m + 8);
  p.value = fine;
  p.err = std::abs(fine - coarse);
  p.mass = gauss_integrate([&](double s) { return std::exp(n * s) * G_abs(std::exp(s)); },
                           s0, s1, radial_m);
  return p;
}

template <typename AngularFn, typename AbsFn>
QuadValue adaptive_radial(std::vector<double> breaks, int n, const QuadOptions& opts,
                          const AngularFn& G, const AbsFn& G_abs) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               breaks.end());
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    panels.push_back(eval_panel(breaks[i], breaks[i + 1], n, opts.radial_m, G, G_abs));

  for (;;) {
    double total = 0.0, err = 0.0, mass = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].err;
      mass += panels[i].mass;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    // Cancellation (between shells, or angular for odd integrands) can leave
    // |total| far below the integrand mass; the mass-based floors keep the
    // target reachable and the estimate honest at the roundoff level.
    const double tol = std::max({opts.rel_tol * std::abs(total),
                                 opts.rel_tol * 0.01 * mass, 1e-15 * mass, 1e-300});
    if (err <= tol || panels.empty())
      return {total, err, static_cast<int>(panels.size())};
    if (static_cast<int>(panels.size()) >= opts.max_panels) {
      if (err > 100.0 * tol)
        throw QuadratureError("annulus_integral: nested-rule discrepancy above tolerance");
      return {total, err, static_cast<int>(panels.size())};
    }
    Panel w = panels[worst];
    panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(worst));
    const double mid = 0.5 * (w.s0 + w.s1);
    panels.push_back(eval_panel(w.s0, mid, n, opts.radial_m, G, G_abs));
    panels.push_back(eval_panel(mid, w.s1, n, opts.radial_m, G, G_abs));
  }
}

}  // namespace

QuadValue annulus_integral(const BumpTestFunction& phi, const FamilyParams& params, double rho,
                           const QuadOptions& opts) {
  const int n = params.n;
  if (phi.dim() != n) throw std::invalid_argument("bump dimension mismatch");
  if (!(rho > 0.0) || !(rho < 1.0)) throw std::domain_error("rho must be in (0,1)");
  const double c1 = phi.center(0);
  const double cnorm = phi.center.norm();
  const double outer = std::min(cnorm + phi.radius, 1.0 - 1e-12);
  if (rho >= outer) return {0.0, 0.0, 0};

  // Breakpoints: dyadic ladder from rho, plus the bump-boundary radii where
  // the angular cut enters/leaves the sphere.
  std::vector<double> breaks{std::log(rho), std::log(outer)};
  for (double r = 2.0 * rho; r < outer; r *= 2.0) breaks.push_back(std::log(r));
  const double band_lo = std::abs(phi.radius - cnorm);
  if (band_lo > rho && band_lo < outer) breaks.push_back(std::log(band_lo));

  if (phi.on_axis()) {
    AxisVolumeIntegrand f{&phi, &params, c1};
    auto G = [&](double r) {
      const PolarArc arc = bump_arc(r, c1, phi.radius);
      return angular_reduced(f, n, r, arc.lo, arc.hi, opts.theta_m);
    };
    auto G_abs = [&](double r) {
      const PolarArc arc = bump_arc(r, c1, phi.radius);
      auto fa = [&f](double rr, double t) { return std::abs(f(rr, t)); };
      return angular_reduced(fa, n, r, arc.lo, arc.hi, opts.theta_m);
    };
    return adaptive_radial(breaks, n, opts, G, G_abs);
  }

  if (n > 3)
    throw std::invalid_argument("off-axis bumps are supported for n in {2,3} only");
  GenericVolumeIntegrand f{&phi, &params};
  const SphereRule rule = sphere_rule(n, n == 2 ? 192 : 64);
  auto G = [&](double r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * f(VecN(r * rule.nodes[i]));
    return sum;
  };
  auto G_abs = [&](double r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * std::abs(f(VecN(r * rule.nodes[i])));
    return sum;
  };
  return adaptive_radial(breaks, n, opts, G, G_abs);
}

QuadValue boundary_term_profile(const BumpTestFunction& phi, int n, const RadialValueFn& vf,
                                double rho, const QuadOptions& opts) {
  if (!(rho > 0.0) || !(rho < 1.0)) throw std::domain_error("rho must be in (0,1)");
  const auto [v, dv] = vf(rho);
  const double K = v / rho + dv;
  const double phi0 = phi.value(VecN(VecN::Zero(n)));

  double surf = 0.0, err = 0.0;
  if (phi.on_axis()) {
    const double c1 = phi.center(0);
    auto f = [&](double r, double t) { return (phi_axis_value(phi, r, t, c1) - phi0) * t; };
    // integrand is analytic on each side of the bump-boundary angle
    const PolarArc cut = bump_arc(rho, c1, phi.radius);
    const double th_cut = c1 >= 0.0 ? cut.hi : cut.lo;
    auto arc = [&](double a, double b, int m) {
      if (b <= a) return 0.0;
      const GaussRule& g = gauss_legendre(m);
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        const double th = mid + half * g.nodes[i];
        sum += g.weights[i] * f(rho, std::cos(th)) * std::pow(std::sin(th), n - 2);
      }
      return surface_area_unit_sphere(n - 1) * half * sum;
    };
    const double coarse = arc(0.0, th_cut, opts.theta_m) + arc(th_cut, M_PI, opts.theta_m);
    const double fine =
        arc(0.0, th_cut, opts.theta_m + 12) + arc(th_cut, M_PI, opts.theta_m + 12);
    surf = fine;
    err = std::abs(fine - coarse);
  } else {
    if (n > 3) throw std::invalid_argument("off-axis bumps need n in {2,3}");
    auto eval = [&](int res) {
      const SphereRule rule = sphere_rule(n, res);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * (phi.value(VecN(rho * rule.nodes[i])) - phi0) *
               rule.nodes[i](0);
      return sum;
    };
    const double coarse = eval(n == 2 ? 128 : 48);
    const double fine = eval(n == 2 ? 256 : 96);
    surf = fine;
    err = std::abs(fine - coarse);
  }
  const double rn = std::pow(rho, n);
  return {-rn * K * surf, std::abs(rn * K) * err, 1};
}

QuadValue boundary_term(const BumpTestFunction& phi, const FamilyParams& params, double rho,
                        const QuadOptions& opts) {
  auto vf = [&params](double r) {
    const RadialProfile p = eval_profile(params, r);
    return std::make_pair(p.v, p.dv);
  };
  return boundary_term_profile(phi, params.n, vf, rho, opts);
}

double bound_value(const FamilyParams& params, double rho) {
  const RadialProfile p = eval_profile(params, rho);
  return std::pow(rho, params.n) * (std::abs(p.v) + rho * std::abs(p.dv));
}

double boundary_bound_constant(const BumpTestFunction& phi, int n) {
  // int_{S^{n-1}} |omega_1| dsigma = 2 |S^{n-2}| / (n-1)
  return phi.lipschitz() * 2.0 * surface_area_unit_sphere(n - 1) / (n - 1.0);
}

AnnulusQuadratureResult ibp_check(const BumpTestFunction& phi, const FamilyParams& params,
                                  double rho, double rel_tol, const QuadOptions& opts) {
  AnnulusQuadratureResult out;
  out.rho = rho;
  const QuadValue vol = annulus_integral(phi, params, rho, opts);
  const QuadValue surf = boundary_term(phi, params, rho, opts);
  out.volume_integral = vol.value;
  out.boundary_term = surf.value;
  out.bound_value = bound_value(params, rho);
  out.quadrature_error_volume = vol.error_estimate;
  out.quadrature_error_surface = surf.error_estimate;
  const double scale = std::max({std::abs(vol.value), std::abs(surf.value), kTiny});
  out.rel_gap = std::abs(vol.value - surf.value) / scale;
  out.pass = std::abs(vol.value - surf.value) <=
             rel_tol * scale + vol.error_estimate + surf.error_estimate;
  return out;
}

namespace {

// W11 decay model rho^n (|v_b| + rho |v_b'|) with the exponent as the fit
// parameter (same r0 as params).
double w11_model_log(const FamilyParams& params, double rho, double b) {
  FamilyParams q = params;
  q.beta = b;
  const RadialProfile p = eval_profile(q, rho);
  return params.n * std::log(rho) + std::log(std::abs(p.v) + rho * std::abs(p.dv));
}

}  // namespace

DecayFit decay_fit(const BumpTestFunction& phi, const FamilyParams& params,
                   const std::vector<double>& rho_seq, const QuadOptions& opts) {
  DecayFit fit;
  std::vector<double> logm;
  for (double rho : rho_seq) {
    const QuadValue b = boundary_term(phi, params, rho, opts);
    const double mag = std::abs(b.value);
    if (mag < kTiny) {
      ++fit.underflow_skipped;
      continue;
    }
    fit.rho.push_back(rho);
    fit.term.push_back(mag);
    logm.push_back(std::log(bound_value(params, rho)));
  }
  if (fit.rho.size() < 4) {
    fit.degenerate = true;
    return fit;
  }
  const std::size_t m = fit.rho.size();

  // Fit log C against the closed-form model log(rho^n (|v| + rho |v'|)).
  double mean_gap = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean_gap += std::log(fit.term[i]) - logm[i];
  mean_gap /= m;
  fit.C_hat = std::exp(mean_gap);
  fit.ratio_lo = std::numeric_limits<double>::infinity();
  fit.ratio_hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ratio = fit.term[i] / (fit.C_hat * std::exp(logm[i]));
    fit.ratio_lo = std::min(fit.ratio_lo, ratio);
    fit.ratio_hi = std::max(fit.ratio_hi, ratio);
  }
  fit.within_factor2 = fit.ratio_lo >= 0.5 && fit.ratio_hi <= 2.0;

  // Order-of-magnitude decay along the sequence.
  bool monotone = true;
  for (std::size_t i = 1; i < m; ++i)
    if (std::log10(fit.term[i]) > std::log10(fit.term[i - 1]) + 0.2) monotone = false;
  fit.tends_to_zero = monotone && fit.term.back() < fit.term.front() / 3.0;

  if (params.family == Family::W11LogPow) {
    // One-parameter scan for the log-power exponent within the model family.
    auto sse = [&](double b) {
      double gap = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        gap += std::log(fit.term[i]) - w11_model_log(params, fit.rho[i], b);
      gap /= m;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = std::log(fit.term[i]) - w11_model_log(params, fit.rho[i], b) - gap;
        s += r * r;
      }
      return s;
    };
    double best = 0.25, best_s = sse(best);
    for (double b = 0.3; b <= 6.0; b += 0.05) {
      const double s = sse(b);
      if (s < best_s) {
        best_s = s;
        best = b;
      }
    }
    // golden-section refinement
    double lo = best - 0.05, hi = best + 0.05;
    for (int it = 0; it < 60; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (sse(m1) < sse(m2))
        hi = m2;
      else
        lo = m1;
    }
    fit.beta_hat = 0.5 * (lo + hi);
  }
  if (params.family == Family::Power) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double lx = std::log(fit.rho[i]), ly = std::log(fit.term[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    fit.slope_hat = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return fit;
}

std::vector<double> default_rho_sequence(int k_min, int k_max) {
  std::vector<double> seq;
  for (int k = k_min; k <= k_max; ++k) seq.push_back(std::pow(2.0, -k));
  return seq;
}

}  // namespace patholab
