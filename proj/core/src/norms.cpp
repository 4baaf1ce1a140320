#include "patholab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "patholab/quadrature.hpp"

namespace patholab {

namespace {

constexpr double kLogInf = 709.0;  // exp overflow threshold
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log_v(r), d1 = r v'/v, d2 = r^2 v''/v -- exact and overflow-free at any
// radius in (0,1).
struct LogRadial {
  double log_v, d1, d2;
};

// Parametrized by s = log r so that annuli far beyond the underflow radius
// 2^{-1074} still evaluate exactly.
LogRadial log_radial_s(const FamilyParams& params, double log_r) {
  switch (params.family) {
    case Family::Power:
      return {params.a * log_r, params.a, params.a * (params.a - 1.0)};
    case Family::W11LogPow: {
      const double b = params.beta, n = params.n;
      const double L = std::log(params.r0) - log_r;
      return {-n * log_r - b * std::log(L), -n + b / L,
              n * (n + 1.0) - b * (2.0 * n + 1.0) / L + b * (b + 1.0) / (L * L)};
    }
    case Family::LipschitzLog: {
      const double L = std::log(params.r0) - log_r;
      return {std::log(L), -1.0 / L, 1.0 / L};
    }
    case Family::BmoLogSq: {
      const double L = std::log(params.r0) - log_r;
      return {2.0 * std::log(L), -2.0 / L, (2.0 + 2.0 * L) / (L * L)};
    }
  }
  throw std::logic_error("unreachable");
}

// log |grad u| at (r, t): log_v + 0.5 log( (1-t^2) + (1+d1)^2 t^2 ).
double log_grad_norm(const LogRadial& lr, double t) {
  const double t2 = t * t;
  const double G = (1.0 - t2) + (1.0 + lr.d1) * (1.0 + lr.d1) * t2;
  return lr.log_v + 0.5 * std::log(std::max(G, 1e-300));
}

// log |D^2 u|_F at (r, t): log_v - log r + 0.5 log( t^2 (2 d1 + d2)^2 +
// (2(1-t^2) + (n-1) t^2) d1^2 ).
double log_hess_norm(const FamilyParams& params, const LogRadial& lr, double log_r, double t) {
  const double t2 = t * t;
  const double mix = 2.0 * lr.d1 + lr.d2;
  const double H = t2 * mix * mix + (2.0 * (1.0 - t2) + (params.n - 1.0) * t2) * lr.d1 * lr.d1;
  return lr.log_v - log_r + 0.5 * std::log(std::max(H, 1e-300));
}

// log of the functional applied at a point with log g = log of the field norm.
double log_functional(const Functional& f, double log_g) {
  switch (f.kind) {
    case Functional::Kind::Lp:
    case Functional::Kind::HessLp:
      return f.param * log_g;
    case Functional::Kind::LLogL: {
      // g log(e + g); log(e+g) ~ log g for large g.
      const double log_e_plus_g =
          log_g > 34.0 ? log_g : std::log(M_E + std::exp(log_g));
      return log_g + std::log(log_e_plus_g);
    }
    case Functional::Kind::ExpC:
      return f.param * std::exp(std::min(log_g, kLogInf));
  }
  return kNegInf;
}

double log_sum_exp(const std::vector<double>& terms) {
  double m = kNegInf;
  for (double t : terms) m = std::max(m, t);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

struct LinFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinFit f;
  const std::size_t m = x.size();
  if (m < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double den = m * sxx - sx * sx;
  if (den == 0.0) return f;
  f.slope = (m * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / m;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double fit = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

std::string Functional::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Lp:
      os << "L^" << param;
      break;
    case Kind::LLogL:
      os << "LlogL";
      break;
    case Kind::ExpC:
      os << "exp(" << param << "|Du|)";
      break;
    case Kind::HessLp:
      os << "D2-L^" << param;
      break;
  }
  return os.str();
}

AnnulusRow annulus_functional(const FamilyParams& params, const Functional& f, int j,
                              const NormQuadOptions& opts) {
  if (j < 0) throw std::domain_error("annulus index must be >= 0");
  AnnulusRow row;
  row.j = j;
  row.outer = std::pow(2.0, -j);
  row.inner = 0.5 * row.outer;
  const int n = params.n;

  const GaussRule& gr = gauss_legendre(opts.radial_m);
  const PolarRule pr = polar_rule(n, opts.theta_m);
  const double s1 = -j * std::log(2.0);
  const double s0 = s1 - std::log(2.0);
  const double half = 0.5 * (s1 - s0), mid = 0.5 * (s0 + s1);

  std::vector<double> terms;
  terms.reserve(gr.nodes.size() * pr.t.size());
  for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
    const double s = mid + half * gr.nodes[i];
    const LogRadial lr = log_radial_s(params, s);
    const double log_wr = std::log(half * gr.weights[i]) + n * s;
    for (std::size_t k = 0; k < pr.t.size(); ++k) {
      const double log_g = f.kind == Functional::Kind::HessLp
                               ? log_hess_norm(params, lr, s, pr.t[k])
                               : log_grad_norm(lr, pr.t[k]);
      terms.push_back(log_wr + std::log(pr.w[k]) + log_functional(f, log_g));
    }
  }
  row.log_partial = log_sum_exp(terms);
  row.overflow = row.log_partial > kLogInf;
  row.partial = row.overflow ? std::numeric_limits<double>::infinity()
                             : std::exp(row.log_partial);
  return row;
}

AnnulusTable build_annulus_table(const FamilyParams& params, const Functional& f, int J,
                                 const NormQuadOptions& opts) {
  AnnulusTable table;
  table.functional = f;
  table.rows.reserve(J);
  for (int j = 1; j <= J; ++j) table.rows.push_back(annulus_functional(params, f, j, opts));
  return table;
}

const char* verdict_name(DivergenceVerdict::Kind k) {
  switch (k) {
    case DivergenceVerdict::Kind::Converges: return "CONVERGES";
    case DivergenceVerdict::Kind::Diverges: return "DIVERGES";
    case DivergenceVerdict::Kind::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

// Abscissa for the log-power column: L_j = log r0 + (j + 1/2) log 2 for log
// families; the power family has no log column.
double tail_abscissa(const FamilyParams& params, int j) {
  if (params.family == Family::Power) return 0.0;
  return std::log(params.r0) + (j + 0.5) * std::log(2.0);
}

struct TailFit {
  double a = 0.0, b = 0.0, c = 0.0;  // log p_j ~ a + b j + c log L_j
  bool has_log_column = false;
};

// Fit the tail model on first differences: for consecutive annuli
//   delta_j = log p_{j+1} - log p_j = b + c * log(L_{j+1}/L_j),
// which separates the geometric factor e^b from the log-power drift without
// the near-collinearity of fitting {1, j, log L_j} directly.
TailFit fit_tail(const FamilyParams& params, const AnnulusTable& table, int window) {
  const int J = static_cast<int>(table.rows.size());
  const int w0 = std::max(0, J - window);
  const bool log_col = params.family != Family::Power;

  std::vector<double> d, x;
  for (int i = w0; i + 1 < J; ++i) {
    const AnnulusRow& lo = table.rows[i];
    const AnnulusRow& hi = table.rows[i + 1];
    if (lo.overflow || hi.overflow || !std::isfinite(lo.log_partial) ||
        !std::isfinite(hi.log_partial))
      continue;
    d.push_back(hi.log_partial - lo.log_partial);
    if (log_col)
      x.push_back(std::log(tail_abscissa(params, hi.j) / tail_abscissa(params, lo.j)));
  }
  TailFit fit;
  fit.has_log_column = log_col;
  if (d.size() < 4) return fit;
  if (log_col) {
    const LinFit lf = linear_fit(x, d);
    fit.b = lf.intercept;
    fit.c = lf.slope;
  } else {
    double mean = 0.0;
    for (double v : d) mean += v;
    fit.b = mean / d.size();
    fit.c = 0.0;
  }
  // anchor the intercept at the last finite row for extrapolation
  for (int i = J - 1; i >= 0; --i) {
    const AnnulusRow& row = table.rows[i];
    if (row.overflow || !std::isfinite(row.log_partial)) continue;
    fit.a = row.log_partial - fit.b * row.j -
            (log_col ? fit.c * std::log(tail_abscissa(params, row.j)) : 0.0);
    break;
  }
  return fit;
}

// Does the fitted model reach sum >= factor * first within a horizon?
bool model_sum_reaches(const FamilyParams& params, const TailFit& fit, int J, double current_sum,
                       double first, double factor) {
  if (!(first > 0.0) || !std::isfinite(first)) return true;
  double sum = current_sum;
  double log_term = 0.0;
  for (int j = J + 1; j < J + 2000000; ++j) {
    log_term = fit.a + fit.b * j +
               (fit.has_log_column ? fit.c * std::log(tail_abscissa(params, j)) : 0.0);
    if (log_term > kLogInf) return true;
    sum += std::exp(log_term);
    if (sum >= factor * first) return true;
    // Once terms decay geometrically the remaining tail is summable; bail out.
    if (fit.b < -1e-3 && j > J + 1000) return false;
  }
  return false;
}

// Cauchy condensation on the computed partials: extend the table in log space
// with a light quadrature and compare sums over doubling blocks [J 2^k, J 2^{k+1}).
// Block ratios tend to 2^{1-tau} for partials ~ L_j^{-tau}, so the harmonic
// boundary tau = 1 maps to ratio 1.
struct Condensation {
  double block_ratio;    // geometric mean of the last block ratios
  double tau;            // 1 - log2(ratio)
  double log_sum_deep;   // log of the accumulated sum over all blocks
  double tail_estimate;  // block-geometric tail when convergent
};

Condensation condense(const FamilyParams& params, const Functional& f, int J,
                      const AnnulusTable& base) {
  const NormQuadOptions cheap{12, 24};
  std::vector<double> block_logs;
  std::vector<double> all_logs;
  for (const auto& row : base.rows) all_logs.push_back(row.log_partial);

  int lo = J;
  const int doublings = 7;
  for (int k = 0; k < doublings; ++k) {
    std::vector<double> logs;
    for (int j = lo; j < 2 * lo; ++j) {
      const AnnulusRow row = annulus_functional(params, f, j, cheap);
      logs.push_back(row.log_partial);
      all_logs.push_back(row.log_partial);
    }
    block_logs.push_back(log_sum_exp(logs));
    lo *= 2;
  }
  Condensation out;
  double acc = 0.0;
  const int used = 3;
  for (int k = doublings - used; k < doublings; ++k)
    acc += block_logs[k] - block_logs[k - 1];
  const double log_ratio = acc / used;
  out.block_ratio = std::exp(log_ratio);
  out.tau = 1.0 - log_ratio / std::log(2.0);
  out.log_sum_deep = log_sum_exp(all_logs);
  out.tail_estimate = 0.0;
  if (out.block_ratio < 1.0)
    out.tail_estimate =
        std::exp(block_logs.back()) * out.block_ratio / (1.0 - out.block_ratio);
  return out;
}

}  // namespace

DivergenceVerdict classify(const FamilyParams& params, const Functional& f, int J,
                           const VerdictRules& rules, const NormQuadOptions& opts) {
  if (J < 40) throw std::invalid_argument("classify: J >= 40 required");
  DivergenceVerdict out;
  out.table = build_annulus_table(params, f, J, opts);
  out.overflow_evidence = false;
  out.tail_estimate = 0.0;

  const auto& rows = out.table.rows;
  out.first = rows.front().partial;
  out.sum = 0.0;
  for (const auto& r : rows) out.sum += r.partial;

  const int window = std::min(rules.window, J - 4);
  for (int i = J - window; i < J; ++i)
    if (rows[i].overflow) out.overflow_evidence = true;

  const TailFit fit = fit_tail(params, out.table, window);
  out.growth_factor = std::exp(fit.b);
  out.tau = -fit.c;

  if (out.overflow_evidence) {
    out.verdict = DivergenceVerdict::Kind::Diverges;
    out.note = "integrand exceeds representable range";
    return out;
  }

  const bool corroborated =
      out.sum >= rules.sum_factor * out.first ||
      model_sum_reaches(params, fit, J, out.sum, out.first, rules.sum_factor);

  if (fit.b >= rules.growth_eps) {
    if (corroborated) {
      out.verdict = DivergenceVerdict::Kind::Diverges;
      out.note = "geometric growth of annulus partials";
      return out;
    }
    out.verdict = DivergenceVerdict::Kind::Inconclusive;
    out.note = "growth factor >= 1 but partial sums below corroboration threshold";
    return out;
  }

  if (out.growth_factor <= rules.geo_ratio) {
    const double tail =
        rows.back().partial * out.growth_factor / (1.0 - out.growth_factor);
    out.tail_estimate = tail;
    if (tail <= rules.tail_frac * out.sum) {
      out.verdict = DivergenceVerdict::Kind::Converges;
      out.note = "geometric decay of annulus partials";
      return out;
    }
    out.verdict = DivergenceVerdict::Kind::Inconclusive;
    out.note = "geometric decay but tail above 1% of the accumulated sum";
    return out;
  }

  // Near-unit growth factor: decide by Cauchy condensation on dyadic blocks
  // of annuli.  Ratios above/below 1 (with a 2^{tau_margin} margin) separate
  // the harmonic-type divergent tails from the summable log-power tails.
  const Condensation cond = condense(params, f, J, out.table);
  out.tau = cond.tau;
  const double hi_gate = std::pow(2.0, rules.tau_margin);
  if (cond.block_ratio >= hi_gate) {
    const bool deep_corroborated =
        cond.log_sum_deep >= std::log(rules.sum_factor * out.first);
    if (corroborated || deep_corroborated) {
      out.verdict = DivergenceVerdict::Kind::Diverges;
      out.note = "condensation blocks do not decay (tail exponent <= 1)";
      return out;
    }
  }
  if (cond.block_ratio <= 1.0 / hi_gate) {
    out.tail_estimate = cond.tail_estimate;
    out.verdict = DivergenceVerdict::Kind::Converges;
    out.note = "condensation blocks decay geometrically (tail exponent > 1)";
    return out;
  }
  out.verdict = DivergenceVerdict::Kind::Inconclusive;
  out.note = "tail model inside the decision margin";
  return out;
}

SupGradient sup_gradient(const FamilyParams& params, int j) {
  if (j < 0) throw std::domain_error("annulus index must be >= 0");
  const double s1 = -j * std::log(2.0), s0 = s1 - std::log(2.0);
  double best = kNegInf;
  const int grid = 2049;
  for (int i = 0; i < grid; ++i) {
    const LogRadial lr = log_radial_s(params, s0 + (s1 - s0) * i / (grid - 1.0));
    // |grad u|^2 is linear in t^2: extremes at t = 0 and |t| = 1.
    const double at0 = lr.log_v;
    const double at1 = lr.log_v + std::log(std::max(std::abs(1.0 + lr.d1), 1e-300));
    best = std::max({best, at0, at1});
  }
  SupGradient out;
  out.log_value = best;
  out.value = best > kLogInf ? std::numeric_limits<double>::infinity() : std::exp(best);
  return out;
}

namespace {

struct BallMoments {
  double mean_g1, osc_g1, osc_perp, err;
};

// Centered-ball moments of grad u by the (r,t) reduction: g1 = v + r v' t^2,
// and the transverse components have zero mean with mean |g_i| reducible by
// the mean of |eta_1| over S^{n-2}.
BallMoments centered_ball_moments(const FamilyParams& params, double radius, int radial_m,
                                  int theta_m) {
  const int n = params.n;
  const PolarRule pr = polar_rule(n, theta_m);
  const GaussRule& gr = gauss_legendre(radial_m);
  const int panels = 60;

  double mean_perp_abs_eta = 1.0;  // n = 2: eta in S^0
  if (n >= 3) {
    const double snm2 = surface_area_unit_sphere(n - 1);
    const double snm3 = surface_area_unit_sphere(n - 2);
    mean_perp_abs_eta = 2.0 * snm3 / ((n - 2.0) * snm2);
  }

  auto sweep = [&](auto&& f) {
    double acc = 0.0;
    double s_hi = std::log(radius);
    for (int p = 0; p < panels; ++p) {
      const double s_lo = s_hi - std::log(2.0);
      const double half = 0.5 * (s_hi - s_lo), mid = 0.5 * (s_lo + s_hi);
      for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
        const double s = mid + half * gr.nodes[i];
        const double r = std::exp(s);
        const RadialProfile prof = eval_profile(params, r);
        const double wr = half * gr.weights[i] * std::exp(n * s);
        for (std::size_t k = 0; k < pr.t.size(); ++k)
          acc += wr * pr.w[k] * f(prof, pr.t[k]);
      }
      s_hi = s_lo;
    }
    return acc;
  };

  const double vol = surface_area_unit_sphere(n) / n * std::pow(radius, n);
  BallMoments out;
  out.mean_g1 = sweep([](const RadialProfile& p, double t) {
                  return p.v + p.r * p.dv * t * t;
                }) /
                vol;
  const double m1 = out.mean_g1;
  out.osc_g1 = sweep([m1](const RadialProfile& p, double t) {
                 return std::abs(p.v + p.r * p.dv * t * t - m1);
               }) /
               vol;
  out.osc_perp = sweep([](const RadialProfile& p, double t) {
                   return std::abs(p.r * p.dv * t) * std::sqrt(std::max(0.0, 1.0 - t * t));
                 }) /
                 vol * mean_perp_abs_eta;
  out.err = 0.0;
  return out;
}

}  // namespace

OscillationResult mean_oscillation(const FamilyParams& params, const VecN& center, double radius,
                                   int quadrature_budget) {
  const int n = params.n;
  if (center.size() != n) throw std::invalid_argument("center dimension mismatch");
  if (center.norm() + radius > 0.5 + 1e-12)
    throw std::domain_error("oscillation ball must lie inside B(0,1/2)");

  if (center.norm() == 0.0) {
    const BallMoments coarse = centered_ball_moments(params, radius, quadrature_budget / 2, 48);
    const BallMoments fine = centered_ball_moments(params, radius, quadrature_budget, 96);
    OscillationResult out;
    out.value = std::max(fine.osc_g1, fine.osc_perp);
    out.error_estimate = std::abs(std::max(coarse.osc_g1, coarse.osc_perp) - out.value);
    return out;
  }

  if (n > 3) throw std::invalid_argument("off-center oscillation needs n in {2,3}");
  if (center.norm() <= radius)
    throw std::domain_error("off-center oscillation ball must not contain the origin");

  auto moments = [&](int res) {
    const SphereRule rule = sphere_rule(n, res);
    const GaussRule& gr = gauss_legendre(16);
    VecN mean = VecN::Zero(n);
    double vol = 0.0;
    auto integrate = [&](auto&& f) {
      // 4 radial panels over [0, radius] around the center
      for (int p = 0; p < 4; ++p) {
        const double a = radius * p / 4.0, b = radius * (p + 1) / 4.0;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
          const double s = mid + half * gr.nodes[i];
          const double wr = half * gr.weights[i] * std::pow(s, n - 1);
          for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            f(VecN(center + s * rule.nodes[k]), wr * rule.weights[k]);
        }
      }
    };
    integrate([&](const VecN& x, double w) {
      const double r = x.norm();
      const RadialProfile prof = eval_profile(params, r);
      VecN g = VecN(prof.v * VecN::Unit(n, 0) + x(0) * prof.dv / r * x);
      mean += w * g;
      vol += w;
    });
    mean /= vol;
    VecN osc = VecN::Zero(n);
    integrate([&](const VecN& x, double w) {
      const double r = x.norm();
      const RadialProfile prof = eval_profile(params, r);
      VecN g = VecN(prof.v * VecN::Unit(n, 0) + x(0) * prof.dv / r * x);
      osc += w * (g - mean).cwiseAbs();
    });
    osc /= vol;
    return osc.maxCoeff();
  };
  const double coarse = moments(quadrature_budget / 2);
  const double fine = moments(quadrature_budget);
  return {fine, std::abs(fine - coarse)};
}

namespace {

std::string verdict_of(const DivergenceVerdict& v) { return verdict_name(v.verdict); }

MembershipRow verdict_row(const std::string& label, const DivergenceVerdict& v,
                          const std::string& expected, const std::string& anchor) {
  MembershipRow row;
  row.label = label;
  row.verdict = verdict_of(v);
  row.expected = expected;
  row.match = expected.empty() || row.verdict == expected;
  row.value = v.tau != 0.0 ? v.tau : v.growth_factor;
  row.paper_anchor = anchor;
  return row;
}

}  // namespace

std::vector<MembershipRow> membership_matrix(const FamilyParams& params,
                                             const MembershipOptions& opts) {
  std::vector<MembershipRow> rows;
  const int n = params.n;

  auto expected_lp = [&](double p) -> std::string {
    switch (params.family) {
      case Family::W11LogPow:
        return p <= 1.0 ? "CONVERGES" : "DIVERGES";
      case Family::LipschitzLog:
      case Family::BmoLogSq:
        return "CONVERGES";
      case Family::Power: {
        const double expo = n + params.a * p;  // annulus decay 2^{-expo j}
        if (expo > 0.05) return "CONVERGES";
        if (expo < -0.05) return "DIVERGES";
        return "";
      }
    }
    return "";
  };

  for (double p : opts.p_grid) {
    const DivergenceVerdict v = classify(params, Functional::lp(p), opts.J, opts.rules);
    std::ostringstream lab;
    lab << "L^" << p;
    rows.push_back(verdict_row(lab.str(), v, expected_lp(p), "Prop 1 / Prop W1infty / Prop BMO"));
  }

  if (params.family == Family::W11LogPow) {
    const DivergenceVerdict v = classify(params, Functional::llogl(), opts.J, opts.rules);
    // beta = 2 is the threshold itself (tail ~ 1/L, loglog divergence); the
    // operational rules cannot certify a side there, so no side is asserted.
    std::string expected;
    if (params.beta >= 2.1) expected = "CONVERGES";
    if (params.beta <= 1.9) expected = "DIVERGES";
    rows.push_back(verdict_row("LlogL", v, expected, "Prop W1log"));
  }

  if (params.family == Family::BmoLogSq || params.family == Family::LipschitzLog) {
    for (double c : opts.c_grid) {
      const DivergenceVerdict v = classify(params, Functional::exp_c(c), opts.J, opts.rules);
      std::string expected;
      std::string anchor = "Prop BMO / John-Nirenberg";
      if (params.family == Family::BmoLogSq) {
        expected = "DIVERGES";
      } else {
        // |Du| ~ log(r0/r): exp(c|Du|) ~ r^{-c}, integrable iff c < n.
        expected = c < n - 0.05 ? "CONVERGES" : (c > n + 0.05 ? "DIVERGES" : "");
      }
      std::ostringstream lab;
      lab << "exp(" << c << "|Du|)";
      rows.push_back(verdict_row(lab.str(), v, expected, anchor));
    }
  }

  // sup |grad u| growth over annuli (W^{1,inf} status).
  {
    std::vector<double> js, sups;
    for (int j = 1; j <= opts.oscillation_scales; ++j) {
      js.push_back(j);
      sups.push_back(sup_gradient(params, j).log_value);
    }
    MembershipRow row;
    row.label = "sup|Du| over annuli";
    row.paper_anchor = "Prop W1infty";
    if (params.family == Family::LipschitzLog) {
      // sup ~ log r0 + (j+1) log 2: fit the raw values linearly in j.
      std::vector<double> vals;
      for (double ls : sups) vals.push_back(std::exp(ls));
      const LinFit fit = linear_fit(js, vals);
      row.value = fit.slope;
      const bool linear = std::abs(fit.slope - std::log(2.0)) <= 0.2 * std::log(2.0) &&
                          fit.r2 > 0.99;
      row.verdict = linear ? "UNBOUNDED-LINEAR" : "UNCLASSIFIED";
      row.expected = "UNBOUNDED-LINEAR";
      row.match = linear;
    } else {
      const bool grows = sups.back() > sups.front() + 0.1;
      row.verdict = grows ? "UNBOUNDED" : "BOUNDED";
      row.expected = "";
      row.match = true;
      row.value = sups.back() - sups.front();
    }
    rows.push_back(row);
  }

  // Centered-ball mean oscillation across dyadic scales (BMO status).
  if (params.family == Family::LipschitzLog || params.family == Family::BmoLogSq) {
    std::vector<double> js, oscs;
    for (int j = 1; j <= opts.oscillation_scales; ++j) {
      js.push_back(j);
      oscs.push_back(
          mean_oscillation(params, VecN(VecN::Zero(n)), std::pow(2.0, -j)).value);
    }
    const LinFit fit = linear_fit(js, oscs);
    double mean = 0.0, lo = oscs[0], hi = oscs[0];
    for (double o : oscs) {
      mean += o;
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    mean /= oscs.size();
    MembershipRow row;
    row.label = "centered-ball oscillation";
    row.paper_anchor = "Prop W1infty / Prop BMO";
    row.value = fit.slope;
    const bool bounded = std::abs(fit.slope) <= 0.01 * mean && hi / lo <= 1.2;
    const bool unbounded = fit.slope >= 0.02 * mean && fit.r2 > 0.9;
    row.verdict = bounded ? "BOUNDED" : (unbounded ? "UNBOUNDED-LINEAR" : "UNCLASSIFIED");
    row.expected = params.family == Family::LipschitzLog ? "BOUNDED" : "UNBOUNDED-LINEAR";
    row.match = row.verdict == row.expected;
    rows.push_back(row);
  }

  // Second-derivative integrability: |D^2 u| ~ 1/|x| for the Lipschitz-log
  // family, so D2 in L^p iff p < n.  Reported to flag the W^{1,p}-of-Du
  // reading of Prop W1infty.
  if (params.family == Family::LipschitzLog) {
    for (double p : {n - 0.5, n + 0.5}) {
      const DivergenceVerdict v = classify(params, Functional::hess_lp(p), opts.J, opts.rules);
      std::ostringstream lab;
      lab << "D2-L^" << p;
      rows.push_back(verdict_row(lab.str(), v, p < n ? "CONVERGES" : "DIVERGES",
                                 "Prop W1infty (second derivatives)"));
    }
  }

  return rows;
}

double shell_integral_grad_p(int n, const ProfilePairFn& w, double p, double r_lo, double r_hi,
                             const NormQuadOptions& opts) {
  const PolarRule pr = polar_rule(n, opts.theta_m);
  const GaussRule& gr = gauss_legendre(opts.radial_m);
  double acc = 0.0;
  double s_hi = std::log(r_hi);
  const double s_end = std::log(r_lo);
  while (s_hi > s_end + 1e-14) {
    const double s_lo = std::max(s_end, s_hi - std::log(2.0));
    const double half = 0.5 * (s_hi - s_lo), mid = 0.5 * (s_lo + s_hi);
    for (std::size_t i = 0; i < gr.nodes.size(); ++i) {
      const double s = mid + half * gr.nodes[i];
      const double r = std::exp(s);
      const auto [v, dv] = w(r);
      const double wr = half * gr.weights[i] * std::exp(n * s);
      for (std::size_t k = 0; k < pr.t.size(); ++k) {
        const double t2 = pr.t[k] * pr.t[k];
        const double g2 =
            v * v + (2.0 * r * v * dv + r * r * dv * dv) * t2;
        acc += wr * pr.w[k] * std::pow(std::max(g2, 0.0), 0.5 * p);
      }
    }
    s_hi = s_lo;
  }
  return acc;
}

}  // namespace patholab
