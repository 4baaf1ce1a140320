#include "patholab/families.hpp"

#include <cmath>
#include <stdexcept>

namespace patholab {

namespace {

constexpr double kE = 2.718281828459045235360287;

void require_dimension(int n) {
  if (n < 2) throw std::invalid_argument("family dimension must be >= 2");
}

void require_radius(double r) {
  if (!(r > 0.0) || !(r < 1.0))
    throw std::domain_error("profile radius must lie in (0,1)");
}

// inf of alpha(L) = p/L + q/L^2 over L in [L0, inf).  For q > 0 the function
// dips to -p^2/(4q) at L* = -2q/p and then climbs back to 0.
double inf_alpha_from(double p, double q, double L0) {
  if (q <= 0.0) return p / L0;  // monotone toward 0 from below
  const double Lstar = -2.0 * q / p;
  if (L0 >= Lstar) return p / L0 + q / (L0 * L0);
  return -p * p / (4.0 * q);
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Power: return "power";
    case Family::W11LogPow: return "w11";
    case Family::LipschitzLog: return "lipschitz-log";
    case Family::BmoLogSq: return "bmo-logsq";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "power") return Family::Power;
  if (name == "w11") return Family::W11LogPow;
  if (name == "lipschitz-log") return Family::LipschitzLog;
  if (name == "bmo-logsq") return Family::BmoLogSq;
  throw std::invalid_argument("unknown family: " + name);
}

bool is_log_family(Family f) { return f != Family::Power; }

FamilyParams make_power(int n, double a) {
  require_dimension(n);
  if (!std::isfinite(a)) throw std::invalid_argument("power exponent must be finite");
  FamilyParams p;
  p.family = Family::Power;
  p.n = n;
  p.a = a;
  return p;
}

namespace {

FamilyParams make_log_family(Family f, int n, double beta, double r0, double margin) {
  require_dimension(n);
  if (f == Family::W11LogPow && !(beta > 1.0))
    throw std::invalid_argument("w11 family requires beta > 1");
  if (!(margin > 0.0) || !(margin < 1.0))
    throw std::invalid_argument("margin must lie in (0,1)");
  FamilyParams p;
  p.family = f;
  p.n = n;
  p.beta = beta;
  p.margin = margin;
  if (r0 == kAutoR0) {
    p.r0 = choose_r0(p, margin);
    p.r0_auto = true;
  } else {
    if (!(r0 > kE)) throw std::invalid_argument("explicit r0 must exceed e");
    p.r0 = r0;
  }
  return p;
}

}  // namespace

FamilyParams make_w11(int n, double beta, double r0, double margin) {
  return make_log_family(Family::W11LogPow, n, beta, r0, margin);
}

FamilyParams make_lipschitz_log(int n, double r0, double margin) {
  return make_log_family(Family::LipschitzLog, n, 0.0, r0, margin);
}

FamilyParams make_bmo_logsq(int n, double r0, double margin) {
  return make_log_family(Family::BmoLogSq, n, 0.0, r0, margin);
}

LogAlphaCoeffs log_alpha_coeffs(const FamilyParams& params) {
  const double n = params.n;
  switch (params.family) {
    case Family::W11LogPow: {
      const double b = params.beta;
      return {-b * n / (n - 1.0), b * (b + 1.0) / (n - 1.0)};
    }
    case Family::LipschitzLog:
      return {-n / (n - 1.0), 0.0};
    case Family::BmoLogSq:
      return {-2.0 * n / (n - 1.0), 2.0 / (n - 1.0)};
    case Family::Power:
      break;
  }
  throw std::invalid_argument("power family has no log-form alpha");
}

double alpha_at(const FamilyParams& params, double r) {
  if (params.family == Family::Power)
    return params.a * (params.a + params.n) / (params.n - 1.0);
  const auto [p, q] = log_alpha_coeffs(params);
  const double L = std::log(params.r0 / r);
  return p / L + q / (L * L);
}

RadialProfile eval_profile(const FamilyParams& params, double r) {
  require_radius(r);
  RadialProfile out;
  out.r = r;
  const double n = params.n;
  switch (params.family) {
    case Family::Power: {
      const double a = params.a;
      out.v = std::pow(r, a);
      out.dv = a * std::pow(r, a - 1.0);
      out.ddv = a * (a - 1.0) * std::pow(r, a - 2.0);
      break;
    }
    case Family::W11LogPow: {
      const double b = params.beta;
      const double L = std::log(params.r0 / r);
      const double Lb = std::pow(L, -b);
      const double rn = std::pow(r, -n);
      out.v = rn * Lb;
      out.dv = rn / r * Lb * (-n + b / L);
      out.ddv = rn / (r * r) * Lb *
                (n * (n + 1.0) - b * (2.0 * n + 1.0) / L + b * (b + 1.0) / (L * L));
      break;
    }
    case Family::LipschitzLog: {
      const double L = std::log(params.r0 / r);
      out.v = L;
      out.dv = -1.0 / r;
      out.ddv = 1.0 / (r * r);
      break;
    }
    case Family::BmoLogSq: {
      const double L = std::log(params.r0 / r);
      out.v = L * L;
      out.dv = -2.0 * L / r;
      out.ddv = (2.0 + 2.0 * L) / (r * r);
      break;
    }
  }
  out.alpha = alpha_at(params, r);
  return out;
}

double alpha_from_profile(int n, double r, double v, double dv, double ddv) {
  require_dimension(n);
  if (v == 0.0) throw std::domain_error("alpha_from_profile: v vanishes");
  return (r * r * ddv + (n + 1.0) * r * dv) / ((n - 1.0) * v);
}

double inf_alpha(const FamilyParams& params) {
  if (params.family == Family::Power) return alpha_at(params, 0.5);
  const auto [p, q] = log_alpha_coeffs(params);
  return inf_alpha_from(p, q, std::log(params.r0));
}

double sup_alpha(const FamilyParams& params) {
  if (params.family == Family::Power) return alpha_at(params, 0.5);
  // alpha -> 0^- as r -> 0 for every valid log-family offset; the sup over
  // (0,1) is 0 unless alpha turns positive, which requires L < (q/|p|)-ish
  // values that the r0 > e invariant already excludes for q = 0.  Handle the
  // general case by comparing the endpoint value with the limit 0.
  const auto [p, q] = log_alpha_coeffs(params);
  const double L0 = std::log(params.r0);
  const double at_end = p / L0 + q / (L0 * L0);
  return std::max(0.0, at_end);
}

double choose_r0(const FamilyParams& params, double margin) {
  if (params.family == Family::Power)
    throw std::invalid_argument("choose_r0: power family has no log offset");
  if (!(margin > 0.0) || !(margin < 1.0))
    throw std::invalid_argument("choose_r0: margin must lie in (0,1)");
  const auto [p, q] = log_alpha_coeffs(params);
  double L0 = 1.0;  // r0 >= e
  if (q <= 0.0) {
    // alpha(L) = p/L increasing toward 0; binding constraint alpha(L0) = -margin.
    L0 = std::max(L0, -p / margin);
  } else if (-p * p / (4.0 * q) < -margin) {
    // Interior dip below -margin: r0 must push log r0 past the larger root of
    // margin L^2 + p L + q = 0, beyond which alpha >= -margin on [L0, inf).
    const double disc = p * p - 4.0 * margin * q;
    L0 = std::max(L0, (-p + std::sqrt(disc)) / (2.0 * margin));
  }
  return std::exp(L0);
}

void validate_r0(const FamilyParams& params, double margin) {
  if (params.family == Family::Power) return;
  if (inf_alpha(params) < -margin)
    throw std::invalid_argument("r0 violates the ellipticity margin bound");
}

double grad_norm_sq(const RadialProfile& p, double t) {
  const double rdv = p.r * p.dv;
  return p.v * p.v + (2.0 * p.v * rdv + rdv * rdv) * t * t;
}

double hessian_frobenius_sq(const FamilyParams& params, const RadialProfile& p, double t) {
  const double t2 = t * t;
  const double mix = 2.0 * p.dv + p.r * p.ddv;
  return t2 * mix * mix + (2.0 * (1.0 - t2) + (params.n - 1.0) * t2) * p.dv * p.dv;
}

}  // namespace patholab
