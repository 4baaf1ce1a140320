#include "patholab/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "patholab/quadrature.hpp"

namespace patholab {

double R_eval(const RKernelInput& input) {
  const int n = static_cast<int>(input.x.size());
  if (input.x.squaredNorm() == 0.0) throw std::domain_error("R_eval: x = 0");
  const double det0 = input.A_at_0.determinant();
  if (std::abs(det0) < 1e-14) throw std::domain_error("R_eval: singular A(0)");
  const MatN inv0 = input.A_at_0.inverse();
  const MatN dA = input.A_at_x - input.A_at_0;
  const VecN invx = inv0 * input.x;
  const double q = input.x.dot(invx);  // x . A(0)^{-1} x
  const double num = dA(0, 0) * q - n * (dA.row(0).dot(invx)) * input.x(0);
  const double den = surface_area_unit_sphere(n) * std::sqrt(std::abs(det0)) *
                     std::pow(q, 0.5 * n + 1.0);
  return num / den;
}

double R_eval_family(const FamilyParams& params, const VecN& x) {
  RKernelInput in;
  in.x = x;
  in.A_at_x = assemble_A(x, alpha_at(params, x.norm())).entries;
  in.A_at_0 = MatN::Identity(params.n, params.n);
  return R_eval(in);
}

double R_closed_form_lemma(const FamilyParams& params, const VecN& x) {
  const double r = x.norm();
  const double alpha = alpha_at(params, r);
  return alpha * (r * r - x(0) * x(0)) /
         (surface_area_unit_sphere(params.n) * std::pow(r, params.n + 2.0));
}

KappaDiscrepancy kappa_discrepancy(const FamilyParams& params, const VecN& x) {
  const double r = x.norm();
  const double kappa = alpha_at(params, r);
  RKernelInput in;
  in.x = x;
  in.A_at_x = assemble_A_kappa(x, kappa).entries;
  in.A_at_0 = MatN::Identity(params.n, params.n);
  KappaDiscrepancy out;
  out.direct = R_eval(in);
  const double w = r * r - params.n * x(0) * x(0);
  out.printed =
      kappa * w * w / (surface_area_unit_sphere(params.n) * std::pow(r, params.n + 2.0));
  out.ratio = out.printed != 0.0 ? out.direct / out.printed
                                 : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double km_alpha(const FamilyParams& params, double r) {
  if (params.family == Family::Power) return alpha_at(params, r);
  const auto [p, q] = log_alpha_coeffs(params);
  (void)q;
  return p / std::log(params.r0 / r);
}

ExponentIntegral asymptotic_exponent_integral(const FamilyParams& params, double r,
                                              bool km_model) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("r must be in (0,1)");
  const int n = params.n;
  const double factor = (n - 1.0) / n;
  ExponentIntegral out;
  out.closed_form = std::numeric_limits<double>::quiet_NaN();

  auto alpha_fn = [&](double s) {
    return km_model ? km_alpha(params, s) : alpha_at(params, s);
  };
  // substitute s = e^{-w}: int_r^1 alpha(s) ds/s = int_0^{log(1/r)} alpha(e^{-w}) dw
  out.quadrature =
      factor *
      integrate_adaptive([&](double w) { return alpha_fn(std::exp(-w)); }, 0.0,
                         std::log(1.0 / r), 1e-12)
          .value;

  if (params.family == Family::Power) {
    out.closed_form = factor * alpha_at(params, 0.5) * std::log(1.0 / r);
  } else if (km_model) {
    // (n-1)/n * p * int ds/(s L) = (n-1)/n * p * (log log(r0/r) - log log r0)
    const auto [p, q] = log_alpha_coeffs(params);
    (void)q;
    out.closed_form =
        factor * p * (std::log(std::log(params.r0 / r)) - std::log(std::log(params.r0)));
  }
  return out;
}

ProfileMatch profile_match(const FamilyParams& params, const std::vector<double>& r_sequence) {
  ProfileMatch out;
  out.singular_branch = params.family == Family::W11LogPow || params.family == Family::Power;
  out.fitted_power = 0.0;

  for (double r : r_sequence) {
    const RadialProfile p = eval_profile(params, r);
    const double I = asymptotic_exponent_integral(params, r, /*km_model=*/true).quadrature;
    double model;
    if (out.singular_branch) {
      model = std::pow(r, -static_cast<double>(params.n)) * std::exp(I);
    } else {
      model = std::exp(-I);
    }
    out.rows.push_back({r, p.v / model});
  }

  // Deviation of the ratio from its value at the smallest r.
  double r_min = out.rows.front().r;
  double ref = out.rows.front().ratio;
  for (const auto& row : out.rows)
    if (row.r < r_min) {
      r_min = row.r;
      ref = row.ratio;
    }
  out.max_rel_deviation = 0.0;
  for (const auto& row : out.rows)
    out.max_rel_deviation =
        std::max(out.max_rel_deviation, std::abs(row.ratio - ref) / std::abs(ref));

  if (params.family == Family::Power) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t m = out.rows.size();
    for (const auto& row : out.rows) {
      const double lx = std::log(row.r), ly = std::log(std::abs(row.ratio));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    out.fitted_power = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

}  // namespace patholab
