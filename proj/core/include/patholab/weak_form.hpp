#pragma once

#include <functional>
#include <vector>

#include "patholab/families.hpp"
#include "patholab/linalg.hpp"

namespace patholab {

// C^2 polynomial bump (1 - |x-c|^2/R^2)^3 on B(c,R), zero outside.  The
// support must be strictly inside B(0,1).
struct BumpTestFunction {
  VecN center;
  double radius;

  BumpTestFunction(const VecN& c, double R);

  double value(const VecN& x) const;
  VecN gradient(const VecN& x) const;
  double lipschitz() const;  // max |grad| = 96 / (25 sqrt(5) R)
  bool on_axis() const;      // center on the x1-axis (or at 0): reduced path
  int dim() const { return static_cast<int>(center.size()); }
};

struct QuadOptions {
  double rel_tol = 1e-9;   // nested-estimate target, relative to the running total
  int max_panels = 2000;
  int radial_m = 16;       // Gauss order per radial panel (log-radius variable)
  int theta_m = 24;        // Gauss order per polar arc
};

struct QuadValue {
  double value;
  double error_estimate;
  int panels;
};

// Volume integral int_{B(0,1) \ B(0,rho)} grad(phi) . (A grad u) dx for
// u = x1 v(|x|).  Radial panels refined geometrically toward rho, split at
// the bump-boundary radii; on-axis bumps use the exact polar reduction with
// the angular domain cut at the bump boundary.  Throws QuadratureError when
// the nested-rule discrepancy cannot reach rel_tol within the panel budget.
QuadValue annulus_integral(const BumpTestFunction& phi, const FamilyParams& params, double rho,
                           const QuadOptions& opts = {});

// Surface term  -int_{dB(0,rho)} (phi(x) - phi(0)) x1 (v(rho)/rho + v'(rho)) dS.
QuadValue boundary_term(const BumpTestFunction& phi, const FamilyParams& params, double rho,
                        const QuadOptions& opts = {});

// Same, with (v, v') supplied pointwise; used for difference profiles
// v - w_tilde coming out of the nonuniqueness solve.
using RadialValueFn = std::function<std::pair<double, double>(double)>;  // r -> (v, v')
QuadValue boundary_term_profile(const BumpTestFunction& phi, int n, const RadialValueFn& vf,
                                double rho, const QuadOptions& opts = {});

// rho^n (|v(rho)| + rho |v'(rho)|), the decay bound from the proof.
double bound_value(const FamilyParams& params, double rho);

// Lip(phi) * int_{S^{n-1}} |omega_1| dsigma, the constant in
// |boundary_term| <= C rho^n (|v| + rho |v'|).
double boundary_bound_constant(const BumpTestFunction& phi, int n);

struct AnnulusQuadratureResult {
  double rho;
  double volume_integral;
  double boundary_term;
  double bound_value;
  double quadrature_error_volume;
  double quadrature_error_surface;
  double rel_gap;  // |I - B| / max(|I|, |B|, tiny)
  bool pass;
};

// Integration-by-parts check at one rho: volume and surface quadratures must
// agree within rel_tol plus their combined error estimates.
AnnulusQuadratureResult ibp_check(const BumpTestFunction& phi, const FamilyParams& params,
                                  double rho, double rel_tol = 1e-6,
                                  const QuadOptions& opts = {});

struct DecayFit {
  double C_hat = 0.0;        // fitted constant against rho^n (|v| + rho|v'|)
  double ratio_lo = 0.0;     // min measured/model over the sequence
  double ratio_hi = 0.0;     // max measured/model
  bool within_factor2 = false;
  bool tends_to_zero = false;
  bool degenerate = false;   // too many underflowed terms to fit
  int underflow_skipped = 0;
  double beta_hat = 0.0;     // W11LogPow: fitted log-power exponent
  double slope_hat = 0.0;    // Power: fitted log-log slope (expect n + a)
  std::vector<double> rho;
  std::vector<double> term;  // measured |boundary_term|
};

// Fits measured boundary terms against the closed-form decay model over a
// geometric rho sequence (>= 6 decades recommended; default 2^-k, k=4..24).
DecayFit decay_fit(const BumpTestFunction& phi, const FamilyParams& params,
                   const std::vector<double>& rho_seq, const QuadOptions& opts = {});

std::vector<double> default_rho_sequence(int k_min = 4, int k_max = 24);

}  // namespace patholab
