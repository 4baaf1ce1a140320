#pragma once

#include <cstdint>
#include <vector>

#include "patholab/families.hpp"
#include "patholab/harmonics.hpp"
#include "patholab/linalg.hpp"

namespace patholab {

// Right-hand side of the divergence identity for u = P(x) v(|x|):
//   P(x) ( v'' + (n+2k-1) v'/|x| - k(n+k-2) alpha v / |x|^2 ).
// For k = 1, P = x1 this is the base identity.  alpha_shift perturbs the
// coefficient function (used for negative controls and re-matched constants).
double div_A_grad_analytic(const VecN& x, const FamilyParams& params,
                           const HarmonicPolynomial& P, double alpha_shift = 0.0);

// Magnitude scale of the three bracket terms at x, for relative residuals.
double identity_term_scale(const VecN& x, const FamilyParams& params,
                           const HarmonicPolynomial& P, double alpha_shift = 0.0);

// Flux-form central difference of Div(A grad u): first differences of
// F(y) = A(y) grad u(y) with grad u in closed form.  Throws when the stencil
// ball of radius (1+sqrt(n)) h leaves B(0,1) \ {0}.
double div_A_grad_numeric(const VecN& x, const FamilyParams& params,
                          const HarmonicPolynomial& P, double h, double alpha_shift = 0.0);

// Closed-form gradient of u = P(x) v(|x|).
VecN grad_u(const VecN& x, const FamilyParams& params, const HarmonicPolynomial& P);

struct ResidualReport {
  double sup_residual = 0.0;    // sup |analytic - numeric| at the smallest step
  double mean_residual = 0.0;
  double fd_step = 0.0;         // smallest relative step used
  double convergence_order = 0.0;
  int sample_count = 0;
  int skipped = 0;              // stencil violations
  double r_min = 0.0, r_max = 0.0;
  double bracket_sup_rel = 0.0; // sup |analytic| / term scale (0 for matched alpha)
  std::vector<double> steps;          // relative steps h/|x|
  std::vector<double> mean_by_step;   // mean |analytic - numeric| per step
  std::vector<double> sup_by_step;
};

struct SweepOptions {
  int samples = 1000;
  std::vector<double> steps = {1e-3, 5e-4, 2.5e-4};  // h = step * |x|
  std::uint64_t seed = 7;
  double alpha_shift_field = 0.0;    // applied to the numeric coefficient field
  double alpha_shift_bracket = 0.0;  // applied to the analytic bracket
};

// Samples points log-uniformly in |x| over [r_min, r_max] (fixed seed),
// compares analytic vs flux-difference divergence per step, and fits the
// convergence order from the per-step means.
ResidualReport identity_residual_sweep(const FamilyParams& params, const HarmonicPolynomial& P,
                                       double r_min, double r_max,
                                       const SweepOptions& opts = {});

}  // namespace patholab
