#pragma once

#include <vector>

#include "patholab/coefficients.hpp"
#include "patholab/families.hpp"
#include "patholab/linalg.hpp"

namespace patholab {

struct RKernelInput {
  VecN x;
  MatN A_at_x;
  MatN A_at_0;
};

// Direct evaluation of the asymptotics kernel
//   R(x) = [ (e1.(A(x)-A(0))e1)(x.A(0)^{-1}x) - n (e1.(A(x)-A(0))A(0)^{-1}x)(e1.x) ]
//          / ( |dB(0,1)| |det A(0)|^{1/2} (x.A(0)^{-1}x)^{n/2+1} ).
// Throws std::domain_error at x = 0 or singular A(0).
double R_eval(const RKernelInput& input);

// Convenience: kernel of the Lemma-1 field of `params` at x, with A(0) = I.
double R_eval_family(const FamilyParams& params, const VecN& x);

// Closed form for the Lemma-1 field: alpha(|x|)(|x|^2 - x1^2) / (|dB| |x|^{n+2}).
double R_closed_form_lemma(const FamilyParams& params, const VecN& x);

// kappa-variant comparison: the kernel evaluated directly on the diagonal
// field a_ij = delta_ij + kappa (delta_ij - n delta_i1 delta_j1 x1^2/|x|^2)
// versus the printed closed form kappa (|x|^2 - n x1^2)^2 / (|dB| |x|^{n+2}).
// The two are reported side by side; no agreement is asserted.
struct KappaDiscrepancy {
  double direct;
  double printed;
  double ratio;  // direct / printed
};
KappaDiscrepancy kappa_discrepancy(const FamilyParams& params, const VecN& x);

// (n-1)/n * int_r^1 alpha(s) ds/s.  `km_model` integrates the first-order
// model alpha_KM = -beta n/((n-1) L) that the asymptotic formulas use; the
// full catalog alpha adds an L^{-2} correction with convergent integral.
struct ExponentIntegral {
  double quadrature;
  double closed_form;  // NaN when no closed form applies
};
ExponentIntegral asymptotic_exponent_integral(const FamilyParams& params, double r,
                                              bool km_model = true);

// First-order model coefficient function backing the KM asymptotics:
// -beta_eff / L with beta_eff the leading log coefficient of the family
// (constant alpha for the power family).
double km_alpha(const FamilyParams& params, double r);

struct ProfileMatchRow {
  double r;
  double ratio;  // v(r) / model(r)
};

struct ProfileMatch {
  std::vector<ProfileMatchRow> rows;
  double max_rel_deviation;  // of the ratio from its value at the smallest r
  bool singular_branch;      // model r^{-n} e^{I} vs regular e^{-I}
  double fitted_power;       // power family: log-log slope of the ratio
};

// Ratio of v(r) to the KM asymptotic model along r_sequence (>= 5 decades
// recommended).  Constant ratios certify the predicted asymptotics.
ProfileMatch profile_match(const FamilyParams& params, const std::vector<double>& r_sequence);

}  // namespace patholab
