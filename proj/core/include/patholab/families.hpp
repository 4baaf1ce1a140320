#pragma once

#include <string>

namespace patholab {

// Catalog of radial profiles v(r) on (0,1), each paired with the coefficient
// function alpha(r) that makes u(x) = x1 * v(|x|) solve Div(A grad u) = 0 for
// the rank-one-perturbed field A = I + alpha(|x|) (I - x x^T/|x|^2).
enum class Family {
  Power,         // v = r^a                         (Serrin/Meyers examples)
  W11LogPow,     // v = r^{-n} log(r0/r)^{-beta}    (W^{1,1} but no W^{1,p}, p>1)
  LipschitzLog,  // v = log(r0/r)                   (all W^{1,p}, not W^{1,inf})
  BmoLogSq,      // v = log(r0/r)^2                 (all W^{1,p}, grad not BMO)
};

const char* family_name(Family f);          // short id used by the CLI
Family family_from_name(const std::string& name);
bool is_log_family(Family f);

struct FamilyParams {
  Family family;
  int n = 2;          // space dimension, n >= 2
  double beta = 0.0;  // W11LogPow exponent, > 1
  double a = 0.0;     // Power exponent
  double r0 = 0.0;    // log offset, > e for log families; unused for Power
  bool r0_auto = false;
  double margin = 0.5;  // ellipticity margin used when r0 was resolved
};

// Sentinel for "resolve r0 automatically" in the factories below.
inline constexpr double kAutoR0 = 0.0;

// Factories validate the hard invariants (n >= 2, beta > 1, explicit r0 > e)
// and throw std::invalid_argument on violation.  kAutoR0 resolves the log
// offset through choose_r0 with the given margin.
FamilyParams make_power(int n, double a);
FamilyParams make_w11(int n, double beta, double r0 = kAutoR0, double margin = 0.5);
FamilyParams make_lipschitz_log(int n, double r0 = kAutoR0, double margin = 0.5);
FamilyParams make_bmo_logsq(int n, double r0 = kAutoR0, double margin = 0.5);

struct RadialProfile {
  double r;
  double v;
  double dv;      // v'
  double ddv;     // v''
  double alpha;   // matching coefficient function at r
};

// Closed-form profile evaluation.  Throws std::domain_error unless 0 < r < 1.
RadialProfile eval_profile(const FamilyParams& params, double r);

// alpha from the balance relation (r^2 v'' + (n+1) r v') / ((n-1) v).
// Throws std::domain_error when v == 0.
double alpha_from_profile(int n, double r, double v, double dv, double ddv);

// Coefficient function alone; cheaper than eval_profile and valid for any
// r in (0, 1).
double alpha_at(const FamilyParams& params, double r);

// Decomposition alpha(r) = p/L + q/L^2 with L = log(r0/r), valid for the
// three log families.  Throws for Power.
struct LogAlphaCoeffs {
  double p;
  double q;
};
LogAlphaCoeffs log_alpha_coeffs(const FamilyParams& params);

// Infimum / supremum of alpha over r in (0,1), from the closed form.
double inf_alpha(const FamilyParams& params);
double sup_alpha(const FamilyParams& params);

// Smallest r0 >= e with inf_{(0,1)} alpha >= -margin, from the closed-form
// infimum.  Throws std::invalid_argument for Power (no log offset).
double choose_r0(const FamilyParams& params, double margin = 0.5);

// Validates that params' r0 satisfies inf alpha >= -margin; throws
// std::invalid_argument otherwise.  Used before checks that assume the
// margin-backed ellipticity.
void validate_r0(const FamilyParams& params, double margin = 0.5);

// Gradient of u = x1 v(|x|) in the reduced variables (r, t), t = x1/|x|:
//   |grad u|^2 = v^2 + (2 r v v' + r^2 v'^2) t^2.
double grad_norm_sq(const RadialProfile& p, double t);

// Frobenius norm squared of the Hessian of u in reduced variables:
//   t^2 (2v' + r v'')^2 + 2 (1-t^2) v'^2 + (n-1) t^2 v'^2.
double hessian_frobenius_sq(const FamilyParams& params, const RadialProfile& p, double t);

}  // namespace patholab
