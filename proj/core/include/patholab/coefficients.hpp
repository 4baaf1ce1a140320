#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patholab/families.hpp"
#include "patholab/linalg.hpp"

namespace patholab {

// Symmetric coefficient matrix evaluated at a point, together with the point.
struct CoefficientMatrix {
  int n;
  MatN entries;
  VecN x;
};

// A(x) = I + alpha (I - x x^T / |x|^2).  Throws std::domain_error at x = 0.
CoefficientMatrix assemble_A(const VecN& x, double alpha_at_r);

// Diagonal variant a_ij = delta_ij + kappa (delta_ij - n delta_i1 delta_j1 x1^2/|x|^2).
CoefficientMatrix assemble_A_kappa(const VecN& x, double kappa_at_r);

// Continuity extension at the origin: the identity matrix when alpha(0+) = 0
// (all log families), nothing otherwise.
std::optional<MatN> continuity_extension(const FamilyParams& params);

// True when A extends continuously to 0, i.e. alpha(0+) = 0.  For the power
// family this holds only when a (a + n) = 0.
bool coefficient_continuous_at_origin(const FamilyParams& params);

struct EllipticityBounds {
  double lambda;    // essential lower bound of the quadratic form
  double Lambda;    // upper bound
  double inf_alpha;
  double sup_alpha;
  double r_lo, r_hi;
  bool elliptic;    // lambda > 0
};

// Grid scan (plus closed-form endpoints) of the spectrum {1, 1+alpha} over
// [r_lo, r_hi].  Never throws for a constructible family: a bad explicit r0
// is reported as elliptic = false.
EllipticityBounds ellipticity_bounds(const FamilyParams& params, double r_lo = 1e-9,
                                     double r_hi = 1.0 - 1e-9, int grid = 10000);

struct ModulusSample {
  double t;
  double omega;        // sampled lower-bound estimate of omega_A(t)
  double alpha_abs;    // |alpha(t)| for the same scale
  double c_ratio;      // omega / |alpha(t)| (0 when alpha(t) = 0)
};

// Lower-bound estimate of omega_A(t) = sup_{|x-y|<=t} |A(x)-A(y)| in the
// spectral norm, by structured pairs (same-ray radial pairs reaching down to
// the origin, orthogonal-direction pairs near radius t/sqrt(2)) plus seeded
// random pairs.  Deterministic for a fixed seed.
ModulusSample modulus_of_continuity(const FamilyParams& params, double t,
                                    int sample_budget = 2048, std::uint64_t seed = 1);

// Fitted modulus model: omega_hat(t) = c_fit * |alpha(t)| for log families,
// a constant for the power family (whose A is discontinuous at 0 unless
// a (a+n) = 0).
struct ModulusModel {
  double c_fit;                       // scale factor on |alpha(t)|
  bool discontinuous_at_origin;
  std::vector<ModulusSample> samples; // the scales used for the fit
};
ModulusModel fit_modulus_model(const FamilyParams& params, int sample_budget = 2048,
                               std::uint64_t seed = 1);

struct DiniPartial {
  double delta;
  double value;        // integral of omega_hat(s)/s over [delta, 1]
  double loglog_term;  // log log(r0/delta) - log log r0 (log families, else 0)
};

// Partial Dini integral of the fitted modulus model.  For the log families
// the partials grow like the loglog term: the Dini condition fails.
DiniPartial dini_partial(const FamilyParams& params, const ModulusModel& model, double delta);

}  // namespace patholab
