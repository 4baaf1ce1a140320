#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patholab/families.hpp"
#include "patholab/linalg.hpp"

namespace patholab {

// Integrands classified over dyadic annuli.  All are functions of |grad u|
// (or of the Hessian norm) and reduce to (r, t) variables, t = x1/|x|.
struct Functional {
  enum class Kind { Lp, LLogL, ExpC, HessLp };
  Kind kind;
  double param;  // p for Lp/HessLp, c for ExpC, unused for LLogL

  static Functional lp(double p) { return {Kind::Lp, p}; }
  static Functional llogl() { return {Kind::LLogL, 0.0}; }
  static Functional exp_c(double c) { return {Kind::ExpC, c}; }
  static Functional hess_lp(double p) { return {Kind::HessLp, p}; }
  std::string label() const;
};

struct AnnulusRow {
  int j;
  double inner, outer;   // 2^{-j-1}, 2^{-j}
  double log_partial;    // log of the annulus integral (always finite)
  double partial;        // exp(log_partial); +inf when not representable
  bool overflow;
};

struct AnnulusTable {
  Functional functional;
  std::vector<AnnulusRow> rows;
};

struct NormQuadOptions {
  int radial_m = 32;
  int theta_m = 64;
};

// Integral of the functional over the dyadic annulus j (log-sum-exp over a
// radial-Gauss x polar-Gauss grid, stable for exponentially large integrands).
AnnulusRow annulus_functional(const FamilyParams& params, const Functional& f, int j,
                              const NormQuadOptions& opts = {});

AnnulusTable build_annulus_table(const FamilyParams& params, const Functional& f, int J,
                                 const NormQuadOptions& opts = {});

struct VerdictRules {
  int window = 30;           // tail-fit window (capped at J-4)
  double growth_eps = 1e-3;  // |log g| below this counts as "no geometric trend"
  double geo_ratio = 0.95;   // spec rule: geometric convergence threshold
  double tau_margin = 0.1;   // decision margin on the log-power exponent
  double sum_factor = 10.0;  // spec rule: partial sums vs first annulus
  double tail_frac = 0.01;   // spec rule: geometric tail vs accumulated sum
};

struct DivergenceVerdict {
  enum class Kind { Converges, Diverges, Inconclusive };
  Kind verdict;
  double growth_factor;   // fitted per-annulus factor e^b with the log-power part removed
  double tau;             // fitted log-power tail exponent (partial_j ~ C g^j L_j^{-tau})
  double sum;             // accumulated partial sums (inf under overflow)
  double first;           // first-annulus partial
  double tail_estimate;   // model tail beyond J (when convergent)
  bool overflow_evidence;
  std::string note;
  AnnulusTable table;
};

const char* verdict_name(DivergenceVerdict::Kind k);

// Tail-model classification.  The spec's two operational rules (geometric
// growth factor + 10x partial-sum corroboration; geometric decay + 1% tail)
// decide the clear-cut cases; the near-unit-ratio regime is decided by the
// fitted closed-form tail model C g^j L_j^{-tau}.
DivergenceVerdict classify(const FamilyParams& params, const Functional& f, int J = 48,
                           const VerdictRules& rules = {}, const NormQuadOptions& opts = {});

struct SupGradient {
  double value;      // +inf when not representable
  double log_value;
};

// Closed-form supremum of |grad u| over annulus j: the t-extremes are
// analytic (|grad u|^2 is linear in t^2), the radial max is scanned.
SupGradient sup_gradient(const FamilyParams& params, int j);

struct OscillationResult {
  double value;           // max over gradient components of mean |g - g_B|
  double error_estimate;
};

// Mean oscillation of grad u over B(center, radius) c B(0,1/2), per component,
// max over components.  center = 0 uses the reduced quadrature; off-center
// balls (n in {2,3}) must not contain the origin.
OscillationResult mean_oscillation(const FamilyParams& params, const VecN& center,
                                   double radius, int quadrature_budget = 64);

struct MembershipRow {
  std::string label;
  std::string verdict;   // CONVERGES / DIVERGES / BOUNDED / UNBOUNDED / ...
  std::string expected;  // empty for informational rows
  bool match;            // true when expected is empty or equals verdict
  double value;          // tau / growth factor / slope, whichever applies
  std::string paper_anchor;
};

struct MembershipOptions {
  std::vector<double> p_grid = {1.0, 1.01, 1.05, 1.5, 2.0, 4.0, 10.0};
  std::vector<double> c_grid = {0.1, 1.0, 10.0};
  int J = 48;
  int oscillation_scales = 20;
  VerdictRules rules;
};

// One row per functional, with verdicts cross-checked against the expected
// pattern of Propositions 1 / W1log / W1infty / BMO.
std::vector<MembershipRow> membership_matrix(const FamilyParams& params,
                                             const MembershipOptions& opts = {});

// ---- generic reduced quadrature over radial profiles -----------------------

// r -> (value, derivative) of a radial profile; used to integrate gradients
// of x1 * w(|x|) for solver outputs and differences.
using ProfilePairFn = std::function<std::pair<double, double>(double)>;

// int over {r_lo <= |x| <= r_hi} of |grad(x1 w(|x|))|^p dx, by the same
// (r,t) reduction (plain arithmetic; intended for moderate dynamic range).
double shell_integral_grad_p(int n, const ProfilePairFn& w, double p, double r_lo, double r_hi,
                             const NormQuadOptions& opts = {});

}  // namespace patholab
