#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "patholab/families.hpp"

namespace patholab {

struct BranchContaminationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Radial two-point problem for the energy-class solution w = x1 w~(|x|) with
// the same boundary data as u = x1 v(|x|):
//   w~'' + (n+1) w~'/r - (n-1) alpha(r) w~ / r^2 = 0,  w~(1) = v(1),
// with the branch free of r^{-n} growth selected at r = eps.
struct RadialBVP {
  FamilyParams params;
  double eps = 1e-8;          // inner cutoff
  int intervals = 10000;      // uniform mesh in s = log r
  double boundary_value = 0;  // 0 means "use v(1)"
};

struct ODESolution {
  std::vector<double> r;        // geometric grid, eps .. 1
  std::vector<double> w;        // w~ on the grid
  std::vector<double> dw;       // d w~/dr
  double residual_rel_max;      // ODE residual relative to term magnitudes
  double residual_abs_max;      // residual of the log-radius form
  double local_exponent;        // d log w~ / d log r near eps
  double energy;                // int_{B(0,1)} |grad(x1 w~)|^2
  double boundary_value;
  double s0, h;                 // log-radius grid: s_i = s0 + i h

  // Hermite-cubic interpolation of (w~, w~') at any radius in [eps, 1].
  std::pair<double, double> interp(double radius) const;
};

// Collocation in s = log r (uniform mesh; the r^{-n} branch becomes a benign
// decaying mode) with a Robin condition at eps from a Riccati run that locks
// onto the regular branch.  Richardson-combines two mesh levels.  Throws
// BranchContaminationError when the local exponent at eps exceeds 0.5.
ODESolution solve_bounded_branch(const RadialBVP& bvp);

struct CertificateClause {
  std::string name;
  bool pass;
  double measured;
  double threshold;
  std::string detail;
};

struct Certificate {
  std::vector<CertificateClause> clauses;
  bool all_pass;
  double gap_l1;        // ||grad(u - w)||_{L^1(B(0,1/2))}
  double gap_threshold; // S_u - S_w from the annulus tables
  double energy_w;
  std::string u_l2_verdict;
};

// Nontriviality certificate for u - w: boundary match, separation near 0,
// L^1 gradient gap, and the energy dichotomy (w in W^{1,2}, grad u not L^2).
Certificate nontriviality_certificate(const FamilyParams& params, const ODESolution& sol);

}  // namespace patholab
