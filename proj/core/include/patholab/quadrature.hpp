#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "patholab/linalg.hpp"

namespace patholab {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on the
// Legendre recurrence.  Cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int m);

// Integrate f over [a,b] with an m-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int m);

// Adaptive Gauss-Kronrod 7/15 with an interval stack.
struct AdaptiveResult {
  double value;
  double error_estimate;
  int intervals;
};
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-11, double abs_tol = 1e-300,
                                  int max_intervals = 4000);

// Surface quadrature nodes on the unit sphere S^{n-1}, n in {2,3}: equispaced
// points on the circle for n=2, Gauss-in-polar x trapezoid-in-azimuth for
// n=3.  Weights sum to |S^{n-1}|.
struct SphereRule {
  std::vector<VecN> nodes;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n, int resolution);

// Nodes/weights for the polar-angle reduction int_{S^{n-1}} g(omega_1) dsigma
// = |S^{n-2}| int_0^pi g(cos th) sin(th)^{n-2} dth, any n >= 2.  Returns
// pairs (t_i, w_i) with sum_i w_i = |S^{n-1}| and t_i = cos th_i.
struct PolarRule {
  std::vector<double> t;
  std::vector<double> w;
};
PolarRule polar_rule(int n, int m);

// Surface area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double surface_area_unit_sphere(int n);

}  // namespace patholab
