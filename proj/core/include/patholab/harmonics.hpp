#pragma once

#include <functional>
#include <string>
#include <vector>

#include "patholab/linalg.hpp"

namespace patholab {

// Homogeneous harmonic polynomial with closed-form value and gradient.
// The catalog is fixed: harmonicity has to hold exactly, so user-supplied
// polynomials are not accepted.
struct HarmonicPolynomial {
  int n;
  int k;  // homogeneity degree
  std::string id;
  std::function<double(const VecN&)> eval;
  std::function<VecN(const VecN&)> grad;
};

// Catalog for dimension n.  Always contains "one" (k=0), "x1" (k=1),
// "x1x2" and "x1^2-x2^2" (k=2), "re3" = Re((x1+i x2)^3) (k=3); for n >= 3
// also "x1x2x3" (k=3).
std::vector<HarmonicPolynomial> harmonic_catalog(int n);
HarmonicPolynomial harmonic_by_id(int n, const std::string& id);

}  // namespace patholab
