#include "patholab/harmonics.hpp"

#include <stdexcept>

namespace patholab {

std::vector<HarmonicPolynomial> harmonic_catalog(int n) {
  if (n < 2) throw std::invalid_argument("harmonic_catalog: n >= 2 required");
  std::vector<HarmonicPolynomial> cat;

  cat.push_back({n, 0, "one", [](const VecN&) { return 1.0; },
                 [n](const VecN&) { return VecN(VecN::Zero(n)); }});

  cat.push_back({n, 1, "x1", [](const VecN& x) { return x(0); },
                 [n](const VecN&) {
                   VecN g = VecN::Zero(n);
                   g(0) = 1.0;
                   return g;
                 }});

  cat.push_back({n, 2, "x1x2", [](const VecN& x) { return x(0) * x(1); },
                 [n](const VecN& x) {
                   VecN g = VecN::Zero(n);
                   g(0) = x(1);
                   g(1) = x(0);
                   return g;
                 }});

  cat.push_back({n, 2, "x1^2-x2^2",
                 [](const VecN& x) { return x(0) * x(0) - x(1) * x(1); },
                 [n](const VecN& x) {
                   VecN g = VecN::Zero(n);
                   g(0) = 2.0 * x(0);
                   g(1) = -2.0 * x(1);
                   return g;
                 }});

  // Re((x1 + i x2)^3) = x1^3 - 3 x1 x2^2; harmonic in every dimension.
  cat.push_back({n, 3, "re3",
                 [](const VecN& x) { return x(0) * (x(0) * x(0) - 3.0 * x(1) * x(1)); },
                 [n](const VecN& x) {
                   VecN g = VecN::Zero(n);
                   g(0) = 3.0 * (x(0) * x(0) - x(1) * x(1));
                   g(1) = -6.0 * x(0) * x(1);
                   return g;
                 }});

  if (n >= 3) {
    cat.push_back({n, 3, "x1x2x3",
                   [](const VecN& x) { return x(0) * x(1) * x(2); },
                   [n](const VecN& x) {
                     VecN g = VecN::Zero(n);
                     g(0) = x(1) * x(2);
                     g(1) = x(0) * x(2);
                     g(2) = x(0) * x(1);
                     return g;
                   }});
  }
  return cat;
}

HarmonicPolynomial harmonic_by_id(int n, const std::string& id) {
  for (auto& p : harmonic_catalog(n))
    if (p.id == id) return p;
  throw std::invalid_argument("harmonic_by_id: no catalog entry '" + id + "'");
}

}  // namespace patholab
