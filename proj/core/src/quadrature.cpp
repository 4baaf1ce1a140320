#include "patholab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace patholab {

namespace {

GaussRule compute_gauss(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_m.
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gauss(m)).first;
  return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int m) {
  const GaussRule& rule = gauss_legendre(m);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace {

// Gauss-Kronrod 7/15 abscissae/weights (positive half; node 0 included once).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double* value,
          double* err) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double f0 = f(mid);
  double resk = wgk[7] * f0;
  double resg = wg[3] * f0;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double fsum = f(mid - dx) + f(mid + dx);
    resk += wgk[j] * fsum;
    if (j % 2 == 1) resg += wg[j / 2] * fsum;
  }
  *value = resk * half;
  *err = std::abs(resk - resg) * std::abs(half);
}

struct Interval {
  double a, b, value, err;
};

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_intervals) {
  std::vector<Interval> stack;
  Interval whole{a, b, 0, 0};
  gk15(f, a, b, &whole.value, &whole.err);
  stack.push_back(whole);
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < stack.size(); ++i) {
      total += stack[i].value;
      err += stack[i].err;
      if (stack[i].err > stack[worst].err) worst = i;
    }
    if (err <= std::max(abs_tol, rel_tol * std::abs(total)) ||
        static_cast<int>(stack.size()) >= max_intervals) {
      if (static_cast<int>(stack.size()) >= max_intervals &&
          err > std::max(abs_tol, rel_tol * std::abs(total)) * 100.0)
        throw QuadratureError("integrate_adaptive: interval budget exhausted");
      return {total, err, static_cast<int>(stack.size())};
    }
    Interval w = stack[worst];
    stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
    const double m = 0.5 * (w.a + w.b);
    Interval left{w.a, m, 0, 0}, right{m, w.b, 0, 0};
    gk15(f, left.a, left.b, &left.value, &left.err);
    gk15(f, right.a, right.b, &right.value, &right.err);
    stack.push_back(left);
    stack.push_back(right);
  }
}

SphereRule sphere_rule(int n, int resolution) {
  SphereRule rule;
  if (n == 2) {
    const int m = std::max(8, resolution);
    rule.nodes.reserve(m);
    rule.weights.assign(m, 2.0 * M_PI / m);
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * M_PI * (i + 0.5) / m;
      VecN v(2);
      v << std::cos(th), std::sin(th);
      rule.nodes.push_back(v);
    }
  } else if (n == 3) {
    const int mp = std::max(6, resolution / 2);
    const int ma = std::max(12, resolution);
    const GaussRule& g = gauss_legendre(mp);
    for (int i = 0; i < mp; ++i) {
      const double c = g.nodes[i];  // cos(theta), integrates dcos exactly
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < ma; ++j) {
        const double ph = 2.0 * M_PI * (j + 0.5) / ma;
        VecN v(3);
        v << c, s * std::cos(ph), s * std::sin(ph);
        rule.nodes.push_back(v);
        rule.weights.push_back(g.weights[i] * 2.0 * M_PI / ma);
      }
    }
  } else {
    throw std::invalid_argument("sphere_rule: only n in {2,3} supported");
  }
  return rule;
}

PolarRule polar_rule(int n, int m) {
  // Substitute t = cos th: the (1-t^2)^{(n-3)/2} weight becomes sin(th)^{n-2},
  // smooth in th for every n >= 2.
  PolarRule rule;
  const GaussRule& g = gauss_legendre(m);
  const double snm2 = surface_area_unit_sphere(n - 1);  // |S^{n-2}|, with |S^0| = 2
  rule.t.resize(m);
  rule.w.resize(m);
  for (int i = 0; i < m; ++i) {
    const double th = 0.5 * M_PI * (g.nodes[i] + 1.0);
    rule.t[i] = std::cos(th);
    rule.w[i] = snm2 * 0.5 * M_PI * g.weights[i] * std::pow(std::sin(th), n - 2);
  }
  return rule;
}

double surface_area_unit_sphere(int n) {
  if (n < 1) throw std::invalid_argument("surface_area_unit_sphere: n >= 1 required");
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace patholab
