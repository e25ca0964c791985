#include "compatdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace compatdg {

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: need n >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n over [-1,1], then map to [0,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = (n == 1) ? x : p1;
      double pnm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 + x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // [-1,1] weight / 2
  }
}

namespace {

void add_point(QuadratureRule& r, double x, double y, double w) {
  r.points.emplace_back(x, y);
  r.weights.push_back(w);
}

// Symmetric orbit of barycentric coordinates (a,a,1-2a), weight per point.
void add_orbit3(QuadratureRule& r, double a, double w) {
  double b = 1.0 - 2.0 * a;
  add_point(r, a, a, w);
  add_point(r, b, a, w);
  add_point(r, a, b, w);
}

// Classical positive symmetric rules; weights listed sum to 1, scaled by 1/2.
bool tabulated_rule(int exactness, QuadratureRule& r) {
  const double half = 0.5;
  switch (exactness) {
    case 0:
    case 1:
      add_point(r, 1.0 / 3.0, 1.0 / 3.0, half);
      return true;
    case 2:
      add_orbit3(r, 1.0 / 6.0, half / 3.0);
      return true;
    case 3:
    case 4:
      add_orbit3(r, 0.445948490915965, half * 0.223381589678011);
      add_orbit3(r, 0.091576213509771, half * 0.109951743655322);
      return true;
    case 5:
      add_point(r, 1.0 / 3.0, 1.0 / 3.0, half * 0.225);
      add_orbit3(r, 0.470142064105115, half * 0.132394152788506);
      add_orbit3(r, 0.101286507323456, half * 0.125939180544827);
      return true;
    default:
      return false;
  }
}

// Duffy-collapsed tensor Gauss rule: exact for total degree d with
// ceil((d+1)/2) x ceil((d+2)/2) points, all weights positive.
QuadratureRule collapsed_rule(int d) {
  QuadratureRule r;
  r.exactness = d;
  int nu = d / 2 + 1;
  int nv = (d + 1) / 2 + 1;
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre_01(nu, xu, wu);
  gauss_legendre_01(nv, xv, wv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      double v = xv[j];
      double u = xu[i];
      add_point(r, u * (1.0 - v), v, wu[i] * wv[j] * (1.0 - v));
    }
  }
  return r;
}

}  // namespace

QuadratureRule triangle_quadrature(int exactness) {
  if (exactness < 0 || exactness > 40)
    throw std::invalid_argument("triangle_quadrature: unsupported exactness " +
                                std::to_string(exactness));
  QuadratureRule r;
  r.exactness = exactness;
  if (tabulated_rule(exactness, r)) return r;
  return collapsed_rule(exactness);
}

}  // namespace compatdg
