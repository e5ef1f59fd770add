#ifndef GHW_QUADRATURE_HPP
#define GHW_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ghw {

enum class QuadratureRule { UniformTrapezoid, GaussLegendre };

struct Axis {
  std::vector<double> node;
  std::vector<double> weight;
};

// Gauss-Legendre nodes/weights on [x1, x2] by Newton iteration on P_n.
inline Axis gauss_legendre_axis(int n, double x1, double x2) {
  Axis ax;
  ax.node.resize(n);
  ax.weight.resize(n);
  const double xm = 0.5 * (x2 + x1);
  const double xl = 0.5 * (x2 - x1);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    ax.node[i] = xm - xl * z;
    ax.node[n - 1 - i] = xm + xl * z;
    ax.weight[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    ax.weight[n - 1 - i] = ax.weight[i];
  }
  return ax;
}

inline Axis trapezoid_axis(int n, double x1, double x2) {
  if (n < 2) throw std::invalid_argument("trapezoid_axis: need n >= 2");
  Axis ax;
  ax.node.resize(n);
  ax.weight.resize(n);
  const double h = (x2 - x1) / (n - 1);
  for (int i = 0; i < n; ++i) {
    ax.node[i] = x1 + h * i;
    ax.weight[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  return ax;
}

inline Axis make_axis(QuadratureRule rule, int n, double x1, double x2) {
  return rule == QuadratureRule::GaussLegendre ? gauss_legendre_axis(n, x1, x2)
                                               : trapezoid_axis(n, x1, x2);
}

}  // namespace ghw

#endif
