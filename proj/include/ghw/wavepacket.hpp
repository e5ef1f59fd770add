#ifndef GHW_WAVEPACKET_HPP
#define GHW_WAVEPACKET_HPP

// Laguerre-Gaussian-type 2D vortex wavepacket, momentum and real space.
//
// Spectrum, in the beam frame (X along propagation):
//   psi~(dkX, kY) ~ [gamma dkX + i sgn(l) kY]^|l| exp{-(D^2/4)[gamma^2 dkX^2 + kY^2]}
// Real space (paraxial, non-diffracting), xi = X - v_g t:
//   psi(xi, Y, t) ~ [gamma^-1 xi + i sgn(l) Y]^|l| exp[-(gamma^-2 xi^2 + Y^2)/D^2 + i k0 X - i w0 t]
// Both are normalized to unit L^2 norm. l = 0 reduces to the plain Gaussian.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghw/barrier.hpp"
#include "ghw/errors.hpp"
#include "ghw/quadrature.hpp"

namespace ghw {

struct PacketSpec {
  double k0 = 0;     // central wavenumber
  double Delta = 0;  // transverse width (Y); X-length is gamma*Delta
  double gamma = 1;  // ellipticity
  int ell = 0;       // vortex topological charge
  double theta = 0;  // incidence angle, radians

  double E0() const { return 0.5 * k0 * k0; }  // = omega0
  double v_g() const { return k0; }

  static PacketSpec make(double k0, double Delta, double gamma, int ell, double theta) {
    PacketSpec p{k0, Delta, gamma, ell, theta};
    if (!(std::isfinite(k0) && k0 > 0)) throw std::invalid_argument("packet: k0 must be > 0");
    if (!(std::isfinite(Delta) && Delta > 0)) throw std::invalid_argument("packet: Delta must be > 0");
    if (!(std::isfinite(gamma) && gamma > 0)) throw std::invalid_argument("packet: gamma must be > 0");
    if (!(std::isfinite(theta) && theta >= 0 && theta < pi / 2))
      throw std::invalid_argument("packet: theta must be in [0, pi/2)");
    if (k0 * Delta < 5.0 || gamma * k0 * Delta < 5.0)
      throw std::invalid_argument("packet: k0*Delta and gamma*k0*Delta must be >= 5 (semiclassical)");
    return p;
  }

  // Paraxiality / size warnings. Hard limits are enforced in make().
  std::vector<std::string> warnings(const BarrierSpec* barrier = nullptr) const {
    std::vector<std::string> w;
    if (k0 * Delta < 20.0) w.push_back("k0*Delta < 20: packet is barely paraxial");
    if (gamma * k0 * Delta < 20.0) w.push_back("gamma*k0*Delta < 20: packet is barely paraxial");
    if (barrier && barrier->type == BarrierType::Rect) {
      if (Delta < 10.0 * barrier->a) w.push_back("Delta < 10 a: packet not much larger than the barrier");
      if (gamma * Delta < 10.0 * barrier->a)
        w.push_back("gamma*Delta < 10 a: packet not much larger than the barrier");
    }
    return w;
  }
};

inline int sgn(int l) { return (l > 0) - (l < 0); }  // sgn(0) = 0

inline complexd pow_int(complexd z, int n) {
  complexd r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// L^2 normalization constants (continuum; grid sums reproduce them to
// quadrature accuracy).
inline double spectrum_norm_constant(const PacketSpec& p) {
  const int L = std::abs(p.ell);
  double fact = 1.0;
  for (int i = 2; i <= L; ++i) fact *= i;
  const double D2 = p.Delta * p.Delta;
  const double integral = std::pow(2.0 / D2, L) * (2.0 * pi * fact) / (p.gamma * D2);
  return 1.0 / std::sqrt(integral);
}

inline double realspace_norm_constant(const PacketSpec& p) {
  const int L = std::abs(p.ell);
  double fact = 1.0;
  for (int i = 2; i <= L; ++i) fact *= i;
  const double D2 = p.Delta * p.Delta;
  const double integral = std::pow(D2 / 2.0, L) * (p.gamma * D2 / 2.0) * pi * fact;
  return 1.0 / std::sqrt(integral);
}

inline complexd spectrum_amplitude(const PacketSpec& p, double dkX, double kY) {
  const int L = std::abs(p.ell);
  const complexd v(p.gamma * dkX, sgn(p.ell) * kY);
  const double arg = -(p.Delta * p.Delta / 4.0) *
                     (p.gamma * p.gamma * dkX * dkX + kY * kY);
  return spectrum_norm_constant(p) * pow_int(v, L) * std::exp(arg);
}

// (d/d dkX, d/d kY) of spectrum_amplitude, in closed form (finite at the core).
struct SpectrumPoint {
  double dkX = 0, kY = 0;
  complexd value{0, 0};
  complexd d_dkX{0, 0}, d_kY{0, 0};
};

inline SpectrumPoint spectrum_point(const PacketSpec& p, double dkX, double kY) {
  SpectrumPoint s;
  s.dkX = dkX;
  s.kY = kY;
  const int L = std::abs(p.ell);
  const double sg = sgn(p.ell);
  const complexd v(p.gamma * dkX, sg * kY);
  const double D2 = p.Delta * p.Delta;
  const double g = std::exp(-(D2 / 4.0) * (p.gamma * p.gamma * dkX * dkX + kY * kY));
  const double N = spectrum_norm_constant(p);
  const complexd vL = pow_int(v, L);
  const complexd vLm = (L > 0) ? pow_int(v, L - 1) : complexd(0, 0);
  s.value = N * vL * g;
  s.d_dkX = N * g * (p.gamma * static_cast<double>(L) * vLm -
                     vL * (D2 / 2.0) * p.gamma * p.gamma * dkX);
  s.d_kY = N * g * (complexd(0, sg * static_cast<double>(L)) * vLm - vL * (D2 / 2.0) * kY);
  return s;
}

inline complexd realspace_amplitude(const PacketSpec& p, double xi, double Y, double t) {
  const int L = std::abs(p.ell);
  const double gi = 1.0 / p.gamma;
  const complexd w(gi * xi, sgn(p.ell) * Y);
  const double D2 = p.Delta * p.Delta;
  const double X = xi + p.v_g() * t;
  const double env = -(gi * gi * xi * xi + Y * Y) / D2;
  const complexd phase(env, p.k0 * X - p.E0() * t);
  return realspace_norm_constant(p) * pow_int(w, L) * std::exp(phase);
}

// (d/d xi, d/d Y) of realspace_amplitude at fixed t (the carrier contributes
// i k0 to d/d xi).
inline std::pair<complexd, complexd> realspace_gradient(const PacketSpec& p, double xi, double Y,
                                                        double t) {
  const int L = std::abs(p.ell);
  const double gi = 1.0 / p.gamma;
  const double sg = sgn(p.ell);
  const complexd w(gi * xi, sg * Y);
  const double D2 = p.Delta * p.Delta;
  const double X = xi + p.v_g() * t;
  const double env = -(gi * gi * xi * xi + Y * Y) / D2;
  const complexd phase(env, p.k0 * X - p.E0() * t);
  const complexd e = realspace_norm_constant(p) * std::exp(phase);
  const complexd wL = pow_int(w, L);
  const complexd wLm = (L > 0) ? pow_int(w, L - 1) : complexd(0, 0);
  const complexd dxi = e * (gi * static_cast<double>(L) * wLm +
                            wL * complexd(-2.0 * gi * gi * xi / D2, p.k0));
  const complexd dY = e * (complexd(0, sg * static_cast<double>(L)) * wLm - wL * (2.0 * Y / D2));
  return {dxi, dY};
}

inline double oam_closed_form(const PacketSpec& p) {
  return 0.5 * (p.gamma + 1.0 / p.gamma) * p.ell;
}

namespace detail {

inline double oam_on_grid(const PacketSpec& p, int n, double half_xi, double half_Y,
                          QuadratureRule rule) {
  const Axis ax = make_axis(rule, n, -half_xi, half_xi);
  const Axis ay = make_axis(rule, n, -half_Y, half_Y);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double num_row = 0.0, den_row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double xi = ax.node[i], Y = ay.node[j];
      const complexd psi = realspace_amplitude(p, xi, Y, 0.0);
      const auto [dxi, dY] = realspace_gradient(p, xi, Y, 0.0);
      const double wgt = ax.weight[i] * ay.weight[j];
      // Im[psi* (X d_Y - Y d_X) psi], X = xi at t = 0
      num_row += wgt * std::imag(std::conj(psi) * (xi * dY - Y * dxi));
      den_row += wgt * std::norm(psi);
    }
    num += num_row;
    den += den_row;
  }
  return num / den;
}

}  // namespace detail

// OAM from the probability-current circulation, Eq.-of-motion normalization
// <L_z> = Int Im[psi* (r x grad)_z psi] / Int |psi|^2 at t = 0.
inline double oam_quadrature(const PacketSpec& p, int n = 129,
                             double extent_sigmas = 8.0,
                             QuadratureRule rule = QuadratureRule::UniformTrapezoid) {
  if (n < 65) throw std::invalid_argument("oam_quadrature: n >= 65 required");
  const int L = std::abs(p.ell);
  const double spread = std::sqrt(1.0 + L);  // vortex ring pushes mass outward
  const double half_xi = extent_sigmas * 0.5 * p.gamma * p.Delta * spread;
  const double half_Y = extent_sigmas * 0.5 * p.Delta * spread;
  const double coarse = detail::oam_on_grid(p, n, half_xi, half_Y, rule);
  const double fine = detail::oam_on_grid(p, 2 * n + 1, half_xi, half_Y, rule);
  const double scale = std::max(std::abs(fine), 1.0);
  if (!std::isfinite(coarse) || !std::isfinite(fine) || std::abs(fine - coarse) > 1e-6 * scale)
    throw GridTooCoarse("oam_quadrature: doubling N changes the result by > 1e-6");
  return fine;
}

// Winding number of arg(f) around a circle of radius r about (cx, cy).
template <typename F>
int winding_number(F&& f, double cx, double cy, double r, int samples = 720) {
  double total = 0.0;
  double prev = std::arg(f(cx + r, cy));
  for (int i = 1; i <= samples; ++i) {
    const double phi = 2.0 * pi * i / samples;
    const double cur = std::arg(f(cx + r * std::cos(phi), cy + r * std::sin(phi)));
    double d = cur - prev;
    while (d > pi) d -= 2.0 * pi;
    while (d <= -pi) d += 2.0 * pi;
    total += d;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

}  // namespace ghw

#endif
