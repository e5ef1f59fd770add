#ifndef GHW_BARRIER_HPP
#define GHW_BARRIER_HPP

// Plane-wave scattering on 1D potential barriers in 2D, units hbar = m = 1.
// Energies are k^2/2, group velocities equal wavenumbers. A wave comes in
// from x < 0 at angle theta from the x-axis.
//
// Supported potentials:
//   step  V(x) = V0 Theta(x)
//   delta V(x) = W0 delta(x)
//   rect  V(x) = V0 [Theta(x) - Theta(x-a)]

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "ghw/errors.hpp"

namespace ghw {

using complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

enum class BarrierType { Step, Delta, Rect };
enum class Regime { Propagating, Evanescent };
enum class Channel { Reflected, Transmitted };

struct BarrierSpec {
  BarrierType type = BarrierType::Step;
  double V0 = 0.0;  // step/rect barrier height
  double W0 = 0.0;  // delta strength
  double a = 0.0;   // rect width

  static BarrierSpec step(double V0) {
    require_positive(V0, "step V0");
    BarrierSpec b;
    b.type = BarrierType::Step;
    b.V0 = V0;
    return b;
  }
  static BarrierSpec delta(double W0) {
    require_positive(W0, "delta W0");
    BarrierSpec b;
    b.type = BarrierType::Delta;
    b.W0 = W0;
    return b;
  }
  static BarrierSpec rect(double V0, double a) {
    require_positive(V0, "rect V0");
    require_positive(a, "rect a");
    BarrierSpec b;
    b.type = BarrierType::Rect;
    b.V0 = V0;
    b.a = a;
    return b;
  }

  bool has_inner_medium() const { return type != BarrierType::Delta; }

 private:
  static void require_positive(double x, const char* name) {
    if (!(std::isfinite(x) && x > 0.0))
      throw std::invalid_argument(std::string(name) + " must be finite and > 0");
  }
};

// All central-wave geometry for one (E, theta).
struct PlaneWaveKinematics {
  double E = 0;      // energy = omega
  double theta = 0;  // incidence angle, radians
  double k = 0;      // sqrt(2E)
  double kx = 0;     // k cos(theta)
  double ky = 0;     // k sin(theta)
  Regime regime = Regime::Propagating;

  // Step/rect only. kprime_x is the normal component inside the barrier /
  // second medium; on the evanescent branch kprime_x = i sqrt(2(V0 - E cos^2 th))
  // with Im > 0 (decay into x > 0).
  complexd kprime_x{0.0, 0.0};
  std::optional<double> kprime;       // k' = sqrt(2(E - V0)), defined when E > V0
  std::optional<double> theta_prime;  // refraction angle, propagating regime only
  std::optional<double> theta_c;      // arccos sqrt(V0/E), defined when E > V0

  double v_g = 0;    // incident group velocity = k
  double v_g_t = 0;  // transmitted group velocity: k' for step, k otherwise
};

inline constexpr double grazing_guard_default = 1e-6;  // rad below pi/2

inline PlaneWaveKinematics kinematics(const BarrierSpec& barrier, double E, double theta,
                                      double grazing_guard = grazing_guard_default) {
  if (!(std::isfinite(E) && E > 0.0)) throw std::domain_error("kinematics: E must be finite and > 0");
  if (!(std::isfinite(theta) && theta >= 0.0)) throw std::domain_error("kinematics: theta must be finite and >= 0");
  if (theta >= pi / 2 - grazing_guard) throw std::domain_error("kinematics: theta too close to grazing incidence");

  PlaneWaveKinematics kin;
  kin.E = E;
  kin.theta = theta;
  kin.k = std::sqrt(2.0 * E);
  kin.kx = kin.k * std::cos(theta);
  kin.ky = kin.k * std::sin(theta);
  kin.v_g = kin.k;
  kin.v_g_t = kin.k;

  if (barrier.type == BarrierType::Delta) {
    kin.regime = Regime::Propagating;
    return kin;
  }

  const double V0 = barrier.V0;
  // kprime_x^2 = 2(E cos^2 theta - V0)
  const double w = 2.0 * (E * std::cos(theta) * std::cos(theta) - V0);
  if (E > V0) {
    kin.kprime = std::sqrt(2.0 * (E - V0));
    kin.theta_c = std::acos(std::sqrt(V0 / E));
  }
  if (w > 0.0) {
    kin.regime = Regime::Propagating;
    kin.kprime_x = complexd(std::sqrt(w), 0.0);
    // k' sin(theta') = k sin(theta)
    kin.theta_prime = std::asin(std::min(1.0, kin.ky / *kin.kprime));
  } else {
    kin.regime = Regime::Evanescent;
    kin.kprime_x = complexd(0.0, std::sqrt(-w));
  }
  if (barrier.type == BarrierType::Step) {
    kin.v_g_t = kin.kprime.value_or(0.0);  // no propagating transmitted wave otherwise
  }
  return kin;
}

namespace detail {

// sinc(z) = sin(z)/z and t2(z) = (cos z - sinc z)/z^2, entire in z^2. These keep
// the rect amplitudes and their derivatives regular through kprime_x -> 0.
inline complexd sinc(complexd z) {
  if (std::abs(z) < 1e-4) {
    const complexd z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

inline complexd t2(complexd z) {
  if (std::abs(z) < 1e-3) {
    const complexd z2 = z * z;
    return -1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0;
  }
  return (std::cos(z) - sinc(z)) / (z * z);
}

struct RectParts {
  complexd S, C, Dt;  // sinc(kpx a), cos(kpx a), reduced denominator
  complexd w;         // kprime_x^2
};

inline RectParts rect_parts(double kx, complexd kpx, double a) {
  RectParts p;
  p.w = kpx * kpx;
  const complexd z = kpx * a;
  p.S = sinc(z);
  p.C = std::cos(z);
  // Eq. denominator with one factor kprime_x removed:
  // D = kpx * [ (kx^2 + w) a sinc + 2 i kx cos ]
  p.Dt = (kx * kx + p.w) * a * p.S + complexd(0.0, 2.0 * kx) * p.C;
  return p;
}

}  // namespace detail

// Reflection and transmission amplitudes for the central plane wave.
// Step:  R = (kx - k'x)/(kx + k'x),  T = 2 sqrt(kx k'x)/(kx + k'x); total
//        reflection uses the evanescent k'x, giving |R| = 1 and T = 0.
// Delta: R = -i W0/(kx + i W0),      T = kx/(kx + i W0).
// Rect:  R = (kx^2 - k'x^2) sin(k'x a) / D, T = 2 i kx k'x e^{-i kx a} / D,
//        D = (kx^2 + k'x^2) sin(k'x a) + 2 i kx k'x cos(k'x a).
// All denominators are nonzero for kx > 0. Step: kx + k'x has positive real
// part (propagating) or a positive imaginary part (evanescent). Delta:
// |kx + i W0| >= W0 > 0. Rect, real k'x: |D|^2 = (kx^2 - k'x^2)^2 sin^2 +
// 4 kx^2 k'x^2 >= 4 kx^2 k'x^2 > 0 away from k'x = 0, and D -> kx (kx a + 2i)
// k'x as k'x -> 0; imaginary k'x = i q: |D|^2 = (kx^2 - q^2)^2 sinh^2(qa) +
// 4 kx^2 q^2 cosh^2(qa) > 0.
inline std::pair<complexd, complexd> amplitudes(const BarrierSpec& barrier,
                                                const PlaneWaveKinematics& kin) {
  const double kx = kin.kx;
  switch (barrier.type) {
    case BarrierType::Step: {
      const complexd kpx = kin.kprime_x;
      const complexd R = (kx - kpx) / (kx + kpx);
      if (kin.regime == Regime::Evanescent) return {R, complexd(0.0, 0.0)};
      const double T = 2.0 * std::sqrt(kx * kpx.real()) / (kx + kpx.real());
      return {R, complexd(T, 0.0)};
    }
    case BarrierType::Delta: {
      const complexd den(kx, barrier.W0);
      return {complexd(0.0, -barrier.W0) / den, kx / den};
    }
    case BarrierType::Rect: {
      const auto p = detail::rect_parts(kx, kin.kprime_x, barrier.a);
      const complexd R = (kx * kx - p.w) * barrier.a * p.S / p.Dt;
      const complexd phase = std::exp(complexd(0.0, -kx * barrier.a));
      const complexd T = complexd(0.0, 2.0 * kx) * phase / p.Dt;
      return {R, T};
    }
  }
  throw std::logic_error("unreachable");
}

// Complex amplitudes plus the four logarithmic derivatives used by the shift
// formulas: d ln{R,T}/d theta at fixed E and d ln{R,T}/d E at fixed theta.
struct AmplitudeBundle {
  complexd R{0, 0}, T{0, 0};
  complexd dlnR_dtheta{0, 0}, dlnT_dtheta{0, 0};
  complexd dlnR_dE{0, 0}, dlnT_dE{0, 0};
  bool r_singular = false;  // |R| below floor: R-derivatives not reportable
  bool t_singular = false;

  void require(Channel c) const {
    if (c == Channel::Reflected && r_singular)
      throw SingularAmplitude("log-derivative of R at an amplitude zero");
    if (c == Channel::Transmitted && t_singular)
      throw SingularAmplitude("log-derivative of T at an amplitude zero");
  }
};

inline constexpr double amplitude_floor_default = 1e-10;

inline AmplitudeBundle log_derivatives(const BarrierSpec& barrier, double E, double theta,
                                       double floor = amplitude_floor_default) {
  const PlaneWaveKinematics kin = kinematics(barrier, E, theta);
  AmplitudeBundle out;
  std::tie(out.R, out.T) = amplitudes(barrier, kin);
  out.r_singular = std::abs(out.R) < floor;
  out.t_singular = std::abs(out.T) < floor;

  const double kx = kin.kx;
  const double dkx_dtheta = -kin.ky;            // d(k cos)/dtheta at fixed E
  const double dkx_dE = std::cos(theta) / kin.k;  // d(k cos)/dE at fixed theta

  const auto nan = std::numeric_limits<double>::quiet_NaN();
  const complexd cnan(nan, nan);

  switch (barrier.type) {
    case BarrierType::Delta: {
      // ln R = ln(-i W0) - ln(kx + i W0); ln T = ln kx - ln(kx + i W0)
      const complexd den(kx, barrier.W0);
      const complexd dlnR_dkx = -1.0 / den;
      const complexd dlnT_dkx = 1.0 / kx - 1.0 / den;
      out.dlnR_dtheta = dlnR_dkx * dkx_dtheta;
      out.dlnR_dE = dlnR_dkx * dkx_dE;
      out.dlnT_dtheta = dlnT_dkx * dkx_dtheta;
      out.dlnT_dE = dlnT_dkx * dkx_dE;
      break;
    }
    case BarrierType::Step: {
      const complexd kpx = kin.kprime_x;
      if (std::abs(kpx) < 1e-14) {  // exactly at theta_c: derivatives diverge
        out.r_singular = out.t_singular = true;
        out.dlnR_dtheta = out.dlnR_dE = out.dlnT_dtheta = out.dlnT_dE = cnan;
        break;
      }
      // d kpx/du through kpx^2 = 2(E cos^2 th - V0)
      const complexd dkpx_dtheta = -E * std::sin(2.0 * theta) / kpx;
      const complexd dkpx_dE = std::cos(theta) * std::cos(theta) / kpx;
      auto dln = [&](complexd dkx, complexd dkpx) {
        const complexd dlnR = (dkx - dkpx) / (kx - kpx) - (dkx + dkpx) / (kx + kpx);
        const complexd dlnT = dkx / (2.0 * kx) + dkpx / (2.0 * kpx) - (dkx + dkpx) / (kx + kpx);
        return std::pair{dlnR, dlnT};
      };
      std::tie(out.dlnR_dtheta, out.dlnT_dtheta) = dln(dkx_dtheta, dkpx_dtheta);
      std::tie(out.dlnR_dE, out.dlnT_dE) = dln(dkx_dE, dkpx_dE);
      if (kin.regime == Regime::Evanescent) {
        out.t_singular = true;  // T identically 0
        out.dlnT_dtheta = out.dlnT_dE = cnan;
      }
      break;
    }
    case BarrierType::Rect: {
      // Differentiate through w = kprime_x^2; R and T are analytic in w, so
      // this stays regular where kprime_x -> 0.
      const double aa = barrier.a;
      const auto p = detail::rect_parts(kx, kin.kprime_x, aa);
      const complexd dS_dw = 0.5 * aa * aa * detail::t2(kin.kprime_x * aa);
      const complexd dC_dw = -0.5 * aa * aa * p.S;
      const complexd dDt_dw = aa * p.S + (kx * kx + p.w) * aa * dS_dw + complexd(0, 2.0 * kx) * dC_dw;
      const complexd dDt_dkx = 2.0 * kx * aa * p.S + complexd(0, 2.0) * p.C;
      const complexd dlnR_dw = -1.0 / (kx * kx - p.w) + dS_dw / p.S - dDt_dw / p.Dt;
      const complexd dlnR_dkx = 2.0 * kx / (kx * kx - p.w) - dDt_dkx / p.Dt;
      const complexd dlnT_dw = -dDt_dw / p.Dt;
      const complexd dlnT_dkx = 1.0 / kx - complexd(0.0, aa) - dDt_dkx / p.Dt;
      const double c = std::cos(theta);
      const double dw_dtheta = -2.0 * E * std::sin(2.0 * theta);
      const double dw_dE = 2.0 * c * c;
      out.dlnR_dtheta = dlnR_dkx * dkx_dtheta + dlnR_dw * dw_dtheta;
      out.dlnR_dE = dlnR_dkx * dkx_dE + dlnR_dw * dw_dE;
      out.dlnT_dtheta = dlnT_dkx * dkx_dtheta + dlnT_dw * dw_dtheta;
      out.dlnT_dE = dlnT_dkx * dkx_dE + dlnT_dw * dw_dE;
      break;
    }
  }
  if (out.r_singular) out.dlnR_dtheta = out.dlnR_dE = cnan;
  if (out.t_singular) out.dlnT_dtheta = out.dlnT_dE = cnan;
  return out;
}

// Plain amplitude derivatives dR/du, dT/du (not logarithmic), finite across
// amplitude zeros. Used by the momentum-space engine, which needs gradients
// of R, T per plane wave even where a log-derivative would diverge.
struct AmplitudeGradients {
  complexd R{0, 0}, T{0, 0};
  complexd dR_dtheta{0, 0}, dT_dtheta{0, 0};
  complexd dR_dE{0, 0}, dT_dE{0, 0};
};

inline AmplitudeGradients amplitude_gradients(const BarrierSpec& barrier, double E, double theta) {
  const PlaneWaveKinematics kin = kinematics(barrier, E, theta);
  AmplitudeGradients out;
  std::tie(out.R, out.T) = amplitudes(barrier, kin);
  const double kx = kin.kx;
  const double dkx_dtheta = -kin.ky;
  const double dkx_dE = std::cos(theta) / kin.k;

  switch (barrier.type) {
    case BarrierType::Delta: {
      const complexd den(kx, barrier.W0);
      const complexd dR_dkx = complexd(0.0, barrier.W0) / (den * den);
      const complexd dT_dkx = complexd(0.0, barrier.W0) / (den * den);
      out.dR_dtheta = dR_dkx * dkx_dtheta;
      out.dR_dE = dR_dkx * dkx_dE;
      out.dT_dtheta = dT_dkx * dkx_dtheta;
      out.dT_dE = dT_dkx * dkx_dE;
      break;
    }
    case BarrierType::Step: {
      const complexd kpx = kin.kprime_x;
      const complexd sum = kx + kpx;
      // R = (kx - kpx)/(kx + kpx): dR = [2 kpx dkx - 2 kx dkpx]/(kx+kpx)^2
      if (std::abs(kpx) < 1e-14) break;  // exactly theta_c: gradients diverge
      const complexd dkpx_dtheta = -E * std::sin(2.0 * theta) / kpx;
      const complexd dkpx_dE = std::cos(theta) * std::cos(theta) / kpx;
      auto dR = [&](complexd dkx, complexd dkpx) {
        return (2.0 * kpx * dkx - 2.0 * kx * dkpx) / (sum * sum);
      };
      out.dR_dtheta = dR(dkx_dtheta, dkpx_dtheta);
      out.dR_dE = dR(dkx_dE, dkpx_dE);
      if (kin.regime == Regime::Propagating) {
        auto dT = [&](complexd dkx, complexd dkpx) {
          // T = 2 sqrt(kx kpx)/(kx + kpx)
          return out.T * (dkx / (2.0 * kx) + dkpx / (2.0 * kpx) - (dkx + dkpx) / sum);
        };
        out.dT_dtheta = dT(dkx_dtheta, dkpx_dtheta);
        out.dT_dE = dT(dkx_dE, dkpx_dE);
      }
      break;
    }
    case BarrierType::Rect: {
      const double aa = barrier.a;
      const auto p = detail::rect_parts(kx, kin.kprime_x, aa);
      const complexd dS_dw = 0.5 * aa * aa * detail::t2(kin.kprime_x * aa);
      const complexd dC_dw = -0.5 * aa * aa * p.S;
      const complexd dDt_dw = aa * p.S + (kx * kx + p.w) * aa * dS_dw + complexd(0, 2.0 * kx) * dC_dw;
      const complexd dDt_dkx = 2.0 * kx * aa * p.S + complexd(0, 2.0) * p.C;
      // R = NR/Dt, NR = (kx^2 - w) a S; quotient rule keeps R = 0 regular
      const complexd NR = (kx * kx - p.w) * aa * p.S;
      const complexd dNR_dw = -aa * p.S + (kx * kx - p.w) * aa * dS_dw;
      const complexd dNR_dkx = 2.0 * kx * aa * p.S;
      auto dR = [&](double dkx, double dw) {
        return ((dNR_dkx * dkx + dNR_dw * dw) * p.Dt - NR * (dDt_dkx * dkx + dDt_dw * dw)) /
               (p.Dt * p.Dt);
      };
      // T = 2 i kx e^{-i kx a}/Dt
      const complexd phase = std::exp(complexd(0.0, -kx * aa));
      auto dT = [&](double dkx, double dw) {
        const complexd dNT = complexd(0.0, 2.0) * phase * dkx +
                             complexd(0.0, 2.0 * kx) * phase * complexd(0.0, -aa) * dkx;
        return (dNT * p.Dt - complexd(0.0, 2.0 * kx) * phase * (dDt_dkx * dkx + dDt_dw * dw)) /
               (p.Dt * p.Dt);
      };
      const double c = std::cos(theta);
      const double dw_dtheta = -2.0 * E * std::sin(2.0 * theta);
      const double dw_dE = 2.0 * c * c;
      out.dR_dtheta = dR(dkx_dtheta, dw_dtheta);
      out.dR_dE = dR(dkx_dE, dw_dE);
      out.dT_dtheta = dT(dkx_dtheta, dw_dtheta);
      out.dT_dE = dT(dkx_dE, dw_dE);
      break;
    }
  }
  return out;
}

// Diagnostic: recompute each log-derivative by central finite differences and
// return the maximum relative deviation from the closed forms. Shift formulas
// are extremely sensitive near amplitude zeros, so the analytic path is the
// primary one and this exists as a check.
inline double log_derivative_fd_deviation(const BarrierSpec& barrier, double E, double theta,
                                          double rel_step = 1e-6) {
  const AmplitudeBundle b = log_derivatives(barrier, E, theta);
  const double h_th = rel_step;        // theta scale ~ 1 rad
  const double h_E = rel_step * E;
  auto amp = [&](double Ee, double th) {
    return amplitudes(barrier, kinematics(barrier, Ee, th));
  };
  const auto [Rp_th, Tp_th] = amp(E, theta + h_th);
  const auto [Rm_th, Tm_th] = amp(E, theta - h_th);
  const auto [Rp_E, Tp_E] = amp(E + h_E, theta);
  const auto [Rm_E, Tm_E] = amp(E - h_E, theta);

  // (f+ - f-)/(2h f0) rather than differencing log(f), which can jump branches.
  auto fd = [](complexd fp, complexd fm, complexd f0, double h) { return (fp - fm) / (2.0 * h * f0); };
  double worst = 0.0;
  auto check = [&](complexd analytic, complexd numeric) {
    const double scale = std::max(std::abs(analytic), 1e-30);
    worst = std::max(worst, std::abs(analytic - numeric) / scale);
  };
  if (!b.r_singular) {
    check(b.dlnR_dtheta, fd(Rp_th, Rm_th, b.R, h_th));
    check(b.dlnR_dE, fd(Rp_E, Rm_E, b.R, h_E));
  }
  if (!b.t_singular) {
    check(b.dlnT_dtheta, fd(Tp_th, Tm_th, b.T, h_th));
    check(b.dlnT_dE, fd(Tp_E, Tm_E, b.T, h_E));
  }
  return worst;
}

}  // namespace ghw

#endif
