#ifndef GHW_SHIFTS_ANALYTIC_HPP
#define GHW_SHIFTS_ANALYTIC_HPP

// Closed-form Goos-Haenchen shifts and Wigner time delays of scattered
// wavepackets, per channel (reflected r, transmitted t):
//
//   linear  : <Y>  (transverse position), <tau> (time delay; <xi> = -v_g <tau>)
//   angular : <kY> (transverse momentum),  <eps> (energy; <dkX> = <eps>/v_g)
//
// Gaussian parts are the Artmann / Wigner expressions in the log-derivatives
// of R, T. A vortex of charge l amplifies the angular shifts by (1+|l|) and
// couples the orthogonal degrees of freedom, producing linear shifts and time
// delays even for purely real amplitudes. Refraction at a step adds A,B,C,D
// correction terms for the transmitted packet.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ghw/barrier.hpp"
#include "ghw/wavepacket.hpp"

namespace ghw {

struct ShiftAddends {
  double gaussian = 0, vortex = 0, correction = 0;
  bool valid = true;  // false when a singular amplitude made the values NaN
  double total() const { return gaussian + vortex + correction; }
};

struct ChannelShifts {
  bool present = true;
  bool singular = false;  // inside a divergence band or at an amplitude zero
  double v_g = 0;         // channel group velocity
  ShiftAddends Y, kY, tau, eps;

  // Exact identities: <xi> = -v_g <tau>, <dkX> = <eps>/v_g, per addend.
  double xi_total() const { return -v_g * tau.total(); }
  double dkX_total() const { return eps.total() / v_g; }
};

struct ShiftReport {
  ChannelShifts r, t;
  const ChannelShifts& channel(Channel c) const { return c == Channel::Reflected ? r : t; }
  ChannelShifts& channel(Channel c) { return c == Channel::Reflected ? r : t; }
};

// Auxiliary quantities of the step-refraction kinematic expansion:
//   A = cot^2(th) f,  B = f,  C = -2 cot(th) f,  D = (cos th_t / sin th) f,
//   f = 1 - cos^2(th)/cos^2(th_t).
// Using sin(th_t) = sqrt(mu) sin(th), mu = E/(E-V0), f rewrites to
// f = sin^2(th) (1-mu)/(1 - mu sin^2 th), which evaluates the th -> 0 limits
// exactly (A -> -V0/(E-V0), B = C = D = 0) without 0/0 forms.
struct AbcdCoefficients {
  double A = 0, B = 0, C = 0, D = 0;
};

inline AbcdCoefficients abcd_coefficients(double E, double V0, double theta) {
  if (V0 == 0.0) return {};
  if (!(E > V0)) throw std::domain_error("abcd_coefficients: requires E > V0");
  const double mu = E / (E - V0);
  const double s = std::sin(theta), c = std::cos(theta);
  const double cos2_t = 1.0 - mu * s * s;  // cos^2(theta_t)
  if (cos2_t <= 0.0) throw std::domain_error("abcd_coefficients: total reflection, theta_t undefined");
  const double g = (1.0 - mu) / cos2_t;
  AbcdCoefficients q;
  q.A = c * c * g;
  q.B = s * s * g;
  q.C = -2.0 * s * c * g;
  q.D = std::sqrt(cos2_t) * s * g;
  return q;
}

inline constexpr double singular_band_scale = 5.0;  // band half-width = 5/(k0 Delta)

struct SingularAngle {
  double theta = 0;
  bool affects_r = true, affects_t = true;
};

// Angles (radians) where analytic shift formulas diverge: theta_c for a step
// (both channels), reflection zeros k'x a = n pi for a rectangle (reflected
// channel only). Empty for a delta barrier.
inline std::vector<SingularAngle> singular_angles(const BarrierSpec& barrier, double E) {
  std::vector<SingularAngle> out;
  if (barrier.type == BarrierType::Step) {
    if (E > barrier.V0) out.push_back({std::acos(std::sqrt(barrier.V0 / E)), true, true});
  } else if (barrier.type == BarrierType::Rect) {
    for (int n = 1;; ++n) {
      const double kpx = n * pi / barrier.a;
      const double c2 = (barrier.V0 + 0.5 * kpx * kpx) / E;
      if (c2 > 1.0) break;
      out.push_back({std::acos(std::sqrt(c2)), true, false});
    }
  }
  return out;
}

namespace detail {

struct ShiftGeometry {
  PlaneWaveKinematics kin;
  AmplitudeBundle amps;
  double theta_t = 0;    // theta' for a step, theta otherwise
  double cos_t = 1;      // cos(theta_t)
  double sin_t = 0;
  double k0t = 0;  // transmitted central wavenumber
  bool t_present = true;
  bool in_band_r = false;  // within a divergence band affecting the channel
  bool in_band_t = false;
};

inline ShiftGeometry shift_geometry(const BarrierSpec& barrier, const PacketSpec& packet) {
  ShiftGeometry g;
  g.kin = kinematics(barrier, packet.E0(), packet.theta);
  g.amps = log_derivatives(barrier, packet.E0(), packet.theta);
  g.k0t = packet.k0;
  g.theta_t = packet.theta;
  if (barrier.type == BarrierType::Step) {
    g.t_present = (g.kin.regime == Regime::Propagating);
    if (g.t_present) {
      g.theta_t = *g.kin.theta_prime;
      g.k0t = *g.kin.kprime;
    }
  }
  g.cos_t = std::cos(g.theta_t);
  g.sin_t = std::sin(g.theta_t);
  const double band = singular_band_scale / (packet.k0 * packet.Delta);
  for (const SingularAngle& sa : singular_angles(barrier, packet.E0()))
    if (std::abs(packet.theta - sa.theta) < band) {
      g.in_band_r = g.in_band_r || sa.affects_r;
      g.in_band_t = g.in_band_t || sa.affects_t;
    }
  return g;
}

inline void apply_flags(ShiftReport& rep, const ShiftGeometry& g) {
  rep.r.present = true;
  rep.r.v_g = g.kin.v_g;
  rep.t.present = g.t_present;
  rep.t.v_g = g.kin.v_g_t;
  rep.r.singular = g.in_band_r || g.amps.r_singular;
  rep.t.singular = g.t_present && (g.in_band_t || g.amps.t_singular);
  auto mark = [](ChannelShifts& ch, bool bad) {
    if (bad) ch.Y.valid = ch.kY.valid = ch.tau.valid = ch.eps.valid = false;
  };
  mark(rep.r, g.amps.r_singular);
  mark(rep.t, g.t_present && g.amps.t_singular);
}

}  // namespace detail

// Artmann / Wigner shifts of a Gaussian (no-vortex) packet: gaussian addends.
inline ShiftReport gaussian_shifts(const BarrierSpec& barrier, const PacketSpec& packet) {
  const auto g = detail::shift_geometry(barrier, packet);
  ShiftReport rep;
  detail::apply_flags(rep, g);
  const double k0 = packet.k0, D2 = packet.Delta * packet.Delta;
  const double c = std::cos(packet.theta);
  const double g2D2 = packet.gamma * packet.gamma * D2;

  rep.r.Y.gaussian = std::imag(g.amps.dlnR_dtheta) / k0;
  rep.r.kY.gaussian = -2.0 * std::real(g.amps.dlnR_dtheta) / (k0 * D2);
  rep.r.tau.gaussian = std::imag(g.amps.dlnR_dE);
  rep.r.eps.gaussian = 2.0 * k0 * k0 * std::real(g.amps.dlnR_dE) / g2D2;

  if (rep.t.present) {
    rep.t.Y.gaussian = -(g.cos_t / (k0 * c)) * std::imag(g.amps.dlnT_dtheta);
    rep.t.kY.gaussian = (2.0 * c / (k0 * D2 * g.cos_t)) * std::real(g.amps.dlnT_dtheta);
    rep.t.tau.gaussian = std::imag(g.amps.dlnT_dE);
    rep.t.eps.gaussian = 2.0 * k0 * k0 * std::real(g.amps.dlnT_dE) / g2D2;
  }
  return rep;
}

// Vortex-induced addends. Angular shifts gain the factor |l| on top of the
// Gaussian values; the vortex structure converts the *angular* Gaussian
// shifts into *linear* shifts of the orthogonal coordinate, which survive
// even when the amplitudes are purely real. On reflection the vortex charge
// flips to -l; on step transmission the packet ellipticity rescales by
// gamma_t = (k_t cos th_t)/(k cos th) * gamma (the transmitted packet is
// shorter by k_t/k and narrower by cos th_t/cos th).
inline ShiftReport vortex_shifts(const BarrierSpec& barrier, const PacketSpec& packet) {
  const auto g = detail::shift_geometry(barrier, packet);
  ShiftReport rep;
  detail::apply_flags(rep, g);
  if (packet.ell == 0) return rep;

  const ShiftReport base = gaussian_shifts(barrier, packet);
  const int l = packet.ell, al = std::abs(l);
  const double D2 = packet.Delta * packet.Delta;
  const double gm = packet.gamma;

  rep.r.kY.vortex = al * base.r.kY.gaussian;
  rep.r.eps.vortex = al * base.r.eps.gaussian;
  rep.r.tau.vortex = l * gm * (D2 / (2.0 * rep.r.v_g)) * base.r.kY.gaussian;
  rep.r.Y.vortex = l * gm * (D2 / (2.0 * rep.r.v_g)) * base.r.eps.gaussian;

  if (rep.t.present) {
    // medium factor (k_t cos th_t)/(k cos th); unity for delta/rect
    const double f = (g.k0t * g.cos_t) / (packet.k0 * std::cos(packet.theta));
    rep.t.kY.vortex = al * base.t.kY.gaussian;
    rep.t.eps.vortex = al * base.t.eps.gaussian;
    rep.t.tau.vortex = -l * gm * (D2 / (2.0 * rep.t.v_g)) * f * base.t.kY.gaussian;
    rep.t.Y.vortex = -l * gm * (D2 / (2.0 * rep.t.v_g)) * f * base.t.eps.gaussian;
  }
  return rep;
}

// A,B,C,D corrections for refraction at a step: correction addends of the
// transmitted channel (identically zero for every other channel/barrier).
// The (1+|l|) terms displace even Gaussian packets; the B and A terms are
// vortex-only; the D terms couple the energy/position shifts across axes.
inline ShiftReport step_transmission_corrections(const BarrierSpec& barrier,
                                                 const PacketSpec& packet) {
  const auto g = detail::shift_geometry(barrier, packet);
  ShiftReport rep;
  detail::apply_flags(rep, g);
  if (barrier.type != BarrierType::Step || !rep.t.present) return rep;

  const auto q = abcd_coefficients(packet.E0(), barrier.V0, packet.theta);
  const ShiftReport base = gaussian_shifts(barrier, packet);
  const ShiftReport vort = vortex_shifts(barrier, packet);
  const int l = packet.ell;
  const double j = 1.0 + std::abs(l);
  const double k0 = packet.k0, D2 = packet.Delta * packet.Delta;
  const double gm = packet.gamma, c = std::cos(packet.theta);
  const double G2 = q.A / (gm * gm) + q.B;
  const double vt = rep.t.v_g;

  rep.t.kY.correction = q.D * (base.t.eps.gaussian + vort.t.eps.vortex) / packet.v_g() -
                        (j / D2) * (g.sin_t / g.cos_t) / (2.0 * g.k0t) * G2;
  rep.t.eps.correction = (j / (2.0 * D2)) * G2;
  rep.t.Y.correction = -(gm * l / (2.0 * k0)) * (g.cos_t / c) * q.B;
  rep.t.tau.correction = q.D * (base.t.Y.gaussian + vort.t.Y.vortex) / vt +
                         (l / (2.0 * gm * vt * k0)) * (g.sin_t / c) * q.A;
  return rep;
}

// Sum of the three addend groups per field; flags propagate.
inline ShiftReport total_shifts(const BarrierSpec& barrier, const PacketSpec& packet) {
  ShiftReport rep = gaussian_shifts(barrier, packet);
  const ShiftReport v = vortex_shifts(barrier, packet);
  const ShiftReport c = step_transmission_corrections(barrier, packet);
  for (Channel ch : {Channel::Reflected, Channel::Transmitted}) {
    ChannelShifts& o = rep.channel(ch);
    const ChannelShifts& cv = v.channel(ch);
    const ChannelShifts& cc = c.channel(ch);
    o.Y.vortex = cv.Y.vortex;
    o.kY.vortex = cv.kY.vortex;
    o.tau.vortex = cv.tau.vortex;
    o.eps.vortex = cv.eps.vortex;
    o.Y.correction = cc.Y.correction;
    o.kY.correction = cc.kY.correction;
    o.tau.correction = cc.tau.correction;
    o.eps.correction = cc.eps.correction;
    o.singular = o.singular || cv.singular || cc.singular;
  }
  return rep;
}

}  // namespace ghw

#endif
