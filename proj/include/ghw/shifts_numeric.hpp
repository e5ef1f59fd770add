#ifndef GHW_SHIFTS_NUMERIC_HPP
#define GHW_SHIFTS_NUMERIC_HPP

// Momentum-space expectation-value engine. Builds the scattered spectrum
// plane wave by plane wave, psi~_c(k) = {R,T}(k) psi~(k), then evaluates
//
//   <Y_c>   = Re < psi_c | i d/d kY_c   | psi_c > / <psi_c|psi_c>
//   <xi_c>  = Re < psi_c | i d/d dkX_c  | psi_c > / <psi_c|psi_c>
//   <kY_c>  = < psi_c | kY_c  | psi_c > / <psi_c|psi_c>
//   <dkX_c> = < psi_c | dkX_c | psi_c > / <psi_c|psi_c>
//
// on the incident-frame grid (dkX, kY). Channel-frame coordinates and
// derivative operators are rewritten in incident-frame terms:
//   reflected   : dkX_r = dkX, kY_r = -kY; d/d dkX_r = d/d dkX, d/d kY_r = -d/d kY
//   transmitted : second-order kinematic map with A,B,C,D coefficients (step);
//                 Simplified mode keeps only the leading linear factors.
// Derivatives of the integrand are analytic (spectrum gradients plus closed
// form amplitude gradients); variable-coefficient operators carry the
// (i/2) div g counterterm that makes them Hermitian, which leaves the real
// parts untouched and keeps the imaginary residuals at quadrature noise.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "ghw/barrier.hpp"
#include "ghw/errors.hpp"
#include "ghw/quadrature.hpp"
#include "ghw/shifts_analytic.hpp"
#include "ghw/wavepacket.hpp"

namespace ghw {

enum class AmplitudeModel { Exact, FirstOrderTaylor };
enum class KinematicsModel { Full, Simplified };

struct ScatterMode {
  AmplitudeModel amplitude = AmplitudeModel::Exact;
  KinematicsModel kinematics = KinematicsModel::Full;
};

struct QuadratureGrid {
  int nx = 257, ny = 257;      // odd point counts >= 65
  double extent_sigmas = 6.0;  // half-extent in units of sigma_X = sqrt2/(gamma D), sigma_Y = sqrt2/D
  QuadratureRule rule = QuadratureRule::UniformTrapezoid;

  void validate() const {
    if (nx < 65 || ny < 65 || nx % 2 == 0 || ny % 2 == 0)
      throw std::invalid_argument("QuadratureGrid: point counts must be odd and >= 65");
    if (extent_sigmas < 6.0) throw std::invalid_argument("QuadratureGrid: extent must cover >= 6 sigma");
    if (2.0 * extent_sigmas / (std::min(nx, ny) - 1) >= 1.0 / 8.0)
      throw std::invalid_argument("QuadratureGrid: spacing must stay below sigma/8");
  }
};

inline constexpr double evanescent_leakage_tol = 1e-6;
inline constexpr double channel_norm_floor = 1e-30;

// Transmitted-frame geometry of the central wave plus A,B,C,D (zeros unless a
// step in Full mode; for delta/rect the transmitted frame equals the incident).
struct TransmitGeometry {
  bool present = true;
  double k0t = 0, theta_t = 0, cos_t = 1, sin_t = 0;
  double p = 1;  // k0/k0t  (Eq. map: dkX_t ~ p dkX)
  double q = 1;  // cos(theta)/cos(theta_t)  (kY_t ~ q kY)
  AbcdCoefficients abcd;
};

inline TransmitGeometry transmit_geometry(const BarrierSpec& barrier, const PacketSpec& packet,
                                          KinematicsModel model) {
  TransmitGeometry g;
  g.k0t = packet.k0;
  g.theta_t = packet.theta;
  if (barrier.type == BarrierType::Step) {
    const auto kin = kinematics(barrier, packet.E0(), packet.theta);
    if (kin.regime != Regime::Propagating) {
      g.present = false;
      return g;
    }
    g.k0t = *kin.kprime;
    g.theta_t = *kin.theta_prime;
    if (model == KinematicsModel::Full)
      g.abcd = abcd_coefficients(packet.E0(), barrier.V0, packet.theta);
  }
  g.cos_t = std::cos(g.theta_t);
  g.sin_t = std::sin(g.theta_t);
  g.p = packet.k0 / g.k0t;
  g.q = std::cos(packet.theta) / g.cos_t;
  return g;
}

// Channel-frame wavevector offsets for one incident-frame point.
// Reflected: (dkX, -kY). Transmitted (step):
//   dkX_t = p dkX + (A dkX^2 + B kY^2 + C dkX kY)/(2 k0t)
//   kY_t  = q kY + D dkX - tan(th_t)/(2 k0t) (A dkX^2 + B kY^2 + C dkX kY)
// with A..D = 0 in Simplified mode (and identically for delta/rect).
inline std::pair<double, double> kinematic_map(const BarrierSpec& barrier, const PacketSpec& packet,
                                               Channel channel, KinematicsModel model,
                                               double dkX, double kY) {
  if (channel == Channel::Reflected) return {dkX, -kY};
  const TransmitGeometry g = transmit_geometry(barrier, packet, model);
  if (!g.present) throw std::domain_error("kinematic_map: no propagating transmitted wave");
  const double quad = g.abcd.A * dkX * dkX + g.abcd.B * kY * kY + g.abcd.C * dkX * kY;
  const double dkXt = g.p * dkX + quad / (2.0 * g.k0t);
  const double kYt = g.q * kY + g.abcd.D * dkX - (g.sin_t / g.cos_t) / (2.0 * g.k0t) * quad;
  return {dkXt, kYt};
}

struct ScatteredSpectrum {
  Channel channel = Channel::Reflected;
  ScatterMode mode;
  BarrierSpec barrier;
  PacketSpec packet;
  TransmitGeometry tgeom;
  Axis ax, ay;                        // dkX and kY axes with quadrature weights
  std::vector<complexd> value;        // row-major [i * ny + j]
  std::vector<complexd> d_dkX, d_kY;  // analytic partials wrt incident dkX, kY
  double norm = 0;                    // sum w |value|^2
  double incident_norm = 0;           // sum w |psi~|^2
  double evanescent_power = 0;        // incident-power fraction assigned T = 0

  int nx() const { return static_cast<int>(ax.node.size()); }
  int ny() const { return static_cast<int>(ay.node.size()); }
};

inline ScatteredSpectrum scattered_spectrum(const BarrierSpec& barrier, const PacketSpec& packet,
                                            Channel channel, ScatterMode mode,
                                            const QuadratureGrid& grid,
                                            double leakage_tol = evanescent_leakage_tol) {
  grid.validate();
  ScatteredSpectrum out;
  out.channel = channel;
  out.mode = mode;
  out.barrier = barrier;
  out.packet = packet;
  out.tgeom = transmit_geometry(barrier, packet, mode.kinematics);
  if (channel == Channel::Transmitted && !out.tgeom.present)
    throw NormCollapse("scattered_spectrum: transmitted channel absent (total reflection)");

  const double sX = std::sqrt(2.0) / (packet.gamma * packet.Delta);
  const double sY = std::sqrt(2.0) / packet.Delta;
  out.ax = make_axis(grid.rule, grid.nx, -grid.extent_sigmas * sX, grid.extent_sigmas * sX);
  out.ay = make_axis(grid.rule, grid.ny, -grid.extent_sigmas * sY, grid.extent_sigmas * sY);

  const int nx = grid.nx, ny = grid.ny;
  out.value.assign(static_cast<size_t>(nx) * ny, complexd(0, 0));
  out.d_dkX.assign(out.value.size(), complexd(0, 0));
  out.d_kY.assign(out.value.size(), complexd(0, 0));

  // First-order Taylor coefficients about the central wave:
  // S(k) ~ S0 [1 + k0 (dlnS/dE) dkX + (1/k0)(dlnS/dth) kY].
  complexd S0(0, 0), cX(0, 0), cY(0, 0);
  if (mode.amplitude == AmplitudeModel::FirstOrderTaylor) {
    const AmplitudeBundle b = log_derivatives(barrier, packet.E0(), packet.theta);
    S0 = channel == Channel::Reflected ? b.R : b.T;
    const complexd dE = channel == Channel::Reflected ? b.dlnR_dE : b.dlnT_dE;
    const complexd dth = channel == Channel::Reflected ? b.dlnR_dtheta : b.dlnT_dtheta;
    cX = packet.k0 * dE;
    cY = dth / packet.k0;
    if (!std::isfinite(std::abs(cX)) || !std::isfinite(std::abs(cY)))
      throw SingularAmplitude("scattered_spectrum: Taylor expansion at an amplitude zero");
  }

  double norm = 0, inc_norm = 0, evan = 0;
  for (int i = 0; i < nx; ++i) {
    double norm_row = 0, inc_row = 0, evan_row = 0;
    for (int j = 0; j < ny; ++j) {
      const double dkX = out.ax.node[i], kY = out.ay.node[j];
      const double w = out.ax.weight[i] * out.ay.weight[j];
      const SpectrumPoint sp = spectrum_point(packet, dkX, kY);
      const double kX = packet.k0 + dkX;
      inc_row += w * std::norm(sp.value);

      complexd S, dS_dkX, dS_kY;
      if (mode.amplitude == AmplitudeModel::FirstOrderTaylor) {
        S = S0 * (1.0 + cX * dkX + cY * kY);
        dS_dkX = S0 * cX;
        dS_kY = S0 * cY;
      } else {
        const double Ek = 0.5 * (kX * kX + kY * kY);
        const double th_k = packet.theta + std::atan2(kY, kX);
        if (std::abs(th_k) >= pi / 2 - grazing_guard_default)
          throw std::domain_error("scattered_spectrum: grid point not a propagating incident wave");
        bool zero_weight = false;
        if (channel == Channel::Transmitted && barrier.type == BarrierType::Step) {
          const double ck = std::cos(th_k);
          if (Ek * ck * ck <= barrier.V0) {  // evanescent: no propagating transmitted wave
            evan_row += w * std::norm(sp.value);
            zero_weight = true;
          }
        }
        if (!zero_weight) {
          // Amplitudes are even in the incidence angle; evaluate at |th_k| and
          // flip the sign of the odd theta-derivative.
          const double sign_th = th_k < 0 ? -1.0 : 1.0;
          const AmplitudeGradients gA = amplitude_gradients(barrier, Ek, std::abs(th_k));
          const complexd s = channel == Channel::Reflected ? gA.R : gA.T;
          const complexd ds_dE = channel == Channel::Reflected ? gA.dR_dE : gA.dT_dE;
          const complexd ds_dth =
              sign_th * (channel == Channel::Reflected ? gA.dR_dtheta : gA.dT_dtheta);
          const double r2 = kX * kX + kY * kY;
          const double dE_dkX = kX, dE_kY = kY;
          const double dth_dkX = -kY / r2, dth_kY = kX / r2;
          S = s;
          dS_dkX = ds_dE * dE_dkX + ds_dth * dth_dkX;
          dS_kY = ds_dE * dE_kY + ds_dth * dth_kY;
        } else {
          S = dS_dkX = dS_kY = complexd(0, 0);
        }
      }
      const size_t idx = static_cast<size_t>(i) * ny + j;
      out.value[idx] = S * sp.value;
      out.d_dkX[idx] = dS_dkX * sp.value + S * sp.d_dkX;
      out.d_kY[idx] = dS_kY * sp.value + S * sp.d_kY;
      norm_row += w * std::norm(out.value[idx]);
    }
    norm += norm_row;
    inc_norm += inc_row;
    evan += evan_row;
  }
  out.norm = norm;
  out.incident_norm = inc_norm;
  out.evanescent_power = evan / inc_norm;
  if (out.evanescent_power > leakage_tol)
    throw EvanescentLeakage(
        "scattered_spectrum: evanescent plane waves carry more than tolerated spectral power");
  return out;
}

struct ChannelExpectation {
  bool present = true;
  double norm = 0;
  double Y = 0, xi = 0, kY = 0, dkX = 0;
  double tau = 0, eps = 0;  // tau = -xi/v_g_c, eps = v_g_c dkX
  double v_g = 0;
  double im_Y = 0, im_xi = 0;  // imaginary residuals of the operator expectations
};

inline ChannelExpectation expectation_shifts(const ScatteredSpectrum& s,
                                             double norm_floor = channel_norm_floor) {
  if (!(s.norm > norm_floor)) throw NormCollapse("expectation_shifts: channel norm below floor");
  const TransmitGeometry& g = s.tgeom;
  const bool refl = s.channel == Channel::Reflected;
  const AbcdCoefficients ab = g.abcd;  // zeros unless step transmission, Full mode
  const double k0 = s.packet.k0;
  const double c = std::cos(s.packet.theta);

  // Operator coefficients, incident-frame:
  //   i d/d kY_t  = i [ (1/q) d_kY - (cos th_t/(k0 c)) (B kY + C dkX) d_dkX ] + (i/2) divY
  //   i d/d dkX_t = i [ (1/p) d_dkX + (-(D/q) + (sin th_t/(k0 c)) (A dkX + C kY)) d_kY ] + (i/2) divX
  const double cot_factor = refl ? 0.0 : g.cos_t / (k0 * c);
  const double sot_factor = refl ? 0.0 : g.sin_t / (k0 * c);
  const double divY = -ab.C * cot_factor;
  const double divX = ab.C * sot_factor;
  const double gY_y = refl ? -1.0 : 1.0 / g.q;
  const double gX_x = refl ? 1.0 : 1.0 / g.p;
  const bool full = s.mode.kinematics == KinematicsModel::Full;

  complexd numY(0, 0), numX(0, 0);
  double numkY = 0, numdkX = 0, norm = 0;
  const int nx = s.nx(), ny = s.ny();
  for (int i = 0; i < nx; ++i) {
    complexd rowY(0, 0), rowX(0, 0);
    double rowkY = 0, rowdkX = 0, rown = 0;
    for (int j = 0; j < ny; ++j) {
      const double dkX = s.ax.node[i], kY = s.ay.node[j];
      const double w = s.ax.weight[i] * s.ay.weight[j];
      const size_t idx = static_cast<size_t>(i) * ny + j;
      const complexd psi = s.value[idx];
      const complexd px = s.d_dkX[idx];
      const complexd py = s.d_kY[idx];
      const double a2 = std::norm(psi);
      rown += w * a2;

      double mdkX, mkY;
      if (refl) {
        mdkX = dkX;
        mkY = -kY;
      } else {
        const double quad = full ? ab.A * dkX * dkX + ab.B * kY * kY + ab.C * dkX * kY : 0.0;
        mdkX = g.p * dkX + quad / (2.0 * g.k0t);
        mkY = g.q * kY + ab.D * dkX - (g.sin_t / g.cos_t) / (2.0 * g.k0t) * quad;
      }
      rowkY += w * a2 * mkY;
      rowdkX += w * a2 * mdkX;

      const complexd cpsi = std::conj(psi);
      if (refl) {
        rowY += w * cpsi * complexd(0, 1) * (-py);
        rowX += w * cpsi * complexd(0, 1) * px;
      } else {
        const double gY_x = -cot_factor * (ab.B * kY + ab.C * dkX);
        const double gX_y = -(ab.D / g.q) + sot_factor * (ab.A * dkX + ab.C * kY);
        rowY += w * (cpsi * complexd(0, 1) * (gY_y * py + gY_x * px) + complexd(0, 0.5 * divY) * a2);
        rowX += w * (cpsi * complexd(0, 1) * (gX_x * px + gX_y * py) + complexd(0, 0.5 * divX) * a2);
      }
    }
    numY += rowY;
    numX += rowX;
    numkY += rowkY;
    numdkX += rowdkX;
    norm += rown;
  }

  ChannelExpectation e;
  e.norm = norm;
  e.v_g = refl ? s.packet.v_g() : g.k0t;
  e.Y = numY.real() / norm;
  e.xi = numX.real() / norm;
  e.im_Y = numY.imag() / norm;
  e.im_xi = numX.imag() / norm;
  e.kY = numkY / norm;
  e.dkX = numdkX / norm;
  e.tau = -e.xi / e.v_g;
  e.eps = e.v_g * e.dkX;
  return e;
}

struct NumericShiftResult {
  ChannelExpectation r, t;
  const ChannelExpectation& channel(Channel c) const { return c == Channel::Reflected ? r : t; }
};

// Both channels at once; an absent or collapsed transmitted channel is
// reported with present = false rather than as an exception.
inline NumericShiftResult numeric_shifts(const BarrierSpec& barrier, const PacketSpec& packet,
                                         ScatterMode mode, const QuadratureGrid& grid,
                                         double leakage_tol = evanescent_leakage_tol) {
  NumericShiftResult res;
  res.r = expectation_shifts(
      scattered_spectrum(barrier, packet, Channel::Reflected, mode, grid, leakage_tol));
  try {
    res.t = expectation_shifts(
        scattered_spectrum(barrier, packet, Channel::Transmitted, mode, grid, leakage_tol));
  } catch (const NormCollapse&) {
    res.t.present = false;
  } catch (const EvanescentLeakage&) {
    res.t.present = false;
  }
  return res;
}

}  // namespace ghw

#endif
