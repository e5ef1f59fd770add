#ifndef GHW_SWEEP_HPP
#define GHW_SWEEP_HPP

// Angle sweeps: one row per theta with the full analytic addend breakdown,
// optional expectation-engine shifts, plane-wave |R|^2, |T|^2, and a status
// column for per-point errors. Rows are computed concurrently and assembled
// in theta order; output is byte-identical for any thread count.

#include <atomic>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ghw/config.hpp"
#include "ghw/oracle.hpp"
#include "ghw/shifts_analytic.hpp"
#include "ghw/shifts_numeric.hpp"

namespace ghw {

struct SweepRow {
  double theta_deg = 0;
  std::string status = "ok";
  bool have_analytic = false;
  ShiftReport analytic;
  double R2 = 0, T2 = 0;
  bool have_numeric = false;
  NumericShiftResult numeric;
};

struct SweepResult {
  ScenarioConfig config;
  std::vector<SweepRow> rows;
};

inline SweepResult run_sweep(const ScenarioConfig& config) {
  config.validate();
  SweepResult out;
  out.config = config;
  const int n = config.sweep.n_points;
  out.rows.resize(n);

  auto eval_row = [&](int i) {
    SweepRow& row = out.rows[i];
    const double t0 = config.sweep.theta_start_deg;
    const double t1 = config.sweep.theta_end_deg;
    row.theta_deg = n == 1 ? t0 : t0 + (t1 - t0) * i / (n - 1.0);
    const double theta = row.theta_deg * pi / 180.0;
    try {
      const PacketSpec pkt = config.packet_at(theta);
      const auto kin = kinematics(config.barrier, pkt.E0(), theta);
      const auto [R, T] = amplitudes(config.barrier, kin);
      row.R2 = std::norm(R);
      row.T2 = std::norm(T);
      row.analytic = total_shifts(config.barrier, pkt);
      row.have_analytic = true;
      if (config.numeric_enabled && i % config.numeric_every == 0) {
        row.numeric.r = expectation_shifts(scattered_spectrum(
            config.barrier, pkt, Channel::Reflected, config.mode, config.grid, config.leakage_tol));
        row.have_numeric = true;
        try {
          row.numeric.t = expectation_shifts(scattered_spectrum(
              config.barrier, pkt, Channel::Transmitted, config.mode, config.grid,
              config.leakage_tol));
        } catch (const NormCollapse&) {
          row.numeric.t.present = false;
        } catch (const EvanescentLeakage& e) {
          row.numeric.t.present = false;
          row.status = std::string("t: ") + e.what();
        }
      }
    } catch (const std::exception& e) {
      row.status = e.what();
    }
  };

  const int nthreads = std::min(config.threads, n);
  if (nthreads <= 1) {
    for (int i = 0; i < n; ++i) eval_row(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) eval_row(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

namespace detail {

inline void csv_num(std::string& line, double v) {
  char buf[32];
  if (v == 0.0) v = 0.0;  // normalize negative zero
  std::snprintf(buf, sizeof buf, "%.15g", v);
  line += buf;
  line += ',';
}

}  // namespace detail

inline void write_sweep_csv(const SweepResult& res, std::ostream& os) {
  os << "# angle sweep dataset (" << units_note << ")\n";
  os << "# config_hash " << config_hash(res.config) << "\n";
  os << "# config " << to_json(res.config).dump() << "\n";
  os << "theta_deg,"
        "r_present,t_present,r_singular,t_singular,"
        "Y_r_gauss,Y_r_vortex,Y_r_corr,Y_r,xi_r_gauss,xi_r_vortex,xi_r_corr,xi_r,"
        "kY_r_gauss,kY_r_vortex,kY_r_corr,kY_r,dkX_r_gauss,dkX_r_vortex,dkX_r_corr,dkX_r,"
        "Y_t_gauss,Y_t_vortex,Y_t_corr,Y_t,xi_t_gauss,xi_t_vortex,xi_t_corr,xi_t,"
        "kY_t_gauss,kY_t_vortex,kY_t_corr,kY_t,dkX_t_gauss,dkX_t_vortex,dkX_t_corr,dkX_t,"
        "num_Y_r,num_xi_r,num_kY_r,num_dkX_r,num_Y_t,num_xi_t,num_kY_t,num_dkX_t,"
        "R2,T2,status\n";
  for (const SweepRow& row : res.rows) {
    std::string line;
    detail::csv_num(line, row.theta_deg);
    const auto& a = row.analytic;
    line += a.r.present ? "1," : "0,";
    line += a.t.present ? "1," : "0,";
    line += a.r.singular ? "1," : "0,";
    line += a.t.singular ? "1," : "0,";
    auto channel_cols = [&](const ChannelShifts& c, bool present) {
      auto quad = [&](const ShiftAddends& f, double scale) {
        detail::csv_num(line, present ? scale * f.gaussian : 0.0);
        detail::csv_num(line, present ? scale * f.vortex : 0.0);
        detail::csv_num(line, present ? scale * f.correction : 0.0);
        detail::csv_num(line, present ? scale * f.total() : 0.0);
      };
      quad(c.Y, 1.0);
      quad(c.tau, -c.v_g);  // xi = -v_g tau, addend by addend
      quad(c.kY, 1.0);
      quad(c.eps, present ? 1.0 / c.v_g : 0.0);  // dkX = eps/v_g
    };
    channel_cols(a.r, row.have_analytic && a.r.present);
    channel_cols(a.t, row.have_analytic && a.t.present);
    auto num_cols = [&](const ChannelExpectation& e, bool ok) {
      detail::csv_num(line, ok ? e.Y : 0.0);
      detail::csv_num(line, ok ? e.xi : 0.0);
      detail::csv_num(line, ok ? e.kY : 0.0);
      detail::csv_num(line, ok ? e.dkX : 0.0);
    };
    num_cols(row.numeric.r, row.have_numeric);
    num_cols(row.numeric.t, row.have_numeric && row.numeric.t.present);
    detail::csv_num(line, row.R2);
    detail::csv_num(line, row.T2);
    line += row.status;
    os << line << "\n";
  }
}

}  // namespace ghw

#endif
