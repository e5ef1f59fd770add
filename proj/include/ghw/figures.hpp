#ifndef GHW_FIGURES_HPP
#define GHW_FIGURES_HPP

// Canonical datasets: plane-wave amplitude curves (2a-2d) and shift/delay
// sweeps for the three barriers (4: step, 5: delta, 6: rect, 7: step
// transmission with the A,B,C,D corrections). Each dataset writes one CSV
// with a dense analytic grid plus sparse engine points, and a gnuplot script
// alongside.
//
// Parameter sets:
//   2a   step  E/V0 = 1.7
//   2b   delta k/W0 = 3
//   2c,d rect  E/V0 = 3, k a = 5
//   4    step  E0/V0 = 1.7, l = 1, k0 Delta = 628, gamma = 0.4
//   5    delta k0/W0 = 3,   l = 1, k0 Delta = 628, gamma = 0.4
//   6    rect  E0/V0 = 3, k0 a = 5, l = 1, k0 Delta = 628, gamma = 0.4
//   7    as 4, transmitted channel, full kinematics

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghw/sweep.hpp"

namespace ghw {

inline bool figure_is_planewave(const std::string& id) {
  return id == "2a" || id == "2b" || id == "2c" || id == "2d";
}

inline ScenarioConfig figure_config(const std::string& id) {
  ScenarioConfig c;
  c.numeric_enabled = false;
  c.sweep = {0.0, 89.9, 1000};
  if (id == "2a" || id == "4" || id == "7") {
    c.barrier = BarrierSpec::step(1.0);
    c.k0 = std::sqrt(2.0 * 1.7);  // E0/V0 = 1.7
  } else if (id == "2b" || id == "5") {
    c.barrier = BarrierSpec::delta(1.0);
    c.k0 = 3.0;  // k0/W0 = 3
  } else if (id == "2c" || id == "2d" || id == "6") {
    c.k0 = std::sqrt(6.0);  // E0/V0 = 3
    c.barrier = BarrierSpec::rect(1.0, 5.0 / c.k0);  // k0 a = 5
  } else {
    throw std::invalid_argument("figure id must be one of 2a 2b 2c 2d 4 5 6 7");
  }
  c.Delta = 628.0 / c.k0;
  c.gamma = 0.4;
  c.ell = figure_is_planewave(id) ? 0 : 1;
  c.mode.amplitude = AmplitudeModel::Exact;
  c.mode.kinematics = id == "7" ? KinematicsModel::Full : KinematicsModel::Simplified;
  return c;
}

namespace detail {

inline void write_planewave_figure(const std::string& id, const ScenarioConfig& c,
                                   std::ostream& os) {
  os << "# plane-wave amplitudes dataset " << id << " (" << units_note << ")\n";
  os << "# config_hash " << config_hash(c) << "\n";
  if (id == "2d")
    os << "theta_deg,T2,R2\n";
  else
    os << "theta_deg,re_R,im_R,re_T,im_T\n";
  const int n = c.sweep.n_points;
  for (int i = 0; i < n; ++i) {
    const double deg = c.sweep.theta_start_deg +
                       (c.sweep.theta_end_deg - c.sweep.theta_start_deg) * i / (n - 1.0);
    const auto kin = kinematics(c.barrier, 0.5 * c.k0 * c.k0, deg * pi / 180.0);
    const auto [R, T] = amplitudes(c.barrier, kin);
    std::string line;
    csv_num(line, deg);
    if (id == "2d") {
      csv_num(line, std::norm(T));
      csv_num(line, std::norm(R));
    } else {
      csv_num(line, R.real());
      csv_num(line, R.imag());
      csv_num(line, T.real());
      csv_num(line, T.imag());
    }
    line.pop_back();  // trailing comma
    os << line << "\n";
  }
}

// shift figures: `kind` column separates the dense analytic grid from the
// sparse engine points; analytic totals exclude corrections in Simplified
// mode (figures 4-6) and include them in Full mode (figure 7)
inline void write_shift_figure(const ScenarioConfig& cfg, std::ostream& os) {
  os << "# wavepacket shift dataset (" << units_note << ")\n";
  os << "# config_hash " << config_hash(cfg) << "\n";
  os << "# config " << to_json(cfg).dump() << "\n";
  os << "kind,theta_deg,r_present,t_present,r_singular,t_singular,"
        "Y_r,xi_r,kY_r,dkX_r,Y_t,xi_t,kY_t,dkX_t,R2,T2,status\n";
  const bool with_corr = cfg.mode.kinematics == KinematicsModel::Full;

  auto emit = [&](const char* kind, const SweepResult& res) {
    for (const SweepRow& row : res.rows) {
      std::string line = kind;
      line += ',';
      csv_num(line, row.theta_deg);
      const auto& a = row.analytic;
      line += a.r.present ? "1," : "0,";
      line += a.t.present ? "1," : "0,";
      line += a.r.singular ? "1," : "0,";
      line += a.t.singular ? "1," : "0,";
      auto an_cols = [&](const ChannelShifts& ch, bool present) {
        const double Y = ch.Y.gaussian + ch.Y.vortex + (with_corr ? ch.Y.correction : 0.0);
        const double tau = ch.tau.gaussian + ch.tau.vortex + (with_corr ? ch.tau.correction : 0.0);
        const double kY = ch.kY.gaussian + ch.kY.vortex + (with_corr ? ch.kY.correction : 0.0);
        const double eps = ch.eps.gaussian + ch.eps.vortex + (with_corr ? ch.eps.correction : 0.0);
        csv_num(line, present ? Y : 0.0);
        csv_num(line, present ? -ch.v_g * tau : 0.0);
        csv_num(line, present ? kY : 0.0);
        csv_num(line, present ? eps / ch.v_g : 0.0);
      };
      auto num_cols = [&](const ChannelExpectation& e, bool ok) {
        csv_num(line, ok ? e.Y : 0.0);
        csv_num(line, ok ? e.xi : 0.0);
        csv_num(line, ok ? e.kY : 0.0);
        csv_num(line, ok ? e.dkX : 0.0);
      };
      if (std::string(kind) == "analytic") {
        an_cols(a.r, row.have_analytic && a.r.present);
        an_cols(a.t, row.have_analytic && a.t.present);
      } else {
        num_cols(row.numeric.r, row.have_numeric);
        num_cols(row.numeric.t, row.have_numeric && row.numeric.t.present);
      }
      csv_num(line, row.R2);
      csv_num(line, row.T2);
      line += row.status;
      os << line << "\n";
    }
  };

  ScenarioConfig dense = cfg;
  dense.numeric_enabled = false;
  emit("analytic", run_sweep(dense));

  ScenarioConfig sparse = cfg;
  sparse.numeric_enabled = true;
  sparse.sweep.n_points = 30;
  sparse.sweep.theta_start_deg = 1.5;
  sparse.sweep.theta_end_deg = 88.5;
  emit("numeric", run_sweep(sparse));
}

}  // namespace detail

inline void write_figure_plot_script(const std::string& id, const std::string& csv_path,
                                     std::ostream& os) {
  os << "# gnuplot script for dataset " << id << "\n";
  os << "set datafile separator ','\n";
  os << "set key outside\n";
  os << "set xlabel 'theta (deg)'\n";
  if (figure_is_planewave(id)) {
    if (id == "2d")
      os << "plot '" << csv_path << "' skip 3 using 1:2 with lines title '|T|^2', \\\n"
         << "     '' skip 3 using 1:3 with lines title '|R|^2'\n";
    else
      os << "plot '" << csv_path << "' skip 3 using 1:2 with lines title 'Re R', \\\n"
         << "     '' skip 3 using 1:3 with lines dashtype 2 title 'Im R', \\\n"
         << "     '' skip 3 using 1:4 with lines title 'Re T', \\\n"
         << "     '' skip 3 using 1:5 with lines dashtype 2 title 'Im T'\n";
    return;
  }
  os << "an(col) = (strcol(1) eq 'analytic' && $5 == 0) ? column(col) : NaN\n";
  os << "nu(col) = (strcol(1) eq 'numeric') ? column(col) : NaN\n";
  os << "set multiplot layout 2,2\n";
  const char* names[4] = {"Y", "xi", "kY", "dkX"};
  for (int q = 0; q < 4; ++q) {
    const int cr = 7 + q, ct = 11 + q;
    os << "set title '" << names[q] << "'\n";
    os << "plot '" << csv_path << "' skip 4 using 2:(an(" << cr << ")) with lines title 'r', \\\n"
       << "     '' skip 4 using 2:(an(" << ct << ")) with lines title 't', \\\n"
       << "     '' skip 4 using 2:(nu(" << cr << ")) with points pt 7 title 'r num', \\\n"
       << "     '' skip 4 using 2:(nu(" << ct << ")) with points pt 6 title 't num'\n";
  }
  os << "unset multiplot\n";
}

// Writes <out_csv> and <out_csv>.gp; returns the scenario used.
inline ScenarioConfig emit_figure_dataset(const std::string& id, const std::string& out_csv) {
  const ScenarioConfig cfg = figure_config(id);
  std::ofstream os(out_csv);
  if (!os) throw std::runtime_error("cannot open output file: " + out_csv);
  if (figure_is_planewave(id))
    detail::write_planewave_figure(id, cfg, os);
  else
    detail::write_shift_figure(cfg, os);
  std::ofstream script(out_csv + ".gp");
  write_figure_plot_script(id, out_csv, script);
  return cfg;
}

}  // namespace ghw

#endif
