#ifndef GHW_CONFIG_HPP
#define GHW_CONFIG_HPP

// Scenario configuration for the CLI: JSON in, validated structs out.
// Angles are degrees at this interface and radians internally. All quantities
// are in natural units hbar = m = 1 (energies k^2/2, velocities equal
// wavenumbers); the serialized form carries a units note saying so.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ghw/barrier.hpp"
#include "ghw/shifts_numeric.hpp"
#include "ghw/wavepacket.hpp"

namespace ghw {

using json = nlohmann::json;

inline constexpr const char* units_note =
    "hbar = m = 1; energies are k^2/2, velocities equal wavenumbers; angles in degrees";

struct SweepSpec {
  double theta_start_deg = 0.0;
  double theta_end_deg = 0.0;
  int n_points = 1;
};

struct ScenarioConfig {
  BarrierSpec barrier = BarrierSpec::step(1.0);
  double k0 = 1.0, Delta = 100.0, gamma = 1.0;
  int ell = 0;
  SweepSpec sweep;
  ScatterMode mode{AmplitudeModel::Exact, KinematicsModel::Simplified};
  QuadratureGrid grid;
  bool numeric_enabled = true;
  int numeric_every = 1;  // engine evaluated on every Nth sweep row
  int threads = 1;
  std::string output_path;
  double leakage_tol = evanescent_leakage_tol;

  PacketSpec packet_at(double theta_rad) const {
    return PacketSpec::make(k0, Delta, gamma, ell, theta_rad);
  }

  void validate() const {
    grid.validate();
    if (sweep.n_points < 1) throw std::invalid_argument("config: sweep.n_points must be >= 1");
    if (numeric_every < 1) throw std::invalid_argument("config: numeric.every must be >= 1");
    if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    // packet preconditions checked at a representative angle
    (void)packet_at(sweep.theta_start_deg * pi / 180.0);
  }
};

inline json to_json(const BarrierSpec& b) {
  switch (b.type) {
    case BarrierType::Step:
      return json{{"type", "step"}, {"V0", b.V0}};
    case BarrierType::Delta:
      return json{{"type", "delta"}, {"W0", b.W0}};
    case BarrierType::Rect:
      return json{{"type", "rect"}, {"V0", b.V0}, {"a", b.a}};
  }
  throw std::logic_error("unreachable");
}

inline BarrierSpec barrier_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "step") return BarrierSpec::step(j.at("V0").get<double>());
  if (type == "delta") return BarrierSpec::delta(j.at("W0").get<double>());
  if (type == "rect") return BarrierSpec::rect(j.at("V0").get<double>(), j.at("a").get<double>());
  throw std::invalid_argument("config: barrier.type must be step|delta|rect");
}

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["units"] = units_note;
  j["barrier"] = to_json(c.barrier);
  j["packet"] = {{"k0", c.k0}, {"Delta", c.Delta}, {"gamma", c.gamma}, {"ell", c.ell}};
  j["sweep"] = {{"theta_start_deg", c.sweep.theta_start_deg},
                {"theta_end_deg", c.sweep.theta_end_deg},
                {"n_points", c.sweep.n_points}};
  j["mode"] = {
      {"amplitude", c.mode.amplitude == AmplitudeModel::Exact ? "exact" : "taylor"},
      {"kinematics", c.mode.kinematics == KinematicsModel::Full ? "full" : "simplified"}};
  j["grid"] = {{"nx", c.grid.nx},
               {"ny", c.grid.ny},
               {"extent_sigmas", c.grid.extent_sigmas},
               {"rule", c.grid.rule == QuadratureRule::GaussLegendre ? "gauss-legendre" : "trapezoid"}};
  j["numeric"] = {{"enabled", c.numeric_enabled}, {"every", c.numeric_every}};
  j["output"] = {{"path", c.output_path}};
  j["tolerances"] = {{"leakage", c.leakage_tol}};
  return j;
}

inline ScenarioConfig config_from_json(const json& j) {
  ScenarioConfig c;
  c.barrier = barrier_from_json(j.at("barrier"));
  const auto& p = j.at("packet");
  c.k0 = p.at("k0").get<double>();
  c.Delta = p.at("Delta").get<double>();
  c.gamma = p.at("gamma").get<double>();
  c.ell = p.at("ell").get<int>();
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    c.sweep.theta_start_deg = s.at("theta_start_deg").get<double>();
    c.sweep.theta_end_deg = s.value("theta_end_deg", c.sweep.theta_start_deg);
    c.sweep.n_points = s.value("n_points", 1);
  }
  if (j.contains("mode")) {
    const auto& m = j.at("mode");
    const std::string amp = m.value("amplitude", "exact");
    const std::string kin = m.value("kinematics", "simplified");
    if (amp != "exact" && amp != "taylor")
      throw std::invalid_argument("config: mode.amplitude must be exact|taylor");
    if (kin != "full" && kin != "simplified")
      throw std::invalid_argument("config: mode.kinematics must be full|simplified");
    c.mode.amplitude = amp == "exact" ? AmplitudeModel::Exact : AmplitudeModel::FirstOrderTaylor;
    c.mode.kinematics = kin == "full" ? KinematicsModel::Full : KinematicsModel::Simplified;
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid.nx = g.value("nx", 257);
    c.grid.ny = g.value("ny", 257);
    c.grid.extent_sigmas = g.value("extent_sigmas", 6.0);
    const std::string rule = g.value("rule", "trapezoid");
    if (rule != "trapezoid" && rule != "gauss-legendre")
      throw std::invalid_argument("config: grid.rule must be trapezoid|gauss-legendre");
    c.grid.rule =
        rule == "gauss-legendre" ? QuadratureRule::GaussLegendre : QuadratureRule::UniformTrapezoid;
  }
  if (j.contains("numeric")) {
    c.numeric_enabled = j.at("numeric").value("enabled", true);
    c.numeric_every = j.at("numeric").value("every", 1);
  }
  c.threads = j.value("threads", 1);  // execution detail: honored, not re-serialized
  if (j.contains("output")) c.output_path = j.at("output").value("path", "");
  if (j.contains("tolerances")) c.leakage_tol = j.at("tolerances").value("leakage", evanescent_leakage_tol);
  c.validate();
  return c;
}

inline std::string serialize_config(const ScenarioConfig& c) { return to_json(c).dump(2); }

inline ScenarioConfig parse_config(const std::string& text) {
  try {
    return config_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

inline bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return to_json(a) == to_json(b);
}

// FNV-1a hash of the canonical serialization; recorded in CSV headers.
inline std::string config_hash(const ScenarioConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ghw

#endif
