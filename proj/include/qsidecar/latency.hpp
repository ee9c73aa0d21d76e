#ifndef QSIDECAR_LATENCY_HPP
#define QSIDECAR_LATENCY_HPP

// Additive latency model for one stateless query, in nanoseconds:
//
//   T_query = shots * (T_prep + T_gate + T_meas + T_reset) + T_classical
//
// Prep, gate, measurement and reset repeat per shot; classical orchestration
// is paid once per query. shots = 1 is the plain five-term sum.

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsidecar {

struct LatencyScenario {
  std::string name;
  double t_prep = 0.0;
  double t_gate = 0.0;
  double t_meas = 0.0;
  double t_classical = 0.0;
  int shots_per_query = 1;

  void validate() const {
    if (t_prep < 0 || t_gate < 0 || t_meas < 0 || t_classical < 0)
      throw std::invalid_argument("latency components must be >= 0");
    if (shots_per_query < 1) throw std::invalid_argument("shots_per_query must be >= 1");
  }
};

struct SweepPoint {
  std::string scenario;
  double t_reset = 0.0;
  double t_query = 0.0;
  double reset_fraction = 0.0;
  double throughput_qps = 0.0;
};

inline std::vector<LatencyScenario> default_scenarios() {
  return {
      {"fast-single", 100, 200, 300, 500, 1},
      {"medium", 500, 1000, 700, 5000, 10},
      {"batched", 500, 1000, 700, 20000, 100},
  };
}

/// 20, 40, ..., 1200 ns.
inline std::vector<double> default_reset_grid() {
  std::vector<double> g;
  for (int t = 20; t <= 1200; t += 20) g.push_back(t);
  return g;
}

inline double query_time(const LatencyScenario& s, double t_reset) {
  s.validate();
  if (t_reset < 0) throw std::invalid_argument("reset time must be >= 0");
  return s.shots_per_query * (s.t_prep + s.t_gate + s.t_meas + t_reset) + s.t_classical;
}

inline SweepPoint evaluate(const LatencyScenario& s, double t_reset) {
  SweepPoint pt;
  pt.scenario = s.name;
  pt.t_reset = t_reset;
  pt.t_query = query_time(s, t_reset);
  pt.reset_fraction = pt.t_query > 0 ? s.shots_per_query * t_reset / pt.t_query : 0.0;
  pt.throughput_qps = 1e9 / pt.t_query;
  return pt;
}

/// Scenario-major cartesian sweep.
inline std::vector<SweepPoint> sweep_reset(const std::vector<LatencyScenario>& scenarios,
                                           const std::vector<double>& t_reset_grid) {
  if (t_reset_grid.size() < 2) throw std::invalid_argument("reset grid needs at least two points");
  for (double t : t_reset_grid)
    if (!(t >= 20.0 && t <= 1200.0)) throw std::invalid_argument("reset grid must lie within [20, 1200] ns");
  std::set<std::string> names;
  for (const auto& s : scenarios)
    if (!names.insert(s.name).second) throw std::invalid_argument("duplicate scenario name: " + s.name);

  std::vector<SweepPoint> out;
  out.reserve(scenarios.size() * t_reset_grid.size());
  for (const auto& s : scenarios)
    for (double t : t_reset_grid) out.push_back(evaluate(s, t));
  return out;
}

}  // namespace qsidecar

#endif  // QSIDECAR_LATENCY_HPP
