#ifndef QSIDECAR_EXPERIMENTS_HPP
#define QSIDECAR_EXPERIMENTS_HPP

// Experiment orchestration: each run_* function computes one experiment,
// returns its CSV tables plus a printable summary, and records any failed
// invariant spot-check. Writing files is left to write_outputs().
//
// CSV conventions: header row always present, reals printed with "%.12g",
// row order fixed by the config and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsidecar/density.hpp"
#include "qsidecar/landscape.hpp"
#include "qsidecar/latency.hpp"
#include "qsidecar/rng.hpp"
#include "qsidecar/routing.hpp"
#include "qsidecar/samplers.hpp"
#include "qsidecar/statevector.hpp"

namespace qsidecar {

/// Raised when an output file cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct CsvTable {
  std::string file_name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::logic_error(file_name + ": row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string render() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

namespace schema {
inline const std::vector<std::string> kStateful{"m", "p", "round", "fidelity", "parity_accuracy"};
inline const std::vector<std::string> kScaling{"m", "p", "fidelity_after_50", "parity_accuracy_after_50"};
inline const std::vector<std::string> kAbstract{"trial", "method", "selected", "rank", "regret", "top4_hit"};
inline const std::vector<std::string> kQaoa{"n",        "landscape_id", "method", "gamma",           "beta",
                                            "top4_mass", "selected",     "regret", "expected_utility"};
inline const std::vector<std::string> kShots{"shots", "hit_prob_closed_form", "hit_prob_empirical"};
inline const std::vector<std::string> kLatency{"scenario", "t_reset_ns", "t_query_ns", "reset_fraction",
                                               "throughput_qps"};
inline const std::vector<std::string> kRouting{"method", "reliability", "trials", "accuracy"};
}  // namespace schema

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path output_dir = "results";

  // stateful
  GhzSpec ghz{};
  std::vector<int> m_list{2, 4, 6, 8};
  std::vector<double> p_list{0.0, 0.001, 0.005, 0.01, 0.02};
  int rounds = 50;

  // abstract update search
  int abstract_trials = 500;
  int abstract_qubits = 8;  // K = 2^8 = 256 candidates

  // circuit sampler
  SamplerConfig sampler{};
  std::vector<int> n_list{4, 6, 8};
  int landscapes = 50;

  // shot sensitivity
  int shots_qubits = 8;
  std::vector<int> shot_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
  int shot_queries = 2000;

  // latency
  std::vector<double> reset_grid = default_reset_grid();

  // routing
  int routing_experts = 8;
  int routing_trials = 10000;
  double routing_noise_sigma = 1.0;
  std::vector<double> reliabilities{0.55, 0.65, 0.75, 0.85, 0.95};

  void validate() const {
    ghz.validate();
    if (m_list.empty() || p_list.empty()) throw std::invalid_argument("stateful grids must be nonempty");
    for (int m : m_list) GhzSpec{m, ghz.alpha_sq, ghz.phi}.validate();
    for (double p : p_list) NoiseConfig{p}.validate();
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (abstract_trials < 1) throw std::invalid_argument("abstract trials must be >= 1");
    sampler.validate();
    if (!sampler.sidecar_dominates_softmax())
      throw std::invalid_argument("sidecar must be sharper and less noisy than the softmax baseline");
    for (int n : n_list)
      if (n < 1 || n > kMaxQubits) throw std::invalid_argument("circuit size outside [1, 10]");
    if (abstract_qubits < 1 || abstract_qubits > kMaxQubits || shots_qubits < 1 || shots_qubits > kMaxQubits)
      throw std::invalid_argument("candidate register outside [1, 10] qubits");
    if (landscapes < 1) throw std::invalid_argument("landscape count must be >= 1");
    if (shot_grid.empty() || shot_queries < 1) throw std::invalid_argument("shot grid/queries must be nonempty");
    for (int s : shot_grid)
      if (s < 1) throw std::invalid_argument("shot counts must be >= 1");
    if (routing_trials < 1) throw std::invalid_argument("routing trials must be >= 1");
    for (double r : reliabilities) PriorRouterConfig{r}.validate();
  }
};

struct ExperimentOutput {
  std::string name;
  std::vector<CsvTable> tables;
  std::string summary;
  std::vector<std::string> failed_checks;

  void check(bool ok, const std::string& what) {
    if (!ok) failed_checks.push_back(name + ": " + what);
  }
};

// ---------------------------------------------------------------- stateful

struct StatefulSeries {
  int m = 0;
  double p = 0.0;
  std::vector<RoundRecord> records;
};

inline ExperimentOutput run_stateful(const RunConfig& cfg) {
  cfg.validate();
  ExperimentOutput out{"stateful", {}, {}, {}};

  // Every (m, p) run is independent and deterministic.
  std::vector<std::pair<int, double>> grid;
  for (int m : cfg.m_list)
    for (double p : cfg.p_list) grid.emplace_back(m, p);
  std::vector<std::future<StatefulSeries>> jobs;
  for (const auto& [m, p] : grid) {
    jobs.push_back(std::async(std::launch::async, [&cfg, m, p] {
      GhzSpec spec = cfg.ghz;
      spec.m = m;
      return StatefulSeries{m, p, run_protocol(spec, NoiseConfig{p}, cfg.rounds)};
    }));
  }
  std::vector<StatefulSeries> series;
  for (auto& j : jobs) series.push_back(j.get());

  // Largest register first: the headline series leads the file.
  std::vector<std::size_t> order(series.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return series[a].m > series[b].m; });

  CsvTable stateful{"stateful.csv", schema::kStateful, {}};
  for (std::size_t idx : order) {
    const auto& s = series[idx];
    for (const auto& r : s.records) {
      stateful.add({std::to_string(s.m), fmt_real(s.p), std::to_string(r.round), fmt_real(r.fidelity),
                    fmt_real(r.parity_accuracy)});
      out.check(r.parity_accuracy >= -1e-12 && r.parity_accuracy <= 1 + 1e-12, "parity accuracy outside [0,1]");
      out.check(r.fidelity >= -1e-10 && r.fidelity <= 1 + 1e-10, "fidelity outside [0,1]");
      if (s.p == 0.0) out.check(std::abs(r.fidelity - 1) <= 1e-10, "noiseless fidelity drifted");
    }
  }

  CsvTable scaling{"scaling.csv", schema::kScaling, {}};
  std::ostringstream sum;
  sum << "stateful readout (|alpha|^2=" << cfg.ghz.alpha_sq << ", phi=" << cfg.ghz.phi << ", " << cfg.rounds
      << " rounds)\n";
  sum << "  direct computational-basis baseline = " << fmt_real(direct_baseline(cfg.ghz)) << "\n";
  sum << "  m   p        F_final        q_final\n";
  std::vector<std::size_t> asc(series.size());
  std::iota(asc.begin(), asc.end(), 0);
  std::stable_sort(asc.begin(), asc.end(), [&](std::size_t a, std::size_t b) { return series[a].m < series[b].m; });
  for (std::size_t idx : asc) {
    const auto& s = series[idx];
    const auto& last = s.records.back();
    scaling.add({std::to_string(s.m), fmt_real(s.p), fmt_real(last.fidelity), fmt_real(last.parity_accuracy)});
    char line[128];
    std::snprintf(line, sizeof line, "  %-3d %-8g %-14.10f %-14.10f\n", s.m, s.p, last.fidelity,
                  last.parity_accuracy);
    sum << line;
  }
  for (int m : cfg.m_list) {
    GhzSpec spec = cfg.ghz;
    spec.m = m;
    const double td = parity_cross_check(spec);
    out.check(td <= 1e-12, "dense vs gate-wise parity readout disagree at m=" + std::to_string(m));
    sum << "  cross-check m=" << m << ": trace distance " << fmt_real(td) << "\n";
  }
  out.tables = {std::move(stateful), std::move(scaling)};
  out.summary = sum.str();
  return out;
}

// ---------------------------------------------------------------- abstract

inline const char* const kAbstractMethods[] = {"uniform", "noisy_softmax", "sidecar"};

inline ExperimentOutput run_stateless_abstract(const RunConfig& cfg) {
  cfg.validate();
  ExperimentOutput out{"abstract", {}, {}, {}};
  CsvTable table{"abstract_update.csv", schema::kAbstract, {}};

  struct Tally {
    double hits = 0, regret = 0;
  } tally[3];
  for (int t = 0; t < cfg.abstract_trials; ++t) {
    const auto trial = static_cast<std::uint64_t>(t);
    const Landscape land = generate_landscape(cfg.abstract_qubits, derive_seed(cfg.seed, stream::kAbstract, trial));
    const auto u = utilities(land);
    for (int k = 0; k < 3; ++k) {
      Rng rng(derive_seed(cfg.seed, stream::kAbstract + 1 + k, trial));
      CandidateIndex z = 0;
      switch (k) {
        case 0: z = uniform_select(land, rng); break;
        case 1: z = draw(noisy_softmax_distribution(u, cfg.sampler, rng), rng); break;
        default: z = draw(sidecar_distribution(u, cfg.sampler, rng), rng); break;
      }
      const auto rec = make_trial_record(trial, kAbstractMethods[k], u, z);
      out.check(rec.regret >= 0.0, "negative regret");
      tally[k].hits += rec.top4_hit;
      tally[k].regret += rec.regret;
      table.add({std::to_string(rec.trial_id), rec.method, std::to_string(rec.selected), std::to_string(rec.rank),
                 fmt_real(rec.regret), rec.top4_hit ? "1" : "0"});
    }
  }

  std::ostringstream sum;
  sum << "abstract update search (" << cfg.abstract_trials << " trials, K=" << (1 << cfg.abstract_qubits) << ")\n";
  sum << "  method          top4_rate   mean_regret\n";
  for (int k = 0; k < 3; ++k) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-15s %-11.4f %-11.4f\n", kAbstractMethods[k],
                  tally[k].hits / cfg.abstract_trials, tally[k].regret / cfg.abstract_trials);
    sum << line;
  }
  out.tables = {std::move(table)};
  out.summary = sum.str();
  return out;
}

// ---------------------------------------------------------------- circuit sampler

inline std::uint64_t landscape_key(int n, int landscape_id) {
  return static_cast<std::uint64_t>(n) * 1000003ULL + static_cast<std::uint64_t>(landscape_id);
}

inline Landscape experiment_landscape(const RunConfig& cfg, int n, int landscape_id) {
  return generate_landscape(n, derive_seed(cfg.seed, stream::kQaoaLandscape, landscape_key(n, landscape_id)));
}

inline const char* const kQaoaMethods[] = {"uniform", "noisy_softmax", "qaoa_fixed", "qaoa_tuned"};

struct QaoaRow {
  int n = 0;
  int landscape_id = 0;
  int method = 0;
  QaoaParams params{};
  bool has_params = false;
  double top4_mass = 0.0;
  CandidateIndex selected = 0;
  double regret = 0.0;
  double expected_utility = 0.0;
};

/// Per-method means over landscapes at one n; method order as kQaoaMethods.
struct QaoaSizeSummary {
  int n = 0;
  double top4_mass[4]{};
  double regret[4]{};
};

inline std::vector<QaoaRow> qaoa_rows_for_landscape(const RunConfig& cfg, int n, int landscape_id) {
  const Landscape land = experiment_landscape(cfg, n, landscape_id);
  const auto u = utilities(land);
  const auto top = top_k_set(u, std::min(kTopK, u.size()));
  std::vector<QaoaRow> rows;
  for (int k = 0; k < 4; ++k) {
    Rng rng(derive_seed(cfg.seed, stream::kQaoaSampling, landscape_key(n, landscape_id) * 8 + k));
    QaoaRow row;
    row.n = n;
    row.landscape_id = landscape_id;
    row.method = k;
    std::vector<double> dist;
    switch (k) {
      case 0: dist.assign(u.size(), 1.0 / static_cast<double>(u.size())); break;
      case 1: dist = noisy_softmax_distribution(u, cfg.sampler, rng); break;
      case 2: row.params = cfg.sampler.qaoa_fixed; break;
      default: row.params = qaoa_grid_tune(land, cfg.sampler.grid_gamma, cfg.sampler.grid_beta).params; break;
    }
    if (k >= 2) {
      row.has_params = true;
      dist = qaoa_distribution(u, row.params);
    }
    row.top4_mass = top_k_mass(dist, top);
    row.expected_utility = expected_value(dist, u);
    row.selected = k == 0 ? uniform_select(land, rng) : draw(dist, rng);
    row.regret = regret(u, row.selected);
    rows.push_back(row);
  }
  return rows;
}

inline ExperimentOutput run_stateless_qaoa(const RunConfig& cfg, std::vector<QaoaSizeSummary>* means = nullptr) {
  cfg.validate();
  ExperimentOutput out{"qaoa", {}, {}, {}};
  CsvTable table{"qaoa.csv", schema::kQaoa, {}};
  std::ostringstream sum;
  sum << "circuit-level sampler (" << cfg.landscapes << " landscapes per size)\n";
  sum << "  n  method          top4_mass   mean_regret  (uniform top4 = 4/2^n)\n";

  std::vector<QaoaSizeSummary> summaries;
  for (int n : cfg.n_list) {
    std::vector<std::future<std::vector<QaoaRow>>> jobs;
    for (int l = 0; l < cfg.landscapes; ++l)
      jobs.push_back(std::async(std::launch::async, [&cfg, n, l] { return qaoa_rows_for_landscape(cfg, n, l); }));
    QaoaSizeSummary s;
    s.n = n;
    for (auto& j : jobs) {
      for (const auto& r : j.get()) {
        s.top4_mass[r.method] += r.top4_mass / cfg.landscapes;
        s.regret[r.method] += r.regret / cfg.landscapes;
        out.check(r.top4_mass >= -1e-12 && r.top4_mass <= 1 + 1e-12, "top4 mass outside [0,1]");
        table.add({std::to_string(r.n), std::to_string(r.landscape_id), kQaoaMethods[r.method],
                   r.has_params ? fmt_real(r.params.gamma) : "", r.has_params ? fmt_real(r.params.beta) : "",
                   fmt_real(r.top4_mass), std::to_string(r.selected), fmt_real(r.regret),
                   fmt_real(r.expected_utility)});
      }
    }
    const double uniform = std::min(1.0, static_cast<double>(kTopK) / static_cast<double>(std::size_t{1} << n));
    out.check(std::abs(s.top4_mass[0] - uniform) <= 1e-12, "uniform top4 mass is not 4/2^n");
    for (int k = 0; k < 4; ++k) {
      char line[128];
      std::snprintf(line, sizeof line, "  %-2d %-15s %-11.4f %-11.4f\n", n, kQaoaMethods[k], s.top4_mass[k],
                    s.regret[k]);
      sum << line;
    }
    summaries.push_back(s);
  }
  if (means) *means = summaries;
  out.tables = {std::move(table)};
  out.summary = sum.str();
  return out;
}

// ---------------------------------------------------------------- shots

struct ShotPoint {
  int shots = 0;
  double closed_form = 0.0;
  double empirical = 0.0;
};

/// p4 is the ensemble-mean fixed-circuit top-4 mass. Each shot of a query
/// targets a uniformly drawn landscape of the ensemble, so a shot hits with
/// probability exactly p4 and a query of S shots hits with 1 - (1 - p4)^S.
inline ExperimentOutput run_shot_sensitivity(const RunConfig& cfg, double* p4_out = nullptr,
                                             std::vector<ShotPoint>* points = nullptr) {
  cfg.validate();
  ExperimentOutput out{"shots", {}, {}, {}};
  const int n = cfg.shots_qubits;

  std::vector<DiscreteSampler> samplers;
  std::vector<std::vector<char>> is_top;
  double p4 = 0.0;
  for (int l = 0; l < cfg.landscapes; ++l) {
    const auto u = utilities(experiment_landscape(cfg, n, l));
    const auto dist = qaoa_distribution(u, cfg.sampler.qaoa_fixed);
    const auto top = top_k_set(u, std::min(kTopK, u.size()));
    std::vector<char> mark(u.size(), 0);
    for (auto z : top) mark[z] = 1;
    p4 += top_k_mass(dist, top) / cfg.landscapes;
    samplers.emplace_back(dist);
    is_top.push_back(std::move(mark));
  }

  CsvTable table{"shots.csv", schema::kShots, {}};
  std::ostringstream sum;
  sum << "shot sensitivity (n=" << n << ", p4=" << fmt_real(p4) << ", " << cfg.shot_queries << " queries)\n";
  sum << "  shots  closed_form  empirical\n";
  std::vector<ShotPoint> pts;
  for (int shots : cfg.shot_grid) {
    Rng rng(derive_seed(cfg.seed, stream::kShots, static_cast<std::uint64_t>(shots)));
    int hits = 0;
    for (int qi = 0; qi < cfg.shot_queries; ++qi) {
      bool hit = false;
      for (int s = 0; s < shots; ++s) {
        const auto l = rng.index(samplers.size());
        hit = is_top[l][samplers[l](rng)] || hit;
      }
      hits += hit;
    }
    ShotPoint pt{shots, 1.0 - std::pow(1.0 - p4, shots), static_cast<double>(hits) / cfg.shot_queries};
    table.add({std::to_string(shots), fmt_real(pt.closed_form), fmt_real(pt.empirical)});
    char line[96];
    std::snprintf(line, sizeof line, "  %-6d %-12.6f %-12.6f\n", shots, pt.closed_form, pt.empirical);
    sum << line;
    pts.push_back(pt);
  }
  if (p4_out) *p4_out = p4;
  if (points) *points = pts;
  out.tables = {std::move(table)};
  out.summary = sum.str();
  return out;
}

// ---------------------------------------------------------------- latency

inline ExperimentOutput run_latency(const RunConfig& cfg) {
  cfg.validate();
  ExperimentOutput out{"latency", {}, {}, {}};
  const auto scenarios = default_scenarios();
  const auto points = sweep_reset(scenarios, cfg.reset_grid);
  CsvTable table{"latency.csv", schema::kLatency, {}};
  for (const auto& p : points)
    table.add({p.scenario, fmt_real(p.t_reset), fmt_real(p.t_query), fmt_real(p.reset_fraction),
               fmt_real(p.throughput_qps)});

  std::ostringstream sum;
  sum << "reset latency model\n  scenario      reset_fraction@min  reset_fraction@max  qps@max\n";
  const std::size_t per = cfg.reset_grid.size();
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& lo = points[s * per];
    const auto& hi = points[s * per + per - 1];
    for (std::size_t i = 1; i < per; ++i) {
      const auto& a = points[s * per + i - 1];
      const auto& b = points[s * per + i];
      if (b.t_reset > a.t_reset)
        out.check(b.reset_fraction > a.reset_fraction && b.throughput_qps < a.throughput_qps,
                  "latency sweep not monotone in " + scenarios[s].name);
    }
    char line[128];
    std::snprintf(line, sizeof line, "  %-13s %-19.6f %-19.6f %-12.1f\n", scenarios[s].name.c_str(),
                  lo.reset_fraction, hi.reset_fraction, hi.throughput_qps);
    sum << line;
  }
  out.tables = {std::move(table)};
  out.summary = sum.str();
  return out;
}

// ---------------------------------------------------------------- routing

inline ExperimentOutput run_routing(const RunConfig& cfg) {
  cfg.validate();
  ExperimentOutput out{"routing", {}, {}, {}};
  CsvTable table{"routing.csv", schema::kRouting, {}};
  std::ostringstream sum;
  sum << "expert routing (" << cfg.routing_experts << " experts, " << cfg.routing_trials
      << " trials per cell, noisy sigma=" << cfg.routing_noise_sigma << ")\n";
  sum << "  reliability  random   noisy    prior\n";
  const auto trials = static_cast<std::size_t>(cfg.routing_trials);
  for (std::size_t i = 0; i < cfg.reliabilities.size(); ++i) {
    const double r = cfg.reliabilities[i];
    Rng problem_rng(derive_seed(cfg.seed, stream::kRouting, i * 4));
    const auto problem = make_routing_problem(cfg.routing_experts, trials, problem_rng);
    Rng r0(derive_seed(cfg.seed, stream::kRouting, i * 4 + 1));
    Rng r1(derive_seed(cfg.seed, stream::kRouting, i * 4 + 2));
    Rng r2(derive_seed(cfg.seed, stream::kRouting, i * 4 + 3));
    const double acc_random = route_random(problem, r0);
    const double acc_noisy = route_noisy_classical(problem, cfg.routing_noise_sigma, r1);
    const double acc_prior = route_with_prior(problem, PriorRouterConfig{r}, r2);
    table.add({"random", fmt_real(r), std::to_string(trials), fmt_real(acc_random)});
    table.add({"noisy_classical", fmt_real(r), std::to_string(trials), fmt_real(acc_noisy)});
    table.add({"sidecar_prior", fmt_real(r), std::to_string(trials), fmt_real(acc_prior)});
    out.check(acc_prior > acc_random, "prior router not better than random");
    char line[96];
    std::snprintf(line, sizeof line, "  %-12.2f %-8.4f %-8.4f %-8.4f\n", r, acc_random, acc_noisy, acc_prior);
    sum << line;
  }
  out.tables = {std::move(table)};
  out.summary = sum.str();
  return out;
}

/// Every experiment under one master seed, in file order.
inline std::vector<ExperimentOutput> run_all(const RunConfig& cfg) {
  return {run_stateful(cfg),       run_stateless_abstract(cfg), run_stateless_qaoa(cfg),
          run_shot_sensitivity(cfg), run_latency(cfg),            run_routing(cfg)};
}

// ---------------------------------------------------------------- output

/// Writes each table to output_dir via a temporary file and rename. Returns
/// the paths written.
inline std::vector<std::filesystem::path> write_outputs(const ExperimentOutput& result,
                                                        const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& t : result.tables) {
    const auto path = output_dir / t.file_name;
    const auto tmp = output_dir / (t.file_name + ".tmp");
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
      f << t.render();
      if (!f.flush()) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    written.push_back(path);
  }
  return written;
}

}  // namespace qsidecar

#endif  // QSIDECAR_EXPERIMENTS_HPP
