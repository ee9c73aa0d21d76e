#ifndef QSIDECAR_SAMPLERS_HPP
#define QSIDECAR_SAMPLERS_HPP

// Candidate-selection rules for stateless update search.
//
// uniform         every candidate equally likely
// noisy softmax   P(z) ∝ exp(Ũ(z) / τ),  Ũ = U + N(0, σ²) per candidate
// sidecar         P(z) ∝ exp(κ Ũ'(z)),   Ũ' = U + N(0, σ'²); sharper (κ > 1/τ)
//                 and less noisy (σ' < σ) than the softmax baseline
// fixed QAOA      Born distribution of one circuit layer at fixed (γ, β)
// tuned QAOA      same, at the grid point maximising <U>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsidecar/landscape.hpp"
#include "qsidecar/rng.hpp"
#include "qsidecar/statevector.hpp"

namespace qsidecar {

inline constexpr std::size_t kTopK = 4;

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("linspace needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

struct SamplerConfig {
  double softmax_temperature = 1.0;
  double softmax_noise_sigma = 1.0;
  double sidecar_sharpness = 2.0;
  double sidecar_noise_sigma = 0.25;
  QaoaParams qaoa_fixed{-0.35, 0.45};
  std::vector<double> grid_gamma = linspace(-std::numbers::pi, 0.0, 25);
  std::vector<double> grid_beta = linspace(0.0, std::numbers::pi / 2, 25);

  void validate() const {
    if (!(softmax_temperature > 0.0)) throw std::invalid_argument("softmax temperature must be > 0");
    if (!(sidecar_sharpness > 0.0)) throw std::invalid_argument("sidecar sharpness must be > 0");
    if (!(softmax_noise_sigma >= 0.0) || !(sidecar_noise_sigma >= 0.0))
      throw std::invalid_argument("noise sigmas must be >= 0");
    if (grid_gamma.empty() || grid_beta.empty()) throw std::invalid_argument("tuning grids must be nonempty");
  }

  /// The sidecar model is only meaningful when it is sharper and less noisy
  /// than the softmax baseline it is compared against.
  bool sidecar_dominates_softmax() const {
    return sidecar_noise_sigma < softmax_noise_sigma && sidecar_sharpness > 1.0 / softmax_temperature;
  }
};

struct TrialRecord {
  std::size_t trial_id = 0;
  std::string method;
  CandidateIndex selected = 0;
  std::size_t rank = 0;
  double regret = 0.0;
  bool top4_hit = false;
};

inline TrialRecord make_trial_record(std::size_t trial_id, std::string method, std::span<const double> u,
                                     CandidateIndex selected) {
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.method = std::move(method);
  rec.selected = selected;
  rec.rank = rank_of(u, selected);
  rec.regret = regret(u, selected);
  rec.top4_hit = rec.rank <= kTopK;
  return rec;
}

/// Normalised exp(scale * score), max-shifted.
inline std::vector<double> exp_family(std::span<const double> score, double scale) {
  std::vector<double> w(score.size());
  const double top = *std::max_element(score.begin(), score.end());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] = std::exp(scale * (score[i] - top));
  for (auto& x : w) x /= total;
  return w;
}

/// Observes U + N(0, sigma²) independently per candidate, in index order.
inline std::vector<double> noisy_observation(std::span<const double> u, double sigma, Rng& rng) {
  std::vector<double> out(u.begin(), u.end());
  if (sigma > 0.0)
    for (auto& x : out) x += sigma * rng.normal();
  return out;
}

inline std::vector<double> noisy_softmax_distribution(std::span<const double> u, const SamplerConfig& cfg,
                                                      Rng& rng) {
  cfg.validate();
  return exp_family(noisy_observation(u, cfg.softmax_noise_sigma, rng), 1.0 / cfg.softmax_temperature);
}

inline std::vector<double> sidecar_distribution(std::span<const double> u, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  return exp_family(noisy_observation(u, cfg.sidecar_noise_sigma, rng), cfg.sidecar_sharpness);
}

inline double top_k_mass(std::span<const double> dist, std::span<const CandidateIndex> top) {
  double s = 0.0;
  for (const auto z : top) s += dist[z];
  return s;
}

inline double expected_value(std::span<const double> dist, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t z = 0; z < dist.size(); ++z) s += dist[z] * u[z];
  return s;
}

inline CandidateIndex draw(std::span<const double> dist, Rng& rng) {
  return static_cast<CandidateIndex>(DiscreteSampler(dist)(rng));
}

inline CandidateIndex uniform_select(const Landscape& land, Rng& rng) {
  return static_cast<CandidateIndex>(rng.index(land.candidate_count()));
}

inline CandidateIndex noisy_softmax_select(const Landscape& land, const SamplerConfig& cfg, Rng& rng) {
  const auto u = utilities(land);
  const auto dist = noisy_softmax_distribution(u, cfg, rng);
  return draw(dist, rng);
}

inline CandidateIndex abstract_sidecar_select(const Landscape& land, const SamplerConfig& cfg, Rng& rng) {
  const auto u = utilities(land);
  const auto dist = sidecar_distribution(u, cfg, rng);
  return draw(dist, rng);
}

struct QaoaSelection {
  CandidateIndex selected = 0;
  double top4_mass = 0.0;
  double expected_utility = 0.0;
  std::vector<CandidateIndex> shots;
};

/// Exact circuit distribution plus `shots` samples; `selected` is the first shot.
inline QaoaSelection qaoa_select(const Landscape& land, const QaoaParams& params, Rng& rng, int shots = 1) {
  land.validate();
  const auto u = utilities(land);
  const auto dist = qaoa_distribution(u, params);
  QaoaSelection out;
  out.top4_mass = top_k_mass(dist, top_k_set(u, std::min(kTopK, u.size())));
  out.expected_utility = expected_value(dist, u);
  out.shots = sample_candidates(dist, shots, rng);
  out.selected = out.shots.front();
  return out;
}

struct GridTuneResult {
  QaoaParams params;
  double expected_utility = -std::numeric_limits<double>::infinity();
  double top4_mass = 0.0;
  /// Grid point with the largest top-4 mass, for comparison only.
  QaoaParams top4_optimal_params;
  double top4_optimal_mass = -1.0;
  std::size_t points_scanned = 0;
};

/// Scans gamma (outer) x beta (inner), then (0, 0) if it was not on the grid.
/// Maximises <U>; ties keep the first point in scan order.
inline GridTuneResult qaoa_grid_tune(const Landscape& land, std::span<const double> grid_gamma,
                                     std::span<const double> grid_beta) {
  if (grid_gamma.empty() || grid_beta.empty()) throw std::invalid_argument("tuning grids must be nonempty");
  land.validate();
  const auto u = utilities(land);
  const auto top = top_k_set(u, std::min(kTopK, u.size()));

  std::vector<QaoaParams> points;
  points.reserve(grid_gamma.size() * grid_beta.size() + 1);
  bool has_origin = false;
  for (double g : grid_gamma)
    for (double b : grid_beta) {
      points.push_back({g, b});
      has_origin = has_origin || (g == 0.0 && b == 0.0);
    }
  if (!has_origin) points.push_back({0.0, 0.0});

  GridTuneResult best;
  for (const auto& pt : points) {
    const auto dist = qaoa_distribution(u, pt);
    const double eu = expected_value(dist, u);
    const double mass = top_k_mass(dist, top);
    if (eu > best.expected_utility) {
      best.params = pt;
      best.expected_utility = eu;
      best.top4_mass = mass;
    }
    if (mass > best.top4_optimal_mass) {
      best.top4_optimal_params = pt;
      best.top4_optimal_mass = mass;
    }
  }
  best.points_scanned = points.size();
  return best;
}

}  // namespace qsidecar

#endif  // QSIDECAR_SAMPLERS_HPP
