#ifndef QSIDECAR_ROUTING_HPP
#define QSIDECAR_ROUTING_HPP

// Toy expert-routing consumer of a sidecar prior. Classical only.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsidecar/rng.hpp"

namespace qsidecar {

struct RoutingProblem {
  int experts = 8;
  std::vector<int> true_expert;

  std::size_t trials() const { return true_expert.size(); }
};

inline RoutingProblem make_routing_problem(int experts, std::size_t trials, Rng& rng) {
  if (experts < 1) throw std::invalid_argument("need at least one expert");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  RoutingProblem p;
  p.experts = experts;
  p.true_expert.resize(trials);
  for (auto& e : p.true_expert) e = static_cast<int>(rng.index(static_cast<std::uint64_t>(experts)));
  return p;
}

struct PriorRouterConfig {
  double reliability = 0.75;

  void validate() const {
    if (!(reliability >= 0.55 && reliability <= 0.95))
      throw std::invalid_argument("prior reliability outside [0.55, 0.95]");
  }
};

inline double route_random(const RoutingProblem& problem, Rng& rng) {
  std::size_t hits = 0;
  for (int truth : problem.true_expert)
    hits += static_cast<int>(rng.index(static_cast<std::uint64_t>(problem.experts))) == truth;
  return static_cast<double>(hits) / static_cast<double>(problem.trials());
}

/// Scores are one-hot on the true expert plus N(0, sigma²); routes to argmax
/// (lowest index on ties).
inline double route_noisy_classical(const RoutingProblem& problem, double noise_sigma, Rng& rng) {
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  std::size_t hits = 0;
  std::vector<double> score(static_cast<std::size_t>(problem.experts));
  for (int truth : problem.true_expert) {
    for (int e = 0; e < problem.experts; ++e) score[e] = (e == truth ? 1.0 : 0.0) + noise_sigma * rng.normal();
    hits += std::max_element(score.begin(), score.end()) - score.begin() == truth;
  }
  return static_cast<double>(hits) / static_cast<double>(problem.trials());
}

/// The prior names the true expert with probability r, otherwise a uniformly
/// chosen wrong expert. The router follows the prior.
inline double route_with_prior(const RoutingProblem& problem, const PriorRouterConfig& cfg, Rng& rng) {
  cfg.validate();
  std::size_t hits = 0;
  for (int truth : problem.true_expert) {
    int pick = truth;
    if (!rng.bernoulli(cfg.reliability) && problem.experts > 1) {
      pick = static_cast<int>(rng.index(static_cast<std::uint64_t>(problem.experts - 1)));
      if (pick >= truth) ++pick;
    }
    hits += pick == truth;
  }
  return static_cast<double>(hits) / static_cast<double>(problem.trials());
}

}  // namespace qsidecar

#endif  // QSIDECAR_ROUTING_HPP
