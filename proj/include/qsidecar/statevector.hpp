#ifndef QSIDECAR_STATEVECTOR_HPP
#define QSIDECAR_STATEVECTOR_HPP

// Statevector engine for stateless sampling.
//
// One-layer circuit:
//   |psi(gamma, beta)> = (prod_i e^{-i beta X_i}) e^{+i gamma U} H^n |0...0>
// The phase separator uses +gamma, so gamma < 0 plays the role of the usual
// e^{-i gamma C} with gamma > 0. Mixer: e^{-i beta X} = cos(beta) I - i sin(beta) X.
// The Born distribution is periodic in beta with period pi.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "qsidecar/landscape.hpp"
#include "qsidecar/linalg.hpp"
#include "qsidecar/rng.hpp"

namespace qsidecar {

using CandidateState = PureState;

struct QaoaParams {
  double gamma = 0.0;
  double beta = 0.0;
};

inline CandidateState uniform_superposition(int n) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count outside [1, 10]");
  const std::size_t d = std::size_t{1} << n;
  return CandidateState(std::vector<cplx>(d, cplx(1.0 / std::sqrt(static_cast<double>(d)))));
}

inline CandidateState apply_phase_separator(CandidateState state, std::span<const double> u, double gamma) {
  if (u.size() != state.dim()) throw std::invalid_argument("utility table does not match state size");
  for (std::size_t z = 0; z < state.dim(); ++z) state[z] *= std::polar(1.0, gamma * u[z]);
  return state;
}

inline CandidateState apply_phase_separator(CandidateState state, const Landscape& land, double gamma) {
  if (land.n != state.qubit_count()) throw std::invalid_argument("landscape size does not match state");
  return apply_phase_separator(std::move(state), utilities(land), gamma);
}

inline CandidateState apply_mixer(CandidateState state, double beta) {
  const ComplexMatrix g = gates::Rx_mixer(beta);
  for (int t = 0; t < state.qubit_count(); ++t) apply_single_qubit_gate(state, g, t);
  return state;
}

inline CandidateState qaoa_state(std::span<const double> u, const QaoaParams& params) {
  const int n = detail::log2_exact(u.size());
  return apply_mixer(apply_phase_separator(uniform_superposition(n), u, params.gamma), params.beta);
}

inline std::vector<double> born_distribution(const CandidateState& state) {
  std::vector<double> p(state.dim());
  for (std::size_t z = 0; z < p.size(); ++z) p[z] = std::norm(state[z]);
  return p;
}

inline std::vector<double> qaoa_distribution(std::span<const double> u, const QaoaParams& params) {
  return born_distribution(qaoa_state(u, params));
}

/// Inverse-CDF sampler over index order. The CDF is built once so repeated
/// draws cost O(log K).
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> dist) : cdf_(dist.size()) {
    if (dist.empty()) throw std::invalid_argument("empty distribution");
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (!(dist[i] >= 0.0)) throw std::invalid_argument("distribution has a negative entry");
      acc += dist[i];
      cdf_[i] = acc;
    }
    if (std::abs(acc - 1.0) > 1e-9) throw std::invalid_argument("distribution is not normalized");
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform01() * cdf_.back();
    // First entry whose cumulative mass exceeds u; zero-mass entries are skipped.
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(std::min(it, cdf_.end() - 1) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

inline std::vector<CandidateIndex> sample_candidates(std::span<const double> dist, int shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const DiscreteSampler sampler(dist);
  std::vector<CandidateIndex> out(static_cast<std::size_t>(shots));
  for (auto& z : out) z = static_cast<CandidateIndex>(sampler(rng));
  return out;
}

/// P(1) after R_y(theta)|0>, evaluated through the one-qubit circuit.
inline double ry_prob_one(double theta) {
  PureState psi = PureState::basis(1, 0);
  apply_single_qubit_gate(psi, gates::Ry(theta), 0);
  return born_distribution(psi)[1];
}

/// <Z> after R_y(theta)|0>.
inline double ry_expect_z(double theta) {
  PureState psi = PureState::basis(1, 0);
  apply_single_qubit_gate(psi, gates::Ry(theta), 0);
  const auto p = born_distribution(psi);
  return p[0] - p[1];
}

/// Two-point shift rule d<Z>/dtheta = (<Z>(theta + pi/2) - <Z>(theta - pi/2)) / 2.
inline double parameter_shift_gradient(double theta) {
  constexpr double shift = std::numbers::pi / 2;
  return 0.5 * (ry_expect_z(theta + shift) - ry_expect_z(theta - shift));
}

}  // namespace qsidecar

#endif  // QSIDECAR_STATEVECTOR_HPP
