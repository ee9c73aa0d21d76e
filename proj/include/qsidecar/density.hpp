#ifndef QSIDECAR_DENSITY_HPP
#define QSIDECAR_DENSITY_HPP

// Stateful protected-register experiment: an m-qubit GHZ-like register
// (qubits 0..m-1) plus one ancilla (qubit m, the least significant bit).
// Each round applies the CNOT parity fan onto the ancilla, depolarizes all
// m+1 qubits, reads Pr(ancilla = 0), scores fidelity of the reduced register
// against the initial state, then resets the ancilla non-selectively.

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsidecar/linalg.hpp"

namespace qsidecar {

struct GhzSpec {
  int m = 8;
  double alpha_sq = 0.37;
  double phi = 0.41;

  double beta_sq() const { return 1.0 - alpha_sq; }

  void validate() const {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("GHZ register size must be even and >= 2");
    if (!(alpha_sq >= 0.0 && alpha_sq <= 1.0)) throw std::invalid_argument("alpha_sq outside [0,1]");
    if (!std::isfinite(phi)) throw std::invalid_argument("phi must be finite");
    detail::require_qubits(m + 1);
  }
};

struct NoiseConfig {
  double p = 0.0;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing probability outside [0,1]");
  }
};

struct RoundRecord {
  int round = 0;
  double fidelity = 0.0;
  double parity_accuracy = 0.0;
};

/// sqrt(alpha_sq)|0...0> + e^{i phi} sqrt(beta_sq)|1...1> on m qubits.
inline PureState prepare_ghz(const GhzSpec& spec) {
  spec.validate();
  std::vector<cplx> a(std::size_t{1} << spec.m);
  a.front() = std::sqrt(spec.alpha_sq);
  a.back() = std::polar(std::sqrt(spec.beta_sq()), spec.phi);
  return PureState(std::move(a));
}

/// |alpha|^4 + |beta|^4: success probability of reading the register in the
/// computational basis and re-preparing from the outcome.
inline double direct_baseline(const GhzSpec& spec) {
  return spec.alpha_sq * spec.alpha_sq + spec.beta_sq() * spec.beta_sq();
}

/// Product of CNOT(j -> m), j = 0..m-1, as an explicit (m+1)-qubit matrix
/// built from embedded projectors and matrix products.
inline ComplexMatrix parity_unitary_dense(int m) {
  if (m < 1) throw std::invalid_argument("parity readout needs at least one protected qubit");
  detail::require_qubits(m + 1);
  const int q = m + 1;
  const ComplexMatrix flip = embed_single_qubit_gate(gates::X(), m, q);
  ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << q);
  for (int j = 0; j < m; ++j) {
    const ComplexMatrix cnot =
        embed_single_qubit_gate(gates::P0(), j, q) + embed_single_qubit_gate(gates::P1(), j, q) * flip;
    u = cnot * u;
  }
  return u;
}

namespace detail {

inline void check_parity_register(int qubits, int m) {
  if (m < 1) throw std::invalid_argument("parity readout needs at least one protected qubit");
  require_qubits(m + 1);
  if (qubits != m + 1) throw std::invalid_argument("state must hold m protected qubits plus one ancilla");
}

}  // namespace detail

/// Gate-wise parity readout: each CNOT is an index involution i -> i ^ ancilla
/// when the control bit is set. No operator is materialised.
inline PureState parity_apply_gatewise(PureState psi, int m) {
  detail::check_parity_register(psi.qubit_count(), m);
  const int q = m + 1;
  const std::size_t anc = detail::qubit_mask(q, m);
  for (int j = 0; j < m; ++j) {
    const std::size_t ctrl = detail::qubit_mask(q, j);
    for (std::size_t i = 0; i < psi.dim(); ++i)
      if ((i & ctrl) && !(i & anc)) std::swap(psi[i], psi[i | anc]);
  }
  return psi;
}

inline DensityMatrix parity_apply_gatewise(DensityMatrix rho, int m) {
  detail::check_parity_register(rho.qubit_count(), m);
  const int q = m + 1;
  const std::size_t d = rho.dim();
  const std::size_t anc = detail::qubit_mask(q, m);
  auto& mat = rho.matrix();
  for (int j = 0; j < m; ++j) {
    const std::size_t ctrl = detail::qubit_mask(q, j);
    auto perm = [&](std::size_t i) { return (i & ctrl) ? i ^ anc : i; };
    // Row permutation then column permutation; perm is an involution.
    for (std::size_t r = 0; r < d; ++r)
      if ((r & ctrl) && !(r & anc))
        for (std::size_t c = 0; c < d; ++c) std::swap(mat(r, c), mat(r | anc, c));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (perm(c) > c) std::swap(mat(r, c), mat(r, perm(c)));
  }
  return rho;
}

/// U rho U† with U = parity_unitary_dense(m).
inline DensityMatrix parity_apply_dense(const DensityMatrix& rho, int m) {
  detail::check_parity_register(rho.qubit_count(), m);
  const ComplexMatrix u = parity_unitary_dense(m);
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

/// Register state |psi_A><psi_A| ⊗ |0><0|.
inline DensityMatrix with_fresh_ancilla(const DensityMatrix& protected_state) {
  return DensityMatrix(kron(protected_state.matrix(), gates::P0()));
}

/// Trace distance between the dense and gate-wise parity readouts of
/// |psi_A>|0>. Zero up to rounding when both paths agree.
inline double parity_cross_check(const GhzSpec& spec) {
  const DensityMatrix rho = with_fresh_ancilla(DensityMatrix::from_pure(prepare_ghz(spec)));
  return trace_distance(parity_apply_dense(rho, spec.m), parity_apply_gatewise(rho, spec.m));
}

struct RoundResult {
  DensityMatrix state;
  RoundRecord record;
};

/// One readout round on an (m+1)-qubit state whose ancilla is |0>. The
/// returned state already has its ancilla reset.
inline RoundResult run_round(const DensityMatrix& rho, const PureState& psi_a, const NoiseConfig& noise,
                             int round_index = 1) {
  noise.validate();
  const int m = psi_a.qubit_count();
  detail::check_parity_register(rho.qubit_count(), m);

  DensityMatrix cur = parity_apply_gatewise(rho, m);
  for (int t = 0; t <= m; ++t) depolarize_in_place(cur, t, noise.p);

  const DensityMatrix ancilla = partial_trace(cur, {m});
  std::vector<int> register_qubits(m);
  std::iota(register_qubits.begin(), register_qubits.end(), 0);
  const DensityMatrix reduced = partial_trace(cur, register_qubits);

  RoundRecord rec;
  rec.round = round_index;
  rec.parity_accuracy = ancilla(0, 0).real();
  rec.fidelity = fidelity_pure(psi_a, reduced);
  return {with_fresh_ancilla(reduced), rec};
}

inline std::vector<RoundRecord> run_protocol(const GhzSpec& spec, const NoiseConfig& noise, int rounds) {
  spec.validate();
  noise.validate();
  if (rounds < 1) throw std::invalid_argument("protocol needs at least one round");
  const PureState psi_a = prepare_ghz(spec);
  DensityMatrix rho = with_fresh_ancilla(DensityMatrix::from_pure(psi_a));
  std::vector<RoundRecord> out;
  out.reserve(static_cast<std::size_t>(rounds));
  for (int t = 1; t <= rounds; ++t) {
    auto step = run_round(rho, psi_a, noise, t);
    rho = std::move(step.state);
    out.push_back(step.record);
  }
  return out;
}

}  // namespace qsidecar

#endif  // QSIDECAR_DENSITY_HPP
