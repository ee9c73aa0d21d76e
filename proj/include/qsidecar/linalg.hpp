#ifndef QSIDECAR_LINALG_HPP
#define QSIDECAR_LINALG_HPP

// Dense complex linear algebra for small registers (at most kMaxQubits).
//
// Qubit ordering: qubit 0 is the most significant bit of a basis-state
// index. For a q-qubit register, qubit t is bit (q - 1 - t) of the index, so
// kron(A, B) places A on qubit 0. Every module in this library uses this
// convention.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsidecar {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 10;

/// Raised when a requested register exceeds the configured qubit cap.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::size_t n) { return std::bit_width(n) - 1; }

inline void require_qubits(int q) {
  if (q > kMaxQubits) {
    throw ConfigError("register of " + std::to_string(q) + " qubits exceeds cap of " +
                      std::to_string(kMaxQubits));
  }
}

/// Index mask of qubit t in a q-qubit register.
inline std::size_t qubit_mask(int q, int t) { return std::size_t{1} << (q - 1 - t); }

}  // namespace detail

/// Square complex matrix, row-major, dimension a power of two.
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1) {}

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (!detail::is_power_of_two(dim)) {
      throw std::invalid_argument("matrix dimension must be a power of two");
    }
    detail::require_qubits(detail::log2_exact(dim));
  }

  ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : ComplexMatrix(dim) {
    if (entries.size() != dim * dim) {
      throw std::invalid_argument("entry count does not match dim*dim");
    }
    data_ = std::move(entries);
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const { return dim_; }
  int qubit_count() const { return detail::log2_exact(dim_); }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  std::span<cplx> entries() { return data_; }
  std::span<const cplx> entries() const { return data_; }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same_dim(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_dim(b);
    using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto n = static_cast<Eigen::Index>(a.dim_);
    ComplexMatrix out(a.dim_);
    Eigen::Map<RowMajor>(out.data_.data(), n, n).noalias() =
        Eigen::Map<const RowMajor>(a.data_.data(), n, n) *
        Eigen::Map<const RowMajor>(b.data_.data(), n, n);
    return out;
  }

  std::vector<cplx> apply(std::span<const cplx> v) const {
    if (v.size() != dim_) throw std::invalid_argument("vector length does not match matrix dim");
    std::vector<cplx> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[c];
      out[r] = acc;
    }
    return out;
  }

  double max_abs_diff(const ComplexMatrix& o) const {
    check_same_dim(o);
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) worst = std::max(worst, std::abs(data_[i] - o.data_[i]));
    return worst;
  }

 private:
  void check_same_dim(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t dim_;
  std::vector<cplx> data_;
};

namespace gates {

inline ComplexMatrix I() { return ComplexMatrix::identity(2); }
inline ComplexMatrix X() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix Y() { return ComplexMatrix(2, {0.0, cplx(0, -1), cplx(0, 1), 0.0}); }
inline ComplexMatrix Z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
inline ComplexMatrix H() {
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, {s, s, s, -s});
}
/// |0><0| and |1><1|.
inline ComplexMatrix P0() { return ComplexMatrix(2, {1.0, 0.0, 0.0, 0.0}); }
inline ComplexMatrix P1() { return ComplexMatrix(2, {0.0, 0.0, 0.0, 1.0}); }

/// exp(-i theta Y / 2).
inline ComplexMatrix Ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return ComplexMatrix(2, {c, -s, s, c});
}

/// exp(-i beta X) = cos(beta) I - i sin(beta) X.
inline ComplexMatrix Rx_mixer(double beta) {
  const cplx c = std::cos(beta), s = cplx(0, -std::sin(beta));
  return ComplexMatrix(2, {c, s, s, c});
}

}  // namespace gates

/// Kronecker product; a occupies the leading (more significant) qubits.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_qubits(a.qubit_count() + b.qubit_count());
  const std::size_t da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (std::size_t ar = 0; ar < da; ++ar)
    for (std::size_t ac = 0; ac < da; ++ac) {
      const cplx s = a(ar, ac);
      if (s == cplx(0.0)) continue;
      for (std::size_t br = 0; br < db; ++br)
        for (std::size_t bc = 0; bc < db; ++bc) out(ar * db + br, ac * db + bc) = s * b(br, bc);
    }
  return out;
}

/// I ⊗ ... ⊗ gate ⊗ ... ⊗ I with gate on qubit `target` of a q-qubit register.
inline ComplexMatrix embed_single_qubit_gate(const ComplexMatrix& gate, int target, int q) {
  if (gate.dim() != 2) throw std::invalid_argument("embedded gate must be 2x2");
  if (q < 1 || target < 0 || target >= q) throw std::invalid_argument("target qubit out of range");
  detail::require_qubits(q);
  ComplexMatrix out = target == 0 ? gate : gates::I();
  for (int t = 1; t < q; ++t) out = kron(out, t == target ? gate : gates::I());
  return out;
}

/// State vector of q qubits. Norm is not enforced on construction; call
/// norm_error() where unit norm is part of the contract.
class PureState {
 public:
  explicit PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    if (!detail::is_power_of_two(amps_.size())) {
      throw std::invalid_argument("state length must be a power of two");
    }
    detail::require_qubits(qubit_count());
  }

  static PureState basis(int q, std::size_t index) {
    detail::require_qubits(q);
    std::vector<cplx> a(std::size_t{1} << q);
    if (index >= a.size()) throw std::invalid_argument("basis index out of range");
    a[index] = 1.0;
    return PureState(std::move(a));
  }

  int qubit_count() const { return detail::log2_exact(amps_.size()); }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }
  double norm_error() const { return std::abs(norm_squared() - 1.0); }

 private:
  std::vector<cplx> amps_;
};

/// Applies a 2x2 gate to qubit `target` in place, without building the
/// embedded operator.
inline void apply_single_qubit_gate(PureState& psi, const ComplexMatrix& gate, int target) {
  const int q = psi.qubit_count();
  if (target < 0 || target >= q) throw std::invalid_argument("target qubit out of range");
  const std::size_t mask = detail::qubit_mask(q, target);
  const cplx g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
  for (std::size_t i0 = 0; i0 < psi.dim(); ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    const cplx a0 = psi[i0], a1 = psi[i1];
    psi[i0] = g00 * a0 + g01 * a1;
    psi[i1] = g10 * a0 + g11 * a1;
  }
}

class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}

  static DensityMatrix from_pure(const PureState& psi) {
    ComplexMatrix m(psi.dim());
    for (std::size_t r = 0; r < psi.dim(); ++r)
      for (std::size_t c = 0; c < psi.dim(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
    return DensityMatrix(std::move(m));
  }

  static DensityMatrix maximally_mixed(int q) {
    detail::require_qubits(q);
    const std::size_t d = std::size_t{1} << q;
    return DensityMatrix(ComplexMatrix::identity(d) * cplx(1.0 / static_cast<double>(d)));
  }

  int qubit_count() const { return m_.qubit_count(); }
  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }
  ComplexMatrix& matrix() { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double trace_error() const { return std::abs(m_.trace() - cplx(1.0)); }

  double hermiticity_error() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t c = r; c < dim(); ++c)
        worst = std::max(worst, std::abs(m_(r, c) - std::conj(m_(c, r))));
    return worst;
  }

 private:
  ComplexMatrix m_;
};

namespace detail {

inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd dense = Eigen::Map<const RowMajor>(m.entries().data(), n, n);
  // Symmetrise so rounding noise in the upper triangle cannot bias the solver.
  dense = 0.5 * (dense + dense.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

/// Smallest eigenvalue of the Hermitian part of rho.
inline double min_eigenvalue(const DensityMatrix& rho) {
  return detail::hermitian_eigenvalues(rho.matrix()).minCoeff();
}

/// True when rho is Hermitian, unit trace and PSD within `tol`.
inline bool satisfies_density_invariants(const DensityMatrix& rho, double tol = 1e-10) {
  return rho.hermiticity_error() <= tol && rho.trace_error() <= tol && min_eigenvalue(rho) >= -tol;
}

/// rho -> G rho G† with G acting on qubit `target`, applied in place in O(dim^2).
inline void conjugate_single_qubit(DensityMatrix& rho, const ComplexMatrix& gate, int target) {
  const int q = rho.qubit_count();
  if (target < 0 || target >= q) throw std::invalid_argument("target qubit out of range");
  if (gate.dim() != 2) throw std::invalid_argument("gate must be 2x2");
  const std::size_t d = rho.dim();
  const std::size_t mask = detail::qubit_mask(q, target);
  const cplx g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
  auto& m = rho.matrix();
  // Left multiply by G.
  for (std::size_t i0 = 0; i0 < d; ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    for (std::size_t c = 0; c < d; ++c) {
      const cplx r0 = m(i0, c), r1 = m(i1, c);
      m(i0, c) = g00 * r0 + g01 * r1;
      m(i1, c) = g10 * r0 + g11 * r1;
    }
  }
  // Right multiply by G†.
  const cplx h00 = std::conj(g00), h01 = std::conj(g10), h10 = std::conj(g01), h11 = std::conj(g11);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j0 = 0; j0 < d; ++j0) {
      if (j0 & mask) continue;
      const std::size_t j1 = j0 | mask;
      const cplx c0 = m(r, j0), c1 = m(r, j1);
      m(r, j0) = c0 * h00 + c1 * h10;
      m(r, j1) = c0 * h01 + c1 * h11;
    }
  }
}

/// Single-qubit depolarizing channel (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
/// on qubit `target`, in place. p = 3/4 is the fully depolarizing point.
///
/// On each 2x2 block over the target bit the Pauli sum reduces to: diagonal
/// entries mix by 2p/3, off-diagonal entries shrink by 1 - 4p/3.
inline void depolarize_in_place(DensityMatrix& rho, int target, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing probability outside [0,1]");
  if (target < 0 || target >= rho.qubit_count()) throw std::invalid_argument("target qubit out of range");
  if (p == 0.0) return;
  const std::size_t d = rho.dim();
  const std::size_t mask = detail::qubit_mask(rho.qubit_count(), target);
  const double keep = 1.0 - 2.0 * p / 3.0, swap = 2.0 * p / 3.0, shrink = 1.0 - 4.0 * p / 3.0;
  auto& m = rho.matrix();
  for (std::size_t i0 = 0; i0 < d; ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    for (std::size_t j0 = 0; j0 < d; ++j0) {
      if (j0 & mask) continue;
      const std::size_t j1 = j0 | mask;
      const cplx a = m(i0, j0), dd = m(i1, j1);
      m(i0, j0) = keep * a + swap * dd;
      m(i1, j1) = keep * dd + swap * a;
      m(i0, j1) *= shrink;
      m(i1, j0) *= shrink;
    }
  }
}

inline DensityMatrix apply_depolarizing(const DensityMatrix& rho, int target, double p) {
  DensityMatrix out = rho;
  depolarize_in_place(out, target, p);
  return out;
}

/// Reduced state on `keep` (any order, duplicates rejected). Kept qubits
/// retain their relative order: the smallest kept index becomes qubit 0.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int q = rho.qubit_count();
  if (keep.empty()) throw std::invalid_argument("partial trace needs at least one kept qubit");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw std::invalid_argument("duplicate qubit in keep set");
  if (kept.front() < 0 || kept.back() >= q) throw std::invalid_argument("keep index out of range");

  std::vector<int> traced;
  for (int t = 0, k = 0; t < q; ++t) {
    if (k < static_cast<int>(kept.size()) && kept[k] == t) ++k;
    else traced.push_back(t);
  }

  // Full-register offsets for every configuration of a qubit subset.
  auto offsets = [q](const std::vector<int>& qubits) {
    const int n = static_cast<int>(qubits.size());
    std::vector<std::size_t> out(std::size_t{1} << n, 0);
    for (std::size_t cfg = 0; cfg < out.size(); ++cfg)
      for (int b = 0; b < n; ++b)
        if (cfg & (std::size_t{1} << (n - 1 - b))) out[cfg] |= detail::qubit_mask(q, qubits[b]);
    return out;
  };
  const auto keep_off = offsets(kept);
  const auto trace_off = offsets(traced);

  ComplexMatrix out(keep_off.size());
  for (std::size_t a = 0; a < keep_off.size(); ++a)
    for (std::size_t b = 0; b < keep_off.size(); ++b) {
      cplx s = 0.0;
      for (const std::size_t e : trace_off) s += rho(keep_off[a] | e, keep_off[b] | e);
      out(a, b) = s;
    }
  return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// (1/2) Σ |eigenvalues(a - b)|, which equals half the nuclear norm for the
/// Hermitian difference of two density matrices.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace distance of mismatched dims");
  const auto ev = detail::hermitian_eigenvalues(a.matrix() - b.matrix());
  return 0.5 * ev.cwiseAbs().sum();
}

/// Re <psi|rho|psi>, unclamped.
inline double fidelity_pure(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw std::invalid_argument("fidelity of mismatched dims");
  cplx acc = 0.0;
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    cplx row = 0.0;
    for (std::size_t c = 0; c < rho.dim(); ++c) row += rho(r, c) * psi[c];
    acc += std::conj(psi[r]) * row;
  }
  return acc.real();
}

}  // namespace qsidecar

#endif  // QSIDECAR_LINALG_HPP
