#ifndef QSIDECAR_LANDSCAPE_HPP
#define QSIDECAR_LANDSCAPE_HPP

// Ising/QUBO utility landscapes over n-bit candidates.
//
// Spin convention: s_i(z) = +1 when qubit i of z is 0 and -1 when it is 1,
// with qubit i being bit (n - 1 - i) of z (qubit 0 is the MSB, as everywhere
// in this library).
//
//   U(z) = sum_i h_i s_i(z) + sum_{i<j} J_ij s_i(z) s_j(z)

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsidecar/linalg.hpp"
#include "qsidecar/rng.hpp"

namespace qsidecar {

using CandidateIndex = std::uint32_t;

struct Landscape {
  int n = 0;
  std::vector<double> h;
  /// Strict upper triangle, row-major: (0,1), (0,2), ..., (0,n-1), (1,2), ...
  std::vector<double> j;
  std::uint64_t seed = 0;

  std::size_t candidate_count() const { return std::size_t{1} << n; }

  static std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

  double coupling(int a, int b) const {
    if (a > b) std::swap(a, b);
    // Offset of row a in the packed strict upper triangle.
    const std::size_t row = static_cast<std::size_t>(a) * (2 * n - a - 1) / 2;
    return j[row + (b - a - 1)];
  }

  void validate() const {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("landscape size outside [1, 10]");
    if (h.size() != static_cast<std::size_t>(n) || j.size() != pair_count(n))
      throw std::invalid_argument("landscape coefficient counts do not match n");
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(h.begin(), h.end(), finite) || !std::all_of(j.begin(), j.end(), finite))
      throw std::invalid_argument("landscape coefficients must be finite");
  }
};

inline int spin(const Landscape& land, CandidateIndex z, int i) {
  return ((z >> (land.n - 1 - i)) & 1U) ? -1 : 1;
}

/// h_i and J_ij i.i.d. standard normal, h drawn first.
inline Landscape generate_landscape(int n, Rng& rng) {
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("landscape size outside [1, 10]");
  Landscape land;
  land.n = n;
  land.seed = rng.seed();
  land.h.resize(n);
  for (auto& x : land.h) x = rng.normal();
  land.j.resize(Landscape::pair_count(n));
  for (auto& x : land.j) x = rng.normal();
  return land;
}

inline Landscape generate_landscape(int n, std::uint64_t seed) {
  Rng rng(seed);
  return generate_landscape(n, rng);
}

inline double utility(const Landscape& land, CandidateIndex z) {
  if (z >= land.candidate_count()) throw std::invalid_argument("candidate index out of range");
  std::vector<int> s(land.n);
  for (int i = 0; i < land.n; ++i) s[i] = spin(land, z, i);
  double u = 0.0;
  for (int i = 0; i < land.n; ++i) u += land.h[i] * s[i];
  std::size_t k = 0;
  for (int a = 0; a < land.n; ++a)
    for (int b = a + 1; b < land.n; ++b) u += land.j[k++] * s[a] * s[b];
  return u;
}

/// U(z) for every candidate, in index order.
inline std::vector<double> utilities(const Landscape& land) {
  std::vector<double> u(land.candidate_count());
  for (CandidateIndex z = 0; z < u.size(); ++z) u[z] = utility(land, z);
  return u;
}

/// Candidates ordered best first; equal utilities go to the smaller index.
inline std::vector<CandidateIndex> ranking(std::span<const double> u) {
  std::vector<CandidateIndex> order(u.size());
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](CandidateIndex a, CandidateIndex b) { return u[a] > u[b]; });
  return order;
}

/// The k best candidates, best first.
inline std::vector<CandidateIndex> top_k_set(std::span<const double> u, std::size_t k) {
  if (k < 1 || k > u.size()) throw std::invalid_argument("k outside [1, 2^n]");
  auto order = ranking(u);
  order.resize(k);
  return order;
}

inline std::vector<CandidateIndex> top_k_set(const Landscape& land, std::size_t k) {
  return top_k_set(utilities(land), k);
}

/// 1-based rank under the same tie rule as ranking().
inline std::size_t rank_of(std::span<const double> u, CandidateIndex z) {
  std::size_t better = 0;
  for (CandidateIndex y = 0; y < u.size(); ++y)
    if (u[y] > u[z] || (u[y] == u[z] && y < z)) ++better;
  return better + 1;
}

inline double regret(std::span<const double> u, CandidateIndex z) {
  if (z >= u.size()) throw std::invalid_argument("candidate index out of range");
  return *std::max_element(u.begin(), u.end()) - u[z];
}

inline double regret(const Landscape& land, CandidateIndex z) { return regret(utilities(land), z); }

// Plain-text form:
//   n = 4
//   seed = 42
//   h = <n values>
//   J = <n(n-1)/2 values, packed upper triangle>
// Values use 17 significant digits so parsing restores the exact doubles.
inline std::string to_text(const Landscape& land) {
  std::ostringstream os;
  char buf[32];
  os << "n = " << land.n << "\nseed = " << land.seed << "\nh =";
  for (double x : land.h) {
    std::snprintf(buf, sizeof buf, " %.17g", x);
    os << buf;
  }
  os << "\nJ =";
  for (double x : land.j) {
    std::snprintf(buf, sizeof buf, " %.17g", x);
    os << buf;
  }
  os << "\n";
  return os.str();
}

inline Landscape landscape_from_text(const std::string& text) {
  Landscape land;
  bool have_n = false, have_h = false, have_j = false;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    std::istringstream rest(line.substr(eq + 1));
    if (key == "n") {
      have_n = static_cast<bool>(rest >> land.n);
    } else if (key == "seed") {
      rest >> land.seed;
    } else if (key == "h" || key == "J") {
      auto& dst = key == "h" ? land.h : land.j;
      for (double x; rest >> x;) dst.push_back(x);
      (key == "h" ? have_h : have_j) = true;
    }
  }
  if (!have_n || !have_h || !have_j) throw std::invalid_argument("landscape text missing n, h or J");
  land.validate();
  return land;
}

}  // namespace qsidecar

#endif  // QSIDECAR_LANDSCAPE_HPP
