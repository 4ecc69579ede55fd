#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtnet {

using cplx = std::complex<double>;

// Tolerances shared by guards and invariant checks.
inline constexpr double norm_tol = 1e-12;
inline constexpr double unitary_tol = 1e-10;
inline constexpr double basis_tol = 1e-10;
inline constexpr double min_forced_probability = 1e-12;
// Acceptable coherent-state weight beyond the Fock cutoff.  The default
// working point (alpha = 2, cutoff = 48) leaves a tail of 2.8e-11 for the
// displaced amplitude 2*alpha, so the guard sits at 1e-10.
inline constexpr double truncation_tail_tol = 1e-10;
inline constexpr double displacement_loss_tol = 1e-9;
// Dense-amplitude cap: at most 2^22 amplitudes per state.
inline constexpr std::size_t max_engine_qubits = 22;

// Guard trips that map to the CLI's "numerical guard" exit code.
struct guard_error : std::runtime_error {
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};
struct truncation_error : guard_error {
  explicit truncation_error(const std::string& what) : guard_error(what) {}
};
struct forced_outcome_error : guard_error {
  explicit forced_outcome_error(const std::string& what) : guard_error(what) {}
};

inline double squared_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& a : v) s += std::norm(a);
  return s;
}

inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  cplx s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

inline void normalize(std::vector<cplx>& v) {
  double n = std::sqrt(squared_norm(v));
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  for (cplx& a : v) a /= n;
}

// Largest component difference after aligning b to a by one global phase.
inline double aligned_linf_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx ip = inner(a, b);
  cplx phase = std::abs(ip) > 0.0 ? std::conj(ip) / std::abs(ip) : cplx(1.0, 0.0);
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - phase * b[k]));
  return d;
}

// 12 significant digits, the report float format.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf);
}

}  // namespace qtnet
