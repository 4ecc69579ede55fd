#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtnet/common.hpp"
#include "qtnet/outcome.hpp"

namespace qtnet {

enum class ModeKind { qubit, oscillator };

struct ModeDescriptor {
  ModeKind kind;
  std::size_t dim;  // 2 for qubits, cutoff + 1 for oscillators
  std::string label;
};

// Dense amplitude vector over an ordered list of modes.  Basis index is the
// big-endian mixed-radix reading of per-mode values: the first mode varies
// slowest.  Public operations keep the norm at 1 within norm_tol.
class StateVector {
 public:
  StateVector(std::vector<ModeDescriptor> modes, std::vector<cplx> amps)
      : modes_(std::move(modes)), amps_(std::move(amps)) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
      const ModeDescriptor& m = modes_[k];
      if (m.dim < 2) throw std::invalid_argument("mode dim must be at least 2");
      if (m.kind == ModeKind::qubit && m.dim != 2)
        throw std::invalid_argument("qubit mode must have dim 2");
      for (std::size_t j = 0; j < k; ++j)
        if (modes_[j].label == m.label)
          throw std::invalid_argument("duplicate mode label: " + m.label);
      total *= m.dim;
    }
    if (total != amps_.size())
      throw std::invalid_argument("amplitude length does not match mode dims");
    double n = std::sqrt(squared_norm(amps_));
    if (std::abs(n - 1.0) > 1e-6)
      throw std::invalid_argument("state vector is not normalized");
    for (cplx& a : amps_) a /= n;
  }

  static StateVector basis(std::vector<ModeDescriptor> modes, std::size_t index) {
    std::size_t total = 1;
    for (const ModeDescriptor& m : modes) total *= m.dim;
    std::vector<cplx> a(total, 0.0);
    if (index >= total) throw std::invalid_argument("basis index out of range");
    a[index] = 1.0;
    return StateVector(std::move(modes), std::move(a));
  }

  static StateVector single_qubit(const std::string& label, cplx a0, cplx a1) {
    return StateVector({{ModeKind::qubit, 2, label}}, {a0, a1});
  }

  static StateVector oscillator_mode(const std::string& label, std::vector<cplx> amps) {
    const std::size_t dim = amps.size();
    return StateVector({{ModeKind::oscillator, dim, label}}, std::move(amps));
  }

  const std::vector<ModeDescriptor>& modes() const { return modes_; }
  const std::vector<cplx>& amps() const { return amps_; }
  std::size_t dim() const { return amps_.size(); }
  std::size_t mode_count() const { return modes_.size(); }

  bool has_mode(const std::string& label) const {
    for (const ModeDescriptor& m : modes_)
      if (m.label == label) return true;
    return false;
  }

  std::size_t mode_index(const std::string& label) const {
    for (std::size_t k = 0; k < modes_.size(); ++k)
      if (modes_[k].label == label) return k;
    throw std::invalid_argument("unknown mode label: " + label);
  }

  // Big-endian stride of mode k: product of dims of all later modes.
  std::size_t stride(std::size_t mode_idx) const {
    std::size_t s = 1;
    for (std::size_t k = modes_.size(); k-- > mode_idx + 1;) s *= modes_[k].dim;
    return s;
  }

  StateVector with_labels(const std::vector<std::string>& labels) const {
    if (labels.size() != modes_.size())
      throw std::invalid_argument("with_labels: label count mismatch");
    std::vector<ModeDescriptor> m = modes_;
    for (std::size_t k = 0; k < m.size(); ++k) m[k].label = labels[k];
    return StateVector(std::move(m), amps_);
  }

 private:
  std::vector<ModeDescriptor> modes_;
  std::vector<cplx> amps_;
};

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  for (const ModeDescriptor& m : b.modes())
    if (a.has_mode(m.label))
      throw std::invalid_argument("tensor: duplicate mode label " + m.label);
  std::vector<ModeDescriptor> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  std::vector<cplx> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a.amps()[i] * b.amps()[j];
  return StateVector(std::move(modes), std::move(amps));
}

// Square matrix acting on an ordered list of target modes.  Gate-class
// operators are checked unitary on construction.
class Operator {
 public:
  static Operator gate(std::vector<cplx> matrix, std::vector<std::size_t> target_dims) {
    Operator op(std::move(matrix), std::move(target_dims));
    const std::size_t d = op.dim();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < d; ++k)
          s += std::conj(op.matrix_[k * d + i]) * op.matrix_[k * d + j];
        if (std::abs(s - (i == j ? cplx(1.0) : cplx(0.0))) > unitary_tol)
          throw std::invalid_argument("gate operator is not unitary");
      }
    return op;
  }

  const std::vector<cplx>& matrix() const { return matrix_; }
  const std::vector<std::size_t>& target_dims() const { return target_dims_; }
  std::size_t arity() const { return target_dims_.size(); }
  std::size_t dim() const {
    std::size_t d = 1;
    for (std::size_t t : target_dims_) d *= t;
    return d;
  }

 private:
  Operator(std::vector<cplx> matrix, std::vector<std::size_t> target_dims)
      : matrix_(std::move(matrix)), target_dims_(std::move(target_dims)) {
    if (dim() * dim() != matrix_.size())
      throw std::invalid_argument("operator matrix does not match target dims");
  }
  std::vector<cplx> matrix_;
  std::vector<std::size_t> target_dims_;
};

inline Operator pauli_x() { return Operator::gate({0, 1, 1, 0}, {2}); }
inline Operator pauli_z() { return Operator::gate({1, 0, 0, -1}, {2}); }
// sigma_x * sigma_z, the code-3 Pauli factor.
inline Operator pauli_xz() { return Operator::gate({0, -1, 1, 0}, {2}); }
inline Operator hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return Operator::gate({s, s, s, -s}, {2});
}
// Basis order (control, target), big-endian.
inline Operator cnot() {
  return Operator::gate({1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}, {2, 2});
}

namespace detail {

struct TargetLayout {
  std::vector<std::size_t> strides;  // state stride per target mode
  std::vector<std::size_t> dims;
  std::size_t block = 1;                // product of target dims
  std::vector<std::size_t> offsets;     // amp offset of each target block index
};

inline TargetLayout target_layout(const StateVector& s, const std::vector<std::string>& targets) {
  TargetLayout lay;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j)
      if (targets[j] == targets[k])
        throw std::invalid_argument("duplicate target mode: " + targets[k]);
    std::size_t idx = s.mode_index(targets[k]);
    lay.strides.push_back(s.stride(idx));
    lay.dims.push_back(s.modes()[idx].dim);
    lay.block *= s.modes()[idx].dim;
  }
  lay.offsets.assign(lay.block, 0);
  for (std::size_t t = 0; t < lay.block; ++t) {
    std::size_t rem = t, off = 0;
    for (std::size_t k = lay.dims.size(); k-- > 0;) {
      off += (rem % lay.dims[k]) * lay.strides[k];
      rem /= lay.dims[k];
    }
    lay.offsets[t] = off;
  }
  return lay;
}

inline bool is_base_index(std::size_t idx, const TargetLayout& lay) {
  for (std::size_t k = 0; k < lay.strides.size(); ++k)
    if ((idx / lay.strides[k]) % lay.dims[k] != 0) return false;
  return true;
}

}  // namespace detail

inline StateVector apply(const StateVector& s, const Operator& op,
                         const std::vector<std::string>& targets) {
  if (targets.size() != op.arity())
    throw std::invalid_argument("apply: operator arity does not match target count");
  detail::TargetLayout lay = detail::target_layout(s, targets);
  for (std::size_t k = 0; k < targets.size(); ++k)
    if (lay.dims[k] != op.target_dims()[k])
      throw std::invalid_argument("apply: target dim mismatch on " + targets[k]);
  const std::size_t d = lay.block;
  const std::vector<cplx>& a = s.amps();
  const std::vector<cplx>& M = op.matrix();
  std::vector<cplx> out(a.size(), 0.0);
  std::vector<cplx> block(d);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (!detail::is_base_index(idx, lay)) continue;
    for (std::size_t t = 0; t < d; ++t) block[t] = a[idx + lay.offsets[t]];
    for (std::size_t r = 0; r < d; ++r) {
      cplx w = 0.0;
      for (std::size_t c = 0; c < d; ++c) w += M[r * d + c] * block[c];
      out[idx + lay.offsets[r]] = w;
    }
  }
  return StateVector(s.modes(), std::move(out));
}

// Orthonormal, complete basis on a target subspace; validated on construction
// so repeated measurements skip the Gram check.
struct MeasurementBasis {
  std::vector<std::vector<cplx>> vectors;

  static MeasurementBasis checked(std::vector<std::vector<cplx>> vecs) {
    if (vecs.empty()) throw std::invalid_argument("basis is empty");
    const std::size_t d = vecs[0].size();
    if (vecs.size() != d)
      throw std::invalid_argument("basis is not complete on the target subspace");
    for (const auto& v : vecs)
      if (v.size() != d) throw std::invalid_argument("basis vectors have mixed lengths");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        cplx g = inner(vecs[i], vecs[j]);
        if (std::abs(g - (i == j ? cplx(1.0) : cplx(0.0))) > basis_tol)
          throw std::invalid_argument("basis is not orthonormal");
      }
    MeasurementBasis b;
    b.vectors = std::move(vecs);
    return b;
  }
};

struct MeasureResult {
  std::size_t outcome;
  double probability;
  StateVector state;
};

inline MeasureResult measure(const StateVector& s, const std::vector<std::string>& targets,
                             const MeasurementBasis& basis, OutcomeSource& source) {
  detail::TargetLayout lay = detail::target_layout(s, targets);
  const std::size_t d = lay.block;
  if (basis.vectors.size() != d)
    throw std::invalid_argument("measure: basis dimension does not match targets");
  const std::vector<cplx>& a = s.amps();
  std::vector<double> probs(d, 0.0);
  std::vector<cplx> block(d);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (!detail::is_base_index(idx, lay)) continue;
    for (std::size_t t = 0; t < d; ++t) block[t] = a[idx + lay.offsets[t]];
    for (std::size_t o = 0; o < d; ++o) probs[o] += std::norm(inner(basis.vectors[o], block));
  }
  std::size_t outcome = source.sample(probs);
  double p = probs[outcome];
  const std::vector<cplx>& e = basis.vectors[outcome];
  std::vector<cplx> out(a.size(), 0.0);
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (!detail::is_base_index(idx, lay)) continue;
    for (std::size_t t = 0; t < d; ++t) block[t] = a[idx + lay.offsets[t]];
    cplx c = inner(e, block) * scale;
    for (std::size_t t = 0; t < d; ++t) out[idx + lay.offsets[t]] = c * e[t];
  }
  return {outcome, p, StateVector(s.modes(), std::move(out))};
}

inline void check_same_layout(const StateVector& a, const StateVector& b) {
  if (a.mode_count() != b.mode_count())
    throw std::invalid_argument("states have different mode counts");
  for (std::size_t k = 0; k < a.mode_count(); ++k) {
    if (a.modes()[k].kind != b.modes()[k].kind || a.modes()[k].dim != b.modes()[k].dim)
      throw std::invalid_argument("states have different mode layouts");
  }
}

// |<a|b>|^2.  Layout = ordered kinds and dims; labels are not compared.
inline double fidelity(const StateVector& a, const StateVector& b) {
  check_same_layout(a, b);
  return std::norm(inner(a.amps(), b.amps()));
}

namespace detail {

// Reduced density matrix on targets, row-major, dimension lay.block.
inline std::vector<cplx> reduced_density(const StateVector& s,
                                         const std::vector<std::string>& targets,
                                         TargetLayout& lay) {
  lay = target_layout(s, targets);
  const std::size_t d = lay.block;
  const std::vector<cplx>& a = s.amps();
  std::vector<cplx> rho(d * d, 0.0);
  std::vector<cplx> block(d);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (!is_base_index(idx, lay)) continue;
    for (std::size_t t = 0; t < d; ++t) block[t] = a[idx + lay.offsets[t]];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) rho[r * d + c] += block[r] * std::conj(block[c]);
  }
  return rho;
}

}  // namespace detail

inline double reduced_purity(const StateVector& s, const std::vector<std::string>& targets) {
  if (targets.empty()) throw std::invalid_argument("reduced_purity: no targets");
  if (targets.size() >= s.mode_count())
    throw std::invalid_argument("reduced_purity: targets must be a proper subset");
  detail::TargetLayout lay;
  std::vector<cplx> rho = detail::reduced_density(s, targets, lay);
  double purity = 0.0;
  for (const cplx& r : rho) purity += std::norm(r);
  return purity;
}

// Dominant eigenvector of the reduced density matrix on targets; requires the
// subsystem to be pure (exact product structure up to 1e-8).
inline std::vector<cplx> extract_pure_substate(const StateVector& s,
                                               const std::vector<std::string>& targets) {
  detail::TargetLayout lay;
  std::vector<cplx> rho = detail::reduced_density(s, targets, lay);
  const std::size_t d = lay.block;
  double purity = 0.0;
  for (const cplx& r : rho) purity += std::norm(r);
  if (purity < 1.0 - 1e-8)
    throw std::runtime_error("subsystem is not pure (purity " + format_double(purity) + ")");
  std::size_t start = 0;
  for (std::size_t k = 1; k < d; ++k)
    if (rho[k * d + k].real() > rho[start * d + start].real()) start = k;
  std::vector<cplx> v(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) v[c] = std::conj(rho[start * d + c]);
  normalize(v);
  std::vector<cplx> w(d);
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t r = 0; r < d; ++r) {
      cplx s2 = 0.0;
      for (std::size_t c = 0; c < d; ++c) s2 += rho[r * d + c] * v[c];
      w[r] = s2;
    }
    normalize(w);
    double moved = aligned_linf_distance(v, w);
    v.swap(w);
    if (moved < 1e-15) break;
  }
  return v;
}

// Removes a mode that is in a definite basis state (e.g. after measurement in
// the computational basis), slicing the amplitude vector.
inline StateVector remove_basis_mode(const StateVector& s, const std::string& label) {
  if (s.mode_count() < 2)
    throw std::invalid_argument("remove_basis_mode: cannot remove the last mode");
  const std::size_t mi = s.mode_index(label);
  const std::size_t dim = s.modes()[mi].dim;
  const std::size_t str = s.stride(mi);
  const std::vector<cplx>& a = s.amps();
  std::vector<double> weight(dim, 0.0);
  for (std::size_t idx = 0; idx < a.size(); ++idx) weight[(idx / str) % dim] += std::norm(a[idx]);
  std::size_t v = 0;
  for (std::size_t k = 1; k < dim; ++k)
    if (weight[k] > weight[v]) v = k;
  if (weight[v] < 1.0 - 1e-9)
    throw std::invalid_argument("remove_basis_mode: mode is not in a basis state");
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 0; k < s.mode_count(); ++k)
    if (k != mi) modes.push_back(s.modes()[k]);
  std::vector<cplx> out;
  out.reserve(a.size() / dim);
  for (std::size_t idx = 0; idx < a.size(); ++idx)
    if ((idx / str) % dim == v) out.push_back(a[idx]);
  double n = std::sqrt(squared_norm(out));
  for (cplx& x : out) x /= n;
  return StateVector(std::move(modes), std::move(out));
}

}  // namespace qtnet
