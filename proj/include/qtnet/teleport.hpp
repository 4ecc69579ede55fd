#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtnet/qstate.hpp"
#include "qtnet/transcript.hpp"

namespace qtnet::teleport {

enum class Scheme { a, b };

inline const char* scheme_name(Scheme s) { return s == Scheme::a ? "a" : "b"; }

// Payload amplitudes a_0..a_{2^m - 1} over m qubits.
struct InfoState {
  std::size_t m;
  std::vector<cplx> amps;

  InfoState(std::size_t m_, std::vector<cplx> a) : m(m_), amps(std::move(a)) {
    if (m < 1) throw std::invalid_argument("payload needs at least one qubit");
    if (amps.size() != (std::size_t{1} << m))
      throw std::invalid_argument("payload amplitude count must be 2^m");
    double n = std::sqrt(squared_norm(amps));
    if (std::abs(n - 1.0) > 1e-9) throw std::invalid_argument("payload is not normalized");
    for (cplx& x : amps) x /= n;
  }

  // Deterministic across platforms: mt19937_64 bits through a Box-Muller map.
  static InfoState random(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::size_t dim = std::size_t{1} << m;
    std::vector<cplx> a(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      double u1 = uniform(), u2 = uniform();
      if (u1 < 1e-300) u1 = 1e-300;
      double r = std::sqrt(-2.0 * std::log(u1));
      a[k] = cplx(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }
    normalize(a);
    return InfoState(m, std::move(a));
  }
};

struct NetworkConfig {
  std::size_t n;  // receiver count
  std::size_t i;  // target receiver, 1-based
  std::size_t m;  // payload qubits

  NetworkConfig(std::size_t n_, std::size_t i_, std::size_t m_) : n(n_), i(i_), m(m_) {
    if (n < 1) throw std::invalid_argument("need at least one receiver");
    if (i < 1 || i > n) throw std::invalid_argument("target receiver index out of range");
    if (m < 1) throw std::invalid_argument("payload needs at least one qubit");
    if (m * (n + 2) > max_engine_qubits)
      throw guard_error("configuration exceeds the engine size limit of " +
                        std::to_string(max_engine_qubits) + " qubits");
  }
};

// Measurement outcome p with quaternary digits (p_1..p_m), p_1 most
// significant: p = sum p_k 4^{m-k}.
struct GenBellIndex {
  std::size_t m;
  std::size_t p;

  GenBellIndex(std::size_t m_, std::size_t p_) : m(m_), p(p_) {
    if (p >= (std::size_t{1} << (2 * m))) throw std::invalid_argument("outcome index out of range");
  }

  std::vector<int> digits() const {
    std::vector<int> d(m);
    std::size_t rem = p;
    for (std::size_t k = m; k-- > 0;) {
      d[k] = static_cast<int>(rem & 3);
      rem >>= 2;
    }
    return d;
  }

  static GenBellIndex from_digits(const std::vector<int>& d) {
    std::size_t p = 0;
    for (int digit : d) {
      if (digit < 0 || digit > 3) throw std::invalid_argument("quaternary digit out of range");
      p = (p << 2) | static_cast<std::size_t>(digit);
    }
    return GenBellIndex(d.size(), p);
  }
};

// r_k = number of non-target receivers that measured minus on payload qubit k.
struct ParityRecord {
  std::vector<int> r;
};

// Per-qubit Pauli codes.  Bit encoding per code: high bit = X flag, low bit =
// Z flag (I=00, Z=01, X=10, ZX=11); a code is applied as Z then X.
enum class PauliCode : int { identity = 0, z = 1, x = 2, zx = 3 };

struct CorrectionOp {
  std::vector<PauliCode> codes;

  std::vector<int> to_bits() const {
    std::vector<int> bits;
    for (PauliCode c : codes) {
      int v = static_cast<int>(c);
      bits.push_back((v >> 1) & 1);
      bits.push_back(v & 1);
    }
    return bits;
  }

  static CorrectionOp from_bits(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("correction message needs 2m bits");
    CorrectionOp op;
    for (std::size_t k = 0; k + 1 < bits.size(); k += 2)
      op.codes.push_back(static_cast<PauliCode>((bits[k] << 1) | bits[k + 1]));
    return op;
  }

  std::string to_string() const {
    static const char* names[4] = {"I", "Z", "X", "ZX"};
    std::string s;
    for (std::size_t k = 0; k < codes.size(); ++k) {
      if (k) s += ',';
      s += names[static_cast<int>(codes[k])];
    }
    return s;
  }
};

inline std::string info_label(std::size_t k) { return "I" + std::to_string(k); }
inline std::string alice_label(std::size_t k) { return "A" + std::to_string(k); }
inline std::string bob_label(std::size_t j, std::size_t k) {
  return "B" + std::to_string(j) + "." + std::to_string(k);
}
inline std::string bob_role(std::size_t j) { return "bob" + std::to_string(j); }

inline StateVector info_to_state(const InfoState& info) {
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 1; k <= info.m; ++k) modes.push_back({ModeKind::qubit, 2, info_label(k)});
  return StateVector(std::move(modes), info.amps);
}

// (|0...0> + |1...1>)/sqrt(2) over `parties` qubits.
inline StateVector build_ghz(std::size_t parties, const std::string& label_prefix = "Q") {
  if (parties < 2) throw std::invalid_argument("a shared channel needs at least two parties");
  if (parties > max_engine_qubits) throw guard_error("party count exceeds the engine size limit");
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 1; k <= parties; ++k)
    modes.push_back({ModeKind::qubit, 2, label_prefix + std::to_string(k)});
  std::vector<cplx> amps(std::size_t{1} << parties, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  amps.front() = s;
  amps.back() = s;
  return StateVector(std::move(modes), std::move(amps));
}

// Equal superposition of all party-identical m-bit strings, stored
// party-major (each party's m qubits contiguous).  Party 1 is the sender.
inline StateVector build_channel_multi(std::size_t m, std::size_t parties) {
  if (m < 1) throw std::invalid_argument("payload needs at least one qubit");
  if (parties < 2) throw std::invalid_argument("a shared channel needs at least two parties");
  if (m * parties > max_engine_qubits)
    throw guard_error("channel exceeds the engine size limit of " +
                      std::to_string(max_engine_qubits) + " qubits");
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 1; k <= m; ++k) modes.push_back({ModeKind::qubit, 2, alice_label(k)});
  for (std::size_t j = 1; j + 1 <= parties; ++j)
    for (std::size_t k = 1; k <= m; ++k) modes.push_back({ModeKind::qubit, 2, bob_label(j, k)});
  const std::size_t block = std::size_t{1} << m;
  std::size_t repunit = 0;  // 1 + block + block^2 + ... over the party blocks
  for (std::size_t q = 0; q < parties; ++q) repunit = repunit * block + 1;
  std::vector<cplx> amps(std::size_t{1} << (m * parties), 0.0);
  const double s = std::pow(2.0, -0.5 * static_cast<double>(m));
  for (std::size_t j = 0; j < block; ++j) amps[j * repunit] = s;
  return StateVector(std::move(modes), std::move(amps));
}

// Index 0: (|00>+|11>)/sqrt2, 1: (|00>-|11>)/sqrt2,
// 2: (|01>+|10>)/sqrt2, 3: (|01>-|10>)/sqrt2.
inline std::vector<std::vector<cplx>> bell_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  return {{s, 0, 0, s}, {s, 0, 0, -s}, {0, s, s, 0}, {0, s, -s, 0}};
}

namespace detail {

// 2x2 Pauli factor for one quaternary digit: 0 -> I, 1 -> Z, 2 -> X,
// 3 -> XZ (X applied after Z).
inline const cplx* sigma_for_digit(int d) {
  static const cplx I[4] = {1, 0, 0, 1};
  static const cplx Z[4] = {1, 0, 0, -1};
  static const cplx X[4] = {0, 1, 1, 0};
  static const cplx XZ[4] = {0, -1, 1, 0};
  switch (d) {
    case 0: return I;
    case 1: return Z;
    case 2: return X;
    case 3: return XZ;
  }
  throw std::invalid_argument("quaternary digit out of range");
}

// Kronecker product of the per-digit Pauli factors, dimension 2^m.
inline std::vector<cplx> pauli_product(const std::vector<int>& digits) {
  std::vector<cplx> M = {1.0};
  std::size_t dim = 1;
  for (int d : digits) {
    const cplx* s = sigma_for_digit(d);
    std::vector<cplx> next(dim * 2 * dim * 2, 0.0);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t rr = 0; rr < 2; ++rr)
          for (std::size_t cc = 0; cc < 2; ++cc)
            next[(r * 2 + rr) * dim * 2 + (c * 2 + cc)] = M[r * dim + c] * s[rr * 2 + cc];
    M.swap(next);
    dim *= 2;
  }
  return M;
}

}  // namespace detail

// 4^m orthonormal vectors over 2m qubits: state p applies the digit Pauli
// product to the second half of 2^{-m/2} sum_j |j>|j>.
inline std::vector<std::vector<cplx>> generalized_bell_basis(std::size_t m) {
  if (m < 1) throw std::invalid_argument("payload needs at least one qubit");
  if (2 * m > max_engine_qubits) throw guard_error("basis exceeds the engine size limit");
  const std::size_t half = std::size_t{1} << m;
  const double s = std::pow(2.0, -0.5 * static_cast<double>(m));
  std::vector<std::vector<cplx>> basis;
  basis.reserve(half * half);
  for (std::size_t p = 0; p < half * half; ++p) {
    std::vector<cplx> U = detail::pauli_product(GenBellIndex(m, p).digits());
    std::vector<cplx> v(half * half, 0.0);
    for (std::size_t j = 0; j < half; ++j)
      for (std::size_t k = 0; k < half; ++k) v[j * half + k] = U[k * half + j] * s;
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace detail {

inline const MeasurementBasis& cached_gen_bell_basis(std::size_t m) {
  static std::map<std::size_t, MeasurementBasis> cache;
  auto it = cache.find(m);
  if (it == cache.end())
    it = cache.emplace(m, MeasurementBasis::checked(generalized_bell_basis(m))).first;
  return it->second;
}

inline const MeasurementBasis& hadamard_basis() {
  static const MeasurementBasis b = [] {
    const double s = 1.0 / std::sqrt(2.0);
    return MeasurementBasis::checked({{s, s}, {s, -s}});
  }();
  return b;
}

inline const MeasurementBasis& computational_basis() {
  static const MeasurementBasis b = MeasurementBasis::checked({{1, 0}, {0, 1}});
  return b;
}

}  // namespace detail

// Every non-target receiver applies C-NOT (control: the sender's k-th channel
// qubit, target: its own k-th qubit), leaving those receivers in |0...0>.
inline StateVector scheme_a_disentangle(const StateVector& state, const NetworkConfig& cfg,
                                        Transcript* tr = nullptr) {
  StateVector st = state;
  const Operator cx = cnot();
  for (std::size_t j = 1; j <= cfg.n; ++j) {
    if (j == cfg.i) continue;
    for (std::size_t k = 1; k <= cfg.m; ++k) {
      st = apply(st, cx, {alice_label(k), bob_label(j, k)});
      if (tr) tr->op(bob_role(j), "cnot", {alice_label(k), bob_label(j, k)});
    }
  }
  return st;
}

struct SchemeBMeasurement {
  ParityRecord parity;
  std::vector<std::vector<int>> outcomes_by_bob;  // one m-bit row per non-target receiver
  StateVector state;
};

// Every non-target receiver measures each of its qubits in the
// (|0>+-|1>)/sqrt2 basis (outcome 0 = plus, 1 = minus).
inline SchemeBMeasurement scheme_b_measure(const StateVector& state, const NetworkConfig& cfg,
                                           OutcomeSource& source, Transcript* tr = nullptr) {
  StateVector st = state;
  ParityRecord parity;
  parity.r.assign(cfg.m, 0);
  std::vector<std::vector<int>> rows;
  for (std::size_t j = 1; j <= cfg.n; ++j) {
    if (j == cfg.i) continue;
    std::vector<int> row;
    for (std::size_t k = 1; k <= cfg.m; ++k) {
      MeasureResult r = measure(st, {bob_label(j, k)}, detail::hadamard_basis(), source);
      st = r.state;
      row.push_back(static_cast<int>(r.outcome));
      parity.r[k - 1] += static_cast<int>(r.outcome);
      if (tr)
        tr->measurement(bob_role(j), "hadamard", {bob_label(j, k)},
                        static_cast<long long>(r.outcome), r.probability);
    }
    rows.push_back(std::move(row));
  }
  return {std::move(parity), std::move(rows), std::move(st)};
}

struct BsmResult {
  GenBellIndex p;
  double probability;
  StateVector state;
};

// Measures the payload and the sender's channel block in the generalized
// Bell basis.
inline BsmResult alice_bsm(const StateVector& state, const NetworkConfig& cfg,
                           OutcomeSource& source, Transcript* tr = nullptr) {
  std::vector<std::string> targets;
  for (std::size_t k = 1; k <= cfg.m; ++k) targets.push_back(info_label(k));
  for (std::size_t k = 1; k <= cfg.m; ++k) targets.push_back(alice_label(k));
  MeasureResult r = measure(state, targets, detail::cached_gen_bell_basis(cfg.m), source);
  if (tr)
    tr->measurement("alice", "bsm", targets, static_cast<long long>(r.outcome), r.probability);
  return {GenBellIndex(cfg.m, r.outcome), r.probability, std::move(r.state)};
}

// Scheme A: per-qubit code straight from the outcome digit.  Scheme B: the
// same, with an extra Z composed on every qubit whose minus count is odd.
inline CorrectionOp correction_for(Scheme scheme, const GenBellIndex& p,
                                   const ParityRecord* parity = nullptr) {
  if (scheme == Scheme::b && (parity == nullptr || parity->r.size() != p.m))
    throw std::invalid_argument("scheme B correction needs a parity record of length m");
  CorrectionOp op;
  std::vector<int> digits = p.digits();
  for (std::size_t k = 0; k < p.m; ++k) {
    int code = digits[k];
    if (scheme == Scheme::b && (parity->r[k] % 2 != 0)) code ^= 1;  // toggle the Z flag
    op.codes.push_back(static_cast<PauliCode>(code));
  }
  return op;
}

// Applies a correction to receiver i's qubits, Z before X per code.
inline StateVector apply_correction(const StateVector& state, const NetworkConfig& cfg,
                                    const CorrectionOp& corr, Transcript* tr = nullptr) {
  if (corr.codes.size() != cfg.m)
    throw std::invalid_argument("correction code count must equal payload size");
  StateVector st = state;
  for (std::size_t k = 1; k <= cfg.m; ++k) {
    int code = static_cast<int>(corr.codes[k - 1]);
    const std::string target = bob_label(cfg.i, k);
    if (code & 1) {
      st = apply(st, pauli_z(), {target});
      if (tr) tr->op(bob_role(cfg.i), "sigma_z", {target});
    }
    if (code & 2) {
      st = apply(st, pauli_x(), {target});
      if (tr) tr->op(bob_role(cfg.i), "sigma_x", {target});
    }
  }
  return st;
}

struct TeleportResult {
  double fidelity;
  GenBellIndex p;
  ParityRecord parity;
  Transcript transcript;
};

// Full pipeline: channel, disentangle or Hadamard round, Bell measurement,
// classical bits, correction, and comparison of receiver i's state with the
// payload.  An externally generated channel (m*(n+1) qubits) may be supplied;
// it is relabeled to the standard layout.
inline TeleportResult run_teleport(Scheme scheme, const NetworkConfig& cfg, const InfoState& info,
                                   OutcomeSource& source, const StateVector* channel = nullptr) {
  if (info.m != cfg.m) throw std::invalid_argument("payload size does not match configuration");
  Transcript tr;
  tr.protocol = std::string("teleport-") + scheme_name(scheme);
  tr.seeded = !source.forced_mode();
  tr.seed = source.seed();

  StateVector ch = [&] {
    if (!channel) return build_channel_multi(cfg.m, cfg.n + 1);
    if (channel->mode_count() != cfg.m * (cfg.n + 1))
      throw std::invalid_argument("external channel has the wrong number of modes");
    for (const ModeDescriptor& md : channel->modes())
      if (md.kind != ModeKind::qubit)
        throw std::invalid_argument("external channel must be all qubits");
    std::vector<std::string> labels;
    for (std::size_t k = 1; k <= cfg.m; ++k) labels.push_back(alice_label(k));
    for (std::size_t j = 1; j <= cfg.n; ++j)
      for (std::size_t k = 1; k <= cfg.m; ++k) labels.push_back(bob_label(j, k));
    return channel->with_labels(labels);
  }();

  std::vector<std::string> channel_labels;
  for (const ModeDescriptor& md : ch.modes()) channel_labels.push_back(md.label);
  StateVector st = tensor(info_to_state(info), ch);
  tr.op("alice", "prepare_channel", channel_labels);

  ParityRecord parity;
  if (scheme == Scheme::a) {
    for (std::size_t j = 1; j <= cfg.n; ++j)
      if (j != cfg.i) tr.message("alice", bob_role(j), "cnot_instruction", {});
    st = scheme_a_disentangle(st, cfg, &tr);
  } else {
    for (std::size_t j = 1; j <= cfg.n; ++j)
      if (j != cfg.i) tr.message("alice", bob_role(j), "measure_instruction", {});
    SchemeBMeasurement mb = scheme_b_measure(st, cfg, source, &tr);
    st = mb.state;
    parity = mb.parity;
    std::size_t row = 0;
    for (std::size_t j = 1; j <= cfg.n; ++j)
      if (j != cfg.i) tr.message(bob_role(j), "alice", "hadamard_report", mb.outcomes_by_bob[row++]);
  }

  BsmResult bsm = alice_bsm(st, cfg, source, &tr);
  st = bsm.state;

  // The parity adjustment happens at the sender; the receiver decodes the
  // transmitted bits directly.
  CorrectionOp corr = correction_for(scheme, bsm.p, scheme == Scheme::b ? &parity : nullptr);
  long long msg_id = tr.message("alice", bob_role(cfg.i), "bsm_result", corr.to_bits());
  CorrectionOp decoded = CorrectionOp::from_bits(corr.to_bits());
  tr.correction(bob_role(cfg.i), decoded.to_string(), msg_id);
  st = apply_correction(st, cfg, decoded, &tr);

  std::vector<std::string> bob_targets;
  for (std::size_t k = 1; k <= cfg.m; ++k) bob_targets.push_back(bob_label(cfg.i, k));
  std::vector<cplx> final_state = extract_pure_substate(st, bob_targets);
  double fid = std::norm(inner(info.amps, final_state));
  return {fid, bsm.p, std::move(parity), std::move(tr)};
}

// Correction tables as a JSON document: one row per outcome (and per odd-mask
// pattern for scheme B).
inline std::string correction_table_json(Scheme scheme, std::size_t m) {
  JsonWriter w;
  w.begin_object();
  w.kv("scheme", scheme_name(scheme)).kv("m", m);
  w.key("rows").begin_array();
  const std::size_t outcomes = std::size_t{1} << (2 * m);
  const std::size_t masks = scheme == Scheme::b ? (std::size_t{1} << m) : 1;
  for (std::size_t p = 0; p < outcomes; ++p) {
    for (std::size_t mask = 0; mask < masks; ++mask) {
      GenBellIndex idx(m, p);
      ParityRecord parity;
      for (std::size_t k = 0; k < m; ++k)
        parity.r.push_back((mask >> (m - 1 - k)) & 1 ? 1 : 0);
      CorrectionOp corr =
          correction_for(scheme, idx, scheme == Scheme::b ? &parity : nullptr);
      w.begin_object();
      w.kv("p", p);
      w.int_array("digits", idx.digits());
      if (scheme == Scheme::b) w.int_array("parity_odd", parity.r);
      w.kv("code", corr.to_string());
      std::string bits;
      for (int b : corr.to_bits()) bits += static_cast<char>('0' + b);
      w.kv("bits", bits);
      w.end_object();
    }
  }
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace qtnet::teleport
