#pragma once

#include <string>
#include <vector>

#include "qtnet/qstate.hpp"
#include "qtnet/teleport.hpp"
#include "qtnet/transcript.hpp"

namespace qtnet::cavity {

// Poisson weight beyond the cutoff for coherent amplitude beta, summed from
// the tail upward so small values keep full precision.
inline double coherent_tail(double beta, std::size_t cutoff) {
  const double lam = beta * beta;
  if (lam == 0.0) return 0.0;
  const double n0 = static_cast<double>(cutoff + 1);
  double log_term = n0 * std::log(lam) - std::lgamma(n0 + 1.0) - lam;
  double term = std::exp(log_term);
  double sum = 0.0;
  double n = n0;
  for (int k = 0; k < 4000 && term > 0.0; ++k) {
    sum += term;
    n += 1.0;
    term *= lam / n;
    if (term < sum * 1e-18 && n > lam) break;
  }
  return sum;
}

struct CavityParams {
  double g = 0.0;      // atom-field coupling (rad/s), optional
  double delta = 0.0;  // detuning (rad/s), optional
  double lambda = 0.0; // g^2/delta when g and delta are given
  double alpha = 2.0;  // coherent amplitude, real, >= 0
  std::size_t cutoff = 48;

  CavityParams() = default;
  CavityParams(double alpha_, std::size_t cutoff_) : alpha(alpha_), cutoff(cutoff_) {}

  void validate() const {
    if (alpha < 0.0) throw std::invalid_argument("coherent amplitude must be non-negative");
    if (cutoff < 2) throw std::invalid_argument("cutoff too small");
    if (g != 0.0 || delta != 0.0) {
      if (delta == 0.0) throw std::invalid_argument("detuning must be nonzero");
      double lam = g * g / delta;
      if (lam <= 0.0) throw std::invalid_argument("effective coupling must be positive");
      if (std::abs(lambda - lam) > 1e-12 * std::max(1.0, std::abs(lam)))
        throw std::invalid_argument("lambda must equal g^2/delta");
    }
    // Largest amplitude in play after displacement is 2*alpha.
    double tail = coherent_tail(2.0 * alpha, cutoff);
    if (tail >= truncation_tail_tol)
      throw truncation_error("cutoff " + std::to_string(cutoff) +
                             " leaves coherent tail " + format_double(tail) +
                             " for amplitude " + format_double(2.0 * alpha));
  }
};

struct TimingParams {
  double t = 1e-4;     // atom-cavity interaction time (s)
  double T = 1e-3;     // cavity transit time (s)
  double T_D = 1.0;    // cavity damping time (s)
  double budget = 0.1; // allowed total flight time (s)

  void validate() const {
    if (t <= 0.0 || T <= 0.0 || T_D <= 0.0 || budget <= 0.0)
      throw std::invalid_argument("timing values must be positive");
    if (budget > T_D) throw std::invalid_argument("budget cannot exceed the damping time");
  }
};

// Truncated closed-form amplitudes e^{-b^2/2} b^n / sqrt(n!), not normalized.
inline std::vector<cplx> coherent_amplitudes(double beta, std::size_t cutoff) {
  std::vector<cplx> a(cutoff + 1);
  double c = std::exp(-beta * beta / 2.0);
  for (std::size_t n = 0; n <= cutoff; ++n) {
    a[n] = c;
    c *= beta / std::sqrt(static_cast<double>(n + 1));
  }
  return a;
}

inline std::vector<cplx> coherent_state(double beta, std::size_t cutoff) {
  double tail = coherent_tail(std::abs(beta), cutoff);
  if (tail >= truncation_tail_tol)
    throw truncation_error("cutoff " + std::to_string(cutoff) + " leaves coherent tail " +
                           format_double(tail) + " for amplitude " + format_double(beta));
  std::vector<cplx> a = coherent_amplitudes(beta, cutoff);
  normalize(a);
  return a;
}

// Unnormalized even/odd superpositions |alpha> +- |-alpha>; exactly
// orthogonal because their Fock supports are disjoint.
struct CatPair {
  std::vector<cplx> plus;   // normalized
  std::vector<cplx> minus;  // normalized
  double norm_plus;         // pre-normalization norms, approx sqrt(2(1 +- e^{-2a^2}))
  double norm_minus;

  static CatPair make(double alpha, std::size_t cutoff) {
    if (alpha <= 0.0) throw std::invalid_argument("cat states need a positive amplitude");
    std::vector<cplx> c = coherent_amplitudes(alpha, cutoff);
    CatPair cat;
    cat.plus.assign(cutoff + 1, 0.0);
    cat.minus.assign(cutoff + 1, 0.0);
    for (std::size_t n = 0; n <= cutoff; ++n) {
      if (n % 2 == 0) cat.plus[n] = 2.0 * c[n];
      else cat.minus[n] = 2.0 * c[n];
    }
    cat.norm_plus = std::sqrt(squared_norm(cat.plus));
    cat.norm_minus = std::sqrt(squared_norm(cat.minus));
    for (cplx& x : cat.plus) x /= cat.norm_plus;
    for (cplx& x : cat.minus) x /= cat.norm_minus;
    return cat;
  }
};

// exp(i * 2 * phase * n) on the field conditioned on the atomic plus state:
// the dispersive interaction's atomic operator is twice the projector onto
// (|0>+|1>)/sqrt2, so the evolution is P_minus (x) 1 + P_plus (x) diag(e^{2i phase n}).
inline StateVector effective_evolution(const StateVector& state, const std::string& atom,
                                       const std::string& cavity_mode, double phase) {
  const std::size_t ai = state.mode_index(atom);
  const std::size_t ci = state.mode_index(cavity_mode);
  if (state.modes()[ai].kind != ModeKind::qubit)
    throw std::invalid_argument("atom mode must be a qubit");
  if (state.modes()[ci].kind != ModeKind::oscillator)
    throw std::invalid_argument("cavity mode must be an oscillator");
  const std::size_t astr = state.stride(ai);
  const std::size_t cstr = state.stride(ci);
  const std::size_t cdim = state.modes()[ci].dim;
  const std::vector<cplx>& a = state.amps();
  std::vector<cplx> out(a.size());
  std::vector<cplx> half_one_plus(cdim), half_e_minus(cdim);
  for (std::size_t n = 0; n < cdim; ++n) {
    cplx e = std::exp(cplx(0.0, 2.0 * phase * static_cast<double>(n)));
    half_one_plus[n] = 0.5 * (1.0 + e);
    half_e_minus[n] = 0.5 * (e - 1.0);
  }
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if ((idx / astr) % 2 != 0) continue;
    const std::size_t partner = idx + astr;
    const std::size_t n = (idx / cstr) % cdim;
    const cplx v0 = a[idx], v1 = a[partner];
    out[idx] = half_one_plus[n] * v0 + half_e_minus[n] * v1;
    out[partner] = half_e_minus[n] * v0 + half_one_plus[n] * v1;
  }
  return StateVector(state.modes(), std::move(out));
}

// Columns of exp(beta a^dag - beta a) for real beta via the recurrence
// col_n = (a^dag - beta) col_{n-1} / sqrt(n), col_0 = |beta>.  Row-major.
inline std::vector<cplx> displacement_matrix(double beta, std::size_t cutoff) {
  const std::size_t d = cutoff + 1;
  std::vector<cplx> D(d * d, 0.0);
  std::vector<cplx> col = coherent_amplitudes(beta, cutoff);
  for (std::size_t r = 0; r < d; ++r) D[r * d] = col[r];
  std::vector<cplx> next(d);
  for (std::size_t n = 1; n < d; ++n) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t r = 0; r < d; ++r) {
      cplx up = r > 0 ? std::sqrt(static_cast<double>(r)) * col[r - 1] : cplx(0.0);
      next[r] = (up - beta * col[r]) * inv;
    }
    col = next;
    for (std::size_t r = 0; r < d; ++r) D[r * d + n] = col[r];
  }
  return D;
}

// Applies the displacement on one oscillator mode.  Weight pushed past the
// cutoff shows up as norm loss; more than displacement_loss_tol trips the
// overflow guard, anything less is renormalized away.
inline StateVector displace(const StateVector& state, const std::string& cavity_mode,
                            double beta) {
  const std::size_t ci = state.mode_index(cavity_mode);
  if (state.modes()[ci].kind != ModeKind::oscillator)
    throw std::invalid_argument("displace target must be an oscillator");
  const std::size_t d = state.modes()[ci].dim;
  const std::size_t cstr = state.stride(ci);
  std::vector<cplx> D = displacement_matrix(beta, d - 1);
  const std::vector<cplx>& a = state.amps();
  std::vector<cplx> out(a.size(), 0.0);
  std::vector<cplx> block(d);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if ((idx / cstr) % d != 0) continue;
    for (std::size_t n = 0; n < d; ++n) block[n] = a[idx + n * cstr];
    for (std::size_t r = 0; r < d; ++r) {
      cplx w = 0.0;
      for (std::size_t c = 0; c < d; ++c) w += D[r * d + c] * block[c];
      out[idx + r * cstr] = w;
    }
  }
  double n2 = squared_norm(out);
  if (1.0 - n2 > displacement_loss_tol)
    throw truncation_error("displacement pushed weight past the cutoff (norm loss " +
                           format_double(1.0 - n2) + ")");
  double scale = 1.0 / std::sqrt(n2);
  for (cplx& x : out) x *= scale;
  return StateVector(state.modes(), std::move(out));
}

struct PcmResult {
  int outcome;  // 0 = zero photons, 1 = nonzero
  double probability;
  StateVector state;
};

// Photon counting coarse-grained to {n = 0, n > 0}.
inline PcmResult pcm(const StateVector& state, const std::string& cavity_mode,
                     OutcomeSource& source) {
  const std::size_t ci = state.mode_index(cavity_mode);
  if (state.modes()[ci].kind != ModeKind::oscillator)
    throw std::invalid_argument("photon counting target must be an oscillator");
  const std::size_t d = state.modes()[ci].dim;
  const std::size_t cstr = state.stride(ci);
  const std::vector<cplx>& a = state.amps();
  double p0 = 0.0;
  for (std::size_t idx = 0; idx < a.size(); ++idx)
    if ((idx / cstr) % d == 0) p0 += std::norm(a[idx]);
  p0 = std::min(p0, 1.0);
  std::size_t o = source.sample({p0, 1.0 - p0});
  std::vector<cplx> out(a.size(), 0.0);
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    bool vac = (idx / cstr) % d == 0;
    if (vac == (o == 0)) out[idx] = a[idx];
  }
  double n = std::sqrt(squared_norm(out));
  for (cplx& x : out) x /= n;
  return {static_cast<int>(o), o == 0 ? p0 : 1.0 - p0, StateVector(state.modes(), std::move(out))};
}

inline StateVector ghz_target(std::size_t N) {
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 1; k <= N; ++k)
    modes.push_back({ModeKind::qubit, 2, "G" + std::to_string(k)});
  std::vector<cplx> amps(std::size_t{1} << N, 0.0);
  amps.front() = amps.back() = 1.0 / std::sqrt(2.0);
  return StateVector(std::move(modes), std::move(amps));
}

// Applies sigma_z on the first qubit iff the relative sign, composed of the
// photon-count branch sign and (-1)^N, is negative.  branch_sign is
// (-1)^{zero count}: -1 for the single-cavity zero branch, +1 for nonzero.
// Accepts any state supported on {|0...0>, |1...1>} with a real relative
// phase (imperfect branches at small alpha stay unbalanced but fixable);
// anything else is not a shared-channel branch and is rejected.
inline StateVector local_fixup(const StateVector& state, std::size_t N, int branch_sign,
                               Transcript* tr = nullptr, const std::string& role = "generator") {
  if (state.mode_count() != N || state.dim() != (std::size_t{1} << N))
    throw std::invalid_argument("local_fixup expects N qubit modes");
  const std::size_t last = state.dim() - 1;
  const cplx c0 = state.amps()[0];
  const cplx c1 = state.amps()[last];
  double subspace = std::norm(c0) + std::norm(c1);
  // Largest overlap with (|0...0> +- |1...1>)/sqrt2 over both signs.
  double best = 0.5 * subspace + std::abs((c0 * std::conj(c1)).real());
  if (subspace < 1.0 - 1e-4 || best < 0.9)
    throw std::invalid_argument("input is not close to either shared-channel form");
  int sign = branch_sign * (N % 2 == 0 ? 1 : -1);
  StateVector st = state;
  if (sign < 0) {
    const std::string first = st.modes()[0].label;
    st = apply(st, pauli_z(), {first});
    if (tr) tr->op(role, "sigma_z", {first});
  }
  return st;
}

struct SingleCavityResult {
  StateVector state;      // after fixup
  StateVector raw_state;  // atoms as collapsed, before fixup
  int branch;             // 0 = zero photons, 1 = nonzero
  double branch_probability;
  double fidelity;  // against (|0...0>+|1...1>)/sqrt2
  Transcript transcript;
};

namespace detail {

struct RawBranch {
  StateVector raw;
  int branch;
  double probability;
};

// Shared pipeline up to the photon count: N atoms cross one cavity holding
// |alpha>, then displacement by alpha and photon counting project the field
// out, leaving the atoms alone (pre-fixup).
inline RawBranch single_cavity_raw(std::size_t N, const CavityParams& params,
                                   OutcomeSource& source, Transcript& tr) {
  params.validate();
  if (N < 2) throw std::invalid_argument("need at least two atoms");
  if (params.alpha <= 0.0)
    throw std::invalid_argument("photon-count discrimination needs a positive amplitude");
  if ((std::size_t{1} << N) * (params.cutoff + 1) > (std::size_t{1} << max_engine_qubits))
    throw guard_error("state exceeds the engine size limit");

  auto atom = [](std::size_t j) { return "G" + std::to_string(j); };
  StateVector st =
      tensor(StateVector::single_qubit(atom(1), 1.0, 0.0),
             StateVector::oscillator_mode("C", coherent_state(params.alpha, params.cutoff)));
  tr.op("generator", "prepare", {atom(1), "C"});
  st = effective_evolution(st, atom(1), "C", M_PI / 2.0);
  tr.op("generator", "effective_evolution", {atom(1), "C"});
  for (std::size_t j = 2; j <= N; ++j) {
    st = tensor(st, StateVector::single_qubit(atom(j), 1.0, 0.0));
    tr.op("generator", "prepare", {atom(j)});
    st = effective_evolution(st, atom(j), "C", M_PI / 2.0);
    tr.op("generator", "effective_evolution", {atom(j), "C"});
  }
  st = displace(st, "C", params.alpha);
  tr.op("generator", "displace", {"C"});
  PcmResult pr = pcm(st, "C", source);
  tr.measurement("generator", "pcm", {"C"}, pr.outcome, pr.probability);

  std::vector<std::string> atoms;
  for (std::size_t j = 1; j <= N; ++j) atoms.push_back(atom(j));
  std::vector<cplx> atom_amps = extract_pure_substate(pr.state, atoms);
  std::vector<ModeDescriptor> modes;
  for (std::size_t j = 1; j <= N; ++j) modes.push_back({ModeKind::qubit, 2, atom(j)});
  return {StateVector(std::move(modes), std::move(atom_amps)), pr.outcome, pr.probability};
}

}  // namespace detail

inline SingleCavityResult generate_ghz_single_cavity(std::size_t N, const CavityParams& params,
                                                     OutcomeSource& source) {
  Transcript tr;
  tr.protocol = "ghz-single";
  tr.seeded = !source.forced_mode();
  tr.seed = source.seed();
  detail::RawBranch rb = detail::single_cavity_raw(N, params, source, tr);
  StateVector fixed = local_fixup(rb.raw, N, rb.branch == 0 ? -1 : 1, &tr);
  double fid = fidelity(ghz_target(N), fixed);
  return {std::move(fixed), std::move(rb.raw), rb.branch, rb.probability, fid, std::move(tr)};
}

struct MultiCavityResult {
  StateVector state;      // fresh atoms after fixup
  StateVector raw_state;  // fresh atoms as collapsed, before fixup
  std::vector<int> atom_outcomes;
  std::vector<int> pcm_pattern;
  std::size_t zero_count;
  std::vector<int> x_mask;  // fixup X pattern derived from the atom outcomes
  double fidelity;
  Transcript transcript;
};

// Parallel scheme: round 1 pairs atom j with cavity j, round 2 shifts
// cyclically, the atoms are measured out, fresh atoms soak up the field
// correlations, and displacement plus photon counting on every cavity leaves
// a shared state whose sign follows the parity of the zero count.
inline MultiCavityResult generate_ghz_multi_cavity(std::size_t N, const CavityParams& params,
                                                   OutcomeSource& source) {
  params.validate();
  if (N < 2) throw std::invalid_argument("need at least two cavities");
  if (params.alpha <= 0.0)
    throw std::invalid_argument("photon-count discrimination needs a positive amplitude");
  double amps_log2 = static_cast<double>(N) +
                     static_cast<double>(N) * std::log2(static_cast<double>(params.cutoff + 1));
  if (amps_log2 > static_cast<double>(max_engine_qubits))
    throw guard_error("multi-cavity register exceeds the engine size limit; reduce N or cutoff");
  Transcript tr;
  tr.protocol = "ghz-multi";
  tr.seeded = !source.forced_mode();
  tr.seed = source.seed();

  auto atom = [](std::size_t j) { return "A" + std::to_string(j); };
  auto fresh = [](std::size_t j) { return "F" + std::to_string(j); };
  auto cav = [](std::size_t j) { return "C" + std::to_string(j); };

  StateVector st = StateVector::single_qubit(atom(1), 1.0, 0.0);
  for (std::size_t j = 2; j <= N; ++j) st = tensor(st, StateVector::single_qubit(atom(j), 1.0, 0.0));
  for (std::size_t j = 1; j <= N; ++j)
    st = tensor(st, StateVector::oscillator_mode(cav(j), coherent_state(params.alpha, params.cutoff)));
  {
    std::vector<std::string> all;
    for (std::size_t j = 1; j <= N; ++j) all.push_back(atom(j));
    for (std::size_t j = 1; j <= N; ++j) all.push_back(cav(j));
    tr.op("generator", "prepare", all);
  }
  for (std::size_t j = 1; j <= N; ++j) {
    st = effective_evolution(st, atom(j), cav(j), M_PI / 2.0);
    tr.op("generator", "effective_evolution", {atom(j), cav(j)});
  }
  for (std::size_t j = 1; j <= N; ++j) {
    std::size_t next = j % N + 1;
    st = effective_evolution(st, atom(j), cav(next), M_PI / 2.0);
    tr.op("generator", "effective_evolution", {atom(j), cav(next)});
  }

  std::vector<int> atom_outcomes;
  for (std::size_t j = 1; j <= N; ++j) {
    MeasureResult r = measure(st, {atom(j)}, teleport::detail::computational_basis(), source);
    atom_outcomes.push_back(static_cast<int>(r.outcome));
    tr.measurement("generator", "atom", {atom(j)}, static_cast<long long>(r.outcome),
                   r.probability);
    st = remove_basis_mode(r.state, atom(j));
  }

  for (std::size_t j = 1; j <= N; ++j) {
    st = tensor(st, StateVector::single_qubit(fresh(j), 1.0, 0.0));
    tr.op("generator", "prepare", {fresh(j)});
    st = effective_evolution(st, fresh(j), cav(j), M_PI / 2.0);
    tr.op("generator", "effective_evolution", {fresh(j), cav(j)});
  }
  for (std::size_t j = 1; j <= N; ++j) {
    st = displace(st, cav(j), params.alpha);
    tr.op("generator", "displace", {cav(j)});
  }
  std::vector<int> pattern;
  std::size_t zero_count = 0;
  for (std::size_t j = 1; j <= N; ++j) {
    PcmResult pr = pcm(st, cav(j), source);
    pattern.push_back(pr.outcome);
    if (pr.outcome == 0) ++zero_count;
    tr.measurement("generator", "pcm", {cav(j)}, pr.outcome, pr.probability);
    st = pr.state;
  }

  std::vector<std::string> fresh_labels;
  for (std::size_t j = 1; j <= N; ++j) fresh_labels.push_back(fresh(j));
  std::vector<cplx> amps = extract_pure_substate(st, fresh_labels);
  std::vector<ModeDescriptor> modes;
  for (std::size_t j = 1; j <= N; ++j) modes.push_back({ModeKind::qubit, 2, fresh(j)});
  StateVector raw(std::move(modes), std::move(amps));

  // The surviving field branches are |s> and its complement with
  // s_1 = 0, s_{j+1} = s_j xor b_j; X on the mask turns them into
  // |0...0> and |1...1>.
  std::vector<int> mask(N, 0);
  for (std::size_t j = 1; j < N; ++j) mask[j] = mask[j - 1] ^ atom_outcomes[j - 1];
  StateVector fixed = raw;
  for (std::size_t j = 0; j < N; ++j) {
    if (mask[j]) {
      fixed = apply(fixed, pauli_x(), {fresh_labels[j]});
      tr.op("generator", "sigma_x", {fresh_labels[j]});
    }
  }
  fixed = local_fixup(fixed, N, zero_count % 2 == 0 ? 1 : -1, &tr);
  double fid = fidelity(ghz_target(N), fixed);
  return {std::move(fixed), std::move(raw), std::move(atom_outcomes), std::move(pattern),
          zero_count, std::move(mask), fid, std::move(tr)};
}

struct FeasibilityResult {
  long long n_max;
  bool limited;  // budget below the fixed 7T/5 lead time
};

// Largest N with 7T/5 + (N-1) t <= budget.
inline FeasibilityResult feasibility_max_atoms(const TimingParams& timing) {
  timing.validate();
  const double lead = 1.4 * timing.T;
  if (timing.budget < lead) return {1, true};
  long long extra = static_cast<long long>(std::floor((timing.budget - lead) / timing.t + 1e-9));
  return {1 + extra, false};
}

struct SweepRow {
  double alpha;
  double p_error;      // closed form e^{-4 alpha^2}
  double p_error_sim;  // zero-photon probability of the displaced |alpha>
  double infidelity;   // zero branch against its ideal shared-channel form
};

// Per alpha: misclassification probability both ways plus the infidelity the
// zero branch suffers before fixup.
inline std::vector<SweepRow> pcm_error_sweep(const std::vector<double>& alphas, std::size_t N,
                                             std::size_t cutoff = 48) {
  if (N < 2) throw std::invalid_argument("need at least two atoms");
  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    if (alpha < 0.0) throw std::invalid_argument("amplitudes must be non-negative");
    SweepRow row;
    row.alpha = alpha;
    row.p_error = std::exp(-4.0 * alpha * alpha);
    if (alpha == 0.0) {
      // Degenerate: the field never leaves vacuum, counting says zero with
      // certainty, and the untouched atoms overlap the ideal form at 1/2.
      row.p_error_sim = 1.0;
      row.infidelity = 0.5;
      rows.push_back(row);
      continue;
    }
    StateVector field = StateVector::oscillator_mode("C", coherent_state(alpha, cutoff));
    field = displace(field, "C", alpha);
    OutcomeSource forced_zero = OutcomeSource::forced({0});
    row.p_error_sim = pcm(field, "C", forced_zero).probability;

    CavityParams params(alpha, cutoff);
    OutcomeSource forced_branch = OutcomeSource::forced({0});
    Transcript tr;
    detail::RawBranch rb = detail::single_cavity_raw(N, params, forced_branch, tr);
    StateVector ideal = ghz_target(N);
    if (N % 2 == 0) {
      // Zero branch carries sign -(-1)^N.
      ideal = apply(ideal, pauli_z(), {ideal.modes()[0].label});
    }
    row.infidelity = 1.0 - fidelity(ideal, rb.raw);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qtnet::cavity
