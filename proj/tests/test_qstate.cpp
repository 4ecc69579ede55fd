#include <catch2/catch_amalgamated.hpp>

#include "qtnet/qstate.hpp"
#include "test_util.hpp"

using namespace qtnet;
using oracle::Vec;

namespace {

StateVector qubits(const std::string& prefix, const std::vector<cplx>& amps, std::size_t n) {
  std::vector<ModeDescriptor> modes;
  for (std::size_t k = 1; k <= n; ++k)
    modes.push_back({ModeKind::qubit, 2, prefix + std::to_string(k)});
  return StateVector(std::move(modes), amps);
}

}  // namespace

TEST_CASE("tensor product of basis states") {
  StateVector a = StateVector::single_qubit("a", 1.0, 0.0);
  StateVector b = StateVector::single_qubit("b", 0.0, 1.0);
  StateVector ab = tensor(a, b);
  REQUIRE(ab.dim() == 4);
  CHECK(std::abs(ab.amps()[1] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(ab.amps()[0]) < 1e-15);
  CHECK(std::abs(ab.amps()[2]) < 1e-15);
  CHECK(std::abs(ab.amps()[3]) < 1e-15);
}

TEST_CASE("tensor is linear in the left factor") {
  const double s = 1.0 / std::sqrt(2.0);
  StateVector plus = StateVector::single_qubit("a", s, s);
  StateVector zero = StateVector::single_qubit("b", 1.0, 0.0);
  StateVector t = tensor(plus, zero);
  CHECK(std::abs(t.amps()[0] - s) < 1e-15);
  CHECK(std::abs(t.amps()[2] - s) < 1e-15);
  CHECK(std::abs(t.amps()[1]) < 1e-15);
  CHECK(std::abs(t.amps()[3]) < 1e-15);
}

TEST_CASE("tensor of a payload with a three-party shared channel") {
  const double s = 1.0 / std::sqrt(2.0);
  StateVector info = StateVector::single_qubit("i", 0.6, 0.8);
  StateVector ghz = qubits("q", {s, 0, 0, 0, 0, 0, 0, s}, 3);
  StateVector full = tensor(info, ghz);
  REQUIRE(full.dim() == 16);
  CHECK(std::abs(full.amps()[0b0000] - 0.6 * s) < 1e-15);
  CHECK(std::abs(full.amps()[0b0111] - 0.6 * s) < 1e-15);
  CHECK(std::abs(full.amps()[0b1000] - 0.8 * s) < 1e-15);
  CHECK(std::abs(full.amps()[0b1111] - 0.8 * s) < 1e-15);
  double rest = 0.0;
  for (std::size_t k : {1, 2, 3, 4, 5, 6, 9, 10, 11, 12, 13, 14})
    rest += std::abs(full.amps()[k]);
  CHECK(rest < 1e-15);
}

TEST_CASE("tensor rejects duplicate labels") {
  StateVector a = StateVector::single_qubit("x", 1.0, 0.0);
  StateVector b = StateVector::single_qubit("x", 1.0, 0.0);
  CHECK_THROWS_AS(tensor(a, b), std::invalid_argument);
}

TEST_CASE("state construction guards") {
  CHECK_THROWS_AS(StateVector({{ModeKind::qubit, 2, "a"}}, {1.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(StateVector({{ModeKind::qubit, 2, "a"}}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector({{ModeKind::qubit, 3, "a"}}, {1.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(StateVector({{ModeKind::oscillator, 1, "a"}}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(StateVector({{ModeKind::qubit, 2, "a"}, {ModeKind::qubit, 2, "a"}},
                              {1.0, 0, 0, 0}),
                  std::invalid_argument);  // same label twice
  StateVector ok({{ModeKind::qubit, 2, "a1"}, {ModeKind::qubit, 2, "a2"}}, {1.0, 0, 0, 0});
  CHECK(ok.mode_count() == 2);
}

TEST_CASE("basis index is the big-endian mixed-radix reading") {
  StateVector s = StateVector::basis(
      {{ModeKind::qubit, 2, "q"}, {ModeKind::oscillator, 3, "c"}}, 4);  // q=1, c=1
  CHECK(s.stride(0) == 3);
  CHECK(s.stride(1) == 1);
  CHECK(std::abs(s.amps()[4] - cplx(1.0)) < 1e-15);
  CHECK(s.mode_index("c") == 1);
  CHECK_THROWS_AS(s.mode_index("nope"), std::invalid_argument);
}

TEST_CASE("sigma_x flips a qubit") {
  StateVector s = StateVector::single_qubit("q", 1.0, 0.0);
  StateVector r = apply(s, pauli_x(), {"q"});
  CHECK(std::abs(r.amps()[1] - cplx(1.0)) < 1e-15);
}

TEST_CASE("cnot creates a Bell pair from a plus-zero product") {
  const double s = 1.0 / std::sqrt(2.0);
  StateVector st = qubits("q", {s, 0, s, 0}, 2);
  StateVector r = apply(st, cnot(), {"q1", "q2"});
  CHECK(std::abs(r.amps()[0] - s) < 1e-15);
  CHECK(std::abs(r.amps()[3] - s) < 1e-15);
  CHECK(std::abs(r.amps()[1]) < 1e-15);
  CHECK(std::abs(r.amps()[2]) < 1e-15);
}

TEST_CASE("z-then-x restores the payload from the fourth Bell branch") {
  // a1|0> - a0|1> under sigma_x sigma_z becomes a0|0> + a1|1> up to phase.
  const double a0 = 0.6, a1 = 0.8;
  StateVector s = StateVector::single_qubit("q", a1, -a0);
  StateVector r = apply(apply(s, pauli_z(), {"q"}), pauli_x(), {"q"});
  Vec expect = {a0, a1};
  CHECK(oracle::linf_up_to_phase(expect, r.amps()) < 1e-15);
  // One-shot composed operator agrees.
  StateVector r2 = apply(s, pauli_xz(), {"q"});
  CHECK(oracle::linf_up_to_phase(expect, r2.amps()) < 1e-15);
}

TEST_CASE("apply on an inner mode matches the dense kron route") {
  Vec psi = oracle::random_unit(8, 321);
  StateVector s = qubits("q", psi, 3);
  StateVector r = apply(s, hadamard(), {"q2"});
  const double h = 1.0 / std::sqrt(2.0);
  oracle::Mat H = {h, h, h, -h};
  oracle::Mat full = oracle::kron(oracle::kron(oracle::eye(2), 2, H, 2), 4, oracle::eye(2), 2);
  Vec expect = oracle::matvec(full, psi);
  CHECK(oracle::linf(expect, r.amps()) < 1e-14);
}

TEST_CASE("apply on two non-adjacent modes matches the dense route") {
  Vec psi = oracle::random_unit(8, 77);
  StateVector s = qubits("q", psi, 3);
  // control q3 (last), target q1 (first): permuted dense construction.
  StateVector r = apply(s, cnot(), {"q3", "q1"});
  Vec expect(8, 0.0);
  for (std::size_t idx = 0; idx < 8; ++idx) {
    std::size_t q1 = (idx >> 2) & 1, q2 = (idx >> 1) & 1, q3 = idx & 1;
    std::size_t flipped = q3 ? (1 - q1) : q1;
    expect[(flipped << 2) | (q2 << 1) | q3] += psi[idx];
  }
  CHECK(oracle::linf(expect, r.amps()) < 1e-14);
}

TEST_CASE("apply validates targets") {
  StateVector s = qubits("q", oracle::random_unit(4, 5), 2);
  CHECK_THROWS_AS(apply(s, cnot(), {"q1"}), std::invalid_argument);
  CHECK_THROWS_AS(apply(s, cnot(), {"q1", "q1"}), std::invalid_argument);
  CHECK_THROWS_AS(apply(s, pauli_x(), {"zz"}), std::invalid_argument);
}

TEST_CASE("gate constructor rejects non-unitary matrices") {
  CHECK_THROWS_AS(Operator::gate({1, 0, 0, 0.5}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(Operator::gate({1, 0, 0}, {2}), std::invalid_argument);
}

TEST_CASE("unitaries preserve the norm") {
  Vec psi = oracle::random_unit(8, 9001);
  StateVector s = qubits("q", psi, 3);
  s = apply(s, hadamard(), {"q1"});
  s = apply(s, cnot(), {"q2", "q3"});
  s = apply(s, pauli_xz(), {"q2"});
  CHECK(std::abs(squared_norm(s.amps()) - 1.0) < 1e-12);
}

TEST_CASE("tensor then apply commutes with apply then tensor") {
  Vec a = oracle::random_unit(4, 11);
  Vec b = oracle::random_unit(2, 12);
  StateVector sa = qubits("a", a, 2);
  StateVector sb = StateVector::single_qubit("b1", b[0], b[1]);
  StateVector lhs = apply(tensor(sa, sb), cnot(), {"a1", "a2"});
  StateVector rhs = tensor(apply(sa, cnot(), {"a1", "a2"}), sb);
  CHECK(oracle::linf(lhs.amps(), rhs.amps()) < 1e-12);
}

TEST_CASE("measuring a plus state in the computational basis") {
  const double s = 1.0 / std::sqrt(2.0);
  MeasurementBasis comp = MeasurementBasis::checked({{1, 0}, {0, 1}});
  StateVector plus = StateVector::single_qubit("q", s, s);

  OutcomeSource f0 = OutcomeSource::forced({0});
  MeasureResult r0 = measure(plus, {"q"}, comp, f0);
  CHECK(r0.outcome == 0);
  CHECK(std::abs(r0.probability - 0.5) < 1e-12);
  CHECK(std::abs(r0.state.amps()[0] - cplx(1.0)) < 1e-12);

  OutcomeSource f1 = OutcomeSource::forced({1});
  MeasureResult r1 = measure(plus, {"q"}, comp, f1);
  CHECK(r1.outcome == 1);
  CHECK(std::abs(r1.probability - 0.5) < 1e-12);
}

TEST_CASE("measuring the minus state in the plus/minus basis is certain") {
  const double s = 1.0 / std::sqrt(2.0);
  MeasurementBasis had = MeasurementBasis::checked({{s, s}, {s, -s}});
  StateVector minus = StateVector::single_qubit("q", s, -s);
  OutcomeSource src = OutcomeSource::seeded(3);
  MeasureResult r = measure(minus, {"q"}, had, src);
  CHECK(r.outcome == 1);
  CHECK(std::abs(r.probability - 1.0) < 1e-12);
}

TEST_CASE("measurement completeness and collapse idempotence") {
  Vec psi = oracle::random_unit(8, 4242);
  StateVector s = qubits("q", psi, 3);
  const double h = 1.0 / std::sqrt(2.0);
  MeasurementBasis had = MeasurementBasis::checked({{h, h}, {h, -h}});

  double total = 0.0;
  for (std::size_t o = 0; o < 2; ++o) {
    OutcomeSource f = OutcomeSource::forced({o});
    total += measure(s, {"q2"}, had, f).probability;
  }
  CHECK(std::abs(total - 1.0) < 1e-10);

  OutcomeSource f = OutcomeSource::forced({1, 1});
  MeasureResult first = measure(s, {"q2"}, had, f);
  MeasureResult again = measure(first.state, {"q2"}, had, f);
  CHECK(again.outcome == first.outcome);
  CHECK(std::abs(again.probability - 1.0) < 1e-10);
}

TEST_CASE("two-mode measurement in an entangled basis") {
  // Bell-basis measurement probabilities on a product of a payload with plus.
  Vec bell0 = oracle::ghz_vec(2, 1);
  Vec bell1 = oracle::ghz_vec(2, -1);
  const double s = 1.0 / std::sqrt(2.0);
  MeasurementBasis bell =
      MeasurementBasis::checked({bell0, bell1, {0, s, s, 0}, {0, s, -s, 0}});
  Vec payload = oracle::random_unit(2, 99);
  StateVector st = qubits("q", oracle::kron_vec(payload, {s, s}), 2);
  double total = 0.0;
  for (std::size_t o = 0; o < 4; ++o) {
    OutcomeSource f = OutcomeSource::forced({o});
    total += measure(st, {"q1", "q2"}, bell, f).probability;
  }
  CHECK(std::abs(total - 1.0) < 1e-10);
}

TEST_CASE("forced outcomes with vanishing probability are rejected") {
  MeasurementBasis comp = MeasurementBasis::checked({{1, 0}, {0, 1}});
  StateVector zero = StateVector::single_qubit("q", 1.0, 0.0);
  OutcomeSource f = OutcomeSource::forced({1});
  CHECK_THROWS_AS(measure(zero, {"q"}, comp, f), forced_outcome_error);
  OutcomeSource g = OutcomeSource::forced({7});
  CHECK_THROWS_AS(measure(zero, {"q"}, comp, g), std::invalid_argument);
  OutcomeSource h = OutcomeSource::forced({});
  CHECK_THROWS_AS(measure(zero, {"q"}, comp, h), std::invalid_argument);
}

TEST_CASE("measurement bases are validated") {
  CHECK_THROWS_AS(MeasurementBasis::checked({{1, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementBasis::checked({{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementBasis::checked({{0.9, 0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("seeded sampling is deterministic and follows the inverse CDF") {
  OutcomeSource a = OutcomeSource::seeded(12345);
  OutcomeSource b = OutcomeSource::seeded(12345);
  std::vector<double> probs = {0.25, 0.25, 0.5};
  for (int k = 0; k < 50; ++k) {
    std::size_t ra = a.sample(probs);
    CHECK(ra == b.sample(probs));
  }
  // The sampler reproduces the documented map from raw generator output.
  std::mt19937_64 rng(777);
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  OutcomeSource c = OutcomeSource::seeded(777);
  std::size_t expected = u < 0.3 ? 0 : (u < 0.7 ? 1 : 2);
  CHECK(c.sample({0.3, 0.4, 0.3}) == expected);
  // Degenerate weights: certain outcomes always chosen.
  OutcomeSource d = OutcomeSource::seeded(1);
  for (int k = 0; k < 20; ++k) CHECK(d.sample({0.0, 1.0}) == 1);
}

TEST_CASE("fidelity examples") {
  StateVector zero = StateVector::single_qubit("q", 1.0, 0.0);
  StateVector one = StateVector::single_qubit("q", 0.0, 1.0);
  CHECK(fidelity(zero, zero) == Catch::Approx(1.0).margin(1e-15));
  CHECK(fidelity(zero, one) == Catch::Approx(0.0).margin(1e-15));
  StateVector other = StateVector::single_qubit("different_label", 1.0, 0.0);
  CHECK(fidelity(zero, other) == Catch::Approx(1.0).margin(1e-15));  // labels not compared
  StateVector osc = StateVector::oscillator_mode("c", {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(fidelity(zero, osc), std::invalid_argument);
}

TEST_CASE("fidelity of opposite coherent states matches the closed form") {
  Vec plus = oracle::coherent_closed(2.0, 32);
  Vec minus = oracle::coherent_closed(-2.0, 32);
  oracle::normalize(plus);
  oracle::normalize(minus);
  StateVector a = StateVector::oscillator_mode("c", plus);
  StateVector b = StateVector::oscillator_mode("c", minus);
  CHECK(std::abs(fidelity(a, b) - std::exp(-16.0)) < 1e-12);
}

TEST_CASE("reduced purity distinguishes product from entangled") {
  StateVector prod = tensor(StateVector::single_qubit("a", 1.0, 0.0),
                            StateVector::single_qubit("b", 0.0, 1.0));
  CHECK(reduced_purity(prod, {"a"}) == Catch::Approx(1.0).margin(1e-12));
  StateVector bell = qubits("q", oracle::ghz_vec(2, 1), 2);
  CHECK(reduced_purity(bell, {"q1"}) == Catch::Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(reduced_purity(bell, {}), std::invalid_argument);
  CHECK_THROWS_AS(reduced_purity(bell, {"q1", "q2"}), std::invalid_argument);
}

TEST_CASE("pure substate extraction recovers a product factor") {
  Vec a = oracle::random_unit(4, 31);
  Vec b = oracle::random_unit(2, 32);
  StateVector s = qubits("q", oracle::kron_vec(a, b), 3);
  Vec got = extract_pure_substate(s, {"q1", "q2"});
  CHECK(oracle::linf_up_to_phase(a, got) < 1e-10);
  Vec got_b = extract_pure_substate(s, {"q3"});
  CHECK(oracle::linf_up_to_phase(b, got_b) < 1e-10);
  StateVector bell = qubits("q", oracle::ghz_vec(2, 1), 2);
  CHECK_THROWS_AS(extract_pure_substate(bell, {"q1"}), std::runtime_error);
}

TEST_CASE("removing a collapsed mode slices the register") {
  Vec rest = oracle::random_unit(4, 55);
  StateVector s = tensor(qubits("q", rest, 2), StateVector::single_qubit("m", 0.0, 1.0));
  StateVector r = remove_basis_mode(s, "m");
  CHECK(r.mode_count() == 2);
  CHECK(oracle::linf(rest, r.amps()) < 1e-12);
  const double h = 1.0 / std::sqrt(2.0);
  StateVector sup = tensor(qubits("q", rest, 2), StateVector::single_qubit("m", h, h));
  CHECK_THROWS_AS(remove_basis_mode(sup, "m"), std::invalid_argument);
}

TEST_CASE("relabeling preserves amplitudes") {
  StateVector s = qubits("q", oracle::random_unit(4, 8), 2);
  StateVector r = s.with_labels({"x", "y"});
  CHECK(r.mode_index("x") == 0);
  CHECK(oracle::linf(s.amps(), r.amps()) < 1e-15);
  CHECK_THROWS_AS(s.with_labels({"x"}), std::invalid_argument);
}

TEST_CASE("oscillator and qubit modes compose") {
  Vec field = oracle::coherent_closed(1.0, 12);
  oracle::normalize(field);
  StateVector s = tensor(StateVector::single_qubit("a", 1.0, 0.0),
                         StateVector::oscillator_mode("c", field));
  CHECK(s.dim() == 26);
  CHECK(s.stride(0) == 13);
  // Photon-number expectation against the Poisson oracle.
  double mean = 0.0;
  for (std::size_t idx = 0; idx < s.dim(); ++idx)
    mean += static_cast<double>(idx % 13) * std::norm(s.amps()[idx]);
  CHECK(std::abs(mean - 1.0) < 1e-9);
}
