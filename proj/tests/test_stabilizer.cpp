#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "abechain/density.hpp"
#include "abechain/stabilizer.hpp"
#include "dense_oracle.hpp"

using namespace abechain;

namespace {

void oracle_apply(oracle::State& s, const GateOp& op) {
  switch (op.kind) {
    case Gate::H: oracle::apply_h(s, op.a); break;
    case Gate::S: oracle::apply_s(s, op.a); break;
    case Gate::X: oracle::apply_x(s, op.a); break;
    case Gate::Y: oracle::apply_y(s, op.a); break;
    case Gate::Z: oracle::apply_z(s, op.a); break;
    case Gate::CNOT: oracle::apply_cnot(s, op.a, op.b); break;
  }
}

std::vector<int> letters_of(const PauliString& p) {
  std::vector<int> out;
  for (std::size_t q = 0; q < p.num_qubits(); ++q) out.push_back(static_cast<int>(p.letter(q)));
  return out;
}

std::vector<std::size_t> all_qubits(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t q = 0; q < n; ++q) out[q] = q;
  return out;
}

Circuit random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t gates) {
  Circuit c;
  for (std::size_t g = 0; g < gates; ++g) {
    const auto kind = static_cast<Gate>(rng() % (n >= 2 ? 6 : 5));
    if (kind == Gate::CNOT) {
      const std::size_t a = rng() % n;
      std::size_t b = rng() % (n - 1);
      if (b >= a) ++b;
      c.push_back(GateOp::cnot(a, b));
    } else {
      c.push_back(GateOp::single(kind, rng() % n));
    }
  }
  return c;
}

PauliString random_observable(std::mt19937_64& rng, std::size_t n) {
  PauliString p(n);
  while (p.identity_bits())
    for (std::size_t q = 0; q < n; ++q) p.set_letter(q, static_cast<PauliLetter>(rng() % 4));
  return p;
}

}  // namespace

TEST_CASE("fresh states are the all-zeros product state") {
  StabilizerState s(3);
  const Vector psi = to_statevector(s);
  CHECK(std::abs(psi(0) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(psi.tail(7).norm() < 1e-15);
  s.x(1);
  CHECK(std::abs(to_statevector(s)(2)) > 1 - 1e-12);  // |010>
}

TEST_CASE("bell preparation matches the dense vectors") {
  for (BellIndex b : kBellOrder) {
    const Vector got = to_statevector(prepare_bell(b));
    CHECK(oracle::overlap(got, bell_vector(b)) > 1 - 1e-12);
  }
}

TEST_CASE("generator recombination does not change the state") {
  const auto a = StabilizerState::from_generators(
      {PauliString::from_label("XX"), PauliString::from_label("ZZ")});
  const auto b = StabilizerState::from_generators(
      {PauliString::from_label("-YY"), PauliString::from_label("ZZ")});
  CHECK(same_state(a, b));
  CHECK(a.canonical_key() == b.canonical_key());
  const auto c = StabilizerState::from_generators(
      {PauliString::from_label("YY"), PauliString::from_label("ZZ")});
  CHECK_FALSE(same_state(a, c));
}

TEST_CASE("invalid generator sets are rejected") {
  CHECK_THROWS_AS(StabilizerState::from_generators(
                      {PauliString::from_label("XX"), PauliString::from_label("ZI")}),
                  std::invalid_argument);  // anticommuting
  CHECK_THROWS_AS(StabilizerState::from_generators(
                      {PauliString::from_label("XX"), PauliString::from_label("-XX")}),
                  std::invalid_argument);  // dependent
  CHECK_THROWS_AS(StabilizerState::from_generators({PauliString::from_label("iZ")}),
                  std::invalid_argument);  // imaginary sign
}

TEST_CASE("deterministic measurements read the stabilizer sign") {
  const StabilizerState bell = prepare_bell(BellIndex::psi_minus);
  auto branches = measure_pauli(bell, PauliString::from_label("ZZ"));
  REQUIRE(branches.size() == 1);
  CHECK(branches.front().negative);  // psi- has -ZZ
  CHECK(branches.front().probability.is_one());

  auto xx = measure_pauli(bell, PauliString::from_label("XX"));
  REQUIRE(xx.size() == 1);
  CHECK(xx.front().negative);
}

TEST_CASE("random measurements split evenly and collapse correctly") {
  StabilizerState zero(1);
  auto branches = measure_pauli(zero, PauliString::from_label("X"));
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].probability == Dyadic::pow2(1));
  CHECK(branches[1].probability == Dyadic::pow2(1));
  CHECK_FALSE(branches[0].negative);
  CHECK(branches[1].negative);
  // Post states are |+> and |->.
  const Vector plus = to_statevector(branches[0].state);
  const Vector minus = to_statevector(branches[1].state);
  Vector want_plus(2), want_minus(2);
  want_plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  want_minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK(oracle::overlap(plus, want_plus) > 1 - 1e-12);
  CHECK(oracle::overlap(minus, want_minus) > 1 - 1e-12);
}

TEST_CASE("measurement operators must be hermitian and sized") {
  const StabilizerState s(2);
  CHECK_THROWS_AS(measure_pauli(s, PauliString::from_label("iXX")), std::invalid_argument);
  CHECK_THROWS_AS(measure_pauli(s, PauliString::from_label("X")), std::invalid_argument);
}

TEST_CASE("bell measurement on a product of pairs is uniform") {
  const auto s = StabilizerState::tensor(prepare_bell(BellIndex::phi_plus), prepare_bell(BellIndex::phi_plus));
  auto branches = bell_measure(s, 1, 2);
  REQUIRE(branches.size() == 4);
  Dyadic total(0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(branches[i].outcome == kBellOrder[i]);
    CHECK(branches[i].probability == Dyadic::pow2(2));
    total = total + branches[i].probability;
  }
  CHECK(total.is_one());
}

TEST_CASE("bell measurement on a bell pair is deterministic") {
  for (BellIndex b : kBellOrder) {
    auto branches = bell_measure(prepare_bell(b), 0, 1);
    REQUIRE(branches.size() == 1);
    CHECK(branches.front().outcome == b);
    CHECK(branches.front().probability.is_one());
  }
}

TEST_CASE("single-qubit marginals of a bell pair are maximally mixed") {
  const auto bell = prepare_bell(BellIndex::psi_minus);
  CHECK(max_abs_diff(reduced_density(bell, {0}).m, maximally_mixed(1).m) < 1e-15);
  CHECK(max_abs_diff(reduced_density(bell, {1}).m, maximally_mixed(1).m) < 1e-15);
}

TEST_CASE("subgroup_within finds exactly the locally supported rows") {
  const auto s = StabilizerState::tensor(prepare_bell(BellIndex::phi_plus), prepare_bell(BellIndex::psi_minus));
  CHECK(s.subgroup_within({0, 1}).size() == 2);
  CHECK(s.subgroup_within({2, 3}).size() == 2);
  CHECK(s.subgroup_within({1, 2}).empty());
  CHECK(s.subgroup_within({0, 1, 2, 3}).size() == 4);
}

TEST_CASE("random circuits agree with the dense oracle") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 4;  // 2..5 qubits
    const Circuit circuit = random_circuit(rng, n, 1 + rng() % 16);

    StabilizerState s(n);
    s.apply(circuit);
    oracle::State o = oracle::State::zero(n);
    for (const GateOp& op : circuit) oracle_apply(o, op);

    // Same pure state up to global phase.
    REQUIRE(oracle::overlap(to_statevector(s), o.amp) > 1 - 1e-10);

    // One random measurement: branch data must match dense projections.
    const PauliString obs = random_observable(rng, n);
    const oracle::Matrix op = oracle::dense_operator(letters_of(obs), 0);
    auto branches = measure_pauli(s, obs);
    Dyadic total(0);
    for (const auto& br : branches) {
      const auto proj = oracle::project(o, op, br.negative);
      REQUIRE(std::abs(br.probability.to_double() - proj.probability) < 1e-10);
      const auto rho = reduced_density(br.state, all_qubits(n));
      REQUIRE(max_abs_diff(rho.m, oracle::density(proj.state)) < 1e-10);
      total = total + br.probability;
    }
    REQUIRE(total.is_one());
  }
}

TEST_CASE("statevector round trip through reduced density") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const Circuit circuit = random_circuit(rng, n, 12);
    StabilizerState s(n);
    s.apply(circuit);
    const Vector psi = to_statevector(s);
    const Matrix rho = reduced_density(s, all_qubits(n)).m;
    REQUIRE(max_abs_diff(rho, psi * psi.adjoint()) < 1e-10);
  }
}
