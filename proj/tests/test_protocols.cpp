#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "abechain/protocols.hpp"
#include "abechain/verification.hpp"
#include "dense_oracle.hpp"

using namespace abechain;

namespace {

PauliLetter pair_letter(BellIndex b) {
  // The Pauli that turns phi+ into b; phi+ itself maps to I.
  return conversion_letter(BellIndex::phi_plus, b);
}

std::string serialize_classes(const RunResult& run) {
  std::vector<std::string> keys;
  for (const auto& cls : run.classes)
    keys.push_back(cls.weight.to_string() + "@" + cls.ensemble.canonical_key());
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + ";";
  return out;
}

}  // namespace

TEST_CASE("correction tables compose as the outcome letter times the channel letter") {
  for (BellIndex channel : kBellOrder) {
    const CorrectionTable& table = CorrectionTable::for_channel(channel);
    for (BellIndex outcome : kBellOrder) {
      const PauliLetter want = letter_product(pair_letter(outcome), pair_letter(channel));
      CHECK(table.correction(outcome) == want);
    }
  }
}

TEST_CASE("teleportation is exact through every bell channel") {
  const char* input_bits[4] = {"0", "1", "+", "i"};
  for (BellIndex channel : kBellOrder) {
    for (int which = 0; which < 4; ++which) {
      // Qubit 0 carries the input; the channel pair sits on (1, 2).
      PartyRegistry reg = PartyRegistry::create({"S", "R"}, {"S", "S", "R"});
      StabilizerState one(1);
      if (input_bits[which][0] == '1') one.x(0);
      if (input_bits[which][0] == '+') one.h(0);
      if (input_bits[which][0] == 'i') {
        one.h(0);
        one.s(0);
      }
      const StabilizerState start = StabilizerState::tensor(one, prepare_bell(channel));
      const Ensemble e = Ensemble::of_state(start, reg);
      const Matrix before = e.densify({0}).m;

      ProtocolTranscript transcript;
      const Ensemble sent =
          teleport(e, 0, {1, 2}, CorrectionTable::for_channel(channel), transcript,
                   channel == BellIndex::psi_minus);
      CHECK(max_abs_diff(sent.densify({2}).m, before) < 1e-15);
      // The pure input arrives pure in every branch, so merging leaves one class.
      CHECK(sent.size() == 1);
      CHECK(transcript.events.size() == 3);
      CHECK(transcript.events[0].action == "bell-measure");
      CHECK(transcript.events[1].action == "announce");
      CHECK(transcript.events[2].action == "correction");
      CHECK(transcript.singlets_consumed == (channel == BellIndex::psi_minus ? 1u : 0u));
    }
  }
}

TEST_CASE("teleport rejects overlapping qubit roles") {
  PartyRegistry reg = PartyRegistry::create({"S", "R"}, {"S", "S", "R"});
  const Ensemble e = Ensemble::of_state(
      StabilizerState::tensor(StabilizerState(1), prepare_bell(BellIndex::psi_minus)), reg);
  ProtocolTranscript t;
  CHECK_THROWS_AS(teleport(e, 1, {1, 2}, CorrectionTable::for_channel(BellIndex::psi_minus), t),
                  std::invalid_argument);
}

TEST_CASE("direct and distributed four-party preparations agree") {
  const std::array<std::string, 4> parties{"A", "B", "C", "D"};
  const Ensemble direct = prepare_smolin_direct(parties);
  const Preparation locc = prepare_smolin_locc(parties);
  const std::vector<std::string> order(parties.begin(), parties.end());
  CHECK(max_abs_diff(direct.densify_parties(order).m, locc.ensemble.densify_parties(order).m) < 1e-15);
  CHECK(max_abs_diff(direct.densify_parties(order).m, smolin_reference()) < 1e-15);
  CHECK(locc.transcript.singlets_consumed == 2);
  CHECK(locc.transcript.events.size() == 6);
  // After both teleports each party holds exactly one live qubit.
  for (const auto& p : parties) CHECK(locc.ensemble.registry().live_qubits_of(p).size() == 1);
}

TEST_CASE("chains of singlets distill an exact end singlet with m-1 interior steps") {
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    const Chain chain = build_chain(m);
    const RunResult run = run_end_to_end(chain);
    const auto check = end_pair_check(run, 0, 2 * m - 1);
    CHECK(check.exact);
    CHECK(check.min_fidelity > 1 - 1e-12);
    CHECK(run.transcript.singlets_consumed == m - 1);
    Dyadic total(0);
    for (const auto& cls : run.classes) total = total + cls.weight;
    CHECK(total.is_one());
  }
}

TEST_CASE("substituted links hold the four-party reference state") {
  Chain chain = build_chain(3);
  substitute_abe(chain, 1, 3);
  const auto groups = chain.config.abe_groups();
  REQUIRE(groups.size() == 1);
  CHECK(groups.front() == std::pair<std::size_t, std::size_t>{1, 3});
  const DensityMatrix rho = chain.ensemble.densify({0, 1, 4, 5});
  CHECK(max_abs_diff(rho.m, smolin_reference()) < 1e-15);
  CHECK(chain.transcript.singlets_consumed == 2);
  // The synthesized transcript mirrors one teleport per replaced link.
  CHECK(chain.transcript.events.size() == 6);
}

TEST_CASE("substitution demands intact singlets") {
  Chain chain = build_chain(4);
  substitute_abe(chain, 1, 3);
  CHECK_THROWS_AS(substitute_abe(chain, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(substitute_abe(chain, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(substitute_abe(chain, 2, 9), std::invalid_argument);
  remove_link(chain, 2);
  CHECK_THROWS_AS(substitute_abe(chain, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(remove_link(chain, 2), std::invalid_argument);
}

TEST_CASE("substituted chains still close into an exact singlet") {
  Chain chain = build_chain(3);
  substitute_abe(chain, 1, 2);
  const RunResult run = run_end_to_end(chain);
  const auto check = end_pair_check(run, 0, 5);
  CHECK(check.exact);
  CHECK(check.min_fidelity > 1 - 1e-12);
}

TEST_CASE("interior measurement order does not matter") {
  Chain chain = build_chain(5);
  substitute_abe(chain, 1, 3);
  const auto participants = chain_participants(chain);
  REQUIRE(participants == std::vector<std::size_t>{1, 2, 3, 4});
  const std::string forward = serialize_classes(run_end_to_end(chain));
  std::vector<std::size_t> order = participants;
  std::reverse(order.begin(), order.end());
  CHECK(serialize_classes(run_end_to_end(chain, order)) == forward);
  CHECK(serialize_classes(run_end_to_end(chain, {2, 4, 1, 3})) == forward);
  CHECK_THROWS_AS(run_end_to_end(chain, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(run_end_to_end(chain, {1, 2, 3, 3}), std::invalid_argument);
}

TEST_CASE("sampled runs follow one history and reproduce under the same seed") {
  Chain chain = build_chain(4);
  substitute_abe(chain, 2, 4);
  const RunResult a = run_end_to_end(chain, {}, OutcomeSource::sampled(11));
  const RunResult b = run_end_to_end(chain, {}, OutcomeSource::sampled(11));
  REQUIRE(a.classes.size() == 1);
  REQUIRE(b.classes.size() == 1);
  CHECK(a.classes.front().ensemble.canonical_key() == b.classes.front().ensemble.canonical_key());
  CHECK(a.classes.front().weight.is_one());
  // Every single history still ends in the exact singlet.
  const auto check = end_pair_check(a, 0, 7);
  CHECK(check.exact);
}

TEST_CASE("corrections depend only on announced outcomes, not hidden labels") {
  Chain chain = build_chain(4);
  substitute_abe(chain, 2, 4);
  const DistillationSpec spec = chain_distillation_spec(chain);
  const std::vector<BellIndex> script{BellIndex::phi_minus, BellIndex::psi_plus, BellIndex::phi_plus};
  const RunResult ref = run_distillation(chain.ensemble, spec, {}, OutcomeSource::forced(script));

  // Present the same resource with its hidden members listed in reverse.
  std::vector<Ensemble::Member> reversed(chain.ensemble.members().rbegin(), chain.ensemble.members().rend());
  const Ensemble shuffled(chain.ensemble.registry(), reversed);
  const RunResult alt = run_distillation(shuffled, spec, {}, OutcomeSource::forced(script));

  REQUIRE(ref.classes.size() == 1);
  REQUIRE(alt.classes.size() == 1);
  CHECK(ref.classes.front().ensemble.canonical_key() == alt.classes.front().ensemble.canonical_key());
  CHECK(serialize_classes(ref) == serialize_classes(alt));
  CHECK(ref.transcript.events.size() == alt.transcript.events.size());
}

TEST_CASE("forced scripts must cover every step") {
  Chain chain = build_chain(2);
  CHECK_THROWS_AS(run_end_to_end(chain, {}, OutcomeSource::forced({})), std::domain_error);
}

TEST_CASE("forcing an impossible outcome is an error") {
  PartyRegistry reg = PartyRegistry::create({"A"}, {"A", "A"});
  const Ensemble e = Ensemble::of_state(prepare_bell(BellIndex::phi_plus), reg);
  auto branches = e.branch_measure_bell(0, 1);
  REQUIRE(branches.size() == 1);
  OutcomeSource src = OutcomeSource::forced({BellIndex::psi_minus});
  CHECK_THROWS_AS(src.pick(branches), std::domain_error);
}

TEST_CASE("frame offsets alternate with the singlet count") {
  CHECK(letter_for_signs(frame_offset_for_singlet_count(0)) == PauliLetter::Y);
  CHECK(letter_for_signs(frame_offset_for_singlet_count(1)) == PauliLetter::I);
  CHECK(letter_for_signs(frame_offset_for_singlet_count(2)) == PauliLetter::Y);
  CHECK(letter_for_signs(frame_offset_for_singlet_count(7)) == PauliLetter::I);
}

TEST_CASE("runs refuse to touch the end qubits") {
  Chain chain = build_chain(3);
  DistillationSpec spec = chain_distillation_spec(chain);
  spec.steps.front().qa = spec.end_left;
  CHECK_THROWS_AS(run_distillation(chain.ensemble, spec), std::invalid_argument);
}

TEST_CASE("pair identification turns co-located halves into an end check") {
  const Preparation prep = prepare_smolin_locc({"A", "B", "C", "D"});
  const Ensemble together = bring_together(prep.ensemble, "B", "C");
  const DistillationSpec spec = pair_identification_spec(together, "B", "C");
  const RunResult run = run_distillation(together, spec);
  const auto check = end_pair_check(run, spec.end_left, spec.end_right);
  CHECK(check.exact);
  CHECK(check.min_fidelity > 1 - 1e-12);
  CHECK_THROWS_AS(bring_together(prep.ensemble, "B", "B"), std::invalid_argument);
}

TEST_CASE("chain construction limits") {
  CHECK_THROWS_AS(build_chain(0), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(33), std::invalid_argument);
  CHECK_THROWS_AS(build_chain(3, {"A", "B"}), std::invalid_argument);
  const Chain named = build_chain(2, {"X", "Y", "Z"});
  CHECK(named.config.node_labels == std::vector<std::string>{"X", "Y", "Z"});
  CHECK(default_node_labels(27).back() == "A1");
}
