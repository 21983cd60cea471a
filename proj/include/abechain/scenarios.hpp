#pragma once

// Concrete scenario builders on top of the chain machinery:
//
//  - fig2: seven-link chain, substitutions on links (1,5) and (3,7); three
//    interior nodes teleport their outer halves inward so the two four-party
//    constituents sit on {A,B,C,D} and {E,B,C,D}, then B, C, D measure.
//  - fig3: substitutions on (1,5), (2,6), (3,7) with a single teleport, which
//    tiles the chain into three four-party constituents sharing parties.
//  - activation: fig3 stopped right after the middle node's measurement.
//  - relay: four-link chain fully covered by two substitutions.
//  - remark3: the fig2 configuration run strictly along the chain, with an
//    optional connecting singlet removed.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "protocols.hpp"

namespace abechain {

inline std::vector<std::string> spaced_chain_labels() {
  return {"A", "B", "F", "G", "C", "D", "H", "E"};
}

struct Fig2Scenario {
  Chain chain;          // substituted chain, before the bring-together moves
  Ensemble configured;  // after the three bring-together teleports
  std::array<std::vector<std::size_t>, 2> group_qubits;  // constituents, in party order
  std::array<std::vector<std::string>, 2> group_parties;
  DistillationSpec spec;
  ProtocolTranscript transcript;  // preparation plus teleports
};

inline Fig2Scenario make_fig2() {
  Chain chain = build_chain(7, spaced_chain_labels());
  substitute_abe(chain, 1, 5);
  substitute_abe(chain, 3, 7);
  Fig2Scenario sc{chain, chain.ensemble, {}, {}, {}, chain.transcript};
  const auto& table = CorrectionTable::for_channel(BellIndex::psi_minus);
  sc.configured = teleport(sc.configured, 4, {3, 2}, table, sc.transcript);    // F to B
  sc.configured = teleport(sc.configured, 5, {6, 7}, table, sc.transcript);    // G to C
  sc.configured = teleport(sc.configured, 12, {11, 10}, table, sc.transcript);  // H to D
  sc.group_qubits[0] = {0, 1, 8, 9};
  sc.group_parties[0] = {"A", "B", "C", "D"};
  sc.group_qubits[1] = {13, 2, 7, 10};
  sc.group_parties[1] = {"E", "B", "C", "D"};
  sc.spec.steps = {
      MeasureStep{"B", 1, 2, false},
      MeasureStep{"C", 7, 8, false},
      MeasureStep{"D", 9, 10, false},
  };
  sc.spec.end_left = 0;
  sc.spec.end_right = 13;
  sc.spec.frame_offset = frame_offset_for_singlet_count(0);
  return sc;
}

struct Fig3Scenario {
  Chain chain;
  Ensemble configured;  // after the single teleport
  std::array<std::vector<std::size_t>, 3> group_qubits;
  std::array<std::vector<std::string>, 3> group_parties;
  DistillationSpec spec;
  ProtocolTranscript transcript;
};

inline Fig3Scenario make_fig3() {
  Chain chain = build_chain(7, spaced_chain_labels());
  substitute_abe(chain, 1, 5);
  substitute_abe(chain, 2, 6);
  substitute_abe(chain, 3, 7);
  Fig3Scenario sc{chain, chain.ensemble, {}, {}, {}, chain.transcript};
  const auto& table = CorrectionTable::for_channel(BellIndex::psi_minus);
  sc.configured = teleport(sc.configured, 5, {6, 7}, table, sc.transcript);  // G to C
  sc.group_qubits[0] = {0, 1, 8, 9};
  sc.group_parties[0] = {"A", "B", "C", "D"};
  sc.group_qubits[1] = {2, 10, 3, 11};
  sc.group_parties[1] = {"B", "D", "F", "H"};
  sc.group_qubits[2] = {7, 13, 4, 12};
  sc.group_parties[2] = {"C", "E", "F", "H"};
  sc.spec.steps = {
      MeasureStep{"B", 1, 2, false},
      MeasureStep{"F", 3, 4, false},
      MeasureStep{"C", 7, 8, false},
      MeasureStep{"D", 9, 10, false},
      MeasureStep{"H", 11, 12, false},
  };
  sc.spec.end_left = 0;
  sc.spec.end_right = 13;
  sc.spec.frame_offset = frame_offset_for_singlet_count(0);
  return sc;
}

struct ActivationBranch {
  BellIndex outcome = BellIndex::phi_plus;
  Dyadic probability = Dyadic(1);
  Ensemble ensemble;  // full state after the announced correction
  DistillationSpec completion;
};

struct ActivationScenario {
  Fig3Scenario base;
  std::vector<ActivationBranch> branches;
  std::vector<std::size_t> shared_qubits;  // six-party shared state, in party order
  std::vector<std::string> shared_parties;
  std::vector<std::size_t> aux_qubits;  // standalone four-party constituent
  std::vector<std::string> aux_parties;
  ProtocolTranscript transcript;
};

// The fig3 protocol interrupted immediately after the middle node measures:
// per announced outcome, six parties share a state whose pair marginals are
// all separable-looking, yet the remaining four measurements finish a singlet.
inline ActivationScenario make_activation() {
  ActivationScenario sc{make_fig3(),
                        {},
                        {0, 1, 9, 13, 4, 12},
                        {"A", "B", "D", "E", "F", "H"},
                        {2, 10, 3, 11},
                        {"B", "D", "F", "H"},
                        {}};
  sc.transcript = sc.base.transcript;
  sc.transcript.add("C", "bell-measure", {7, 8}, "joint Bell-basis measurement of the node's two halves");
  sc.transcript.add("C", "announce", {}, "outcome broadcast to all parties");
  sc.transcript.add("E", "correction", {13}, "conversion Pauli keyed by the announced outcome");
  for (auto& b : sc.base.configured.branch_measure_bell(7, 8)) {
    Ensemble ens = apply_letter(std::move(b.ensemble), letter_for_signs(bell_signs(b.outcome)), 13);
    ens = standardize_measured(std::move(ens), 7, 8, b.outcome).merged();
    DistillationSpec completion;
    completion.steps = {
        MeasureStep{"B", 1, 2, false},
        MeasureStep{"F", 3, 4, false},
        MeasureStep{"D", 9, 10, false},
        MeasureStep{"H", 11, 12, false},
    };
    completion.end_left = 0;
    completion.end_right = 13;
    completion.frame_offset = frame_offset_for_singlet_count(0);
    sc.branches.push_back(ActivationBranch{b.outcome, b.probability, std::move(ens), std::move(completion)});
  }
  return sc;
}

struct RelayScenario {
  Chain chain;
  DistillationSpec spec;
  std::vector<std::pair<std::string, std::string>> intermediate_pairs;  // every pair but the ends
  ProtocolTranscript transcript;
};

// Four-link chain fully covered by substitutions (1,3) and (2,4): no pair of
// parties short of the full run holds distillable entanglement, yet the three
// interior measurements leave the ends with a singlet.
inline RelayScenario make_relay() {
  Chain chain = build_chain(4, {"A", "B", "C", "D", "E"});
  substitute_abe(chain, 1, 3);
  substitute_abe(chain, 2, 4);
  RelayScenario sc{chain, chain_distillation_spec(chain), {}, chain.transcript};
  const auto& parties = sc.chain.config.node_labels;
  for (std::size_t i = 0; i < parties.size(); ++i)
    for (std::size_t j = i + 1; j < parties.size(); ++j) {
      if (i == 0 && j + 1 == parties.size()) continue;
      sc.intermediate_pairs.emplace_back(parties[i], parties[j]);
    }
  return sc;
}

struct Remark3Scenario {
  Chain chain;
  DistillationSpec spec;
  std::size_t removed_link = 0;  // 0 = intact
  ProtocolTranscript transcript;
};

// The fig2 configuration executed strictly along the chain. Intact, the run
// ends in a singlet; with any one connecting singlet removed, the end pair
// densifies to the maximally mixed state.
inline Remark3Scenario make_remark3(std::size_t removed_link = 0) {
  Chain chain = build_chain(7, spaced_chain_labels());
  substitute_abe(chain, 1, 5);
  substitute_abe(chain, 3, 7);
  if (removed_link != 0) remove_link(chain, removed_link);
  DistillationSpec spec = chain_distillation_spec(chain);
  return Remark3Scenario{chain, std::move(spec), removed_link, chain.transcript};
}

inline std::vector<std::size_t> remark3_connecting_links() { return {2, 4, 6}; }

inline std::size_t link_id_for_nodes(const ChainConfig& cfg, const std::string& a, const std::string& b) {
  for (std::size_t id = 1; id <= cfg.link_count(); ++id) {
    const ChainLink& l = cfg.link(id);
    const std::string& left = cfg.node_labels[l.left_node];
    const std::string& right = cfg.node_labels[l.right_node];
    if ((left == a && right == b) || (left == b && right == a)) return id;
  }
  throw std::invalid_argument("no link joins nodes " + a + " and " + b);
}

}  // namespace abechain
