#pragma once

// LOCC protocol layer: teleportation driven by a calibrated correction table,
// preparation of the four-party activable bound-entangled state, teleportation
// chains with pairwise substitutions, and the outcome-branching end-to-end
// runner shared by every scenario.
//
// Blindness invariant: every correction below is keyed only by announced Bell
// outcomes and by the public chain structure. Nothing reads a member's hidden
// preparation tag.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bell.hpp"
#include "dyadic.hpp"
#include "ensemble.hpp"
#include "pauli.hpp"
#include "stabilizer.hpp"

namespace abechain {

struct TranscriptEvent {
  std::string actor;
  std::string action;  // "bell-measure" | "announce" | "correction"
  std::vector<std::size_t> targets;
  std::string detail;
};

struct ProtocolTranscript {
  std::vector<TranscriptEvent> events;
  std::size_t singlets_consumed = 0;

  void add(std::string actor, std::string action, std::vector<std::size_t> targets, std::string detail) {
    events.push_back(TranscriptEvent{std::move(actor), std::move(action), std::move(targets), std::move(detail)});
  }

  void append(const ProtocolTranscript& other) {
    events.insert(events.end(), other.events.begin(), other.events.end());
    singlets_consumed += other.singlets_consumed;
  }
};

inline GateOp letter_gate(PauliLetter l, std::size_t q) {
  switch (l) {
    case PauliLetter::X:
      return GateOp::single(Gate::X, q);
    case PauliLetter::Y:
      return GateOp::single(Gate::Y, q);
    case PauliLetter::Z:
      return GateOp::single(Gate::Z, q);
    case PauliLetter::I:
      break;
  }
  throw std::invalid_argument("identity has no gate");
}

inline Ensemble apply_letter(Ensemble e, PauliLetter l, std::size_t q) {
  if (l == PauliLetter::I) return e;
  return e.mapped(letter_gate(l, q));
}

inline PauliLetter letter_for_signs(const BellSigns& s) {
  return letter_for_sign_delta(s.xx_negative, s.zz_negative);
}

// After a Bell measurement with announced outcome m, rotate the measured pair
// into a fixed computational product so that branches differing only in the
// announced outcome become identical states, then retire both qubits.
inline Ensemble standardize_measured(Ensemble e, std::size_t qa, std::size_t qb, BellIndex outcome) {
  e = apply_letter(std::move(e), conversion_letter(outcome, BellIndex::phi_plus), qa);
  e = e.mapped(GateOp::cnot(qa, qb)).mapped(GateOp::single(Gate::H, qa));
  return e.with_consumed(qa).with_consumed(qb);
}

// Receiver-side Pauli for each announced Bell outcome, for a teleportation
// channel held in a fixed Bell state. Calibrated, not assumed: the unique
// Pauli that restores four tomographically complete test states is found by
// exhaustive search over a three-qubit simulation.
class CorrectionTable {
 public:
  static const CorrectionTable& for_channel(BellIndex channel) {
    static const std::array<CorrectionTable, kBellCount> tables = {
        calibrate(BellIndex::psi_plus), calibrate(BellIndex::psi_minus),
        calibrate(BellIndex::phi_plus), calibrate(BellIndex::phi_minus)};
    return tables[static_cast<int>(channel)];
  }

  BellIndex channel() const { return channel_; }
  PauliLetter correction(BellIndex measured) const { return map_[static_cast<int>(measured)]; }

 private:
  BellIndex channel_ = BellIndex::phi_plus;
  std::array<PauliLetter, kBellCount> map_{};

  static CorrectionTable calibrate(BellIndex channel) {
    struct Test {
      Circuit prep;
      PauliString stabilizer;
    };
    const std::vector<Test> tests = {
        {{}, PauliString::single(3, 2, PauliLetter::Z)},
        {{GateOp::single(Gate::X, 0)}, PauliString::single(3, 2, PauliLetter::Z).negated()},
        {{GateOp::single(Gate::H, 0)}, PauliString::single(3, 2, PauliLetter::X)},
        {{GateOp::single(Gate::H, 0), GateOp::single(Gate::S, 0)}, PauliString::single(3, 2, PauliLetter::Y)},
    };
    CorrectionTable table;
    table.channel_ = channel;
    for (BellIndex m : kBellOrder) {
      std::optional<PauliLetter> found;
      for (PauliLetter sigma : {PauliLetter::I, PauliLetter::X, PauliLetter::Z, PauliLetter::Y}) {
        bool works = true;
        for (const auto& t : tests) {
          StabilizerState s(3);
          s.apply(t.prep);
          s.apply(GateOp::single(Gate::H, 1));
          s.apply(GateOp::cnot(1, 2));
          const PauliLetter conv = conversion_letter(BellIndex::phi_plus, channel);
          if (conv != PauliLetter::I) s.apply(letter_gate(conv, 1));
          const BellBranch* hit = nullptr;
          auto branches = bell_measure(s, 0, 1);
          for (const auto& b : branches)
            if (b.outcome == m) hit = &b;
          if (!hit || !(hit->probability == Dyadic::pow2(2))) {
            works = false;
            break;
          }
          StabilizerState after = hit->state;
          if (sigma != PauliLetter::I) after.apply(letter_gate(sigma, 2));
          auto check = measure_pauli(after, t.stabilizer);
          if (check.size() != 1 || check.front().negative) {
            works = false;
            break;
          }
        }
        if (works) {
          if (found) throw std::logic_error("correction table calibration is ambiguous");
          found = sigma;
        }
      }
      if (!found) throw std::logic_error("correction table calibration found no valid Pauli");
      table.map_[static_cast<int>(m)] = *found;
    }
    return table;
  }
};

// How measurement outcomes are resolved during a protocol run.
class OutcomeSource {
 public:
  enum class Mode { exhaustive, forced, sampled };

  static OutcomeSource exhaustive() { return OutcomeSource(Mode::exhaustive); }

  static OutcomeSource forced(std::vector<BellIndex> outcomes) {
    OutcomeSource s(Mode::forced);
    s.forced_ = std::move(outcomes);
    return s;
  }

  static OutcomeSource sampled(std::uint64_t seed) {
    OutcomeSource s(Mode::sampled);
    s.rng_.seed(seed);
    return s;
  }

  Mode mode() const { return mode_; }
  bool is_exhaustive() const { return mode_ == Mode::exhaustive; }

  // Index of the chosen branch; forced picks the next scripted outcome,
  // sampled draws with the exact dyadic branch probabilities.
  std::size_t pick(const std::vector<Ensemble::BellOutcome>& branches) {
    if (mode_ == Mode::forced) {
      if (next_ >= forced_.size()) throw std::domain_error("forced outcome sequence exhausted");
      const BellIndex want = forced_[next_++];
      for (std::size_t i = 0; i < branches.size(); ++i)
        if (branches[i].outcome == want) return i;
      throw std::domain_error("forced outcome has probability zero");
    }
    if (mode_ != Mode::sampled) throw std::logic_error("exhaustive mode does not pick branches");
    unsigned scale = 0;
    for (const auto& b : branches) scale = std::max(scale, b.probability.exponent());
    std::uint64_t total = 0;
    std::vector<std::uint64_t> scaled;
    for (const auto& b : branches) {
      const std::uint64_t s = static_cast<std::uint64_t>(b.probability.numerator())
                              << (scale - b.probability.exponent());
      scaled.push_back(s);
      total += s;
    }
    if (total != (std::uint64_t{1} << scale)) throw std::logic_error("branch probabilities do not sum to one");
    const std::uint64_t r = rng_() & ((std::uint64_t{1} << scale) - 1);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      acc += scaled[i];
      if (r < acc) return i;
    }
    throw std::logic_error("branch selection fell through");
  }

 private:
  explicit OutcomeSource(Mode m) : mode_(m) {}

  Mode mode_;
  std::vector<BellIndex> forced_;
  std::size_t next_ = 0;
  std::mt19937_64 rng_;
};

// One-hop teleportation: the owner of `source` Bell-measures it against the
// sending half of the channel pair and announces; the receiver applies the
// table Pauli. Exhaustive mode keeps every branch and re-merges.
inline Ensemble teleport(const Ensemble& e, std::size_t source, std::pair<std::size_t, std::size_t> channel,
                         const CorrectionTable& table, ProtocolTranscript& transcript,
                         bool channel_is_singlet = true, OutcomeSource* outcomes = nullptr) {
  const auto [send, recv] = channel;
  if (source == send || source == recv || send == recv)
    throw std::invalid_argument("teleport needs three distinct qubits");
  const std::string sender = e.registry().owner_of(source);
  const std::string receiver = e.registry().owner_of(recv);
  auto branches = e.branch_measure_bell(source, send);
  transcript.add(sender, "bell-measure", {source, send}, "joint Bell-basis measurement of the state and the channel half");
  transcript.add(sender, "announce", {}, "outcome broadcast to all parties");
  transcript.add(receiver, "correction", {recv}, "Pauli from the channel correction table, keyed by the announced outcome");
  std::vector<std::pair<Dyadic, Ensemble>> parts;
  std::optional<std::size_t> chosen;
  if (outcomes != nullptr && !outcomes->is_exhaustive()) chosen = outcomes->pick(branches);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (chosen && *chosen != i) continue;
    auto& b = branches[i];
    Ensemble fixed = apply_letter(std::move(b.ensemble), table.correction(b.outcome), recv);
    fixed = standardize_measured(std::move(fixed), source, send, b.outcome);
    parts.emplace_back(b.probability, std::move(fixed));
  }
  if (channel_is_singlet) transcript.singlets_consumed += 1;
  if (chosen) {
    transcript.events.back().detail += " (sampled history)";
    return parts.front().second.merged();
  }
  if (parts.size() == 1) return parts.front().second.merged();
  // conditional ensembles reweighted by their branch probabilities
  return Ensemble::mix(parts).merged();
}

// Four-party activable bound-entangled state, written directly as the uniform
// mixture of doubled Bell pairs on (q0,q1) and (q2,q3).
inline Ensemble prepare_smolin_direct(const std::array<std::string, 4>& labels) {
  PartyRegistry reg = PartyRegistry::create({labels[0], labels[1], labels[2], labels[3]},
                                            {labels[0], labels[1], labels[2], labels[3]});
  std::vector<std::pair<Dyadic, Ensemble>> parts;
  for (BellIndex b : kBellOrder) {
    StabilizerState s = StabilizerState::tensor(prepare_bell(b), prepare_bell(b));
    parts.emplace_back(Dyadic::pow2(2), Ensemble::of_state(std::move(s), reg, std::string(bell_name(b))));
  }
  return Ensemble::mix(parts);
}

struct Preparation {
  Ensemble ensemble;
  ProtocolTranscript transcript;
};

// LOCC preparation from two shared singlets: the first party draws a Bell
// label, both it and the third party build that pair locally, and each
// teleports one half over a singlet. Consumes exactly two singlets.
inline Preparation prepare_smolin_locc(const std::array<std::string, 4>& labels) {
  const auto& [a, b, c, d] = labels;
  PartyRegistry reg = PartyRegistry::create({a, b, c, d}, {a, b, c, d, a, a, c, c});
  std::vector<std::pair<Dyadic, Ensemble>> parts;
  for (BellIndex bi : kBellOrder) {
    StabilizerState chan = StabilizerState::tensor(prepare_bell(BellIndex::psi_minus), prepare_bell(BellIndex::psi_minus));
    StabilizerState local = StabilizerState::tensor(prepare_bell(bi), prepare_bell(bi));
    parts.emplace_back(Dyadic::pow2(2),
                       Ensemble::of_state(StabilizerState::tensor(chan, local), reg, std::string(bell_name(bi))));
  }
  Preparation prep{Ensemble::mix(parts), {}};
  const auto& table = CorrectionTable::for_channel(BellIndex::psi_minus);
  prep.ensemble = teleport(prep.ensemble, 5, {0, 1}, table, prep.transcript);
  prep.ensemble = teleport(prep.ensemble, 7, {2, 3}, table, prep.transcript);
  return prep;
}

// ---------------------------------------------------------------------------
// Teleportation chains

enum class LinkRole { singlet, abe, removed };

struct ChainLink {
  std::size_t left_node = 0, right_node = 0;
  std::size_t qubit_left = 0, qubit_right = 0;
  LinkRole role = LinkRole::singlet;
  std::size_t group_partner = 0;  // 1-based partner link id when role == abe
};

struct ChainConfig {
  std::vector<std::string> node_labels;
  std::vector<ChainLink> links;

  std::size_t link_count() const { return links.size(); }

  const ChainLink& link(std::size_t id) const {  // ids are 1-based
    if (id == 0 || id > links.size()) throw std::invalid_argument("link id out of range");
    return links[id - 1];
  }

  // Substituted pairs as canonical (i, j) with i < j, in ascending order.
  std::vector<std::pair<std::size_t, std::size_t>> abe_groups() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t id = 1; id <= links.size(); ++id) {
      const ChainLink& l = links[id - 1];
      if (l.role == LinkRole::abe && l.group_partner > id) out.emplace_back(id, l.group_partner);
    }
    return out;
  }
};

struct Chain {
  ChainConfig config;
  Ensemble ensemble;
  ProtocolTranscript transcript;
};

inline std::vector<std::string> default_node_labels(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    if (i >= 26) s += std::to_string(i / 26);
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline void bell_rows(std::vector<PauliString>& gens, std::size_t n, std::size_t ql, std::size_t qr,
                      const BellSigns& signs) {
  PauliString xx(n), zz(n);
  xx.set_letter(ql, PauliLetter::X);
  xx.set_letter(qr, PauliLetter::X);
  zz.set_letter(ql, PauliLetter::Z);
  zz.set_letter(qr, PauliLetter::Z);
  if (signs.xx_negative) xx.negate();
  if (signs.zz_negative) zz.negate();
  gens.push_back(std::move(xx));
  gens.push_back(std::move(zz));
}

inline void zero_rows(std::vector<PauliString>& gens, std::size_t n, std::size_t ql, std::size_t qr) {
  gens.push_back(PauliString::single(n, ql, PauliLetter::Z));
  gens.push_back(PauliString::single(n, qr, PauliLetter::Z));
}

}  // namespace detail

// Resource state for a chain configuration: one member per joint assignment
// of a Bell label to each substituted group, uniform dyadic weights. Removed
// links hold retired qubits in a fixed product state.
inline Ensemble chain_resource_ensemble(const ChainConfig& cfg) {
  const std::size_t n = 2 * cfg.link_count();
  std::vector<std::string> owners;
  for (const ChainLink& l : cfg.links) {
    owners.push_back(cfg.node_labels.at(l.left_node));
    owners.push_back(cfg.node_labels.at(l.right_node));
  }
  PartyRegistry reg = PartyRegistry::create(cfg.node_labels, owners);
  for (const ChainLink& l : cfg.links)
    if (l.role == LinkRole::removed) {
      reg.consumed[l.qubit_left] = true;
      reg.consumed[l.qubit_right] = true;
    }
  const auto groups = cfg.abe_groups();
  std::vector<Ensemble::Member> members;
  const std::size_t combos = std::size_t{1} << (2 * groups.size());
  for (std::size_t combo = 0; combo < combos; ++combo) {
    std::vector<BellIndex> pick(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
      pick[g] = static_cast<BellIndex>((combo >> (2 * g)) & 3u);
    std::vector<PauliString> gens;
    for (std::size_t id = 1; id <= cfg.link_count(); ++id) {
      const ChainLink& l = cfg.link(id);
      switch (l.role) {
        case LinkRole::singlet:
          detail::bell_rows(gens, n, l.qubit_left, l.qubit_right, bell_signs(BellIndex::psi_minus));
          break;
        case LinkRole::removed:
          detail::zero_rows(gens, n, l.qubit_left, l.qubit_right);
          break;
        case LinkRole::abe: {
          std::size_t g = groups.size();
          for (std::size_t k = 0; k < groups.size(); ++k)
            if (groups[k].first == id || groups[k].second == id) g = k;
          detail::bell_rows(gens, n, l.qubit_left, l.qubit_right, bell_signs(pick[g]));
          break;
        }
      }
    }
    std::optional<std::string> tag;
    if (!groups.empty()) {
      std::string t;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g > 0) t += ',';
        t += bell_name(pick[g]);
      }
      tag = std::move(t);
    }
    members.push_back(Ensemble::Member{Dyadic::pow2(2 * static_cast<unsigned>(groups.size())),
                                       StabilizerState::from_generators(gens), std::move(tag)});
  }
  return Ensemble(std::move(reg), std::move(members));
}

// Linear chain of `m` singlet links over m+1 nodes; qubits (2k, 2k+1) span
// nodes (k, k+1).
inline Chain build_chain(std::size_t m, std::vector<std::string> labels = {}) {
  if (m == 0) throw std::invalid_argument("a chain needs at least one link");
  if (2 * m > kMaxQubits) throw std::invalid_argument("chain too long for the qubit budget");
  if (labels.empty()) labels = default_node_labels(m + 1);
  if (labels.size() != m + 1) throw std::invalid_argument("a chain of m links needs m+1 node labels");
  ChainConfig cfg;
  cfg.node_labels = std::move(labels);
  for (std::size_t k = 0; k < m; ++k)
    cfg.links.push_back(ChainLink{k, k + 1, 2 * k, 2 * k + 1, LinkRole::singlet, 0});
  return Chain{cfg, chain_resource_ensemble(cfg), {}};
}

// Replace the singlets on links i and j (1-based, disjoint) by one four-party
// activable bound-entangled state over the links' endpoint parties, prepared
// from those very singlets as channels. Consumes two fresh singlets.
inline void substitute_abe(Chain& chain, std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("substitution needs two distinct links");
  if (i > j) std::swap(i, j);
  for (std::size_t id : {i, j})
    if (chain.config.link(id).role != LinkRole::singlet)
      throw std::invalid_argument("substitution needs intact singlet links");
  chain.config.links[i - 1].role = LinkRole::abe;
  chain.config.links[i - 1].group_partner = j;
  chain.config.links[j - 1].role = LinkRole::abe;
  chain.config.links[j - 1].group_partner = i;
  chain.ensemble = chain_resource_ensemble(chain.config);
  for (std::size_t id : {i, j}) {
    const ChainLink& l = chain.config.link(id);
    const std::string& left = chain.config.node_labels[l.left_node];
    const std::string& right = chain.config.node_labels[l.right_node];
    chain.transcript.add(left, "bell-measure", {l.qubit_left},
                         "joint measurement with a locally prepared pair half");
    chain.transcript.add(left, "announce", {}, "outcome broadcast to all parties");
    chain.transcript.add(right, "correction", {l.qubit_right},
                         "Pauli from the singlet correction table, keyed by the announced outcome");
    chain.transcript.singlets_consumed += 1;
  }
}

// Discard the singlet on one link; its qubits are retired before any run.
inline void remove_link(Chain& chain, std::size_t id) {
  if (chain.config.link(id).role != LinkRole::singlet)
    throw std::invalid_argument("only intact singlet links can be removed");
  chain.config.links[id - 1].role = LinkRole::removed;
  chain.ensemble = chain_resource_ensemble(chain.config);
}

// ---------------------------------------------------------------------------
// End-to-end runner

struct MeasureStep {
  std::string actor;
  std::size_t qa = 0, qb = 0;
  bool counts_singlet = false;  // the step retires this node's static singlet channel
};

struct DistillationSpec {
  std::vector<MeasureStep> steps;
  std::size_t end_left = 0, end_right = 0;
  BellSigns frame_offset{};  // one constant end correction after all steps
};

struct RunClass {
  Dyadic weight = Dyadic(1);  // total probability of the histories merged here
  std::size_t histories = 1;
  Ensemble ensemble;
};

struct RunResult {
  std::vector<RunClass> classes;
  ProtocolTranscript transcript;
};

// Sign bookkeeping for composed corrections: each announced outcome is
// cancelled eagerly at the right end; what remains is one constant offset
// fixed by how many singlet links the path telescopes.
inline BellSigns frame_offset_for_singlet_count(std::size_t k) {
  if (k % 2 == 0) return bell_signs(BellIndex::psi_minus);
  return BellSigns{false, false};
}

// Run the measurement steps in order, expanding (or sampling) outcomes.
// Every branch gets its eager end correction and its measured pair
// standardized; identical mixtures are merged so exhaustive runs stay small.
inline RunResult run_distillation(const Ensemble& start, const DistillationSpec& spec,
                                  ProtocolTranscript transcript = {},
                                  OutcomeSource outcomes = OutcomeSource::exhaustive()) {
  if (spec.end_left == spec.end_right) throw std::invalid_argument("distinct end qubits required");
  for (const MeasureStep& st : spec.steps)
    if (st.qa == spec.end_left || st.qa == spec.end_right || st.qb == spec.end_left || st.qb == spec.end_right)
      throw std::invalid_argument("steps must not measure the end qubits");
  const std::string right_owner = start.registry().owner_of(spec.end_right);
  std::vector<RunClass> frontier;
  frontier.push_back(RunClass{Dyadic(1), 1, start});
  for (const MeasureStep& st : spec.steps) {
    transcript.add(st.actor, "bell-measure", {st.qa, st.qb}, "joint Bell-basis measurement of the node's two halves");
    transcript.add(st.actor, "announce", {}, "outcome broadcast to all parties");
    transcript.add(right_owner, "correction", {spec.end_right},
                   "conversion Pauli keyed by the announced outcome");
    std::map<std::string, RunClass> next;
    for (const RunClass& node : frontier) {
      auto branches = node.ensemble.branch_measure_bell(st.qa, st.qb);
      std::optional<std::size_t> chosen;
      if (!outcomes.is_exhaustive()) chosen = outcomes.pick(branches);
      for (std::size_t i = 0; i < branches.size(); ++i) {
        if (chosen && *chosen != i) continue;
        auto& b = branches[i];
        Ensemble ens = apply_letter(std::move(b.ensemble), letter_for_signs(bell_signs(b.outcome)), spec.end_right);
        ens = standardize_measured(std::move(ens), st.qa, st.qb, b.outcome).merged();
        const Dyadic w = chosen ? node.weight : node.weight * b.probability;
        const std::string key = ens.canonical_key();
        auto it = next.find(key);
        if (it == next.end()) {
          next.emplace(key, RunClass{w, node.histories, std::move(ens)});
        } else {
          it->second.weight = it->second.weight + w;
          it->second.histories += node.histories;
        }
      }
    }
    frontier.clear();
    for (auto& [key, cls] : next) frontier.push_back(std::move(cls));
    if (st.counts_singlet) transcript.singlets_consumed += 1;
  }
  const PauliLetter off = letter_for_signs(spec.frame_offset);
  if (off != PauliLetter::I) {
    transcript.add(right_owner, "correction", {spec.end_right}, "constant frame correction closing the run");
    for (RunClass& cls : frontier) cls.ensemble = apply_letter(std::move(cls.ensemble), off, spec.end_right);
  }
  return RunResult{std::move(frontier), std::move(transcript)};
}

// Interior nodes that take part in an end-to-end run: those holding exactly
// two live halves. Nodes stranded next to a removed link are skipped.
inline std::vector<std::size_t> chain_participants(const Chain& chain) {
  const PartyRegistry& reg = chain.ensemble.registry();
  std::vector<std::size_t> participants;
  for (std::size_t k = 1; k + 1 < chain.config.node_labels.size(); ++k)
    if (reg.live_qubits_of(chain.config.node_labels[k]).size() == 2) participants.push_back(k);
  return participants;
}

// Step plan for running a chain end to end: every interior node holding
// exactly two live halves swaps them out, in the given node order (default:
// left to right). End nodes must hold exactly one live qubit each.
inline DistillationSpec chain_distillation_spec(const Chain& chain, const std::vector<std::size_t>& node_order = {}) {
  const PartyRegistry& reg = chain.ensemble.registry();
  const auto ends_left = reg.live_qubits_of(chain.config.node_labels.front());
  const auto ends_right = reg.live_qubits_of(chain.config.node_labels.back());
  if (ends_left.size() != 1 || ends_right.size() != 1)
    throw std::invalid_argument("chain ends must hold exactly one live qubit");
  const std::vector<std::size_t> participants = chain_participants(chain);
  std::vector<std::size_t> order = node_order.empty() ? participants : node_order;
  {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != participants)
      throw std::invalid_argument("step order must list every participating interior node exactly once");
  }
  DistillationSpec spec;
  for (std::size_t k : order) {
    const auto live = reg.live_qubits_of(chain.config.node_labels[k]);
    const ChainLink& right_link = chain.config.links[k];
    spec.steps.push_back(MeasureStep{chain.config.node_labels[k], live[0], live[1],
                                     right_link.role == LinkRole::singlet});
  }
  spec.end_left = ends_left.front();
  spec.end_right = ends_right.front();
  std::size_t singlet_links = 0;
  for (const ChainLink& l : chain.config.links)
    if (l.role == LinkRole::singlet) ++singlet_links;
  spec.frame_offset = frame_offset_for_singlet_count(singlet_links);
  return spec;
}

inline RunResult run_end_to_end(const Chain& chain, const std::vector<std::size_t>& node_order = {},
                                OutcomeSource outcomes = OutcomeSource::exhaustive()) {
  return run_distillation(chain.ensemble, chain_distillation_spec(chain, node_order), chain.transcript,
                          std::move(outcomes));
}

// Two parties merge sites; purely classical bookkeeping, no quantum event.
inline Ensemble bring_together(const Ensemble& e, const std::string& a, const std::string& b) {
  return e.with_colocated(a, b);
}

// Step plan for four parties holding one qubit each: `x` and `y` are brought
// together and jointly measured; the complementary pair keeps the ends.
inline DistillationSpec pair_identification_spec(const Ensemble& e, const std::string& x, const std::string& y) {
  const PartyRegistry& reg = e.registry();
  if (reg.parties.size() != 4) throw std::invalid_argument("pair identification needs four parties");
  for (const auto& p : reg.parties)
    if (reg.live_qubits_of(p).size() != 1)
      throw std::invalid_argument("pair identification needs one live qubit per party");
  DistillationSpec spec;
  spec.steps.push_back(MeasureStep{x, reg.live_qubits_of(x).front(), reg.live_qubits_of(y).front(), false});
  std::vector<std::string> rest;
  for (const auto& p : reg.parties)
    if (p != x && p != y) rest.push_back(p);
  if (rest.size() != 2) throw std::invalid_argument("measuring parties must be two distinct parties");
  spec.end_left = reg.live_qubits_of(rest[0]).front();
  spec.end_right = reg.live_qubits_of(rest[1]).front();
  spec.frame_offset = frame_offset_for_singlet_count(0);
  return spec;
}

}  // namespace abechain
