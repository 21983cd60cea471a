#pragma once

// Exact-weight classical mixtures of stabilizer states bound to a party
// registry. Weights are dyadic rationals and every operation keeps them
// exact; floating point enters only through densify.
//
// Member identity (the hidden preparation tag) is bookkeeping for tests and
// preparation code. Protocol logic must never branch on it: corrections may
// depend only on announced measurement outcomes.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "dyadic.hpp"
#include "stabilizer.hpp"

namespace abechain {

struct PartyRegistry {
  std::vector<std::string> parties;   // ordered labels
  std::vector<std::string> owner;     // one label per qubit
  std::vector<std::size_t> location;  // one site id per party; equal ids are co-located
  std::vector<bool> consumed;         // one flag per qubit; consumed qubits leave marginals

  static PartyRegistry create(std::vector<std::string> party_labels, std::vector<std::string> owners) {
    PartyRegistry r;
    r.parties = std::move(party_labels);
    r.owner = std::move(owners);
    if (r.parties.empty()) throw std::invalid_argument("registry needs at least one party");
    if (r.owner.empty()) throw std::invalid_argument("registry needs at least one qubit");
    for (std::size_t i = 0; i < r.parties.size(); ++i)
      for (std::size_t j = i + 1; j < r.parties.size(); ++j)
        if (r.parties[i] == r.parties[j]) throw std::invalid_argument("duplicate party label");
    for (const auto& o : r.owner) (void)r.party_index(o);
    r.location.resize(r.parties.size());
    for (std::size_t i = 0; i < r.location.size(); ++i) r.location[i] = i;
    r.consumed.assign(r.owner.size(), false);
    return r;
  }

  std::size_t num_qubits() const { return owner.size(); }

  std::size_t party_index(const std::string& label) const {
    for (std::size_t i = 0; i < parties.size(); ++i)
      if (parties[i] == label) return i;
    throw std::invalid_argument("unknown party label: " + label);
  }

  const std::string& owner_of(std::size_t q) const {
    if (q >= owner.size()) throw std::out_of_range("qubit index out of range");
    return owner[q];
  }

  bool is_live(std::size_t q) const {
    if (q >= consumed.size()) throw std::out_of_range("qubit index out of range");
    return !consumed[q];
  }

  bool co_located(std::size_t qa, std::size_t qb) const {
    return location[party_index(owner_of(qa))] == location[party_index(owner_of(qb))];
  }

  std::vector<std::size_t> live_qubits_of(const std::string& party) const {
    (void)party_index(party);
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < owner.size(); ++q)
      if (owner[q] == party && !consumed[q]) out.push_back(q);
    return out;
  }

  // Live qubits in the given party order, ascending qubit index within a party.
  std::vector<std::size_t> live_qubits_of_parties(const std::vector<std::string>& ps) const {
    std::vector<std::size_t> out;
    for (const auto& p : ps)
      for (std::size_t q : live_qubits_of(p)) out.push_back(q);
    return out;
  }

  std::vector<std::size_t> live_qubits() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < owner.size(); ++q)
      if (!consumed[q]) out.push_back(q);
    return out;
  }

  void merge_locations(const std::string& a, const std::string& b) {
    const std::size_t keep = location[party_index(a)];
    const std::size_t gone = location[party_index(b)];
    if (keep == gone) return;
    for (auto& l : location)
      if (l == gone) l = keep;
  }

  friend bool operator==(const PartyRegistry&, const PartyRegistry&) = default;
};

class Ensemble {
 public:
  struct Member {
    Dyadic weight = Dyadic(1);
    StabilizerState state;
    std::optional<std::string> hidden_tag;  // preparation identity; not for protocol logic
  };

  Ensemble(PartyRegistry registry, std::vector<Member> members)
      : registry_(std::move(registry)), members_(std::move(members)) {
    validate();
  }

  static Ensemble of_state(StabilizerState s, PartyRegistry registry,
                           std::optional<std::string> tag = std::nullopt) {
    std::vector<Member> ms;
    ms.push_back(Member{Dyadic(1), std::move(s), std::move(tag)});
    return Ensemble(std::move(registry), std::move(ms));
  }

  // Flattened weighted union; the parts must share one registry.
  static Ensemble mix(const std::vector<std::pair<Dyadic, Ensemble>>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty mixture");
    Dyadic total(0);
    for (const auto& [w, part] : parts) {
      if (!w.is_positive()) throw std::invalid_argument("mixture weights must be positive");
      if (!(part.registry_ == parts.front().second.registry_))
        throw std::invalid_argument("mixture parts disagree on the registry");
      total = total + w;
    }
    if (!total.is_one()) throw std::invalid_argument("mixture weights must sum to one");
    std::vector<Member> ms;
    for (const auto& [w, part] : parts)
      for (const auto& m : part.members_) ms.push_back(Member{w * m.weight, m.state, m.hidden_tag});
    return Ensemble(parts.front().second.registry_, std::move(ms));
  }

  std::size_t num_qubits() const { return registry_.num_qubits(); }
  std::size_t size() const { return members_.size(); }
  const Member& member(std::size_t i) const { return members_.at(i); }
  const std::vector<Member>& members() const { return members_; }
  const PartyRegistry& registry() const { return registry_; }

  Dyadic weight_sum() const {
    Dyadic total(0);
    for (const auto& m : members_) total = total + m.weight;
    return total;
  }

  Ensemble mapped(const GateOp& op) const {
    Ensemble out = *this;
    for (auto& m : out.members_) m.state.apply(op);
    return out;
  }

  Ensemble mapped(const Circuit& circuit) const {
    Ensemble out = *this;
    for (auto& m : out.members_)
      for (const auto& op : circuit) m.state.apply(op);
    return out;
  }

  Ensemble with_pauli(const PauliString& p) const {
    Ensemble out = *this;
    for (auto& m : out.members_) m.state.apply_pauli(p);
    return out;
  }

  Ensemble with_consumed(std::size_t q) const {
    Ensemble out = *this;
    if (q >= out.registry_.consumed.size()) throw std::out_of_range("qubit index out of range");
    out.registry_.consumed[q] = true;
    return out;
  }

  Ensemble with_colocated(const std::string& a, const std::string& b) const {
    if (a == b) throw std::invalid_argument("a party cannot be brought together with itself");
    Ensemble out = *this;
    out.registry_.merge_locations(a, b);
    return out;
  }

  struct PauliOutcome;
  struct BellOutcome;

  // Total-probability expansion of a Pauli measurement over the members;
  // conditional ensembles carry exact renormalized dyadic weights.
  std::vector<PauliOutcome> branch_measure(const PauliString& p) const;

  // Bell measurement on two co-located qubits, expanded over all outcomes.
  std::vector<BellOutcome> branch_measure_bell(std::size_t qa, std::size_t qb) const;

  DensityMatrix densify(const std::vector<std::size_t>& subset) const {
    for (std::size_t q : subset)
      if (!registry_.is_live(q)) throw std::invalid_argument("consumed qubit in a marginal");
    const std::size_t dim = dim_for_qubits(subset.size());
    Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& m : members_) acc += m.weight.to_double() * reduced_density(m.state, subset).m;
    return DensityMatrix(subset.size(), std::move(acc));
  }

  DensityMatrix densify_parties(const std::vector<std::string>& ps) const {
    return densify(registry_.live_qubits_of_parties(ps));
  }

  // Merge members with identical canonical tableaux; the result is sorted by
  // canonical key, so equal mixtures have equal member sequences.
  Ensemble merged() const {
    struct Entry {
      Dyadic weight = Dyadic(0);
      std::optional<StabilizerState> state;
      std::optional<std::string> tag;
      bool tag_conflict = false;
    };
    std::map<std::string, Entry> groups;
    for (const auto& m : members_) {
      StabilizerState canon = m.state.canonical();
      Entry& e = groups[canon.canonical_key()];
      e.weight = e.weight + m.weight;
      if (!e.state) {
        e.state = std::move(canon);
        e.tag = m.hidden_tag;
      } else if (e.tag != m.hidden_tag) {
        e.tag_conflict = true;
      }
    }
    std::vector<Member> ms;
    ms.reserve(groups.size());
    for (auto& [key, e] : groups)
      ms.push_back(Member{e.weight, std::move(*e.state), e.tag_conflict ? std::nullopt : e.tag});
    return Ensemble(registry_, std::move(ms));
  }

  // Deduplicated, ordered serialization; exact mixture identity.
  std::string canonical_key() const {
    Ensemble m = merged();
    std::ostringstream out;
    for (const auto& mem : m.members_) out << mem.weight.to_string() << '@' << mem.state.canonical_key() << '|';
    out << '#';
    for (bool c : registry_.consumed) out << (c ? '1' : '0');
    return out.str();
  }

  // Extract the pure factor each member carries on `subset`, reindexed to a
  // standalone ensemble; throws if any member does not factor there.
  Ensemble factored_on(const std::vector<std::size_t>& subset) const {
    const std::size_t k = subset.size();
    if (k == 0) throw std::invalid_argument("empty subset");
    for (std::size_t q : subset)
      if (!registry_.is_live(q)) throw std::invalid_argument("consumed qubit in a factor");
    std::vector<std::string> owners;
    std::vector<std::string> parties;
    for (std::size_t q : subset) {
      owners.push_back(registry_.owner_of(q));
      if (std::find(parties.begin(), parties.end(), owners.back()) == parties.end())
        parties.push_back(owners.back());
    }
    PartyRegistry reg = PartyRegistry::create(std::move(parties), std::move(owners));
    std::vector<Member> ms;
    for (const auto& m : members_) {
      auto sub = m.state.subgroup_within(subset);
      if (sub.size() != k)
        throw std::domain_error("member state does not factor on the requested subset");
      std::vector<PauliString> gens;
      gens.reserve(k);
      for (const auto& g : sub) {
        PauliString out(k);
        out.set_phase_exp(g.phase_exp());
        for (std::size_t t = 0; t < k; ++t) out.set_letter(t, g.letter(subset[t]));
        gens.push_back(out);
      }
      ms.push_back(Member{m.weight, StabilizerState::from_generators(gens), m.hidden_tag});
    }
    return Ensemble(std::move(reg), std::move(ms));
  }

 private:
  PartyRegistry registry_;
  std::vector<Member> members_;

  void validate() const {
    if (members_.empty()) throw std::invalid_argument("ensemble needs at least one member");
    for (const auto& m : members_) {
      if (m.state.num_qubits() != registry_.num_qubits())
        throw std::invalid_argument("member size disagrees with the registry");
      if (!m.weight.is_positive()) throw std::invalid_argument("member weights must be positive");
    }
    if (!weight_sum().is_one()) throw std::invalid_argument("member weights must sum to one");
  }

  Ensemble conditional(std::vector<Member> ms, const Dyadic& total) const {
    for (auto& m : ms) {
      auto w = m.weight.checked_div(total);
      if (!w) throw std::domain_error("conditional weight left the dyadic rationals");
      m.weight = *w;
    }
    return Ensemble(registry_, std::move(ms));
  }
};

struct Ensemble::PauliOutcome {
  bool negative = false;
  Dyadic probability = Dyadic(1);
  Ensemble ensemble;
};

struct Ensemble::BellOutcome {
  BellIndex outcome = BellIndex::phi_plus;
  Dyadic probability = Dyadic(1);
  Ensemble ensemble;
};

inline std::vector<Ensemble::PauliOutcome> Ensemble::branch_measure(const PauliString& p) const {
  struct Bucket {
    Dyadic total = Dyadic(0);
    std::vector<Member> members;
  };
  Bucket buckets[2];
  for (const auto& m : members_) {
    for (auto& br : measure_pauli(m.state, p)) {
      Bucket& b = buckets[br.negative ? 1 : 0];
      const Dyadic w = m.weight * br.probability;
      b.total = b.total + w;
      b.members.push_back(Member{w, std::move(br.state), m.hidden_tag});
    }
  }
  std::vector<PauliOutcome> out;
  for (int neg = 0; neg < 2; ++neg) {
    Bucket& b = buckets[neg];
    if (!b.total.is_positive()) continue;
    out.push_back(PauliOutcome{neg == 1, b.total, conditional(std::move(b.members), b.total)});
  }
  return out;
}

inline std::vector<Ensemble::BellOutcome> Ensemble::branch_measure_bell(std::size_t qa,
                                                                        std::size_t qb) const {
  if (!registry_.is_live(qa) || !registry_.is_live(qb))
    throw std::invalid_argument("cannot measure a consumed qubit");
  if (!registry_.co_located(qa, qb))
    throw std::logic_error("Bell measurement requires co-located qubits");
  struct Bucket {
    Dyadic total = Dyadic(0);
    std::vector<Member> members;
  };
  Bucket buckets[kBellCount];
  for (const auto& m : members_) {
    for (auto& br : bell_measure(m.state, qa, qb)) {
      Bucket& b = buckets[static_cast<int>(br.outcome)];
      const Dyadic w = m.weight * br.probability;
      b.total = b.total + w;
      b.members.push_back(Member{w, std::move(br.state), m.hidden_tag});
    }
  }
  std::vector<BellOutcome> out;
  for (BellIndex idx : kBellOrder) {
    Bucket& b = buckets[static_cast<int>(idx)];
    if (!b.total.is_positive()) continue;
    out.push_back(BellOutcome{idx, b.total, conditional(std::move(b.members), b.total)});
  }
  return out;
}

}  // namespace abechain
