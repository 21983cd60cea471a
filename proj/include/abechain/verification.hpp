#pragma once

// Certification layer: self-describing claims with numeric evidence.
// Includes the standard battery for the four-party activable bound-entangled
// state, pairwise PPT certificates, end-to-end fidelity and depolarization
// checks, exact product-structure certificates, and one report builder per
// scenario.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "density.hpp"
#include "ensemble.hpp"
#include "protocols.hpp"
#include "scenarios.hpp"

namespace abechain {

struct Tolerances {
  double eq = 1e-12;   // entrywise equality of exact constructions
  double ppt = 1e-10;  // eigenvalue slack for PPT certificates
};

struct Claim {
  std::string id;
  std::string anchor;  // what is being checked, in plain words
  bool pass = false;
  std::vector<std::pair<std::string, double>> evidence;
  double tolerance = 0.0;
};

struct CertificationReport {
  std::string scenario;
  std::vector<Claim> claims;
  ProtocolTranscript transcript;

  bool all_pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
  }
};

// (I + XXXX + YYYY + ZZZZ) / 16: the four-party state as a direct matrix.
inline const Matrix& smolin_reference() {
  static const Matrix m = [] {
    Matrix acc = Matrix::Zero(16, 16);
    for (const char* label : {"IIII", "XXXX", "YYYY", "ZZZZ"})
      acc += pauli_matrix(PauliString::from_label(label));
    return Matrix(acc / 16.0);
  }();
  return m;
}

// ---------------------------------------------------------------------------
// Run-level checks

struct EndPairCheck {
  bool exact = true;  // every class factors to exactly the target Bell pair
  double min_fidelity = std::numeric_limits<double>::infinity();
  double weighted_fidelity = 0.0;
  std::size_t class_count = 0;
};

inline EndPairCheck end_pair_check(const RunResult& run, std::size_t end_left, std::size_t end_right,
                                   BellIndex target = BellIndex::psi_minus) {
  EndPairCheck out;
  out.class_count = run.classes.size();
  const std::string want = prepare_bell(target).canonical_key();
  const Vector psi = bell_vector(target);
  Dyadic total(0);
  double acc = 0.0;
  for (const auto& cls : run.classes) {
    const double f = fidelity_pure(cls.ensemble.densify({end_left, end_right}), psi);
    out.min_fidelity = std::min(out.min_fidelity, f);
    acc += cls.weight.to_double() * f;
    total = total + cls.weight;
    bool cls_exact = false;
    try {
      Ensemble fac = cls.ensemble.factored_on({end_left, end_right}).merged();
      cls_exact = fac.size() == 1 && fac.member(0).state.canonical_key() == want;
    } catch (const std::domain_error&) {
      cls_exact = false;
    }
    out.exact = out.exact && cls_exact;
  }
  out.weighted_fidelity = acc / total.to_double();
  return out;
}

struct EndMixCheck {
  double diff_from_mixed = 0.0;
  double fidelity = 0.0;  // against the singlet; 1/4 when fully depolarized
};

// Marginal of the end pair, mixed over all run classes.
inline EndMixCheck end_pair_mixture_check(const RunResult& run, std::size_t end_left, std::size_t end_right) {
  Matrix acc = Matrix::Zero(4, 4);
  Dyadic total(0);
  for (const auto& cls : run.classes) {
    acc += cls.weight.to_double() * cls.ensemble.densify({end_left, end_right}).m;
    total = total + cls.weight;
  }
  DensityMatrix rho(2, Matrix(acc / total.to_double()));
  return {max_abs_diff(rho.m, maximally_mixed(2).m), fidelity_pure(rho, bell_vector(BellIndex::psi_minus))};
}

// Exact product-structure certificate: factor the state on each subset, then
// rebuild the full mixture as the cross product of the factors (retired
// qubits sit in the fixed computational state) and compare canonical keys.
inline bool product_structure_matches(const Ensemble& e, const std::vector<std::vector<std::size_t>>& subsets) {
  if (subsets.empty()) throw std::invalid_argument("no factors given");
  std::vector<bool> covered(e.num_qubits(), false);
  for (const auto& s : subsets)
    for (std::size_t q : s) {
      if (q >= e.num_qubits()) throw std::invalid_argument("factor qubit out of range");
      if (covered[q]) throw std::invalid_argument("factors overlap");
      covered[q] = true;
    }
  for (std::size_t q = 0; q < e.num_qubits(); ++q)
    if (!covered[q] && e.registry().is_live(q))
      throw std::invalid_argument("factors must cover every live qubit");
  std::vector<Ensemble> factors;
  for (const auto& s : subsets) factors.push_back(e.factored_on(s));
  const std::size_t n = e.num_qubits();
  std::vector<Ensemble::Member> members;
  std::vector<std::size_t> idx(subsets.size(), 0);
  while (true) {
    std::vector<PauliString> gens;
    Dyadic weight(1);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const auto& m = factors[f].member(idx[f]);
      weight = weight * m.weight;
      for (std::size_t r = 0; r < m.state.num_qubits(); ++r) {
        const PauliString& g = m.state.generator(r);
        PauliString embedded(n);
        embedded.set_phase_exp(g.phase_exp());
        for (std::size_t t = 0; t < subsets[f].size(); ++t) embedded.set_letter(subsets[f][t], g.letter(t));
        gens.push_back(std::move(embedded));
      }
    }
    for (std::size_t q = 0; q < n; ++q)
      if (!covered[q]) gens.push_back(PauliString::single(n, q, PauliLetter::Z));
    members.push_back(Ensemble::Member{weight, StabilizerState::from_generators(gens), std::nullopt});
    std::size_t f = 0;
    while (f < idx.size() && ++idx[f] == factors[f].size()) idx[f++] = 0;
    if (f == idx.size()) break;
  }
  Ensemble rebuilt(e.registry(), std::move(members));
  return rebuilt.canonical_key() == e.canonical_key();
}

// ---------------------------------------------------------------------------
// Batteries

namespace detail {

inline Claim make_claim(std::string id, std::string anchor, bool pass,
                        std::vector<std::pair<std::string, double>> evidence, double tol) {
  return Claim{std::move(id), std::move(anchor), pass, std::move(evidence), tol};
}

}  // namespace detail

// The five standard checks for a four-party ensemble holding the activable
// bound-entangled state, one live qubit per party.
inline std::vector<Claim> smolin_battery(const Ensemble& e, const Tolerances& tol) {
  const auto& parties = e.registry().parties;
  if (parties.size() != 4) throw std::invalid_argument("the battery needs exactly four parties");
  for (const auto& p : parties)
    if (e.registry().live_qubits_of(p).size() != 1)
      throw std::invalid_argument("the battery needs one live qubit per party");
  std::vector<Claim> out;
  const DensityMatrix rho = e.densify_parties(parties);

  const double dref = max_abs_diff(rho.m, smolin_reference());
  out.push_back(detail::make_claim(
      "smolin.reference-form",
      "the four-party state densifies to the uniform doubled-Bell-pair mixture (I+XXXX+YYYY+ZZZZ)/16",
      dref <= tol.eq, {{"max_abs_diff", dref}}, tol.eq));

  const double d12 = max_abs_diff(rho.m, permute_parties(rho, {0, 2, 1, 3}).m);
  const double d13 = max_abs_diff(rho.m, permute_parties(rho, {0, 3, 2, 1}).m);
  out.push_back(detail::make_claim(
      "smolin.party-symmetry", "the state is unchanged under interchanging parties two and three, or two and four",
      d12 <= tol.eq && d13 <= tol.eq, {{"swap_23_diff", d12}, {"swap_24_diff", d13}}, tol.eq));

  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    const std::vector<std::pair<std::string, Cut>> cuts = {
        {"12|34", Cut::of({0, 1})}, {"13|24", Cut::of({0, 2})}, {"14|23", Cut::of({0, 3})}};
    for (const auto& [name, cut] : cuts) {
      const PptCertificate cert = ppt_certificate(rho, cut, tol.ppt);
      ev.emplace_back("min_eig:" + name, cert.min_eigenvalue);
      pass = pass && cert.is_ppt;
    }
    out.push_back(detail::make_claim("smolin.two-two-ppt",
                                     "the partial transpose is positive across all three two-versus-two cuts",
                                     pass, std::move(ev), tol.ppt));
  }

  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    for (std::size_t q = 0; q < 4; ++q) {
      const Cut cut{std::vector<std::size_t>{q}};
      const PptCertificate cert = ppt_certificate(rho, cut, tol.ppt);
      const double neg = negativity(rho, cut);
      ev.emplace_back("min_eig:" + std::to_string(q + 1), cert.min_eigenvalue);
      ev.emplace_back("negativity:" + std::to_string(q + 1), neg);
      pass = pass && !cert.is_ppt && std::abs(neg - 0.5) <= tol.eq;
    }
    out.push_back(detail::make_claim(
        "smolin.one-three-npt",
        "every one-versus-three cut has a negative partial transpose with negativity one half",
        pass, std::move(ev), tol.ppt));
  }

  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        const Ensemble joined = bring_together(e, parties[i], parties[j]);
        const DistillationSpec spec = pair_identification_spec(joined, parties[i], parties[j]);
        const RunResult run = run_distillation(joined, spec);
        const EndPairCheck check = end_pair_check(run, spec.end_left, spec.end_right);
        ev.emplace_back("min_fidelity:" + parties[i] + "+" + parties[j], check.min_fidelity);
        pass = pass && check.exact;
      }
    out.push_back(detail::make_claim(
        "smolin.pair-distill",
        "bringing any two parties together lets them give the other two a perfect singlet",
        pass, std::move(ev), tol.eq));
  }
  return out;
}

// One PPT claim per party pair from their joint marginal, cut between them.
inline std::vector<Claim> pairwise_undistillability(const Ensemble& e,
                                                    const std::vector<std::pair<std::string, std::string>>& pairs,
                                                    const Tolerances& tol, const std::string& id_prefix) {
  std::vector<Claim> out;
  for (const auto& [x, y] : pairs) {
    const auto qx = e.registry().live_qubits_of(x);
    const DensityMatrix rho = e.densify_parties({x, y});
    std::vector<std::size_t> left(qx.size());
    for (std::size_t i = 0; i < qx.size(); ++i) left[i] = i;
    const PptCertificate cert = ppt_certificate(rho, Cut{left}, tol.ppt);
    out.push_back(detail::make_claim(id_prefix + ".ppt." + x + "|" + y,
                                     "the joint marginal of " + x + " and " + y +
                                         " has a positive partial transpose across the " + x + " versus " + y + " cut",
                                     cert.is_ppt, {{"min_eigenvalue", cert.min_eigenvalue}}, tol.ppt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario reports

inline CertificationReport certify_smolin(const Tolerances& tol) {
  Preparation prep = prepare_smolin_locc({"A", "B", "C", "D"});
  return CertificationReport{"smolin", smolin_battery(prep.ensemble, tol), prep.transcript};
}

struct ChainRunOptions {
  std::size_t length = 3;
  std::vector<std::pair<std::size_t, std::size_t>> substitutions;
  std::vector<std::size_t> removed_links;
  std::vector<std::vector<std::size_t>> orders;  // node index sequences; empty = one default run
  bool sampled = false;
  std::uint64_t seed = 0;
};

inline CertificationReport certify_chain(const ChainRunOptions& opt, const Tolerances& tol) {
  Chain chain = build_chain(opt.length);
  for (const auto& [i, j] : opt.substitutions) substitute_abe(chain, i, j);
  for (std::size_t id : opt.removed_links) remove_link(chain, id);
  std::vector<std::vector<std::size_t>> orders = opt.orders;
  if (orders.empty()) orders.push_back({});
  std::vector<RunResult> runs;
  if (opt.sampled) {
    runs.push_back(run_end_to_end(chain, orders.front(), OutcomeSource::sampled(opt.seed)));
  } else {
    for (const auto& ord : orders) runs.push_back(run_end_to_end(chain, ord));
  }
  const DistillationSpec spec = chain_distillation_spec(chain, orders.front());
  CertificationReport rep{"chain", {}, runs.front().transcript};

  const bool intact = opt.removed_links.empty();
  if (intact) {
    bool exact = true;
    double min_fid = std::numeric_limits<double>::infinity();
    std::size_t classes = 0;
    for (const auto& run : runs) {
      const EndPairCheck check = end_pair_check(run, spec.end_left, spec.end_right);
      exact = exact && check.exact;
      min_fid = std::min(min_fid, check.min_fidelity);
      classes = std::max(classes, check.class_count);
    }
    rep.claims.push_back(detail::make_claim(
        "chain.end-fidelity", "after all interior measurements the end pair is exactly a singlet in every branch",
        exact && min_fid >= 1.0 - tol.eq,
        {{"min_fidelity", min_fid}, {"branch_classes", static_cast<double>(classes)}}, tol.eq));
  } else {
    double max_diff = 0.0, fid = 0.0;
    for (const auto& run : runs) {
      const EndMixCheck check = end_pair_mixture_check(run, spec.end_left, spec.end_right);
      max_diff = std::max(max_diff, check.diff_from_mixed);
      fid = check.fidelity;
    }
    rep.claims.push_back(detail::make_claim(
        "chain.end-depolarized", "with a link removed the end pair densifies to the maximally mixed state",
        max_diff <= tol.eq, {{"max_abs_diff", max_diff}, {"singlet_fidelity", fid}}, tol.eq));
  }

  {
    bool pass = true;
    double sum = 0.0;
    for (const auto& run : runs) {
      Dyadic total(0);
      for (const auto& cls : run.classes) total = total + cls.weight;
      sum = total.to_double();
      pass = pass && (opt.sampled ? (total.is_positive() && !(Dyadic(1) < total)) : total.is_one());
    }
    rep.claims.push_back(detail::make_claim(
        "chain.weights",
        opt.sampled ? "the sampled history carries an exact dyadic probability"
                    : "branch class weights are exact dyadics summing to one",
        pass, {{"weight_sum", sum}}, 0.0));
  }

  {
    std::size_t expected = 0;
    for (const auto& st : spec.steps) expected += st.counts_singlet ? 1 : 0;
    expected += 2 * chain.config.abe_groups().size();
    const std::size_t seen = runs.front().transcript.singlets_consumed;
    rep.claims.push_back(detail::make_claim(
        "chain.resources", "singlets consumed match the substitution count plus the intact interior channels",
        seen == expected,
        {{"singlets_consumed", static_cast<double>(seen)}, {"expected", static_cast<double>(expected)}}, 0.0));
  }

  if (!opt.sampled && runs.size() > 1) {
    std::vector<std::string> keys;
    for (const auto& run : runs) {
      std::ostringstream os;
      for (const auto& cls : run.classes) os << cls.weight.to_string() << '@' << cls.ensemble.canonical_key() << ';';
      keys.push_back(os.str());
    }
    std::size_t distinct = 1;
    for (const auto& k : keys)
      if (k != keys.front()) distinct = 2;
    rep.claims.push_back(detail::make_claim(
        "chain.order-independence", "every measurement ordering produces the same final branch classes",
        distinct == 1,
        {{"orders_run", static_cast<double>(runs.size())}, {"distinct_outcomes", static_cast<double>(distinct)}},
        0.0));
  }
  return rep;
}

inline CertificationReport certify_fig2(const Tolerances& tol) {
  Fig2Scenario sc = make_fig2();
  CertificationReport rep{"fig2", {}, {}};
  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    for (std::size_t g = 0; g < 2; ++g) {
      const double d = max_abs_diff(sc.configured.densify(sc.group_qubits[g]).m, smolin_reference());
      std::string name = "max_abs_diff:";
      for (const auto& p : sc.group_parties[g]) name += p;
      ev.emplace_back(std::move(name), d);
      pass = pass && d <= tol.eq;
    }
    rep.claims.push_back(detail::make_claim(
        "fig2.constituents",
        "after the bring-together moves both four-party constituents equal the reference state",
        pass, std::move(ev), tol.eq));
  }
  {
    const bool match = product_structure_matches(sc.configured, {sc.group_qubits[0], sc.group_qubits[1]});
    rep.claims.push_back(detail::make_claim(
        "fig2.product-form", "the configured state is exactly the product of its two four-party constituents",
        match, {{"rebuild_matches", match ? 1.0 : 0.0}}, 0.0));
  }
  const RunResult run = run_distillation(sc.configured, sc.spec, sc.transcript);
  {
    const EndPairCheck check = end_pair_check(run, sc.spec.end_left, sc.spec.end_right);
    rep.claims.push_back(detail::make_claim(
        "fig2.end-fidelity", "the three joint measurements leave the outer parties an exact singlet in every branch",
        check.exact && check.min_fidelity >= 1.0 - tol.eq,
        {{"min_fidelity", check.min_fidelity}, {"branch_classes", static_cast<double>(check.class_count)}},
        tol.eq));
  }
  rep.claims.push_back(detail::make_claim(
      "fig2.resources", "the construction spends exactly seven singlets",
      run.transcript.singlets_consumed == 7,
      {{"singlets_consumed", static_cast<double>(run.transcript.singlets_consumed)}}, 0.0));
  rep.transcript = run.transcript;
  return rep;
}

inline CertificationReport certify_fig3(const Tolerances& tol) {
  Fig3Scenario sc = make_fig3();
  CertificationReport rep{"fig3", {}, {}};
  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    for (std::size_t g = 0; g < 3; ++g) {
      const double d = max_abs_diff(sc.configured.densify(sc.group_qubits[g]).m, smolin_reference());
      std::string name = "max_abs_diff:";
      for (const auto& p : sc.group_parties[g]) name += p;
      ev.emplace_back(std::move(name), d);
      pass = pass && d <= tol.eq;
    }
    rep.claims.push_back(detail::make_claim(
        "fig3.constituents", "all three overlapping four-party constituents equal the reference state",
        pass, std::move(ev), tol.eq));
  }
  {
    const bool match =
        product_structure_matches(sc.configured, {sc.group_qubits[0], sc.group_qubits[1], sc.group_qubits[2]});
    const std::size_t count = sc.configured.merged().size();
    rep.claims.push_back(detail::make_claim(
        "fig3.product-form", "the configured state is exactly the product of its three four-party constituents",
        match && count == 64,
        {{"rebuild_matches", match ? 1.0 : 0.0}, {"member_count", static_cast<double>(count)}}, 0.0));
  }
  const RunResult run = run_distillation(sc.configured, sc.spec, sc.transcript);
  {
    const EndPairCheck check = end_pair_check(run, sc.spec.end_left, sc.spec.end_right);
    rep.claims.push_back(detail::make_claim(
        "fig3.end-fidelity", "the five joint measurements leave the outer parties an exact singlet in every branch",
        check.exact && check.min_fidelity >= 1.0 - tol.eq,
        {{"min_fidelity", check.min_fidelity}, {"branch_classes", static_cast<double>(check.class_count)}},
        tol.eq));
  }
  rep.claims.push_back(detail::make_claim(
      "fig3.resources", "the construction spends exactly seven singlets",
      run.transcript.singlets_consumed == 7,
      {{"singlets_consumed", static_cast<double>(run.transcript.singlets_consumed)}}, 0.0));
  rep.transcript = run.transcript;
  return rep;
}

inline CertificationReport certify_activation(const Tolerances& tol) {
  ActivationScenario sc = make_activation();
  CertificationReport rep{"activation", {}, sc.transcript};
  std::vector<Ensemble> shared;
  for (const auto& b : sc.branches) shared.push_back(b.ensemble.factored_on(sc.shared_qubits));

  {
    bool pass = true;
    double max_dp = 0.0;
    for (const auto& b : sc.branches) {
      pass = pass && b.probability == Dyadic::pow2(2);
      max_dp = std::max(max_dp, std::abs(b.probability.to_double() - 0.25));
    }
    rep.claims.push_back(detail::make_claim(
        "activation.branch-uniform", "the middle measurement announces each outcome with probability one quarter",
        pass && sc.branches.size() == 4,
        {{"branches", static_cast<double>(sc.branches.size())}, {"max_prob_dev", max_dp}}, 0.0));
  }

  for (std::size_t i = 0; i < sc.shared_parties.size(); ++i)
    for (std::size_t j = i + 1; j < sc.shared_parties.size(); ++j) {
      double min_eig = std::numeric_limits<double>::infinity();
      double max_diff = 0.0;
      bool pass = true;
      for (const auto& f : shared) {
        const DensityMatrix rho = f.densify({i, j});
        const PptCertificate cert = ppt_certificate(rho, Cut::of({0}), tol.ppt);
        min_eig = std::min(min_eig, cert.min_eigenvalue);
        max_diff = std::max(max_diff, max_abs_diff(rho.m, maximally_mixed(2).m));
        pass = pass && cert.is_ppt;
      }
      rep.claims.push_back(detail::make_claim(
          "activation.ppt." + sc.shared_parties[i] + "|" + sc.shared_parties[j],
          "in every branch the " + sc.shared_parties[i] + "-" + sc.shared_parties[j] +
              " marginal of the six-party shared state has a positive partial transpose",
          pass, {{"min_eigenvalue", min_eig}, {"diff_from_mixed", max_diff}}, tol.ppt));
    }

  {
    bool pass = true;
    double max_diff = 0.0;
    for (const auto& b : sc.branches) {
      const double d = max_abs_diff(b.ensemble.factored_on(sc.aux_qubits).densify_parties(sc.aux_parties).m,
                                    smolin_reference());
      max_diff = std::max(max_diff, d);
      pass = pass && d <= tol.eq;
    }
    rep.claims.push_back(detail::make_claim(
        "activation.aux-form", "the standalone four-party constituent equals the reference state in every branch",
        pass, {{"max_abs_diff", max_diff}}, tol.eq));
  }

  {
    bool exact = true;
    double min_fid = std::numeric_limits<double>::infinity();
    for (const auto& b : sc.branches) {
      const RunResult run = run_distillation(b.ensemble, b.completion);
      const EndPairCheck check = end_pair_check(run, b.completion.end_left, b.completion.end_right);
      exact = exact && check.exact;
      min_fid = std::min(min_fid, check.min_fidelity);
    }
    rep.claims.push_back(detail::make_claim(
        "activation.completion",
        "finishing the remaining four measurements leaves the outer parties an exact singlet in every branch",
        exact && min_fid >= 1.0 - tol.eq, {{"min_fidelity", min_fid}}, tol.eq));
  }
  return rep;
}

inline CertificationReport certify_relay(const Tolerances& tol) {
  RelayScenario sc = make_relay();
  CertificationReport rep{"relay", {}, {}};
  for (Claim& c : pairwise_undistillability(sc.chain.ensemble, sc.intermediate_pairs, tol, "relay"))
    rep.claims.push_back(std::move(c));
  {
    const DensityMatrix rho = sc.chain.ensemble.densify_parties({"A", "E"});
    const PptCertificate cert = ppt_certificate(rho, Cut::of({0}), tol.ppt);
    rep.claims.push_back(detail::make_claim(
        "relay.ppt.ends-before", "before the run even the end pair holds no free entanglement",
        cert.is_ppt, {{"min_eigenvalue", cert.min_eigenvalue}}, tol.ppt));
  }
  {
    std::vector<std::pair<std::string, double>> ev;
    bool pass = true;
    const std::vector<std::size_t> expect = {1, 2, 2, 2, 1};
    for (std::size_t i = 0; i < sc.chain.config.node_labels.size(); ++i) {
      const auto live = sc.chain.ensemble.registry().live_qubits_of(sc.chain.config.node_labels[i]);
      ev.emplace_back("live:" + sc.chain.config.node_labels[i], static_cast<double>(live.size()));
      pass = pass && live.size() == expect[i];
    }
    rep.claims.push_back(detail::make_claim(
        "relay.ownership", "the end nodes hold one qubit each and every relay node holds two",
        pass, std::move(ev), 0.0));
  }
  const RunResult run = run_end_to_end(sc.chain);
  {
    const EndPairCheck check = end_pair_check(run, sc.spec.end_left, sc.spec.end_right);
    rep.claims.push_back(detail::make_claim(
        "relay.end-fidelity", "the three relay measurements leave the end nodes an exact singlet in every branch",
        check.exact && check.min_fidelity >= 1.0 - tol.eq,
        {{"min_fidelity", check.min_fidelity}, {"branch_classes", static_cast<double>(check.class_count)}},
        tol.eq));
  }
  rep.claims.push_back(detail::make_claim(
      "relay.resources", "the whole construction spends exactly four singlets",
      run.transcript.singlets_consumed == 4,
      {{"singlets_consumed", static_cast<double>(run.transcript.singlets_consumed)}}, 0.0));
  rep.transcript = run.transcript;
  return rep;
}

// The intact run is always certified as the baseline; removed_link == 0 adds
// every connecting removal, a nonzero id adds just that one.
inline CertificationReport certify_remark3(std::size_t removed_link, const Tolerances& tol) {
  CertificationReport rep{"remark3", {}, {}};
  std::vector<std::size_t> variants{0};
  if (removed_link == 0) {
    for (std::size_t id : remark3_connecting_links()) variants.push_back(id);
  } else {
    variants.push_back(removed_link);
  }
  bool first = true;
  for (std::size_t id : variants) {
    Remark3Scenario sc = make_remark3(id);
    const RunResult run = run_end_to_end(sc.chain);
    if (first) {
      rep.transcript = run.transcript;
      first = false;
    }
    if (id == 0) {
      const EndPairCheck check = end_pair_check(run, sc.spec.end_left, sc.spec.end_right);
      rep.claims.push_back(detail::make_claim(
          "remark3.intact", "with every link present the chain run ends in an exact singlet in every branch",
          check.exact && check.min_fidelity >= 1.0 - tol.eq,
          {{"min_fidelity", check.min_fidelity}, {"singlets_consumed",
                                                  static_cast<double>(run.transcript.singlets_consumed)}},
          tol.eq));
    } else {
      const ChainLink& l = sc.chain.config.link(id);
      const std::string label =
          sc.chain.config.node_labels[l.left_node] + sc.chain.config.node_labels[l.right_node];
      const EndMixCheck check = end_pair_mixture_check(run, sc.spec.end_left, sc.spec.end_right);
      rep.claims.push_back(detail::make_claim(
          "remark3.removed." + label,
          "removing the " + label + " singlet fully depolarizes the end pair",
          check.diff_from_mixed <= tol.eq,
          {{"max_abs_diff", check.diff_from_mixed}, {"singlet_fidelity", check.fidelity}}, tol.eq));
    }
  }
  return rep;
}

}  // namespace abechain
