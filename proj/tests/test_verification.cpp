#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "abechain/scenarios.hpp"
#include "abechain/verification.hpp"

using namespace abechain;

namespace {

const Claim& claim_by_id(const CertificationReport& rep, const std::string& id) {
  for (const Claim& c : rep.claims)
    if (c.id == id) return c;
  throw std::runtime_error("missing claim " + id);
}

bool has_claim(const CertificationReport& rep, const std::string& id) {
  return std::any_of(rep.claims.begin(), rep.claims.end(), [&](const Claim& c) { return c.id == id; });
}

}  // namespace

TEST_CASE("the four-party battery passes on the distributed preparation") {
  const CertificationReport rep = certify_smolin({});
  CHECK(rep.scenario == "smolin");
  CHECK(rep.all_pass());
  REQUIRE(rep.claims.size() == 5);
  CHECK(has_claim(rep, "smolin.reference-form"));
  CHECK(has_claim(rep, "smolin.party-symmetry"));
  CHECK(has_claim(rep, "smolin.two-two-ppt"));
  CHECK(has_claim(rep, "smolin.one-three-npt"));
  CHECK(has_claim(rep, "smolin.pair-distill"));
  CHECK(rep.transcript.singlets_consumed == 2);
}

TEST_CASE("the battery rejects a pair of singlets posing as the state") {
  // psi- on (A,B) times psi- on (C,D): distillable across the 12|34 cut,
  // so the separability claims must fail.
  PartyRegistry reg = PartyRegistry::create({"A", "B", "C", "D"}, {"A", "B", "C", "D"});
  const Ensemble fake = Ensemble::of_state(
      StabilizerState::tensor(prepare_bell(BellIndex::psi_minus), prepare_bell(BellIndex::psi_minus)), reg);
  const auto claims = smolin_battery(fake, {});
  CertificationReport rep{"battery", claims, {}};
  CHECK_FALSE(rep.all_pass());
  CHECK_FALSE(claim_by_id(rep, "smolin.reference-form").pass);
  CHECK_FALSE(claim_by_id(rep, "smolin.two-two-ppt").pass);
  CHECK_FALSE(claim_by_id(rep, "smolin.party-symmetry").pass);
}

TEST_CASE("end pair checks distinguish exact singlets from near misses") {
  Chain chain = build_chain(3);
  const RunResult run = run_end_to_end(chain);
  const auto good = end_pair_check(run, 0, 5);
  CHECK(good.exact);
  CHECK(good.class_count == run.classes.size());
  CHECK(good.weighted_fidelity > 1 - 1e-12);
  // Against the wrong target the exactness flag must drop.
  const auto wrong = end_pair_check(run, 0, 5, BellIndex::phi_plus);
  CHECK_FALSE(wrong.exact);
  CHECK(wrong.min_fidelity < 1e-12);
}

TEST_CASE("product structure certification is ensemble-level, not member-level") {
  // Classically correlated doubled pairs: each member factors, the mixture
  // does not.
  PartyRegistry reg = PartyRegistry::create({"A", "B"}, {"A", "A", "B", "B"});
  std::vector<std::pair<Dyadic, Ensemble>> parts;
  parts.emplace_back(Dyadic::pow2(1),
                     Ensemble::of_state(StabilizerState::tensor(prepare_bell(BellIndex::phi_plus),
                                                                prepare_bell(BellIndex::phi_plus)),
                                        reg));
  parts.emplace_back(Dyadic::pow2(1),
                     Ensemble::of_state(StabilizerState::tensor(prepare_bell(BellIndex::psi_minus),
                                                                prepare_bell(BellIndex::psi_minus)),
                                        reg));
  const Ensemble correlated = Ensemble::mix(parts);
  CHECK_FALSE(product_structure_matches(correlated, {{0, 1}, {2, 3}}));

  // A genuine product passes.
  const Ensemble prod = Ensemble::of_state(
      StabilizerState::tensor(prepare_bell(BellIndex::phi_plus), prepare_bell(BellIndex::psi_minus)), reg);
  CHECK(product_structure_matches(prod, {{0, 1}, {2, 3}}));
  CHECK_THROWS_AS(product_structure_matches(prod, {{0, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(product_structure_matches(prod, {{0, 1}}), std::invalid_argument);
}

TEST_CASE("chain certification covers fidelity, weights, resources and orders") {
  ChainRunOptions opt;
  opt.length = 4;
  opt.substitutions = {{1, 3}};
  opt.orders = {{1, 2, 3}, {3, 2, 1}, {2, 1, 3}};
  const CertificationReport rep = certify_chain(opt, {});
  CHECK(rep.scenario == "chain");
  CHECK(rep.all_pass());
  CHECK(has_claim(rep, "chain.end-fidelity"));
  CHECK(has_claim(rep, "chain.weights"));
  CHECK(has_claim(rep, "chain.resources"));
  CHECK(has_claim(rep, "chain.order-independence"));
}

TEST_CASE("chain certification in sampled mode follows one history") {
  ChainRunOptions opt;
  opt.length = 5;
  opt.substitutions = {{2, 5}};
  opt.sampled = true;
  opt.seed = 99;
  const CertificationReport rep = certify_chain(opt, {});
  CHECK(rep.all_pass());
}

TEST_CASE("chain certification flags depolarized ends when a link is removed") {
  ChainRunOptions opt;
  opt.length = 3;
  opt.removed_links = {2};
  const CertificationReport rep = certify_chain(opt, {});
  CHECK(rep.all_pass());
  CHECK(has_claim(rep, "chain.end-depolarized"));
  CHECK_FALSE(has_claim(rep, "chain.end-fidelity"));
}

TEST_CASE("an intact run must not read as depolarized") {
  // Guard against a vacuous depolarization check: with every link present the
  // end marginal is far from maximally mixed.
  Chain chain = build_chain(3);
  const RunResult run = run_end_to_end(chain);
  const auto mix = end_pair_mixture_check(run, 0, 5);
  CHECK(mix.diff_from_mixed > 0.2);
  CHECK(mix.fidelity > 1 - 1e-12);
}

TEST_CASE("scenario certifiers pass end to end") {
  const Tolerances tol{};
  CHECK(certify_fig2(tol).all_pass());
  CHECK(certify_fig3(tol).all_pass());
  CHECK(certify_activation(tol).all_pass());
  CHECK(certify_relay(tol).all_pass());
}

TEST_CASE("remark3 certification runs the intact chain and every break") {
  const CertificationReport rep = certify_remark3(0, {});
  CHECK(rep.all_pass());
  CHECK(has_claim(rep, "remark3.intact"));
  CHECK(has_claim(rep, "remark3.removed.BF"));
  CHECK(has_claim(rep, "remark3.removed.GC"));
  CHECK(has_claim(rep, "remark3.removed.DH"));

  const CertificationReport one = certify_remark3(4, {});
  CHECK(one.all_pass());
  CHECK(has_claim(one, "remark3.intact"));
  CHECK(has_claim(one, "remark3.removed.GC"));
  CHECK_FALSE(has_claim(one, "remark3.removed.BF"));
}

TEST_CASE("fig2 certification checks constituents and the exact product form") {
  const CertificationReport rep = certify_fig2({});
  CHECK(has_claim(rep, "fig2.constituents"));
  CHECK(has_claim(rep, "fig2.product-form"));
  CHECK(has_claim(rep, "fig2.end-fidelity"));
  const Claim& res = claim_by_id(rep, "fig2.resources");
  REQUIRE_FALSE(res.evidence.empty());
  CHECK(res.evidence.front().second == 7.0);
}

TEST_CASE("relay certification certifies every intermediate pair") {
  const CertificationReport rep = certify_relay({});
  std::size_t ppt_claims = 0;
  for (const Claim& c : rep.claims)
    if (c.id.rfind("relay.ppt.", 0) == 0) ++ppt_claims;
  CHECK(ppt_claims == 10);  // nine intermediate pairs plus the ends before the run
}
