#include <catch2/catch_amalgamated.hpp>

#include "scelicit/adversary.hpp"

using namespace scelicit;

namespace {

bool intra(CandidateId lo, CandidateId hi) { return hi == lo + 1 && lo % 2 == 0; }

std::size_t intra_queries(const QueryLedger& log) {
  std::size_t c = 0;
  for (const auto& e : log.entries())
    if (intra(e.lo, e.hi)) ++c;
  return c;
}

Profile all_identity(int m, int n) {
  return Profile(std::vector<Preference>(static_cast<std::size_t>(n), Preference::identity(m)));
}

}  // namespace

TEST_CASE("cross-block questions always favor the lower id") {
  auto adv = adv_random_known(5, 6);
  REQUIRE(adv->prefers(0, 2, 4));
  REQUIRE_FALSE(adv->prefers(1, 4, 2));
  REQUIRE(adv->prefers(2, 3, 4));  // unpaired last candidate
  REQUIRE(adv->prefers(3, 1, 2));
  REQUIRE(adv->prefers(4, 0, 3));
}

TEST_CASE("proximity answers pin the nearer side and break ties low") {
  auto adv = adv_random_known(2, 9);
  OracleSession s(adv, Scenario::random_access_known(VoterOrdering::identity(9)));
  auto state = [&] { return adv->block_states()[0]; };

  REQUIRE(s.query(0, 0, 1));
  REQUIRE(state().low == 0);
  REQUIRE(state().high == 8);
  REQUIRE_FALSE(s.query(8, 0, 1));
  REQUIRE(state().high == 8);
  REQUIRE(s.query(4, 0, 1));  // tie, joins the low side
  REQUIRE(state().low == 4);
  REQUIRE(s.query(6, 0, 1));
  REQUIRE(state().low == 6);
  REQUIRE(s.query(7, 0, 1));
  REQUIRE(state().low == 7);
  REQUIRE(state().high == 8);

  AdversaryVerdict vd = verdict(s, all_identity(2, 9));
  REQUIRE_FALSE(vd.certified);  // closed interval, but the output ignores the crossing
}

TEST_CASE("an interval left open refutes any output") {
  auto adv = adv_random_known(2, 64);
  OracleSession s(adv, Scenario::random_access_known(VoterOrdering::identity(64)));
  for (VoterId v : {31, 47, 55}) REQUIRE(s.query(v, 0, 1));
  REQUIRE(adv->block_states()[0].high - adv->block_states()[0].low == 8);

  AdversaryVerdict vd = verdict(s, all_identity(2, 64));
  REQUIRE_FALSE(vd.certified);
  REQUIRE(vd.refutation.has_value());
  REQUIRE(vd.refutation->voter == 56);
  REQUIRE(vd.refutation->pair == CandidatePair{0, 1});
  REQUIRE(witness_validates(*vd.refutation, s.ledger(), all_identity(2, 64)));
}

TEST_CASE("binary-search elicitation closes every interval and is certified") {
  for (int m : {4, 6}) {
    for (int n : {8, 16}) {
      auto adv = adv_random_known(m, n);
      VoterOrdering order = VoterOrdering::identity(n);
      OracleSession s(adv, Scenario::random_access_known(order));
      ElicitResult res = elicit_known_random(s, order);
      AdversaryVerdict vd = verdict(s, res.profile);
      REQUIRE(vd.certified);
      std::size_t floor_per_block = ceil_log2(static_cast<std::size_t>(n)) - 2;
      REQUIRE(intra_queries(s.ledger()) >=
              static_cast<std::size_t>(m / 2) * floor_per_block);
    }
  }
}

TEST_CASE("the release-time adversary certifies in-order insertion") {
  auto adv = adv_sequential_sc(6, 12);
  OracleSession s(adv, Scenario::sequential(VoterOrdering::identity(12)));
  ElicitResult res = elicit_sequential_sc(s);
  REQUIRE_FALSE(adv->switched());
  AdversaryVerdict vd = verdict(s, res.profile);
  REQUIRE(vd.certified);
  REQUIRE(intra_queries(s.ledger()) >= 6 * 12 / 2);
}

TEST_CASE("releasing a voter with an unasked pair triggers the switch") {
  auto adv = adv_sequential_sc(4, 3);
  OracleSession s(adv, Scenario::sequential(VoterOrdering::identity(3)));
  REQUIRE(s.query(0, 0, 1));
  s.release();
  REQUIRE(adv->switched());
  REQUIRE(adv->skip_voter() == 0);

  AdversaryVerdict vd = verdict(s, all_identity(4, 3));
  REQUIRE_FALSE(vd.certified);
  REQUIRE(vd.refutation->voter == 0);
  REQUIRE(vd.refutation->pair == CandidatePair{2, 3});
  REQUIRE(witness_validates(*vd.refutation, s.ledger(), all_identity(4, 3)));
}

TEST_CASE("copying the previous voter is refuted at release time") {
  auto adv = adv_sequential_sc(6, 10);
  OracleSession s(adv, Scenario::sequential(VoterOrdering::identity(10)));
  ElicitResult res = cheat_copy_previous(s, 7);
  REQUIRE(adv->switched());
  AdversaryVerdict vd = verdict(s, res.profile);
  REQUIRE_FALSE(vd.certified);
  REQUIRE(vd.refutation.has_value());
  REQUIRE(witness_validates(*vd.refutation, s.ledger(), res.profile));
  REQUIRE(vd.refutation->voter == adv->skip_voter());
}

TEST_CASE("the unknown-order adversary certifies the dictionary procedure") {
  struct Case {
    int m, n;
  };
  for (Case c : {Case{4, 10}, Case{2, 5}}) {
    auto adv = adv_random_unknown(c.m, c.n);
    OracleSession s(adv, Scenario::random_access());
    ElicitResult res = elicit_unknown(s);
    AdversaryVerdict vd = verdict(s, res.profile);
    REQUIRE(vd.certified);
    REQUIRE(intra_queries(s.ledger()) >=
            static_cast<std::size_t>(c.m / 2) * static_cast<std::size_t>(c.n) / 2);
  }
}

TEST_CASE("the unknown-order adversary reorders a skipped voter to the end") {
  auto adv = adv_random_unknown(6, 8);
  OracleSession s(adv, Scenario::random_access());
  ElicitResult res = cheat_copy_previous(s, 3);
  AdversaryVerdict vd = verdict(s, res.profile);
  REQUIRE_FALSE(vd.certified);
  REQUIRE(vd.refutation.has_value());
  REQUIRE(witness_validates(*vd.refutation, s.ledger(), res.profile));
  REQUIRE(vd.refutation->witness_order.at(7) == vd.refutation->voter);
}

TEST_CASE("verdicts require an adversarial source") {
  Profile truth = all_identity(3, 3);
  OracleSession s = OracleSession::with_ground_truth(truth, Scenario::random_access());
  REQUIRE_THROWS_WITH(verdict(s, truth), "session source is not an adversary");
}

TEST_CASE("a refutation must actually disagree with the output") {
  auto adv = adv_random_unknown(4, 5);
  OracleSession s(adv, Scenario::random_access());
  ElicitResult res = cheat_copy_previous(s, 1);
  AdversaryVerdict vd = adv->verdict(res.profile, s.ledger());
  REQUIRE_FALSE(vd.certified);
  REQUIRE(witness_validates(*vd.refutation, s.ledger(), res.profile));
  REQUIRE_FALSE(witness_validates(*vd.refutation, s.ledger(), vd.refutation->witness));
}

TEST_CASE("every adversary refutes the copying strategy") {
  for (int m : {2, 4, 6}) {
    for (int n : {4, 9, 16}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        {
          auto adv = adv_random_known(m, n);
          OracleSession s(adv, Scenario::random_access_known(VoterOrdering::identity(n)));
          ElicitResult res = cheat_copy_previous(s, seed);
          REQUIRE_FALSE(verdict(s, res.profile).certified);
        }
        {
          auto adv = adv_sequential_sc(m, n);
          OracleSession s(adv, Scenario::sequential(VoterOrdering::identity(n)));
          ElicitResult res = cheat_copy_previous(s, seed);
          REQUIRE_FALSE(verdict(s, res.profile).certified);
        }
        {
          auto adv = adv_random_unknown(m, n);
          OracleSession s(adv, Scenario::random_access());
          ElicitResult res = cheat_copy_previous(s, seed);
          REQUIRE_FALSE(verdict(s, res.profile).certified);
        }
      }
    }
  }
}

TEST_CASE("adversary constructors validate their electorate") {
  REQUIRE_THROWS_WITH(adv_random_known(4, 1), "need at least two voters");
  REQUIRE_THROWS_AS(adv_random_known(0, 5), std::invalid_argument);
}
