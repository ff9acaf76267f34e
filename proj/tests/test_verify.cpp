#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "scelicit/generate.hpp"
#include "scelicit/verify.hpp"

using namespace scelicit;

namespace {

// Independent flip counter used as the oracle for the checker itself.
bool flips_at_most_once_everywhere(const Profile& p, const VoterOrdering& o) {
  const auto& cands = p.candidates();
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      int flips = 0;
      for (int k = 1; k < o.size(); ++k)
        if (p[o.at(k)].prefers(cands[a], cands[b]) != p[o.at(k - 1)].prefers(cands[a], cands[b]))
          ++flips;
      if (flips > 1) return false;
    }
  }
  return true;
}

Profile chain3() {
  // 012 -> 102 -> 120 -> 210
  return Profile({Preference({0, 1, 2}), Preference({1, 0, 2}), Preference({1, 2, 0}),
                  Preference({2, 1, 0})});
}

std::vector<VoterOrdering> all_orderings(int n) {
  std::vector<VoterId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<VoterOrdering> out;
  do {
    out.push_back(VoterOrdering(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

TEST_CASE("trivial electorates are single crossing") {
  REQUIRE(is_single_crossing(Profile({Preference({2, 0, 1})}), VoterOrdering::identity(1)));
  Profile two_equal({Preference({1, 0}), Preference({1, 0})});
  REQUIRE(is_single_crossing(two_equal, VoterOrdering::identity(2)));
}

TEST_CASE("the chain order certifies and a transposed order does not") {
  Profile p = chain3();
  REQUIRE(is_single_crossing(p, VoterOrdering::identity(4)));
  REQUIRE_FALSE(is_single_crossing(p, VoterOrdering({1, 2, 0, 3})));
}

TEST_CASE("checker agrees with a direct flip count") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    int n = 1 + static_cast<int>(rng() % 7);
    std::vector<Preference> votes;
    for (int v = 0; v < n; ++v) {
      std::vector<CandidateId> ord(static_cast<std::size_t>(m));
      std::iota(ord.begin(), ord.end(), 0);
      std::shuffle(ord.begin(), ord.end(), rng);
      votes.push_back(Preference(std::move(ord)));
    }
    Profile p(std::move(votes));
    std::vector<VoterId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    VoterOrdering o(perm);
    REQUIRE(is_single_crossing(p, o) == flips_at_most_once_everywhere(p, o));
  }
}

TEST_CASE("a reversed ordering certifies the same profiles") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    int n = 2 + static_cast<int>(rng() % 6);
    std::vector<Preference> votes;
    for (int v = 0; v < n; ++v) {
      std::vector<CandidateId> ord(static_cast<std::size_t>(m));
      std::iota(ord.begin(), ord.end(), 0);
      std::shuffle(ord.begin(), ord.end(), rng);
      votes.push_back(Preference(std::move(ord)));
    }
    Profile p(std::move(votes));
    std::vector<VoterId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    VoterOrdering o(perm);
    REQUIRE(is_single_crossing(p, o) == is_single_crossing(p, reverse_ordering(o)));
  }
}

TEST_CASE("crossing table records one flip per pair on the chain") {
  CrossingTable t = crossing_table(chain3(), VoterOrdering::identity(4));
  REQUIRE(t.single_crossing());
  REQUIRE(t.all().size() == 3);
  REQUIRE(t.flips({0, 1}) == std::vector<int>{1});
  REQUIRE(t.flips({0, 2}) == std::vector<int>{2});
  REQUIRE(t.flips({1, 2}) == std::vector<int>{3});
  REQUIRE_THROWS_AS(t.flips({0, 5}), std::invalid_argument);
}

TEST_CASE("brute force recovers an order for generated instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto [p, order] = gen_single_crossing(4, 7, seed);
    (void)order;
    auto found = find_sc_order_bruteforce(p);
    REQUIRE(found.has_value());
    REQUIRE(is_single_crossing(p, *found));
  }
}

TEST_CASE("a Condorcet cycle admits no certifying order") {
  Profile p({Preference({0, 1, 2}), Preference({1, 2, 0}), Preference({2, 0, 1})});
  for (const VoterOrdering& o : all_orderings(3)) REQUIRE_FALSE(is_single_crossing(p, o));
  REQUIRE_FALSE(find_sc_order_bruteforce(p).has_value());
}

TEST_CASE("brute force caps the electorate size") {
  std::vector<Preference> votes(11, Preference({0, 1}));
  REQUIRE_THROWS_WITH(find_sc_order_bruteforce(Profile(std::move(votes))), "brute force limit");
  REQUIRE(find_sc_order_bruteforce(Profile({Preference({0, 1})})) == VoterOrdering::identity(1));
}

TEST_CASE("distinct vote counting") {
  REQUIRE(distinct_count(Profile({Preference({0, 1}), Preference({0, 1})})) == 1);
  REQUIRE(distinct_count(chain3()) == 4);
  REQUIRE(distinct_count(gen_maximal_chain(4)) == 7);
  Profile mixed({Preference({0, 1, 2}), Preference({2, 1, 0}), Preference({0, 1, 2})});
  REQUIRE(distinct_count(mixed) == 2);
}

TEST_CASE("splitting pair balances the votes") {
  CandidatePair p = find_splitting_pair({Preference({0, 1}), Preference({1, 0})});
  REQUIRE(p == CandidatePair{0, 1});

  // Single vote: the floor(1/2) = 0 threshold admits the first pair scanned.
  REQUIRE(find_splitting_pair({Preference({2, 1, 0})}) == CandidatePair{0, 1});

  std::vector<Preference> chain = chain3().votes();
  CandidatePair q = find_splitting_pair(chain);
  std::size_t first_side = 0;
  for (const Preference& v : chain)
    if (v.prefers(q.first, q.second)) ++first_side;
  REQUIRE(first_side == 2);

  REQUIRE_THROWS_WITH(find_splitting_pair({Preference({0, 1, 2}), Preference({0, 1, 2})}),
                      "not single crossing / not distinct");
  REQUIRE_THROWS_AS(find_splitting_pair({}), std::invalid_argument);
}

TEST_CASE("splitting pairs exist for distinct single-crossing votes") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    int m = 3 + static_cast<int>(rng() % 4);
    int max_votes = m * (m - 1) / 2 + 1;
    int k = 2 + static_cast<int>(rng() % std::min(10, max_votes - 1));
    auto [p, order] = gen_single_crossing(m, k, trial * 131u + 7u, /*distinct=*/true);
    (void)order;
    std::vector<Preference> votes = p.votes();
    CandidatePair pair = find_splitting_pair(votes);
    std::size_t first_side = 0;
    for (const Preference& v : votes)
      if (v.prefers(pair.first, pair.second)) ++first_side;
    REQUIRE(first_side >= votes.size() / 2);
    REQUIRE(votes.size() - first_side >= votes.size() / 2);
  }
}
