#pragma once

// Seeded constructive generators: single-crossing profiles (optionally with
// all-distinct votes), the deterministic maximal swap chain, and
// block-structured instances for width-restricted elicitation. Every
// generator returns the certificate alongside the profile and re-checks its
// own output.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "domain.hpp"
#include "verify.hpp"

namespace scelicit {

// splitmix64; used for deriving independent sub-seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

// A start order plus a monotone schedule of adjacent transpositions, each
// unordered pair swapped at most once. Materializing yields votes in
// certificate order: vote k is the start order with every swap whose
// `before_voter` is <= k applied.
struct CrossingSchedule {
  struct Swap {
    int before_voter;  // in [1, n-1], nondecreasing across the schedule
    CandidateId upper, lower;  // upper sits directly above lower and they swap
  };

  Preference start;
  std::vector<Swap> swaps;

  Profile materialize(int n) const {
    if (n < 1) throw std::invalid_argument("need at least one voter");
    std::vector<CandidateId> cur = start.order();
    std::vector<Preference> votes;
    votes.reserve(static_cast<std::size_t>(n));
    votes.push_back(start);
    std::size_t si = 0;
    for (int k = 1; k < n; ++k) {
      while (si < swaps.size() && swaps[si].before_voter <= k) {
        const Swap& s = swaps[si];
        bool applied = false;
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
          if (cur[j] == s.upper && cur[j + 1] == s.lower) {
            std::swap(cur[j], cur[j + 1]);
            applied = true;
            break;
          }
        }
        if (!applied) throw std::logic_error("schedule swap is not adjacent");
        ++si;
      }
      votes.push_back(Preference(cur));
    }
    if (si != swaps.size()) throw std::logic_error("schedule extends past the last voter");
    return Profile(std::move(votes));
  }
};

namespace detail {

// Full swap chain from a start order to its reverse; every unordered pair
// swaps exactly once, so the chain has C(m,2)+1 orders and consecutive
// orders differ by one adjacent transposition. `pick` selects among the
// currently allowed swap positions.
template <typename Pick>
std::vector<std::vector<CandidateId>> swap_chain(std::vector<CandidateId> start, Pick pick) {
  std::size_t m = start.size();
  std::vector<int> start_rank(m);
  for (std::size_t pos = 0; pos < m; ++pos)
    start_rank[static_cast<std::size_t>(start[pos])] = static_cast<int>(pos);
  std::vector<std::vector<CandidateId>> chain{start};
  std::vector<CandidateId> cur = std::move(start);
  while (true) {
    std::vector<std::size_t> allowed;
    for (std::size_t j = 0; j + 1 < m; ++j)
      if (start_rank[static_cast<std::size_t>(cur[j])] <
          start_rank[static_cast<std::size_t>(cur[j + 1])])
        allowed.push_back(j);
    if (allowed.empty()) break;
    std::size_t j = allowed[pick(allowed.size())];
    std::swap(cur[j], cur[j + 1]);
    chain.push_back(cur);
  }
  return chain;
}

}  // namespace detail

// Seeded single-crossing profile: votes are sampled from a random maximal
// swap chain and scattered over the voter ids, so the certificate ordering is
// generally not the identity. With `distinct` set, the n votes are pairwise
// distinct, which caps n at C(m,2)+1.
inline std::pair<Profile, VoterOrdering> gen_single_crossing(int m, int n, std::uint64_t seed,
                                                             bool distinct = false) {
  if (m < 1 || n < 1) throw std::invalid_argument("need at least one candidate and voter");
  std::size_t chain_len = static_cast<std::size_t>(m) * (m - 1) / 2 + 1;
  if (distinct && static_cast<std::size_t>(n) > chain_len)
    throw std::invalid_argument("too many distinct votes");
  std::mt19937_64 rng(mix64(seed, 0x5c3bd7a1u));

  std::vector<CandidateId> start(static_cast<std::size_t>(m));
  std::iota(start.begin(), start.end(), 0);
  std::shuffle(start.begin(), start.end(), rng);
  auto chain = detail::swap_chain(start, [&rng](std::size_t k) {
    return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
  });

  std::vector<std::size_t> idx;
  if (distinct) {
    std::vector<std::size_t> all(chain.size());
    std::iota(all.begin(), all.end(), 0u);
    std::shuffle(all.begin(), all.end(), rng);
    idx.assign(all.begin(), all.begin() + n);
  } else {
    std::uniform_int_distribution<std::size_t> d(0, chain.size() - 1);
    for (int k = 0; k < n; ++k) idx.push_back(d(rng));
  }
  std::sort(idx.begin(), idx.end());

  CrossingSchedule sched;
  sched.start = Preference(chain[idx[0]]);
  for (int k = 1; k < n; ++k) {
    for (std::size_t step = idx[static_cast<std::size_t>(k) - 1] + 1;
         step <= idx[static_cast<std::size_t>(k)]; ++step) {
      const auto& before = chain[step - 1];
      const auto& after = chain[step];
      for (std::size_t j = 0; j + 1 < before.size(); ++j) {
        if (before[j] != after[j]) {
          sched.swaps.push_back(CrossingSchedule::Swap{k, before[j], before[j + 1]});
          break;
        }
      }
    }
  }
  Profile in_order = sched.materialize(n);

  std::vector<VoterId> rho(static_cast<std::size_t>(n));
  std::iota(rho.begin(), rho.end(), 0);
  std::shuffle(rho.begin(), rho.end(), rng);
  std::vector<Preference> prefs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) prefs[static_cast<std::size_t>(rho[static_cast<std::size_t>(k)])] = in_order[k];
  Profile profile(std::move(prefs));
  VoterOrdering order(std::move(rho));

  if (!is_single_crossing(profile, order))
    throw std::logic_error("generator postcondition failed");
  return {std::move(profile), std::move(order)};
}

// Deterministic maximal chain from the identity order to its reverse:
// C(m,2)+1 pairwise-distinct votes, single crossing in vote order, and
// consecutive votes differ by exactly one adjacent transposition.
inline Profile gen_maximal_chain(int m) {
  if (m < 1) throw std::invalid_argument("need at least one candidate");
  std::vector<CandidateId> start(static_cast<std::size_t>(m));
  std::iota(start.begin(), start.end(), 0);
  auto chain = detail::swap_chain(start, [](std::size_t) { return std::size_t{0}; });
  std::vector<Preference> votes;
  votes.reserve(chain.size());
  for (auto& v : chain) votes.push_back(Preference(std::move(v)));
  return Profile(std::move(votes));
}

struct WidthInstance {
  Profile profile;
  VoterOrdering order;
  CandidatePartition partition;
};

// Block-structured instance: candidates fall into ceil(m/w) consecutive
// blocks of size at most w; each block keeps one fixed internal order across
// all voters and appears contiguously in every vote, while the blocks
// themselves move single-crossingly.
inline WidthInstance gen_width_w(int m, int n, int w, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("need at least one candidate and voter");
  if (w < 1 || w > m) throw std::invalid_argument("width out of range");
  CandidatePartition part = CandidatePartition::chunks(m, w);
  int num_blocks = static_cast<int>(part.blocks.size());

  auto [block_profile, order] = gen_single_crossing(num_blocks, n, mix64(seed, 0x817bee5u));

  std::mt19937_64 rng(mix64(seed, 0xb10c0de5u));
  std::vector<std::vector<CandidateId>> internal(part.blocks.begin(), part.blocks.end());
  for (auto& members : internal) std::shuffle(members.begin(), members.end(), rng);

  std::vector<Preference> prefs;
  prefs.reserve(static_cast<std::size_t>(n));
  for (VoterId v = 0; v < n; ++v) {
    std::vector<CandidateId> full;
    full.reserve(static_cast<std::size_t>(m));
    for (CandidateId sym : block_profile[v].order()) {
      const auto& members = internal[static_cast<std::size_t>(sym)];
      full.insert(full.end(), members.begin(), members.end());
    }
    prefs.push_back(Preference(std::move(full)));
  }
  Profile profile(std::move(prefs));
  if (!is_single_crossing(profile, order))
    throw std::logic_error("generator postcondition failed");
  return WidthInstance{std::move(profile), std::move(order), std::move(part)};
}

}  // namespace scelicit
