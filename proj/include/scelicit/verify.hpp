#pragma once

// Ground-truth checkers: single-crossing verification against a given voter
// ordering, brute-force search for such an ordering, distinct-vote counting,
// and the balanced splitting-pair scan used by the unknown-order search.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "domain.hpp"
#include "oracle.hpp"

namespace scelicit {

// Per candidate pair, the positions k (1-based into the ordering) where the
// orientation between positions k-1 and k flips. Single crossing iff every
// pair flips at most once.
class CrossingTable {
 public:
  CrossingTable(const Profile& p, const VoterOrdering& o) {
    if (o.size() != p.num_voters())
      throw std::invalid_argument("ordering does not cover the voters");
    const auto& cands = p.candidates();
    for (std::size_t a = 0; a < cands.size(); ++a) {
      for (std::size_t b = a + 1; b < cands.size(); ++b) {
        CandidatePair pair{cands[a], cands[b]};
        std::vector<int>& flips = flips_[pair];
        bool prev = p[o.at(0)].prefers(pair.first, pair.second);
        for (int k = 1; k < o.size(); ++k) {
          bool cur = p[o.at(k)].prefers(pair.first, pair.second);
          if (cur != prev) flips.push_back(k);
          prev = cur;
        }
      }
    }
  }

  bool single_crossing() const {
    for (const auto& [pair, flips] : flips_)
      if (flips.size() > 1) return false;
    return true;
  }

  const std::vector<int>& flips(CandidatePair pair) const {
    auto it = flips_.find(ordered_pair(pair.first, pair.second));
    if (it == flips_.end()) throw std::invalid_argument("pair not in table");
    return it->second;
  }

  const std::map<CandidatePair, std::vector<int>>& all() const { return flips_; }

 private:
  std::map<CandidatePair, std::vector<int>> flips_;
};

inline CrossingTable crossing_table(const Profile& p, const VoterOrdering& o) {
  return CrossingTable(p, o);
}

inline bool is_single_crossing(const Profile& p, const VoterOrdering& o) {
  return CrossingTable(p, o).single_crossing();
}

namespace detail {

// Backtracking over voter sequences; a pair may flip at most once, so a
// prefix dies as soon as any pair flips twice.
class ScOrderSearch {
 public:
  explicit ScOrderSearch(const Profile& p) : p_(p) {
    const auto& cands = p.candidates();
    for (std::size_t a = 0; a < cands.size(); ++a)
      for (std::size_t b = a + 1; b < cands.size(); ++b)
        pairs_.push_back({cands[a], cands[b]});
    used_.assign(static_cast<std::size_t>(p.num_voters()), false);
  }

  std::optional<VoterOrdering> run() {
    if (p_.num_voters() == 1) return VoterOrdering::identity(1);
    if (extend()) return VoterOrdering(order_);
    return std::nullopt;
  }

 private:
  bool extend() {
    if (order_.size() == static_cast<std::size_t>(p_.num_voters())) return true;
    for (VoterId v = 0; v < p_.num_voters(); ++v) {
      if (used_[static_cast<std::size_t>(v)]) continue;
      if (!order_.empty() && !compatible(v)) continue;
      std::vector<bool> flipped_before = flipped_;
      push(v);
      if (extend()) return true;
      pop(v, flipped_before);
    }
    return false;
  }

  bool compatible(VoterId v) const {
    VoterId prev = order_.back();
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      bool a = p_[prev].prefers(pairs_[i].first, pairs_[i].second);
      bool b = p_[v].prefers(pairs_[i].first, pairs_[i].second);
      if (a != b && flipped_[i]) return false;
    }
    return true;
  }

  void push(VoterId v) {
    if (!order_.empty()) {
      VoterId prev = order_.back();
      for (std::size_t i = 0; i < pairs_.size(); ++i) {
        bool a = p_[prev].prefers(pairs_[i].first, pairs_[i].second);
        bool b = p_[v].prefers(pairs_[i].first, pairs_[i].second);
        if (a != b) flipped_[i] = true;
      }
    } else {
      flipped_.assign(pairs_.size(), false);
    }
    used_[static_cast<std::size_t>(v)] = true;
    order_.push_back(v);
  }

  void pop(VoterId v, std::vector<bool>& flipped_before) {
    used_[static_cast<std::size_t>(v)] = false;
    order_.pop_back();
    flipped_ = flipped_before;
  }

  const Profile& p_;
  std::vector<CandidatePair> pairs_;
  std::vector<VoterId> order_;
  std::vector<bool> used_;
  std::vector<bool> flipped_;
};

}  // namespace detail

// Exhaustive search for a certifying voter ordering. Exponential; refuses
// instances with more than 10 voters.
inline std::optional<VoterOrdering> find_sc_order_bruteforce(const Profile& p) {
  if (p.num_voters() > 10) throw std::invalid_argument("brute force limit");
  return detail::ScOrderSearch(p).run();
}

inline int distinct_count(const Profile& p) {
  std::vector<std::vector<CandidateId>> seen;
  for (const Preference& pref : p.votes()) {
    bool found = false;
    for (const auto& s : seen)
      if (s == pref.order()) {
        found = true;
        break;
      }
    if (!found) seen.push_back(pref.order());
  }
  return static_cast<int>(seen.size());
}

// First pair (in ascending candidate order) on which at least floor(k/2) of
// the k votes fall on each side. Exists whenever the votes are distinct
// restrictions of a single-crossing profile.
inline CandidatePair find_splitting_pair(const std::vector<Preference>& votes) {
  if (votes.empty()) throw std::invalid_argument("no votes");
  std::size_t k = votes.size();
  std::vector<CandidateId> cands = votes[0].order();
  std::sort(cands.begin(), cands.end());
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      std::size_t first_side = 0;
      for (const Preference& v : votes)
        if (v.prefers(cands[a], cands[b])) ++first_side;
      if (first_side >= k / 2 && k - first_side >= k / 2) return {cands[a], cands[b]};
    }
  }
  throw std::logic_error("not single crossing / not distinct");
}

}  // namespace scelicit
