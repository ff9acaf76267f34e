#pragma once

// Core value types: candidates, voters, strict preference orders, voter
// orderings, access-model scenarios, and candidate partitions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace scelicit {

using CandidateId = std::int32_t;
using VoterId = std::int32_t;

// A complete strict order over a candidate set, most-preferred first.
// Keeps both directions (position list and rank lookup) so pairwise
// comparisons are O(1). The candidate set may be any subset of ids, which
// is what restriction and block-structured elicitation rely on.
class Preference {
 public:
  Preference() = default;

  explicit Preference(std::vector<CandidateId> order) : order_(std::move(order)) {
    if (order_.empty()) throw std::invalid_argument("empty preference");
    CandidateId max_id = *std::max_element(order_.begin(), order_.end());
    CandidateId min_id = *std::min_element(order_.begin(), order_.end());
    if (min_id < 0) throw std::invalid_argument("negative candidate id");
    rank_.assign(static_cast<std::size_t>(max_id) + 1, kAbsent);
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
      CandidateId c = order_[pos];
      if (rank_[static_cast<std::size_t>(c)] != kAbsent)
        throw std::invalid_argument("duplicate candidate in preference");
      rank_[static_cast<std::size_t>(c)] = static_cast<int>(pos);
    }
  }

  static Preference identity(int m) {
    std::vector<CandidateId> ord(static_cast<std::size_t>(m));
    std::iota(ord.begin(), ord.end(), 0);
    return Preference(std::move(ord));
  }

  int size() const { return static_cast<int>(order_.size()); }

  // Candidates from most to least preferred.
  const std::vector<CandidateId>& order() const { return order_; }

  CandidateId at(int position) const { return order_.at(static_cast<std::size_t>(position)); }

  bool contains(CandidateId c) const {
    return c >= 0 && static_cast<std::size_t>(c) < rank_.size() &&
           rank_[static_cast<std::size_t>(c)] != kAbsent;
  }

  int rank_of(CandidateId c) const {
    if (!contains(c)) throw std::invalid_argument("candidate not in preference");
    return rank_[static_cast<std::size_t>(c)];
  }

  bool prefers(CandidateId x, CandidateId y) const { return rank_of(x) < rank_of(y); }

  Preference reversed() const {
    return Preference(std::vector<CandidateId>(order_.rbegin(), order_.rend()));
  }

  // Keeps only the candidates in `subset`; relative order is unchanged.
  Preference restricted(const std::vector<CandidateId>& subset) const {
    if (subset.empty()) throw std::invalid_argument("empty restriction");
    std::vector<bool> keep(rank_.size(), false);
    for (CandidateId c : subset) {
      if (!contains(c)) throw std::invalid_argument("restriction candidate not in preference");
      keep[static_cast<std::size_t>(c)] = true;
    }
    std::vector<CandidateId> ord;
    ord.reserve(subset.size());
    for (CandidateId c : order_)
      if (keep[static_cast<std::size_t>(c)]) ord.push_back(c);
    return Preference(std::move(ord));
  }

  bool operator==(const Preference& other) const { return order_ == other.order_; }
  bool operator!=(const Preference& other) const { return !(*this == other); }

 private:
  static constexpr int kAbsent = -1;
  std::vector<CandidateId> order_;
  std::vector<int> rank_;  // candidate id -> position, kAbsent if not ranked
};

inline Preference restrict(const Preference& p, const std::vector<CandidateId>& subset) {
  return p.restricted(subset);
}

// One preference per voter, all over the same candidate set. Voter ids are
// the dense indices 0..n-1.
class Profile {
 public:
  Profile() = default;

  explicit Profile(std::vector<Preference> prefs) : prefs_(std::move(prefs)) {
    if (prefs_.empty()) throw std::invalid_argument("empty profile");
    std::vector<CandidateId> base = prefs_[0].order();
    std::sort(base.begin(), base.end());
    for (const Preference& p : prefs_) {
      if (p.size() != static_cast<int>(base.size()))
        throw std::invalid_argument("profile votes rank different candidate sets");
      for (CandidateId c : base)
        if (!p.contains(c))
          throw std::invalid_argument("profile votes rank different candidate sets");
    }
    candidates_ = std::move(base);
  }

  int num_voters() const { return static_cast<int>(prefs_.size()); }
  int num_candidates() const { return static_cast<int>(candidates_.size()); }
  const std::vector<CandidateId>& candidates() const { return candidates_; }

  const Preference& operator[](VoterId v) const { return prefs_.at(static_cast<std::size_t>(v)); }
  const std::vector<Preference>& votes() const { return prefs_; }

  bool operator==(const Profile& other) const { return prefs_ == other.prefs_; }
  bool operator!=(const Profile& other) const { return !(*this == other); }

 private:
  std::vector<Preference> prefs_;
  std::vector<CandidateId> candidates_;  // sorted ascending
};

// A permutation of the voters: position -> voter, with the inverse kept
// alongside.
class VoterOrdering {
 public:
  VoterOrdering() = default;

  explicit VoterOrdering(std::vector<VoterId> perm) : perm_(std::move(perm)) {
    if (perm_.empty()) throw std::invalid_argument("empty voter ordering");
    pos_.assign(perm_.size(), -1);
    for (std::size_t k = 0; k < perm_.size(); ++k) {
      VoterId v = perm_[k];
      if (v < 0 || static_cast<std::size_t>(v) >= perm_.size() || pos_[static_cast<std::size_t>(v)] != -1)
        throw std::invalid_argument("voter ordering is not a permutation");
      pos_[static_cast<std::size_t>(v)] = static_cast<int>(k);
    }
  }

  static VoterOrdering identity(int n) {
    std::vector<VoterId> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    return VoterOrdering(std::move(perm));
  }

  int size() const { return static_cast<int>(perm_.size()); }
  VoterId at(int position) const { return perm_.at(static_cast<std::size_t>(position)); }
  int position_of(VoterId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= pos_.size())
      throw std::invalid_argument("voter not in ordering");
    return pos_[static_cast<std::size_t>(v)];
  }
  const std::vector<VoterId>& perm() const { return perm_; }

  VoterOrdering reversed() const {
    return VoterOrdering(std::vector<VoterId>(perm_.rbegin(), perm_.rend()));
  }

  bool operator==(const VoterOrdering& other) const { return perm_ == other.perm_; }
  bool operator!=(const VoterOrdering& other) const { return !(*this == other); }

 private:
  std::vector<VoterId> perm_;
  std::vector<int> pos_;
};

inline VoterOrdering reverse_ordering(const VoterOrdering& o) { return o.reversed(); }

enum class Access { RandomAccess, Sequential };

// How the elicitor may reach voters and what it knows up front. `arrival` is
// set exactly when access is Sequential; `known_order` is a single-crossing
// voter ordering when one is known in advance.
struct Scenario {
  Access access = Access::RandomAccess;
  std::optional<VoterOrdering> arrival;
  std::optional<VoterOrdering> known_order;

  static Scenario random_access() { return Scenario{}; }

  static Scenario random_access_known(VoterOrdering sc) {
    Scenario s;
    s.known_order = std::move(sc);
    return s;
  }

  static Scenario sequential(VoterOrdering arrive) {
    Scenario s;
    s.access = Access::Sequential;
    s.arrival = std::move(arrive);
    return s;
  }

  static Scenario sequential_known(VoterOrdering arrive, VoterOrdering sc) {
    Scenario s = sequential(std::move(arrive));
    s.known_order = std::move(sc);
    return s;
  }
};

// Disjoint candidate blocks covering 0..m-1.
struct CandidatePartition {
  std::vector<std::vector<CandidateId>> blocks;

  int width() const {
    std::size_t w = 0;
    for (const auto& b : blocks) w = std::max(w, b.size());
    return static_cast<int>(w);
  }

  int total() const {
    std::size_t t = 0;
    for (const auto& b : blocks) t += b.size();
    return static_cast<int>(t);
  }

  bool covers(int m) const {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (const auto& b : blocks) {
      if (b.empty()) return false;
      for (CandidateId c : b) {
        if (c < 0 || c >= m || seen[static_cast<std::size_t>(c)]) return false;
        seen[static_cast<std::size_t>(c)] = true;
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  }

  // Consecutive chunks of size w: {0..w-1}, {w..2w-1}, ...
  static CandidatePartition chunks(int m, int w) {
    if (m < 1 || w < 1 || w > m) throw std::invalid_argument("bad chunk width");
    CandidatePartition part;
    for (int lo = 0; lo < m; lo += w) {
      std::vector<CandidateId> block;
      for (int c = lo; c < std::min(lo + w, m); ++c) block.push_back(c);
      part.blocks.push_back(std::move(block));
    }
    return part;
  }
};

}  // namespace scelicit
