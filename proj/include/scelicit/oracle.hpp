#pragma once

// Comparison-query plumbing: answer sources, the memoizing session that
// enforces the access model, and exact query accounting. The query count of
// a run is the number of distinct (voter, unordered candidate pair) tuples
// that reached the source; repeats are served from the memo and are free.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace scelicit {

using CandidatePair = std::pair<CandidateId, CandidateId>;

inline CandidatePair ordered_pair(CandidateId x, CandidateId y) {
  return {std::min(x, y), std::max(x, y)};
}

enum class QueryClass { Good, Bad };

// Good iff the reference order and the voter's true order agree on the pair.
inline QueryClass classify_query(const Preference& reference, const Preference& truth,
                                 CandidateId x, CandidateId y) {
  if (x == y) throw std::invalid_argument("self-comparison");
  return reference.prefers(x, y) == truth.prefers(x, y) ? QueryClass::Good : QueryClass::Bad;
}

// Insertion-ordered log of every distinct query answered, with O(1) lookup.
class QueryLedger {
 public:
  struct Entry {
    VoterId voter;
    CandidateId lo, hi;  // lo < hi
    bool lo_preferred;
  };

  bool contains(VoterId v, CandidateId x, CandidateId y) const {
    return index_.count(key(v, ordered_pair(x, y))) != 0;
  }

  // Memoized answer to "does v prefer x over y", if this query was made.
  std::optional<bool> lookup(VoterId v, CandidateId x, CandidateId y) const {
    auto [lo, hi] = ordered_pair(x, y);
    auto it = index_.find(key(v, {lo, hi}));
    if (it == index_.end()) return std::nullopt;
    bool lo_pref = entries_[it->second].lo_preferred;
    return x == lo ? lo_pref : !lo_pref;
  }

  void record(VoterId v, CandidateId x, CandidateId y, bool x_preferred) {
    auto [lo, hi] = ordered_pair(x, y);
    std::uint64_t k = key(v, {lo, hi});
    if (index_.count(k)) throw std::logic_error("duplicate ledger entry");
    index_.emplace(k, entries_.size());
    entries_.push_back(Entry{v, lo, hi, x == lo ? x_preferred : !x_preferred});
    if (static_cast<std::size_t>(v) >= per_voter_.size())
      per_voter_.resize(static_cast<std::size_t>(v) + 1, 0);
    ++per_voter_[static_cast<std::size_t>(v)];
  }

  std::size_t count() const { return entries_.size(); }

  std::size_t count_for(VoterId v) const {
    return static_cast<std::size_t>(v) < per_voter_.size() ? per_voter_[static_cast<std::size_t>(v)]
                                                           : 0;
  }

  std::vector<std::size_t> per_voter_counts(int n) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) out[static_cast<std::size_t>(v)] = count_for(v);
    return out;
  }

  const std::vector<Entry>& entries() const { return entries_; }

  // Total query() calls including memo hits, for diagnostics only.
  std::size_t raw_calls() const { return raw_calls_; }
  void note_raw_call() { ++raw_calls_; }

 private:
  static std::uint64_t key(VoterId v, CandidatePair p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 40) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.first)) << 20) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.second));
  }

  std::vector<Entry> entries_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::size_t> per_voter_;
  std::size_t raw_calls_ = 0;
};

// Anything that can answer pairwise comparison queries. `prefers` is invoked
// exactly once per distinct (voter, pair); repeats never reach the source, so
// stateful (adversarial) sources update on each distinct query only.
class AnswerSource {
 public:
  virtual ~AnswerSource() = default;
  virtual int num_candidates() const = 0;
  virtual int num_voters() const = 0;
  virtual bool prefers(VoterId v, CandidateId x, CandidateId y) = 0;
  // Sequential access: called when v is released, before the next voter opens.
  virtual void released(VoterId /*v*/) {}
};

class GroundTruthSource final : public AnswerSource {
 public:
  explicit GroundTruthSource(Profile truth) : truth_(std::move(truth)) {}

  int num_candidates() const override { return truth_.num_candidates(); }
  int num_voters() const override { return truth_.num_voters(); }
  bool prefers(VoterId v, CandidateId x, CandidateId y) override {
    return truth_[v].prefers(x, y);
  }

  const Profile& truth() const { return truth_; }

 private:
  Profile truth_;
};

// One elicitation run against one source: validates queries, enforces the
// access model, memoizes answers, and keeps the ledger.
class OracleSession {
 public:
  OracleSession(std::shared_ptr<AnswerSource> source, Scenario scenario)
      : source_(std::move(source)), scenario_(std::move(scenario)) {
    if (!source_) throw std::invalid_argument("null answer source");
    if (scenario_.access == Access::Sequential) {
      if (!scenario_.arrival) throw std::invalid_argument("sequential scenario without arrival");
      if (scenario_.arrival->size() != source_->num_voters())
        throw std::invalid_argument("arrival does not cover the voters");
    }
    if (scenario_.known_order && scenario_.known_order->size() != source_->num_voters())
      throw std::invalid_argument("known order does not cover the voters");
  }

  static OracleSession with_ground_truth(Profile truth, Scenario scenario) {
    return OracleSession(std::make_shared<GroundTruthSource>(std::move(truth)),
                         std::move(scenario));
  }

  int num_candidates() const { return source_->num_candidates(); }
  int num_voters() const { return source_->num_voters(); }
  bool sequential() const { return scenario_.access == Access::Sequential; }
  const Scenario& scenario() const { return scenario_; }
  const QueryLedger& ledger() const { return ledger_; }
  AnswerSource& source() { return *source_; }
  const AnswerSource& source() const { return *source_; }

  // Sequential access: the one voter currently open for queries.
  VoterId current_voter() const {
    if (!sequential()) throw std::logic_error("no current voter in random access");
    if (exhausted()) throw std::logic_error("all voters released");
    return scenario_.arrival->at(cursor_);
  }

  bool exhausted() const { return sequential() && cursor_ >= num_voters(); }

  bool query(VoterId v, CandidateId x, CandidateId y) {
    if (x == y) throw std::invalid_argument("self-comparison");
    if (x < 0 || x >= num_candidates() || y < 0 || y >= num_candidates())
      throw std::invalid_argument("candidate out of range");
    if (v < 0 || v >= num_voters()) throw std::invalid_argument("voter out of range");
    if (sequential() && (exhausted() || v != current_voter()))
      throw std::logic_error("voter not available");
    ledger_.note_raw_call();
    if (auto memo = ledger_.lookup(v, x, y)) return *memo;
    bool ans = source_->prefers(v, x, y);
    ledger_.record(v, x, y, ans);
    return ans;
  }

  // Closes the current voter; returns the next one, if any.
  std::optional<VoterId> release() {
    if (!sequential()) throw std::logic_error("no release in random access");
    if (exhausted()) throw std::logic_error("all voters released");
    source_->released(scenario_.arrival->at(cursor_));
    ++cursor_;
    if (cursor_ >= num_voters()) return std::nullopt;
    return scenario_.arrival->at(cursor_);
  }

 private:
  std::shared_ptr<AnswerSource> source_;
  Scenario scenario_;
  QueryLedger ledger_;
  int cursor_ = 0;
};

}  // namespace scelicit
