#pragma once

// Adaptive worst-case answer sources with post-run certification. Each
// adversary answers through the ordinary session interface, pairing the
// candidates into adjacent blocks {2k, 2k+1} of a fixed reference order, and
// afterwards either certifies the output or exhibits a refutation: a
// single-crossing witness profile consistent with every answer it gave that
// disagrees with the output on some (voter, pair). Refutations are machine
// validated before they are returned.

#include <cstdlib>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "domain.hpp"
#include "elicit.hpp"
#include "generate.hpp"
#include "oracle.hpp"
#include "verify.hpp"

namespace scelicit {

struct Refutation {
  Profile witness;
  VoterOrdering witness_order;  // ordering the witness is single crossing for
  VoterId voter;                // where the witness and the output disagree
  CandidatePair pair;
};

struct AdversaryVerdict {
  bool certified = false;
  std::size_t queries = 0;
  std::optional<Refutation> refutation;
};

class AdversarySource : public AnswerSource {
 public:
  virtual AdversaryVerdict verdict(const Profile& output, const QueryLedger& log) const = 0;
};

inline bool replay_consistent(const Profile& witness, const QueryLedger& log) {
  for (const QueryLedger::Entry& e : log.entries())
    if (witness[e.voter].prefers(e.lo, e.hi) != e.lo_preferred) return false;
  return true;
}

inline bool witness_validates(const Refutation& r, const QueryLedger& log,
                              const Profile& output) {
  return is_single_crossing(r.witness, r.witness_order) && replay_consistent(r.witness, log) &&
         output[r.voter].prefers(r.pair.first, r.pair.second) !=
             r.witness[r.voter].prefers(r.pair.first, r.pair.second);
}

namespace detail {

inline int num_blocks(int m) { return m / 2; }  // odd m leaves the last candidate unpaired

inline bool intra_block(CandidateId lo, CandidateId hi) {
  return hi == lo + 1 && lo % 2 == 0;
}

// Reference order with the blocks whose crossing position is <= pos swapped.
inline Preference block_vote(int m, const std::vector<int>& crossing, int pos) {
  std::vector<CandidateId> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = 0; k < crossing.size(); ++k)
    if (pos >= crossing[k]) std::swap(order[2 * k], order[2 * k + 1]);
  return Preference(std::move(order));
}

// One vote per position along `order`; crossing[k] = n means block k never swaps.
inline Profile block_profile(int m, const VoterOrdering& order,
                             const std::vector<int>& crossing) {
  std::vector<Preference> prefs(static_cast<std::size_t>(order.size()));
  for (int pos = 0; pos < order.size(); ++pos)
    prefs[static_cast<std::size_t>(order.at(pos))] = block_vote(m, crossing, pos);
  return Profile(std::move(prefs));
}

inline Refutation first_disagreement(Profile witness, VoterOrdering order,
                                     const Profile& output) {
  for (VoterId v = 0; v < output.num_voters(); ++v) {
    if (output[v] == witness[v]) continue;
    const auto& cands = output.candidates();
    for (std::size_t a = 0; a < cands.size(); ++a)
      for (std::size_t b = a + 1; b < cands.size(); ++b)
        if (output[v].prefers(cands[a], cands[b]) != witness[v].prefers(cands[a], cands[b]))
          return Refutation{std::move(witness), std::move(order), v, {cands[a], cands[b]}};
  }
  throw std::logic_error("no disagreement with witness");
}

}  // namespace detail

// Random access, known order (taken to be the identity over voter ids).
// Every intra-block answer is by proximity: the voter joins whichever of the
// pinned prefixes it is closer to, ties toward the low side, so the open
// interval around a block's crossing shrinks by at most half per query.
// Certification requires every open interval closed, which costs at least
// ceil(lg n) - 2 queries per block.
class RandomKnownAdversary final : public AdversarySource {
 public:
  struct BlockState {
    VoterId low = 0;   // voters <= low answered with the unswapped orientation
    VoterId high = 0;  // voters >= high answered with the swapped orientation
  };

  RandomKnownAdversary(int m, int n) : m_(m), n_(n) {
    if (m < 1) throw std::invalid_argument("need at least one candidate");
    if (n < 2) throw std::invalid_argument("need at least two voters");
    blocks_.assign(static_cast<std::size_t>(detail::num_blocks(m)), BlockState{0, n - 1});
  }

  int num_candidates() const override { return m_; }
  int num_voters() const override { return n_; }

  bool prefers(VoterId v, CandidateId x, CandidateId y) override {
    auto [lo, hi] = ordered_pair(x, y);
    if (!detail::intra_block(lo, hi)) return x == lo;
    BlockState& st = blocks_[static_cast<std::size_t>(lo / 2)];
    if (std::abs(v - st.low) <= std::abs(v - st.high)) {
      st.low = std::max(st.low, v);
      return x == lo;
    }
    st.high = std::min(st.high, v);
    return x == hi;
  }

  const std::vector<BlockState>& block_states() const { return blocks_; }

  AdversaryVerdict verdict(const Profile& output, const QueryLedger& log) const override {
    VoterOrdering order = VoterOrdering::identity(n_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k].high - blocks_[k].low < 2) continue;
      // Open block: both crossing choices below are consistent with the log,
      // and they disagree at the voter just inside the interval.
      VoterId kappa = blocks_[k].low + 1;
      CandidatePair pair{static_cast<CandidateId>(2 * k), static_cast<CandidateId>(2 * k + 1)};
      bool out_first = output[kappa].prefers(pair.first, pair.second);
      std::vector<int> crossing = closed_crossings();
      crossing[k] = out_first ? kappa : blocks_[k].high;
      Profile witness = detail::block_profile(m_, order, crossing);
      return AdversaryVerdict{false, log.count(),
                              Refutation{std::move(witness), std::move(order), kappa, pair}};
    }
    Profile completion = detail::block_profile(m_, order, closed_crossings());
    if (output == completion) return AdversaryVerdict{true, log.count(), std::nullopt};
    return AdversaryVerdict{
        false, log.count(),
        detail::first_disagreement(std::move(completion), std::move(order), output)};
  }

 private:
  std::vector<int> closed_crossings() const {
    std::vector<int> crossing(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) crossing[k] = blocks_[k].high;
    return crossing;
  }

  int m_, n_;
  std::vector<BlockState> blocks_;
};

// Sequential access, arrival order = the (known) single-crossing order.
// Answers follow the reference order until some voter is released with an
// intra-block pair never asked; from then on that block is swapped. The two
// resulting completions disagree on the released voter, so any algorithm
// that skips an intra-block pair is refuted.
class SequentialSCAdversary final : public AdversarySource {
 public:
  SequentialSCAdversary(int m, int n) : m_(m), n_(n) {
    asked_.assign(static_cast<std::size_t>(n),
                  std::vector<bool>(static_cast<std::size_t>(detail::num_blocks(m)), false));
  }

  int num_candidates() const override { return m_; }
  int num_voters() const override { return n_; }

  bool prefers(VoterId v, CandidateId x, CandidateId y) override {
    auto [lo, hi] = ordered_pair(x, y);
    if (detail::intra_block(lo, hi)) {
      int k = lo / 2;
      asked_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = true;
      if (switched_ && k == switch_block_) return x == hi;
    }
    return x == lo;
  }

  void released(VoterId v) override {
    arrived_.push_back(v);
    if (switched_) return;
    const auto& row = asked_[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k]) {
        switched_ = true;
        switch_block_ = static_cast<int>(k);
        skip_voter_ = v;
        return;
      }
    }
  }

  bool switched() const { return switched_; }
  VoterId skip_voter() const { return skip_voter_; }

  AdversaryVerdict verdict(const Profile& output, const QueryLedger& log) const override {
    VoterOrdering order = arrival_with_stragglers();
    std::vector<int> crossing(static_cast<std::size_t>(detail::num_blocks(m_)), n_);
    if (!switched_) {
      Profile completion = detail::block_profile(m_, order, crossing);
      if (output == completion) return AdversaryVerdict{true, log.count(), std::nullopt};
      return AdversaryVerdict{
          false, log.count(),
          detail::first_disagreement(std::move(completion), std::move(order), output)};
    }
    CandidatePair pair{static_cast<CandidateId>(2 * switch_block_),
                       static_cast<CandidateId>(2 * switch_block_ + 1)};
    bool out_first = output[skip_voter_].prefers(pair.first, pair.second);
    int skip_pos = order.position_of(skip_voter_);
    // Swapped from the skipped voter on if the output kept the reference
    // orientation there, otherwise from the next position on.
    crossing[static_cast<std::size_t>(switch_block_)] = out_first ? skip_pos : skip_pos + 1;
    Profile witness = detail::block_profile(m_, order, crossing);
    return AdversaryVerdict{
        false, log.count(),
        Refutation{std::move(witness), std::move(order), skip_voter_, pair}};
  }

 private:
  // Released voters in release order, then any never-released voters.
  VoterOrdering arrival_with_stragglers() const {
    std::vector<VoterId> perm = arrived_;
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    for (VoterId v : perm) seen[static_cast<std::size_t>(v)] = true;
    for (VoterId v = 0; v < n_; ++v)
      if (!seen[static_cast<std::size_t>(v)]) perm.push_back(v);
    return VoterOrdering(std::move(perm));
  }

  int m_, n_;
  std::vector<std::vector<bool>> asked_;
  std::vector<VoterId> arrived_;
  bool switched_ = false;
  int switch_block_ = -1;
  VoterId skip_voter_ = -1;
};

// Random access, unknown order. Answers always follow the reference order;
// any voter left with an unasked intra-block pair can be flipped on that
// block in a witness that places the voter last, so certification needs all
// m/2 blocks asked for all n voters.
class RandomUnknownAdversary final : public AdversarySource {
 public:
  RandomUnknownAdversary(int m, int n) : m_(m), n_(n) {}

  int num_candidates() const override { return m_; }
  int num_voters() const override { return n_; }

  bool prefers(VoterId, CandidateId x, CandidateId y) override {
    return x == ordered_pair(x, y).first;
  }

  AdversaryVerdict verdict(const Profile& output, const QueryLedger& log) const override {
    for (VoterId v = 0; v < n_; ++v) {
      for (int k = 0; k < detail::num_blocks(m_); ++k) {
        CandidatePair pair{2 * k, 2 * k + 1};
        if (log.contains(v, pair.first, pair.second)) continue;
        bool out_first = output[v].prefers(pair.first, pair.second);
        std::vector<VoterId> perm;
        for (VoterId u = 0; u < n_; ++u)
          if (u != v) perm.push_back(u);
        perm.push_back(v);
        VoterOrdering order(std::move(perm));
        std::vector<int> crossing(static_cast<std::size_t>(detail::num_blocks(m_)), n_);
        if (out_first) crossing[static_cast<std::size_t>(k)] = n_ - 1;  // flip v, placed last
        Profile witness = detail::block_profile(m_, order, crossing);
        return AdversaryVerdict{false, log.count(),
                                Refutation{std::move(witness), std::move(order), v, pair}};
      }
    }
    VoterOrdering order = VoterOrdering::identity(n_);
    std::vector<int> crossing(static_cast<std::size_t>(detail::num_blocks(m_)), n_);
    Profile completion = detail::block_profile(m_, order, crossing);
    if (output == completion) return AdversaryVerdict{true, log.count(), std::nullopt};
    return AdversaryVerdict{
        false, log.count(),
        detail::first_disagreement(std::move(completion), std::move(order), output)};
  }

 private:
  int m_, n_;
};

inline std::shared_ptr<RandomKnownAdversary> adv_random_known(int m, int n) {
  return std::make_shared<RandomKnownAdversary>(m, n);
}

inline std::shared_ptr<SequentialSCAdversary> adv_sequential_sc(int m, int n) {
  return std::make_shared<SequentialSCAdversary>(m, n);
}

inline std::shared_ptr<RandomUnknownAdversary> adv_random_unknown(int m, int n) {
  return std::make_shared<RandomUnknownAdversary>(m, n);
}

// Verdict on a finished run; refutations are validated against the session's
// own log before being returned.
inline AdversaryVerdict verdict(const OracleSession& s, const Profile& output) {
  const auto* adv = dynamic_cast<const AdversarySource*>(&s.source());
  if (!adv) throw std::invalid_argument("session source is not an adversary");
  AdversaryVerdict v = adv->verdict(output, s.ledger());
  if (!v.certified && (!v.refutation || !witness_validates(*v.refutation, s.ledger(), output)))
    throw std::logic_error("refutation failed validation");
  return v;
}

// Deliberately unsound strategy for exercising refutations: elicits the first
// voter honestly, then copies that order for everyone else, asking only a
// couple of decoy cross-block queries per voter.
inline ElicitResult cheat_copy_previous(OracleSession& s, std::uint64_t seed = 0) {
  int n = s.num_voters();
  int m = s.num_candidates();
  std::mt19937_64 rng(mix64(seed, 0xdecaf00dULL));
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);
  std::vector<Preference> prefs(static_cast<std::size_t>(n));

  auto decoys = [&](VoterId v) {
    if (m < 3) return;
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (int t = 0; t < 2; ++t) {
      for (int tries = 0; tries < 64; ++tries) {
        auto [lo, hi] = ordered_pair(pick(rng), pick(rng));
        if (lo == hi || detail::intra_block(lo, hi)) continue;
        s.query(v, lo, hi);
        break;
      }
    }
  };

  if (s.sequential()) {
    VoterId v = s.current_voter();
    Preference copy = sort_elicit(s, v);
    prefs[static_cast<std::size_t>(v)] = copy;
    std::optional<VoterId> next = s.release();
    while (next) {
      decoys(*next);
      prefs[static_cast<std::size_t>(*next)] = copy;
      next = s.release();
    }
  } else {
    Preference copy = sort_elicit(s, 0);
    prefs[0] = copy;
    for (VoterId v = 1; v < n; ++v) {
      decoys(v);
      prefs[static_cast<std::size_t>(v)] = copy;
    }
  }

  ElicitResult res;
  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  return res;
}

}  // namespace scelicit
