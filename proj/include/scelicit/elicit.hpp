#pragma once

// Elicitation procedures for single-crossing electorates, one per
// access/knowledge setting, plus the query-count bounds they are held to.
// All of them report exact per-run accounting through ElicitResult.

#include <bit>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "domain.hpp"
#include "oracle.hpp"
#include "verify.hpp"

namespace scelicit {

inline std::size_t ceil_log2(std::size_t x) {
  return x <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(x - 1));
}

inline std::size_t pairs_of(std::size_t m) { return m * (m - 1) / 2; }

enum class Algorithm { KnownRandom, SequentialSC, SequentialKnownAny, Unknown };

struct GoodBadSplit {
  std::size_t good = 0;
  std::size_t bad = 0;
};

struct ElicitResult {
  Profile profile;
  std::size_t queries = 0;              // distinct (voter, pair) tuples this run
  std::vector<std::size_t> per_voter;
  std::optional<GoodBadSplit> good_bad;  // insertion-based runs only

  // Diagnostics from the sequential insertion drivers.
  std::size_t max_good_per_insertion = 0;
  std::map<CandidatePair, std::size_t> bad_per_pair;
  bool gap_halved = true;  // separation gap at least halved on every bad query
  std::size_t fallback_sorts = 0;
};

// Runs after a voter's preference is determined and, under sequential
// access, before that voter is released.
using PostVoterHook = std::function<void(OracleSession&, VoterId)>;

// ---- query-count bounds ----

inline std::size_t sort_bound(std::size_t m) { return m * ceil_log2(m); }

inline std::size_t known_random_bound(std::size_t m, std::size_t n) {
  return pairs_of(m) * (ceil_log2(n) + 1);
}

inline std::size_t sequential_sc_bound(std::size_t m, std::size_t n) {
  return sort_bound(m) + (n - 1) * (m - 1) + pairs_of(m);
}

inline std::size_t sequential_any_bound(std::size_t m, std::size_t n) {
  return sort_bound(m) + (n - 1) * (m - 1) + pairs_of(m) * (ceil_log2(n) + 1);
}

inline std::size_t unknown_bound(std::size_t m, std::size_t n, std::size_t distinct) {
  return n * (m - 1 + ceil_log2(pairs_of(m) + 1)) + distinct * sort_bound(m);
}

namespace detail {

inline std::vector<CandidateId> default_candidates(const OracleSession& s,
                                                   std::vector<CandidateId> cands) {
  if (cands.empty()) {
    cands.resize(static_cast<std::size_t>(s.num_candidates()));
    std::iota(cands.begin(), cands.end(), 0);
  } else {
    std::sort(cands.begin(), cands.end());
    if (std::adjacent_find(cands.begin(), cands.end()) != cands.end())
      throw std::invalid_argument("duplicate candidate");
  }
  return cands;
}

inline void merge_sort_queries(OracleSession& s, VoterId v, std::vector<CandidateId>& a,
                               std::size_t lo, std::size_t hi, std::vector<CandidateId>& tmp) {
  if (hi - lo <= 1) return;
  std::size_t mid = lo + (hi - lo) / 2;
  merge_sort_queries(s, v, a, lo, mid, tmp);
  merge_sort_queries(s, v, a, mid, hi, tmp);
  tmp.clear();
  std::size_t i = lo, j = mid;
  while (i < mid && j < hi) {
    if (s.query(v, a[i], a[j]))
      tmp.push_back(a[i++]);
    else
      tmp.push_back(a[j++]);
  }
  tmp.insert(tmp.end(), a.begin() + static_cast<std::ptrdiff_t>(i),
             a.begin() + static_cast<std::ptrdiff_t>(mid));
  tmp.insert(tmp.end(), a.begin() + static_cast<std::ptrdiff_t>(j),
             a.begin() + static_cast<std::ptrdiff_t>(hi));
  std::copy(tmp.begin(), tmp.end(), a.begin() + static_cast<std::ptrdiff_t>(lo));
}

}  // namespace detail

// Elicits one voter from scratch by merge sort: at most m*ceil(lg m)
// distinct comparisons.
inline Preference sort_elicit(OracleSession& s, VoterId v, std::vector<CandidateId> cands = {}) {
  cands = detail::default_candidates(s, std::move(cands));
  std::vector<CandidateId> tmp;
  tmp.reserve(cands.size());
  detail::merge_sort_queries(s, v, cands, 0, cands.size(), tmp);
  return Preference(std::move(cands));
}

struct InsertionTrace {
  std::size_t good = 0;
  std::size_t bad = 0;
  std::vector<CandidatePair> bad_pairs;  // pairs newly charged by bad queries, this call
};

// Elicits one voter by insertion sort in the reference's order, scanning the
// partial result back to front and stopping at the first win. Costs exactly
// m-1 queries when the voter matches the reference; queries answered earlier
// in the run are served from the memo and not recharged.
inline Preference insertion_elicit(OracleSession& s, const Preference& reference, VoterId v,
                                   InsertionTrace* trace = nullptr) {
  const std::vector<CandidateId>& ref = reference.order();
  std::size_t mark = s.ledger().count();
  std::vector<CandidateId> q;
  q.reserve(ref.size());
  q.push_back(ref[0]);
  for (std::size_t i = 1; i < ref.size(); ++i) {
    CandidateId c = ref[i];
    std::size_t pos = q.size();
    while (pos > 0 && !s.query(v, q[pos - 1], c)) --pos;
    q.insert(q.begin() + static_cast<std::ptrdiff_t>(pos), c);
  }
  Preference out(std::move(q));
  if (trace) {
    const auto& entries = s.ledger().entries();
    for (std::size_t e = mark; e < entries.size(); ++e) {
      if (entries[e].voter != v) continue;
      if (classify_query(reference, out, entries[e].lo, entries[e].hi) == QueryClass::Good) {
        ++trace->good;
      } else {
        ++trace->bad;
        trace->bad_pairs.push_back({entries[e].lo, entries[e].hi});
      }
    }
  }
  return out;
}

// True iff v's preference equals w; scans w's adjacent pairs and
// short-circuits on the first mismatch. At most m-1 queries, and exactness
// follows from transitivity of strict orders.
inline bool same_check(OracleSession& s, const Preference& w, VoterId v) {
  const auto& ord = w.order();
  for (std::size_t i = 0; i + 1 < ord.size(); ++i)
    if (!s.query(v, ord[i], ord[i + 1])) return false;
  return true;
}

namespace detail {

inline std::vector<std::size_t> per_voter_delta(const QueryLedger& led, int n,
                                                const std::vector<std::size_t>& before) {
  std::vector<std::size_t> now = led.per_voter_counts(n);
  for (std::size_t i = 0; i < now.size(); ++i) now[i] -= before[i];
  return now;
}

}  // namespace detail

// Random access with a known single-crossing order: per candidate pair, one
// probe at the first position plus a binary search for the flip position,
// then per-voter reconstruction by win counts. At most
// C(m,2) * (ceil(lg n) + 1) queries and no source call is repeated.
inline ElicitResult elicit_known_random(OracleSession& s, const VoterOrdering& sc_order,
                                        std::vector<CandidateId> cands = {},
                                        const PostVoterHook& hook = {}) {
  if (s.sequential()) throw std::logic_error("requires random access");
  if (sc_order.size() != s.num_voters())
    throw std::invalid_argument("ordering does not cover the voters");
  cands = detail::default_candidates(s, std::move(cands));
  int n = s.num_voters();
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);

  struct PairFlip {
    CandidatePair pair;
    bool first_at_start;  // does the voter at position 0 prefer pair.first
    int flip_pos;         // first position with the flipped orientation; n if none
  };
  std::vector<PairFlip> flips;
  flips.reserve(pairs_of(cands.size()));
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      CandidatePair pair{cands[a], cands[b]};
      bool at_start = s.query(sc_order.at(0), pair.first, pair.second);
      int lo = 1, hi = n;
      while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        bool here = s.query(sc_order.at(mid), pair.first, pair.second);
        if (here != at_start)
          hi = mid;
        else
          lo = mid + 1;
      }
      flips.push_back(PairFlip{pair, at_start, lo});
    }
  }

  std::vector<Preference> prefs(static_cast<std::size_t>(n));
  std::vector<int> wins(static_cast<std::size_t>(s.num_candidates()));
  for (int k = 0; k < n; ++k) {
    std::fill(wins.begin(), wins.end(), 0);
    for (const PairFlip& f : flips) {
      bool first_pref = k < f.flip_pos ? f.first_at_start : !f.first_at_start;
      ++wins[static_cast<std::size_t>(first_pref ? f.pair.first : f.pair.second)];
    }
    std::vector<CandidateId> order = cands;
    std::sort(order.begin(), order.end(), [&wins](CandidateId a, CandidateId b) {
      if (wins[static_cast<std::size_t>(a)] != wins[static_cast<std::size_t>(b)])
        return wins[static_cast<std::size_t>(a)] > wins[static_cast<std::size_t>(b)];
      return a < b;
    });
    prefs[static_cast<std::size_t>(sc_order.at(k))] = Preference(std::move(order));
  }
  if (hook)
    for (VoterId v = 0; v < n; ++v) hook(s, v);

  ElicitResult res;
  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  return res;
}

// Sequential access where voters arrive in a single-crossing order: merge
// sort for the first voter, then insertion against the previous voter's
// elicited order. Good queries are bounded by m-1 per insertion and each
// pair absorbs at most one bad query over the whole run.
inline ElicitResult elicit_sequential_sc(OracleSession& s, std::vector<CandidateId> cands = {},
                                         const PostVoterHook& hook = {}) {
  if (!s.sequential()) throw std::logic_error("requires sequential access");
  cands = detail::default_candidates(s, std::move(cands));
  int n = s.num_voters();
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);

  ElicitResult res;
  res.good_bad = GoodBadSplit{};
  std::vector<Preference> prefs(static_cast<std::size_t>(n));

  VoterId v = s.current_voter();
  Preference prev = sort_elicit(s, v, cands);
  prefs[static_cast<std::size_t>(v)] = prev;
  if (hook) hook(s, v);
  std::optional<VoterId> next = s.release();
  while (next) {
    v = *next;
    InsertionTrace trace;
    Preference cur = insertion_elicit(s, prev, v, &trace);
    res.good_bad->good += trace.good;
    res.good_bad->bad += trace.bad;
    res.max_good_per_insertion = std::max(res.max_good_per_insertion, trace.good);
    for (const CandidatePair& p : trace.bad_pairs) ++res.bad_per_pair[p];
    prefs[static_cast<std::size_t>(v)] = cur;
    if (hook) hook(s, v);
    prev = std::move(cur);
    next = s.release();
  }

  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  return res;
}

namespace detail {

// Positions (along the known order) of the voters already elicited on each
// side of a pair, kept as min/max so the separation gap is O(1) to read.
struct PairSides {
  int min_first = INT_MAX, max_first = -1;    // positions preferring pair.first
  int min_second = INT_MAX, max_second = -1;  // positions preferring pair.second

  void add(int pos, bool first_preferred) {
    if (first_preferred) {
      min_first = std::min(min_first, pos);
      max_first = std::max(max_first, pos);
    } else {
      min_second = std::min(min_second, pos);
      max_second = std::max(max_second, pos);
    }
  }

  // Position gap between the two sides' blocks; empty side or interleaved
  // sides (possible only against an inconsistent source) yield no value.
  std::optional<int> gap() const {
    if (max_first < 0 || max_second < 0) return std::nullopt;
    if (max_first < min_second) return min_second - max_first;
    if (max_second < min_first) return min_first - max_second;
    return std::nullopt;
  }
};

}  // namespace detail

// Sequential access, arbitrary arrival, known single-crossing order: each
// arriving voter is inserted against the elicited voter nearest to it in the
// known order (ties toward the smaller position). Every bad query at least
// halves that pair's separation gap, so a pair absorbs at most
// ceil(lg n) + 1 bad queries over the run.
inline ElicitResult elicit_sequential_known_any(OracleSession& s, const VoterOrdering& sc_order,
                                                std::vector<CandidateId> cands = {},
                                                const PostVoterHook& hook = {}) {
  if (!s.sequential()) throw std::logic_error("requires sequential access");
  if (sc_order.size() != s.num_voters())
    throw std::invalid_argument("ordering does not cover the voters");
  cands = detail::default_candidates(s, std::move(cands));
  int n = s.num_voters();
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);

  ElicitResult res;
  res.good_bad = GoodBadSplit{};
  std::vector<Preference> prefs(static_cast<std::size_t>(n));
  std::map<int, VoterId> elicited;  // known-order position -> voter
  std::map<CandidatePair, detail::PairSides> sides;

  auto note_elicited = [&](VoterId v, const Preference& pref) {
    int pos = sc_order.position_of(v);
    for (std::size_t a = 0; a < cands.size(); ++a)
      for (std::size_t b = a + 1; b < cands.size(); ++b)
        sides[{cands[a], cands[b]}].add(pos, pref.prefers(cands[a], cands[b]));
    elicited.emplace(pos, v);
  };

  bool first = true;
  std::optional<VoterId> next;
  while (first || next) {
    VoterId v = first ? s.current_voter() : *next;
    if (first) {
      Preference out = sort_elicit(s, v, cands);
      note_elicited(v, out);
      prefs[static_cast<std::size_t>(v)] = std::move(out);
      first = false;
    } else {
      int pos = sc_order.position_of(v);
      auto after = elicited.lower_bound(pos);
      const VoterId* ref_voter = nullptr;
      int best = INT_MAX;
      if (after != elicited.begin()) {
        auto before = std::prev(after);
        best = pos - before->first;
        ref_voter = &before->second;
      }
      if (after != elicited.end() && after->first - pos < best) {
        best = after->first - pos;
        ref_voter = &after->second;
      }
      InsertionTrace trace;
      Preference out =
          insertion_elicit(s, prefs[static_cast<std::size_t>(*ref_voter)], v, &trace);
      res.good_bad->good += trace.good;
      res.good_bad->bad += trace.bad;
      res.max_good_per_insertion = std::max(res.max_good_per_insertion, trace.good);
      std::map<CandidatePair, std::optional<int>> gap_before;
      for (const CandidatePair& p : trace.bad_pairs) gap_before[p] = sides[p].gap();
      note_elicited(v, out);
      for (const CandidatePair& p : trace.bad_pairs) {
        ++res.bad_per_pair[p];
        if (gap_before[p]) {
          std::optional<int> after_gap = sides[p].gap();
          if (!after_gap || 2 * *after_gap > *gap_before[p]) res.gap_halved = false;
        }
      }
      prefs[static_cast<std::size_t>(v)] = std::move(out);
    }
    if (hook) hook(s, v);
    next = s.release();
  }

  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  return res;
}

// Unknown single-crossing order, either access model: keeps a dictionary of
// the distinct votes seen so far, identifies each voter's candidate vote by
// repeatedly querying a splitting pair (each answer discards at least half
// of the live dictionary), confirms with an adjacent-pair check, and falls
// back to a full sort exactly once per distinct vote.
inline ElicitResult elicit_unknown(OracleSession& s, std::vector<CandidateId> cands = {},
                                   const PostVoterHook& hook = {}) {
  cands = detail::default_candidates(s, std::move(cands));
  int n = s.num_voters();
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);

  ElicitResult res;
  std::vector<Preference> prefs(static_cast<std::size_t>(n));
  std::vector<Preference> dict;

  auto handle_voter = [&](VoterId v) {
    if (!dict.empty()) {
      std::vector<Preference> alive = dict;
      while (alive.size() >= 2) {
        CandidatePair split;
        try {
          split = find_splitting_pair(alive);
        } catch (const std::logic_error&) {
          throw std::logic_error("no splitting pair found");
        }
        bool ans = s.query(v, split.first, split.second);
        std::vector<Preference> kept;
        for (Preference& p : alive)
          if (p.prefers(split.first, split.second) == ans) kept.push_back(std::move(p));
        alive = std::move(kept);
      }
      if (same_check(s, alive[0], v)) {
        prefs[static_cast<std::size_t>(v)] = std::move(alive[0]);
        return;
      }
    }
    Preference sorted = sort_elicit(s, v, cands);
    ++res.fallback_sorts;
    dict.push_back(sorted);
    prefs[static_cast<std::size_t>(v)] = std::move(sorted);
  };

  if (s.sequential()) {
    bool more = true;
    while (more) {
      VoterId v = s.current_voter();
      handle_voter(v);
      if (hook) hook(s, v);
      more = s.release().has_value();
    }
  } else {
    for (VoterId v = 0; v < n; ++v) {
      handle_voter(v);
      if (hook) hook(s, v);
    }
  }

  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  return res;
}

// Width-restricted elicitation over a candidate partition whose blocks are
// contiguous in every vote: the inner procedure runs on one representative
// per block, and each voter's blocks are merge-sorted while the voter is
// reachable, then spliced into the representative order.
inline ElicitResult elicit_width(OracleSession& s, const CandidatePartition& partition,
                                 Algorithm inner,
                                 const std::optional<VoterOrdering>& sc_order = std::nullopt) {
  if (!partition.covers(s.num_candidates())) throw std::invalid_argument("not a partition");
  int n = s.num_voters();
  std::size_t mark = s.ledger().count();
  std::vector<std::size_t> pv_mark = s.ledger().per_voter_counts(n);

  std::size_t num_blocks = partition.blocks.size();
  std::vector<CandidateId> reps;
  std::vector<int> block_of(static_cast<std::size_t>(s.num_candidates()), -1);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    reps.push_back(*std::min_element(partition.blocks[b].begin(), partition.blocks[b].end()));
    for (CandidateId c : partition.blocks[b]) block_of[static_cast<std::size_t>(c)] = static_cast<int>(b);
  }

  std::vector<std::vector<Preference>> block_pref(
      static_cast<std::size_t>(n), std::vector<Preference>(num_blocks));
  PostVoterHook hook = [&](OracleSession& session, VoterId v) {
    for (std::size_t b = 0; b < num_blocks; ++b)
      if (partition.blocks[b].size() >= 2)
        block_pref[static_cast<std::size_t>(v)][b] = sort_elicit(session, v, partition.blocks[b]);
  };

  ElicitResult inner_res;
  switch (inner) {
    case Algorithm::KnownRandom:
      if (!sc_order) throw std::invalid_argument("inner procedure needs a known order");
      inner_res = elicit_known_random(s, *sc_order, reps, hook);
      break;
    case Algorithm::SequentialSC:
      inner_res = elicit_sequential_sc(s, reps, hook);
      break;
    case Algorithm::SequentialKnownAny:
      if (!sc_order) throw std::invalid_argument("inner procedure needs a known order");
      inner_res = elicit_sequential_known_any(s, *sc_order, reps, hook);
      break;
    case Algorithm::Unknown:
      inner_res = elicit_unknown(s, reps, hook);
      break;
  }

  std::vector<Preference> prefs;
  prefs.reserve(static_cast<std::size_t>(n));
  for (VoterId v = 0; v < n; ++v) {
    std::vector<CandidateId> full;
    full.reserve(static_cast<std::size_t>(s.num_candidates()));
    for (CandidateId rep : inner_res.profile[v].order()) {
      std::size_t b = static_cast<std::size_t>(block_of[static_cast<std::size_t>(rep)]);
      if (partition.blocks[b].size() == 1) {
        full.push_back(rep);
      } else {
        const Preference& bp = block_pref[static_cast<std::size_t>(v)][b];
        if (bp.size() == 0) throw std::logic_error("block order missing");
        full.insert(full.end(), bp.order().begin(), bp.order().end());
      }
    }
    prefs.push_back(Preference(std::move(full)));
  }

  ElicitResult res;
  res.profile = Profile(std::move(prefs));
  res.queries = s.ledger().count() - mark;
  res.per_voter = detail::per_voter_delta(s.ledger(), n, pv_mark);
  res.good_bad = inner_res.good_bad;
  res.max_good_per_insertion = inner_res.max_good_per_insertion;
  res.bad_per_pair = inner_res.bad_per_pair;
  res.gap_halved = inner_res.gap_halved;
  res.fallback_sorts = inner_res.fallback_sorts;
  return res;
}

inline std::size_t width_bound(Algorithm inner, const CandidatePartition& partition, std::size_t n,
                               std::size_t distinct_rep_votes = 0) {
  std::size_t nb = partition.blocks.size();
  std::size_t inner_bound = 0;
  switch (inner) {
    case Algorithm::KnownRandom:
      inner_bound = known_random_bound(nb, n);
      break;
    case Algorithm::SequentialSC:
      inner_bound = sequential_sc_bound(nb, n);
      break;
    case Algorithm::SequentialKnownAny:
      inner_bound = sequential_any_bound(nb, n);
      break;
    case Algorithm::Unknown:
      inner_bound = unknown_bound(nb, n, distinct_rep_votes);
      break;
  }
  std::size_t per_voter_blocks = 0;
  for (const auto& b : partition.blocks) per_voter_blocks += sort_bound(b.size());
  return inner_bound + n * per_voter_blocks;
}

}  // namespace scelicit
