#pragma once

// Experiment runner and command-line interface: the .scp profile file
// format, CSV reports over seeded experiment grids, and single runs against
// ground truth or an adaptive adversary.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adversary.hpp"
#include "domain.hpp"
#include "elicit.hpp"
#include "generate.hpp"
#include "oracle.hpp"
#include "verify.hpp"

namespace scelicit {

// ---------- profile files ----------
//
//   line 1:     "m n"
//   lines 2..n+1: one vote per line, m candidate ids, most preferred first
//   optional:   "order: v0 v1 ... v{n-1}"  (a single-crossing voter ordering)

struct ScpFile {
  Profile profile;
  std::optional<VoterOrdering> order;
};

class ScpParseError : public std::runtime_error {
 public:
  ScpParseError(int line, const std::string& msg)
      : std::runtime_error(msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline std::string write_scp(const Profile& p, const std::optional<VoterOrdering>& order) {
  std::ostringstream out;
  out << p.num_candidates() << ' ' << p.num_voters() << '\n';
  for (VoterId v = 0; v < p.num_voters(); ++v) {
    const auto& ord = p[v].order();
    for (std::size_t i = 0; i < ord.size(); ++i) out << (i ? " " : "") << ord[i];
    out << '\n';
  }
  if (order) {
    out << "order:";
    for (VoterId v : order->perm()) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

inline ScpFile parse_scp(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto read_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    return true;
  };
  auto is_blank = [](const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
  };

  if (!read_line()) throw ScpParseError(1, "empty file");
  std::istringstream header(line);
  long m = 0, n = 0;
  std::string extra;
  if (!(header >> m >> n) || (header >> extra))
    throw ScpParseError(lineno, "expected header 'm n'");
  if (m < 1 || n < 1) throw ScpParseError(lineno, "m and n must be positive");

  std::vector<Preference> votes;
  votes.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    if (!read_line()) throw ScpParseError(lineno + 1, "missing vote line");
    std::istringstream vs(line);
    std::vector<CandidateId> ord;
    long c = 0;
    while (vs >> c) ord.push_back(static_cast<CandidateId>(c));
    if (!vs.eof()) throw ScpParseError(lineno, "vote line is not a list of ids");
    if (ord.size() != static_cast<std::size_t>(m))
      throw ScpParseError(lineno, "vote does not rank all candidates");
    for (CandidateId id : ord)
      if (id < 0 || id >= m) throw ScpParseError(lineno, "candidate id out of range");
    try {
      votes.push_back(Preference(std::move(ord)));
    } catch (const std::invalid_argument&) {
      throw ScpParseError(lineno, "vote is not a permutation of the candidates");
    }
  }

  ScpFile file{Profile(std::move(votes)), std::nullopt};
  while (read_line()) {
    if (is_blank(line)) continue;
    if (line.rfind("order:", 0) == 0) {
      if (file.order) throw ScpParseError(lineno, "duplicate order line");
      std::istringstream os(line.substr(6));
      std::vector<VoterId> perm;
      long v = 0;
      while (os >> v) perm.push_back(static_cast<VoterId>(v));
      if (!os.eof()) throw ScpParseError(lineno, "order line is not a list of ids");
      if (perm.size() != static_cast<std::size_t>(n))
        throw ScpParseError(lineno, "order does not cover the voters");
      try {
        file.order = VoterOrdering(std::move(perm));
      } catch (const std::invalid_argument&) {
        throw ScpParseError(lineno, "order is not a permutation of the voters");
      }
    } else {
      throw ScpParseError(lineno, "unexpected content");
    }
  }
  return file;
}

inline ScpFile load_scp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scp(buf.str());
  } catch (const ScpParseError& e) {
    throw std::runtime_error(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

inline void save_scp(const std::string& path, const Profile& p,
                     const std::optional<VoterOrdering>& order) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << write_scp(p, order);
}

// ---------- experiments ----------

enum class AlgoId { KnownRandom, SeqSC, SeqAny, Unknown, Width, Cheat };
enum class ArrivalPattern { SCOrder, Reversed, Shuffled, Interleaved };

inline const char* algo_name(AlgoId a) {
  switch (a) {
    case AlgoId::KnownRandom: return "known-random";
    case AlgoId::SeqSC: return "seq-sc";
    case AlgoId::SeqAny: return "seq-any";
    case AlgoId::Unknown: return "unknown";
    case AlgoId::Width: return "width";
    case AlgoId::Cheat: return "cheat";
  }
  return "?";
}

inline std::optional<AlgoId> parse_algo(const std::string& s) {
  for (AlgoId a : {AlgoId::KnownRandom, AlgoId::SeqSC, AlgoId::SeqAny, AlgoId::Unknown,
                   AlgoId::Width, AlgoId::Cheat})
    if (s == algo_name(a)) return a;
  return std::nullopt;
}

inline std::optional<ArrivalPattern> parse_arrival(const std::string& s) {
  if (s == "sc") return ArrivalPattern::SCOrder;
  if (s == "reversed") return ArrivalPattern::Reversed;
  if (s == "shuffled") return ArrivalPattern::Shuffled;
  if (s == "interleaved") return ArrivalPattern::Interleaved;
  return std::nullopt;
}

struct ExperimentSpec {
  AlgoId algo = AlgoId::KnownRandom;
  Access access = Access::RandomAccess;
  bool known_order = true;
  ArrivalPattern arrival = ArrivalPattern::SCOrder;
  std::vector<int> ms, ns;
  int trials = 1;
  std::uint64_t seed = 0;
  int width = 1;                               // AlgoId::Width only
  Algorithm inner = Algorithm::KnownRandom;    // AlgoId::Width only
};

// Scenario compatibility; throws before any oracle is constructed.
inline void check_compatible(AlgoId algo, Access access, bool known_order,
                             ArrivalPattern arrival) {
  auto fail = [] { throw std::invalid_argument("algorithm incompatible with scenario"); };
  switch (algo) {
    case AlgoId::KnownRandom:
      if (access != Access::RandomAccess || !known_order) fail();
      break;
    case AlgoId::SeqSC:
      if (access != Access::Sequential || !known_order || arrival != ArrivalPattern::SCOrder)
        fail();
      break;
    case AlgoId::SeqAny:
      if (access != Access::Sequential || !known_order) fail();
      break;
    case AlgoId::Unknown:
      if (known_order) fail();
      break;
    case AlgoId::Width:
    case AlgoId::Cheat:
      break;
  }
}

inline VoterOrdering make_arrival(const VoterOrdering& sc, ArrivalPattern pattern,
                                  std::uint64_t seed) {
  int n = sc.size();
  switch (pattern) {
    case ArrivalPattern::SCOrder:
      return sc;
    case ArrivalPattern::Reversed:
      return sc.reversed();
    case ArrivalPattern::Shuffled: {
      std::vector<VoterId> perm = sc.perm();
      std::mt19937_64 rng(mix64(seed, 0xa221fa1ULL));
      std::shuffle(perm.begin(), perm.end(), rng);
      return VoterOrdering(std::move(perm));
    }
    case ArrivalPattern::Interleaved: {
      std::vector<VoterId> perm;
      perm.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k < n; k += 2) perm.push_back(sc.at(k));
      for (int k = 1; k < n; k += 2) perm.push_back(sc.at(k));
      return VoterOrdering(std::move(perm));
    }
  }
  return sc;
}

inline ElicitResult dispatch_elicit(AlgoId algo, OracleSession& s,
                                    const std::optional<VoterOrdering>& sc_order,
                                    const CandidatePartition* partition, Algorithm inner,
                                    std::uint64_t seed) {
  switch (algo) {
    case AlgoId::KnownRandom:
      return elicit_known_random(s, *sc_order);
    case AlgoId::SeqSC:
      return elicit_sequential_sc(s);
    case AlgoId::SeqAny:
      return elicit_sequential_known_any(s, *sc_order);
    case AlgoId::Unknown:
      return elicit_unknown(s);
    case AlgoId::Width:
      if (!partition) throw std::invalid_argument("width run needs a partition");
      return elicit_width(s, *partition, inner, sc_order);
    case AlgoId::Cheat:
      return cheat_copy_previous(s, seed);
  }
  throw std::invalid_argument("unknown algorithm");
}

inline std::size_t algo_bound(AlgoId algo, std::size_t m, std::size_t n,
                              const Profile& truth, const CandidatePartition* partition,
                              Algorithm inner) {
  switch (algo) {
    case AlgoId::KnownRandom:
      return known_random_bound(m, n);
    case AlgoId::SeqSC:
      return sequential_sc_bound(m, n);
    case AlgoId::SeqAny:
      return sequential_any_bound(m, n);
    case AlgoId::Unknown:
      return unknown_bound(m, n, static_cast<std::size_t>(distinct_count(truth)));
    case AlgoId::Width: {
      std::vector<CandidateId> reps;
      for (const auto& b : partition->blocks)
        reps.push_back(*std::min_element(b.begin(), b.end()));
      std::vector<Preference> rep_votes;
      for (const Preference& v : truth.votes()) rep_votes.push_back(v.restricted(reps));
      std::size_t d = static_cast<std::size_t>(distinct_count(Profile(std::move(rep_votes))));
      return width_bound(inner, *partition, n, d);
    }
    case AlgoId::Cheat:
      return 0;
  }
  return 0;
}

struct RunRow {
  std::string algo;
  int m = 0, n = 0, trial = 0;
  std::size_t queries = 0, good = 0, bad = 0, bound = 0;
  bool ok = false;     // exact && queries <= bound; the CSV column
  bool exact = false;  // not serialized
  long long micros = 0;
};

struct RunReport {
  std::vector<RunRow> rows;

  void write_csv(std::ostream& out) const {
    out << "algo,m,n,trial,queries,good,bad,bound,ok,micros\n";
    for (const RunRow& r : rows) {
      out << r.algo << ',' << r.m << ',' << r.n << ',' << r.trial << ',' << r.queries << ','
          << r.good << ',' << r.bad << ',' << r.bound << ',' << (r.ok ? "true" : "false") << ','
          << r.micros << '\n';
    }
  }

  std::string csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
  }

  bool all_ok() const {
    for (const RunRow& r : rows)
      if (!r.ok) return false;
    return true;
  }
};

// One seeded, ground-truth-checked elicitation; fills everything but `trial`.
inline RunRow run_single(AlgoId algo, const Profile& truth, const VoterOrdering& sc_order,
                         Access access, ArrivalPattern pattern,
                         const CandidatePartition* partition, Algorithm inner,
                         std::uint64_t seed) {
  bool known = algo != AlgoId::Unknown &&
               !(algo == AlgoId::Width && inner == Algorithm::Unknown);
  Scenario scenario;
  if (access == Access::Sequential) {
    VoterOrdering arrival = make_arrival(sc_order, pattern, seed);
    scenario = known ? Scenario::sequential_known(arrival, sc_order)
                     : Scenario::sequential(arrival);
  } else {
    scenario = known ? Scenario::random_access_known(sc_order) : Scenario::random_access();
  }
  OracleSession session = OracleSession::with_ground_truth(truth, scenario);

  auto t0 = std::chrono::steady_clock::now();
  ElicitResult res =
      dispatch_elicit(algo, session, std::optional<VoterOrdering>(sc_order), partition, inner,
                      seed);
  auto t1 = std::chrono::steady_clock::now();

  RunRow row;
  row.algo = algo_name(algo);
  row.m = truth.num_candidates();
  row.n = truth.num_voters();
  row.queries = res.queries;
  if (res.good_bad) {
    row.good = res.good_bad->good;
    row.bad = res.good_bad->bad;
  }
  row.bound = algo_bound(algo, static_cast<std::size_t>(truth.num_candidates()),
                         static_cast<std::size_t>(truth.num_voters()), truth, partition, inner);
  row.exact = res.profile == truth;
  row.ok = row.exact && res.queries <= row.bound;
  row.micros = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
  return row;
}

inline RunReport run_experiment(const ExperimentSpec& spec) {
  if (spec.ms.empty() || spec.ns.empty()) throw std::invalid_argument("empty range");
  if (spec.trials < 1) throw std::invalid_argument("trials must be positive");
  for (int m : spec.ms)
    if (m < 1) throw std::invalid_argument("m must be positive");
  for (int n : spec.ns)
    if (n < 1) throw std::invalid_argument("n must be positive");
  Algorithm inner = spec.inner;
  check_compatible(spec.algo, spec.access, spec.known_order, spec.arrival);
  if (spec.algo == AlgoId::Width) {
    AlgoId inner_id = spec.inner == Algorithm::KnownRandom        ? AlgoId::KnownRandom
                      : spec.inner == Algorithm::SequentialSC     ? AlgoId::SeqSC
                      : spec.inner == Algorithm::SequentialKnownAny ? AlgoId::SeqAny
                                                                    : AlgoId::Unknown;
    check_compatible(inner_id, spec.access, spec.known_order, spec.arrival);
  }

  RunReport report;
  for (int m : spec.ms) {
    for (int n : spec.ns) {
      for (int trial = 0; trial < spec.trials; ++trial) {
        std::uint64_t cell_seed =
            mix64(spec.seed, mix64(static_cast<std::uint64_t>(m) * 1000003u +
                                       static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(trial)));
        Profile truth;
        VoterOrdering sc_order;
        CandidatePartition partition;
        const CandidatePartition* part_ptr = nullptr;
        if (spec.algo == AlgoId::Width) {
          WidthInstance inst = gen_width_w(m, n, spec.width, cell_seed);
          truth = std::move(inst.profile);
          sc_order = std::move(inst.order);
          partition = std::move(inst.partition);
          part_ptr = &partition;
        } else {
          auto [p, o] = gen_single_crossing(m, n, cell_seed);
          truth = std::move(p);
          sc_order = std::move(o);
        }
        RunRow row = run_single(spec.algo, truth, sc_order, spec.access, spec.arrival,
                                part_ptr, inner, cell_seed);
        row.trial = trial;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("SCELICIT_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 0;
}

}  // namespace scelicit
