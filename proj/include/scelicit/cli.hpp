#pragma once

// Command-line front end. Subcommands: generate (write a .scp instance),
// run (one elicitation against a profile file), bench (seeded grid, CSV
// report), adversary (one elicitation against an adaptive adversary).
// Exit codes: 0 success / certified, 1 verification failure (inexact output,
// bound violation, or refutation), 2 usage or file errors.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bench.hpp"

namespace scelicit {

namespace detail {

inline Algorithm parse_inner(const std::string& s) {
  if (s == "known-random") return Algorithm::KnownRandom;
  if (s == "seq-sc") return Algorithm::SequentialSC;
  if (s == "seq-any") return Algorithm::SequentialKnownAny;
  if (s == "unknown") return Algorithm::Unknown;
  throw std::invalid_argument("unknown inner procedure: " + s);
}

inline Access default_access(AlgoId algo, Algorithm inner) {
  if (algo == AlgoId::SeqSC || algo == AlgoId::SeqAny) return Access::Sequential;
  if (algo == AlgoId::Width &&
      (inner == Algorithm::SequentialSC || inner == Algorithm::SequentialKnownAny))
    return Access::Sequential;
  return Access::RandomAccess;
}

inline bool algo_knows_order(AlgoId algo, Algorithm inner) {
  if (algo == AlgoId::Unknown) return false;
  if (algo == AlgoId::Width && inner == Algorithm::Unknown) return false;
  return true;
}

inline void print_row(std::ostream& out, const RunRow& row) {
  out << "algo=" << row.algo << " m=" << row.m << " n=" << row.n << " queries=" << row.queries
      << " bound=" << row.bound << " good=" << row.good << " bad=" << row.bad
      << " exact=" << (row.exact ? "true" : "false") << " ok=" << (row.ok ? "true" : "false")
      << '\n';
}

}  // namespace detail

inline int cli(const std::vector<std::string>& args) {
  CLI::App app{"single-crossing preference elicitation toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a single-crossing instance as a .scp file");
  int gen_m = 4, gen_n = 10, gen_width = 0;
  std::uint64_t gen_seed = default_seed();
  bool gen_distinct = false;
  std::string gen_out;
  gen->add_option("--m", gen_m, "number of candidates")->required();
  gen->add_option("--n", gen_n, "number of voters")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (default: SCELICIT_SEED or 0)");
  gen->add_flag("--distinct", gen_distinct, "make all votes pairwise distinct");
  gen->add_option("--width", gen_width,
                  "emit a block-structured instance with blocks of this width");
  gen->add_option("-o,--out", gen_out, "output file (default: stdout)");

  // run
  auto* run = app.add_subcommand("run", "run one elicitation against a profile file");
  std::string run_algo, run_profile, run_access, run_arrival = "sc", run_inner = "known-random";
  std::uint64_t run_seed = default_seed();
  int run_width = 0;
  run->add_option("--algo", run_algo, "known-random|seq-sc|seq-any|unknown|width|cheat")
      ->required();
  run->add_option("--profile", run_profile, ".scp file")->required();
  run->add_option("--access", run_access, "random|sequential (default: per algorithm)")
      ->check(CLI::IsMember({"random", "sequential"}));
  run->add_option("--arrival", run_arrival, "sc|reversed|shuffled|interleaved")
      ->check(CLI::IsMember({"sc", "reversed", "shuffled", "interleaved"}));
  run->add_option("--seed", run_seed, "RNG seed (default: SCELICIT_SEED or 0)");
  run->add_option("--width", run_width, "block width for --algo width (chunked blocks)");
  run->add_option("--inner", run_inner, "inner procedure for --algo width");

  // bench
  auto* bench = app.add_subcommand("bench", "seeded experiment grid, CSV on stdout or --out");
  std::string bench_algo, bench_access, bench_arrival = "sc", bench_inner = "known-random";
  std::string bench_out;
  std::vector<int> bench_ms{4}, bench_ns{10};
  int bench_trials = 1, bench_width = 2;
  std::uint64_t bench_seed = default_seed();
  bench->add_option("--algo", bench_algo, "known-random|seq-sc|seq-any|unknown|width|cheat")
      ->required();
  bench->add_option("--m", bench_ms, "candidate counts (comma separated)")->delimiter(',');
  bench->add_option("--n", bench_ns, "voter counts (comma separated)")->delimiter(',');
  bench->add_option("--trials", bench_trials, "trials per (m, n) cell");
  bench->add_option("--seed", bench_seed, "RNG seed (default: SCELICIT_SEED or 0)");
  bench->add_option("--access", bench_access, "random|sequential (default: per algorithm)")
      ->check(CLI::IsMember({"random", "sequential"}));
  bench->add_option("--arrival", bench_arrival, "sc|reversed|shuffled|interleaved")
      ->check(CLI::IsMember({"sc", "reversed", "shuffled", "interleaved"}));
  bench->add_option("--width", bench_width, "block width for --algo width");
  bench->add_option("--inner", bench_inner, "inner procedure for --algo width");
  bench->add_option("-o,--out", bench_out, "CSV output file (default: stdout)");

  // adversary
  auto* adv = app.add_subcommand("adversary", "run one elicitation against an adversary");
  std::string adv_kind, adv_algo;
  int adv_m = 4, adv_n = 8;
  std::uint64_t adv_seed = default_seed();
  adv->add_option("--kind", adv_kind, "random-known|seq-sc|random-unknown")
      ->required()
      ->check(CLI::IsMember({"random-known", "seq-sc", "random-unknown"}));
  adv->add_option("--algo", adv_algo, "known-random|seq-sc|seq-any|unknown|cheat")->required();
  adv->add_option("--m", adv_m, "number of candidates")->required();
  adv->add_option("--n", adv_n, "number of voters")->required();
  adv->add_option("--seed", adv_seed, "RNG seed (default: SCELICIT_SEED or 0)");

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("scelicit");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      std::string text;
      if (gen_width > 0) {
        WidthInstance inst = gen_width_w(gen_m, gen_n, gen_width, gen_seed);
        text = write_scp(inst.profile, inst.order);
      } else {
        auto [profile, order] = gen_single_crossing(gen_m, gen_n, gen_seed, gen_distinct);
        text = write_scp(profile, order);
      }
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        if (!out) throw std::runtime_error(gen_out + ": cannot open for writing");
        out << text;
      }
      return 0;
    }

    if (run->parsed()) {
      std::optional<AlgoId> algo = parse_algo(run_algo);
      if (!algo) throw std::invalid_argument("unknown algorithm: " + run_algo);
      Algorithm inner = detail::parse_inner(run_inner);
      ScpFile file = load_scp(run_profile);
      Access access = run_access.empty() ? detail::default_access(*algo, inner)
                      : run_access == "sequential" ? Access::Sequential
                                                   : Access::RandomAccess;
      ArrivalPattern pattern = *parse_arrival(run_arrival);
      bool known = detail::algo_knows_order(*algo, inner);
      check_compatible(*algo, access, known, pattern);
      if (known && !file.order)
        throw std::invalid_argument(run_profile + ": profile file has no order line");
      VoterOrdering sc_order =
          file.order ? *file.order : VoterOrdering::identity(file.profile.num_voters());
      CandidatePartition partition;
      const CandidatePartition* part_ptr = nullptr;
      if (*algo == AlgoId::Width) {
        if (run_width < 1) throw std::invalid_argument("--algo width needs --width");
        partition = CandidatePartition::chunks(file.profile.num_candidates(), run_width);
        part_ptr = &partition;
      }
      RunRow row =
          run_single(*algo, file.profile, sc_order, access, pattern, part_ptr, inner, run_seed);
      detail::print_row(std::cout, row);
      return row.ok ? 0 : 1;
    }

    if (bench->parsed()) {
      std::optional<AlgoId> algo = parse_algo(bench_algo);
      if (!algo) throw std::invalid_argument("unknown algorithm: " + bench_algo);
      ExperimentSpec spec;
      spec.algo = *algo;
      spec.inner = detail::parse_inner(bench_inner);
      spec.access = bench_access.empty() ? detail::default_access(*algo, spec.inner)
                    : bench_access == "sequential" ? Access::Sequential
                                                   : Access::RandomAccess;
      spec.known_order = detail::algo_knows_order(*algo, spec.inner);
      spec.arrival = *parse_arrival(bench_arrival);
      spec.ms = bench_ms;
      spec.ns = bench_ns;
      spec.trials = bench_trials;
      spec.seed = bench_seed;
      spec.width = bench_width;
      RunReport report = run_experiment(spec);
      if (bench_out.empty()) {
        report.write_csv(std::cout);
      } else {
        std::ofstream out(bench_out);
        if (!out) throw std::runtime_error(bench_out + ": cannot open for writing");
        report.write_csv(out);
      }
      return report.all_ok() ? 0 : 1;
    }

    if (adv->parsed()) {
      std::optional<AlgoId> algo = parse_algo(adv_algo);
      if (!algo) throw std::invalid_argument("unknown algorithm: " + adv_algo);
      if (*algo == AlgoId::Width)
        throw std::invalid_argument("algorithm incompatible with scenario");
      VoterOrdering identity = VoterOrdering::identity(adv_n);
      std::shared_ptr<AnswerSource> source;
      Scenario scenario;
      Access access = Access::RandomAccess;
      bool known = true;
      if (adv_kind == "random-known") {
        source = adv_random_known(adv_m, adv_n);
        scenario = Scenario::random_access_known(identity);
      } else if (adv_kind == "seq-sc") {
        source = adv_sequential_sc(adv_m, adv_n);
        scenario = Scenario::sequential_known(identity, identity);
        access = Access::Sequential;
      } else {
        source = adv_random_unknown(adv_m, adv_n);
        scenario = Scenario::random_access();
        known = false;
      }
      if (*algo != AlgoId::Cheat) check_compatible(*algo, access, known, ArrivalPattern::SCOrder);
      OracleSession session(source, scenario);
      ElicitResult res = dispatch_elicit(*algo, session, identity, nullptr,
                                         Algorithm::KnownRandom, adv_seed);
      AdversaryVerdict v = verdict(session, res.profile);
      std::cout << "kind=" << adv_kind << " algo=" << algo_name(*algo) << " m=" << adv_m
                << " n=" << adv_n << " queries=" << v.queries
                << " verdict=" << (v.certified ? "CERTIFIED" : "REFUTED");
      if (v.refutation)
        std::cout << " voter=" << v.refutation->voter << " pair=" << v.refutation->pair.first
                  << ',' << v.refutation->pair.second;
      std::cout << '\n';
      return v.certified ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace scelicit
