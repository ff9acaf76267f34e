#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "scelicit/cli.hpp"

using namespace scelicit;

namespace {

std::string tmp_dir() {
  static std::string dir = [] {
    auto d = std::filesystem::temp_directory_path() / "scelicit-tests";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d.string();
  }();
  return dir;
}

std::string path_of(const std::string& name) { return tmp_dir() + "/" + name; }

void check_parse_error(const std::string& text, int line, const std::string& msg) {
  try {
    parse_scp(text);
    FAIL("expected a parse error: " << msg);
  } catch (const ScpParseError& e) {
    REQUIRE(e.line() == line);
    REQUIRE(e.what() == msg);
  }
}

// The timing column is the only nondeterministic part of a report.
std::string strip_micros(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    out += line.substr(0, line.find_last_of(','));
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("profile files round-trip with and without an order line") {
  auto [profile, order] = gen_single_crossing(5, 7, 99);
  ScpFile with = parse_scp(write_scp(profile, order));
  REQUIRE(with.profile == profile);
  REQUIRE(with.order.has_value());
  REQUIRE(*with.order == order);

  ScpFile without = parse_scp(write_scp(profile, std::nullopt));
  REQUIRE(without.profile == profile);
  REQUIRE_FALSE(without.order.has_value());

  REQUIRE_NOTHROW(parse_scp(write_scp(profile, order) + "\n  \n"));
}

TEST_CASE("parse errors carry the offending line") {
  check_parse_error("", 1, "empty file");
  check_parse_error("a b\n", 1, "expected header 'm n'");
  check_parse_error("2 3 4\n", 1, "expected header 'm n'");
  check_parse_error("0 1\n", 1, "m and n must be positive");
  check_parse_error("2 3\n0 1\n1 0\n", 4, "missing vote line");
  check_parse_error("2 1\n0 x\n", 2, "vote line is not a list of ids");
  check_parse_error("3 1\n0 1\n", 2, "vote does not rank all candidates");
  check_parse_error("2 1\n0 2\n", 2, "candidate id out of range");
  check_parse_error("2 1\n0 0\n", 2, "vote is not a permutation of the candidates");
  check_parse_error("2 1\n0 1\norder: 0\norder: 0\n", 4, "duplicate order line");
  check_parse_error("2 1\n0 1\norder: 0 x\n", 3, "order line is not a list of ids");
  check_parse_error("2 2\n0 1\n0 1\norder: 0\n", 4, "order does not cover the voters");
  check_parse_error("2 2\n0 1\n0 1\norder: 0 0\n", 4, "order is not a permutation of the voters");
  check_parse_error("2 1\n0 1\njunk\n", 3, "unexpected content");
}

TEST_CASE("loading prefixes errors with the path and line") {
  REQUIRE_THROWS_WITH(load_scp(path_of("nope.scp")),
                      Catch::Matchers::ContainsSubstring("cannot open"));
  std::string bad = path_of("bad.scp");
  {
    std::ofstream out(bad);
    out << "2 1\n0 0\n";
  }
  REQUIRE_THROWS_WITH(load_scp(bad), Catch::Matchers::ContainsSubstring(
                                         ":2: vote is not a permutation of the candidates"));
}

TEST_CASE("experiment reports use the fixed CSV schema") {
  ExperimentSpec spec;
  spec.algo = AlgoId::KnownRandom;
  spec.ms = {2, 3};
  spec.ns = {4};
  spec.trials = 2;
  spec.seed = 5;
  RunReport report = run_experiment(spec);
  REQUIRE(report.rows.size() == 4);
  REQUIRE(report.all_ok());
  std::string csv = report.csv();
  REQUIRE(csv.rfind("algo,m,n,trial,queries,good,bad,bound,ok,micros\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 5);
  for (const RunRow& row : report.rows) {
    REQUIRE(row.algo == "known-random");
    REQUIRE(row.ok);
    REQUIRE(row.queries <= row.bound);
  }
}

TEST_CASE("reports are deterministic up to the timing column") {
  ExperimentSpec spec;
  spec.algo = AlgoId::SeqAny;
  spec.access = Access::Sequential;
  spec.arrival = ArrivalPattern::Shuffled;
  spec.ms = {3, 5};
  spec.ns = {2, 9};
  spec.trials = 2;
  spec.seed = 31337;
  std::string a = strip_micros(run_experiment(spec).csv());
  std::string b = strip_micros(run_experiment(spec).csv());
  REQUIRE(a == b);
}

TEST_CASE("query counts with a known order grow by one per pair when n doubles") {
  ExperimentSpec spec;
  spec.algo = AlgoId::KnownRandom;
  spec.ms = {4};
  spec.ns = {4, 8, 16};
  spec.trials = 3;
  spec.seed = 11;
  RunReport report = run_experiment(spec);
  REQUIRE(report.all_ok());
  for (const RunRow& row : report.rows) {
    std::size_t expected = row.n == 4 ? 18 : row.n == 8 ? 24 : 30;
    REQUIRE(row.queries == expected);
  }
}

TEST_CASE("experiments refuse incompatible or empty specifications") {
  ExperimentSpec spec;
  spec.algo = AlgoId::KnownRandom;
  spec.access = Access::Sequential;
  spec.ms = {3};
  spec.ns = {3};
  REQUIRE_THROWS_WITH(run_experiment(spec), "algorithm incompatible with scenario");

  ExperimentSpec unk;
  unk.algo = AlgoId::Unknown;
  unk.known_order = true;
  unk.ms = {3};
  unk.ns = {3};
  REQUIRE_THROWS_WITH(run_experiment(unk), "algorithm incompatible with scenario");

  ExperimentSpec empty;
  empty.algo = AlgoId::SeqSC;
  empty.access = Access::Sequential;
  empty.ns = {3};
  REQUIRE_THROWS_WITH(run_experiment(empty), "empty range");

  ExperimentSpec none;
  none.ms = {3};
  none.ns = {3};
  none.trials = 0;
  REQUIRE_THROWS_WITH(run_experiment(none), "trials must be positive");
}

TEST_CASE("arrival patterns permute the certificate order") {
  VoterOrdering sc = VoterOrdering::identity(5);
  REQUIRE(make_arrival(sc, ArrivalPattern::SCOrder, 1) == sc);
  REQUIRE(make_arrival(sc, ArrivalPattern::Reversed, 1) == sc.reversed());
  REQUIRE(make_arrival(sc, ArrivalPattern::Interleaved, 1) ==
          VoterOrdering({0, 2, 4, 1, 3}));
  VoterOrdering s1 = make_arrival(sc, ArrivalPattern::Shuffled, 7);
  VoterOrdering s2 = make_arrival(sc, ArrivalPattern::Shuffled, 7);
  REQUIRE(s1 == s2);
  REQUIRE(s1.size() == 5);
}

TEST_CASE("the seed environment variable feeds default seeds") {
  ::setenv("SCELICIT_SEED", "42", 1);
  REQUIRE(default_seed() == 42);
  ::unsetenv("SCELICIT_SEED");
  REQUIRE(default_seed() == 0);
}

TEST_CASE("command line: generate writes a certified instance") {
  std::string file = path_of("a.scp");
  REQUIRE(cli({"generate", "--m", "5", "--n", "9", "--seed", "3", "-o", file}) == 0);
  ScpFile scp = load_scp(file);
  REQUIRE(scp.profile.num_candidates() == 5);
  REQUIRE(scp.profile.num_voters() == 9);
  REQUIRE(scp.order.has_value());
  REQUIRE(is_single_crossing(scp.profile, *scp.order));

  std::string distinct = path_of("distinct.scp");
  REQUIRE(cli({"generate", "--m", "4", "--n", "7", "--distinct", "--seed", "5", "-o",
               distinct}) == 0);
  REQUIRE(distinct_count(load_scp(distinct).profile) == 7);
}

TEST_CASE("command line: run succeeds on compatible scenarios") {
  std::string file = path_of("a.scp");
  REQUIRE(cli({"run", "--algo", "known-random", "--profile", file}) == 0);
  REQUIRE(cli({"run", "--algo", "seq-sc", "--profile", file}) == 0);
  REQUIRE(cli({"run", "--algo", "seq-any", "--profile", file, "--arrival", "reversed"}) == 0);
  REQUIRE(cli({"run", "--algo", "seq-any", "--profile", file, "--arrival", "shuffled"}) == 0);
  REQUIRE(cli({"run", "--algo", "unknown", "--profile", file}) == 0);
}

TEST_CASE("command line: run flags failures and misuse") {
  std::string file = path_of("a.scp");
  REQUIRE(cli({"run", "--algo", "cheat", "--profile", path_of("distinct.scp")}) == 1);
  REQUIRE(cli({"run", "--algo", "known-random", "--profile", file, "--access", "sequential"}) ==
          2);
  REQUIRE(cli({"run", "--algo", "width", "--profile", file}) == 2);
  REQUIRE(cli({"run", "--algo", "nope", "--profile", file}) == 2);
  REQUIRE(cli({"run", "--algo", "seq-any", "--profile", file, "--arrival", "bogus"}) == 2);

  std::string garbled = path_of("garbled.scp");
  {
    std::ofstream out(garbled);
    out << "what is this\n";
  }
  REQUIRE(cli({"run", "--algo", "unknown", "--profile", garbled}) == 2);

  std::string orderless = path_of("orderless.scp");
  auto [profile, order] = gen_single_crossing(4, 5, 21);
  (void)order;
  save_scp(orderless, profile, std::nullopt);
  REQUIRE(cli({"run", "--algo", "known-random", "--profile", orderless}) == 2);
  REQUIRE(cli({"run", "--algo", "unknown", "--profile", orderless}) == 0);
}

TEST_CASE("command line: width instances run end to end") {
  std::string file = path_of("w.scp");
  REQUIRE(cli({"generate", "--m", "6", "--n", "8", "--width", "2", "--seed", "9", "-o", file}) ==
          0);
  REQUIRE(cli({"run", "--algo", "width", "--width", "2", "--profile", file}) == 0);
  REQUIRE(cli({"run", "--algo", "width", "--width", "2", "--inner", "seq-any", "--profile",
               file}) == 0);
}

TEST_CASE("command line: adversary runs certify honest algorithms and refute cheats") {
  REQUIRE(cli({"adversary", "--kind", "random-known", "--algo", "known-random", "--m", "4",
               "--n", "8"}) == 0);
  REQUIRE(cli({"adversary", "--kind", "seq-sc", "--algo", "seq-sc", "--m", "6", "--n", "12"}) ==
          0);
  REQUIRE(cli({"adversary", "--kind", "random-unknown", "--algo", "unknown", "--m", "4", "--n",
               "10"}) == 0);
  REQUIRE(cli({"adversary", "--kind", "seq-sc", "--algo", "cheat", "--m", "6", "--n", "10"}) ==
          1);
  REQUIRE(cli({"adversary", "--kind", "random-unknown", "--algo", "cheat", "--m", "4", "--n",
               "6"}) == 1);
  REQUIRE(cli({"adversary", "--kind", "random-known", "--algo", "seq-sc", "--m", "4", "--n",
               "8"}) == 2);
}

TEST_CASE("command line: bench writes CSV reports") {
  std::string csv = path_of("report.csv");
  REQUIRE(cli({"bench", "--algo", "seq-sc", "--m", "3,4", "--n", "5", "--trials", "2", "--seed",
               "2", "-o", csv}) == 0);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  REQUIRE(header == "algo,m,n,trial,queries,good,bad,bound,ok,micros");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 4);

  REQUIRE(cli({"bench", "--algo", "cheat", "--m", "4", "--n", "6", "-o",
               path_of("cheat.csv")}) == 1);
}

TEST_CASE("command line: usage errors exit with code 2") {
  REQUIRE(cli({}) == 2);
  REQUIRE(cli({"frobnicate"}) == 2);
  REQUIRE(cli({"run", "--algo", "unknown"}) == 2);  // --profile is required
  REQUIRE(cli({"--help"}) == 0);
}
