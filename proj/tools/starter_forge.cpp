// Command-line front end: construct starters, search beta pairs, verify
// external records, render the reference tables, and run sweeps. Output is
// canonical JSON, one record per line (--pretty for indented), so identical
// invocations are byte-identical, including under --jobs N.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure,
// 3 internal consistency failure (verifier disagreement or a broken
// theorem guarantee).
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starterforge/catalog.hpp"
#include "starterforge/cyclotomy.hpp"
#include "starterforge/errors.hpp"
#include "starterforge/ffield.hpp"
#include "starterforge/oracle.hpp"
#include "starterforge/starter.hpp"

namespace sf = starterforge;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInvalidInput = 1;
constexpr int kVerificationFailure = 2;
constexpr int kInconsistency = 3;

constexpr int64_t kSweepCap = 10000;
constexpr int64_t kSmallCap = 11;

void emit(const json& j, bool pretty) {
  std::cout << (pretty ? j.dump(2) : j.dump()) << '\n';
}

const char* axiom_name(sf::StarterAxiom a) {
  switch (a) {
    case sf::StarterAxiom::ElementCover: return "element-cover";
    case sf::StarterAxiom::DifferenceCover: return "difference-cover";
    case sf::StarterAxiom::StrongSums: return "strong-sums";
  }
  return "unknown";
}

const char* min_name(sf::MinQuotient m) {
  switch (m) {
    case sf::MinQuotient::Zero: return "zero";
    case sf::MinQuotient::One: return "one";
    case sf::MinQuotient::Two: return "two";
    case sf::MinQuotient::More: return "more";
  }
  return "unknown";
}

json quotient_json(const sf::QuotientProfile& prof) {
  json q;
  q["min"] = min_name(prof.min_le2);
  json set = json::array();
  for (sf::FieldElement e : prof.quotient_set) set.push_back(e.enc);
  q["set"] = set;
  return q;
}

// Runs fn(i) for i in [0, n) across `jobs` threads. Each fn(i) writes only
// slot i of its output vector, so the merged result is order-deterministic.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  size_t width = std::min<size_t>(static_cast<size_t>(jobs), n);
  for (size_t w = 0; w < width; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

int run_construct(int64_t q, const std::vector<int64_t>& betas,
                  std::optional<int64_t> dinitz_beta, bool pretty,
                  bool require_nonzero) {
  sf::FieldSpec F = sf::make_field_q(q);

  sf::Starter s;
  if (dinitz_beta.has_value() || (q % 4 == 3 && betas.empty())) {
    if (!betas.empty()) {
      throw sf::InvalidInput(
          "pass either a beta1 beta2 pair or --dinitz beta, not both");
    }
    sf::FieldElement beta;
    if (dinitz_beta.has_value()) {
      beta = F.element(*dinitz_beta);
    } else {
      // Smallest admissible witness: the least non-residue other than -1.
      sf::FieldElement minus1 = F.from_int(-1);
      beta = minus1;
      for (sf::FieldElement e : sf::residue_sets(F).second) {
        if (!(e == minus1)) {
          beta = e;
          break;
        }
      }
    }
    s = sf::dinitz_starter(F, beta);
  } else {
    if (q % 4 == 3) {
      throw sf::InvalidInput(
          "q = " + std::to_string(q) +
          " is on the one-quotient path; use --dinitz beta instead of a pair");
    }
    sf::CosetSystem sys = sf::build_cosets(F);
    sf::BetaPair bp;
    if (betas.size() == 2) {
      bp = sf::beta_pair_conditions(sys, F.element(betas[0]),
                                    F.element(betas[1]));
    } else if (betas.empty()) {
      bp = sf::search_beta_pairs(sys).front();
    } else {
      throw sf::InvalidInput("construct takes both betas or neither");
    }
    s = sf::two_quotient_starter(sys, bp);
  }

  sf::VerificationReport rep = sf::verify_starter(F, s.pairs);
  sf::OracleReport raw = sf::oracle_verify(F, s.pairs);
  if (!sf::reports_agree(rep, raw)) {
    std::cerr << "internal consistency failure: verifiers disagree on the "
                 "constructed starter\n";
    return kInconsistency;
  }

  sf::StarterRecord rec = sf::make_record(s, rep);
  std::cout << (pretty ? sf::serialize_record_pretty(rec)
                       : sf::serialize_record(rec))
            << '\n';

  bool pass = rep.is_starter && rep.is_strong &&
              !(require_nonzero && rep.zero_sum_present);
  if (!pass) {
    std::cerr << "verification failed for the constructed starter\n";
    return kVerificationFailure;
  }
  return kOk;
}

std::vector<sf::BetaPair> search_all(const sf::CosetSystem& sys, int jobs) {
  if (jobs <= 1) return sf::search_beta_pairs(sys);

  const std::vector<sf::FieldElement>& nqr = sys.nqr_sorted();
  std::vector<std::vector<sf::BetaPair>> slots(nqr.size());
  parallel_for(nqr.size(), jobs,
               [&](size_t i) { slots[i] = sf::beta_pairs_for(sys, nqr[i]); });

  std::vector<sf::BetaPair> found;
  for (const std::vector<sf::BetaPair>& v : slots) {
    found.insert(found.end(), v.begin(), v.end());
  }
  if (found.empty()) {
    // Single-threaded path throws the canonical diagnostic.
    return sf::search_beta_pairs(sys);
  }
  return found;
}

int run_search(int64_t q, bool all, int jobs, bool pretty) {
  sf::FieldSpec F = sf::make_field_q(q);
  sf::CosetSystem sys = sf::build_cosets(F);
  std::vector<sf::BetaPair> found = search_all(sys, jobs);
  if (!all) found.resize(1);

  for (const sf::BetaPair& bp : found) {
    json j;
    j["q"] = q;
    j["beta1"] = bp.beta1.enc;
    j["beta2"] = bp.beta2.enc;
    emit(j, pretty);
  }
  return kOk;
}

int run_verify(const std::string& path, bool pretty, bool require_nonzero) {
  std::string text;
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw sf::InvalidInput("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  // A single record may span lines (--pretty output); otherwise the input
  // is newline-delimited records.
  std::vector<sf::StarterRecord> records;
  try {
    records.push_back(sf::parse_record(text));
  } catch (const sf::InvalidInput&) {
    records.clear();
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      records.push_back(sf::parse_record(line));
    }
    if (records.empty()) throw sf::InvalidInput("no records in input");
  }

  bool any_fail = false, any_disagree = false;
  for (const sf::StarterRecord& rec : records) {
    const sf::FieldSpec& F = rec.starter.field;
    sf::VerificationReport rep = sf::verify_starter(F, rec.starter.pairs);
    sf::OracleReport raw = sf::oracle_verify(F, rec.starter.pairs);
    bool agree = sf::reports_agree(rep, raw);
    bool pass = rep.is_starter && !(require_nonzero && rep.zero_sum_present);

    json out;
    out["q"] = F.q();
    out["pairs"] = rec.starter.pairs.size();
    out["is_starter"] = rep.is_starter;
    out["is_strong"] = rep.is_strong;
    out["sum_count"] = rep.sum_count;
    out["zero_sum_present"] = rep.zero_sum_present;
    out["quotient"] = quotient_json(rep.quotient);
    out["verifiers_agree"] = agree;
    out["pass"] = pass;
    json fails = json::array();
    for (const sf::AxiomFailure& f : rep.failures) {
      json fj;
      fj["axiom"] = axiom_name(f.axiom);
      fj["detail"] = f.detail;
      fj["witnesses"] = f.witnesses;
      fails.push_back(fj);
    }
    out["failures"] = fails;
    emit(out, pretty);

    any_fail = any_fail || !pass;
    any_disagree = any_disagree || !agree;
  }

  if (any_disagree) {
    std::cerr << "internal consistency failure: verifiers disagree\n";
    return kInconsistency;
  }
  return any_fail ? kVerificationFailure : kOk;
}

int run_tables(int64_t q) {
  static const std::vector<std::pair<int64_t, int64_t>> rows29 = {
      {2, 26}, {2, 10}, {3, 15}, {3, 12}, {8, 11}, {10, 14}, {10, 17}};
  static const std::vector<std::pair<int64_t, int64_t>> rows41 = {
      {3, 12}, {3, 28}, {14, 24}, {14, 22}};

  const std::vector<std::pair<int64_t, int64_t>>* rows = nullptr;
  if (q == 29) rows = &rows29;
  else if (q == 41) rows = &rows41;
  else throw sf::InvalidInput("tables supports q = 29 and q = 41 only");

  sf::FieldSpec F = sf::make_field_q(q);
  sf::CosetSystem sys = sf::build_cosets(F);

  std::set<std::pair<int64_t, int64_t>> found;
  for (const sf::BetaPair& bp : sf::search_beta_pairs(sys)) {
    found.emplace(bp.beta1.enc, bp.beta2.enc);
  }

  std::ostringstream out;
  out << "q = " << q << ": two-quotient strong starters\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %-12s %-12s %s\n", "S(b1,b2)",
                "S(b2,b1)", "S(-b1,-b2)", "S(-b2,-b1)");
  out << line;

  for (const auto& [b1, b2] : *rows) {
    if (!found.count({b1, b2})) {
      throw sf::ConsistencyError("published base pair S(" +
                                 std::to_string(b1) + "," +
                                 std::to_string(b2) +
                                 ") is missing from the search output");
    }
    sf::BetaPair base =
        sf::beta_pair_conditions(sys, F.element(b1), F.element(b2));
    std::array<sf::BetaPair, 4> cells = sf::symmetric_variants(sys, base);

    std::array<std::string, 4> names;
    for (size_t c = 0; c < 4; ++c) {
      const sf::BetaPair& bp = cells[c];
      sf::Starter s = sf::two_quotient_starter(sys, bp);
      sf::VerificationReport rep = sf::verify_starter(F, s.pairs);
      if (!rep.is_starter || !rep.is_strong ||
          !sf::reports_agree(rep, sf::oracle_verify(F, s.pairs))) {
        std::cerr << "verification failed for S(" << bp.beta1.enc << ","
                  << bp.beta2.enc << ")\n";
        return kVerificationFailure;
      }
      names[c] = "S(" + std::to_string(bp.beta1.enc) + "," +
                 std::to_string(bp.beta2.enc) + ")";
    }
    std::snprintf(line, sizeof line, "%-12s %-12s %-12s %s\n",
                  names[0].c_str(), names[1].c_str(), names[2].c_str(),
                  names[3].c_str());
    out << line;
  }

  std::cout << out.str();
  return kOk;
}

// One sweep row: q is valid for the two-quotient construction; build the
// first starter and judge it with both verifiers.
struct SweepRow {
  json record;
  bool pass = false;
  bool agree = true;
};

SweepRow sweep_one(int64_t q) {
  SweepRow row;
  row.record["q"] = q;
  sf::FieldSpec F = sf::make_field_q(q);
  sf::CosetSystem sys = sf::build_cosets(F);

  std::vector<sf::BetaPair> found;
  try {
    found = sf::search_beta_pairs(sys);
  } catch (const sf::TheoremViolation&) {
    row.record["beta_pairs"] = 0;
    row.record["pass"] = false;
    return row;
  }

  const sf::BetaPair& bp = found.front();
  sf::Starter s = sf::two_quotient_starter(sys, bp);
  sf::VerificationReport rep = sf::verify_starter(F, s.pairs);
  sf::OracleReport raw = sf::oracle_verify(F, s.pairs);

  row.agree = sf::reports_agree(rep, raw);
  row.pass = row.agree && rep.is_starter && rep.is_strong;
  row.record["beta_pairs"] = found.size();
  row.record["beta1"] = bp.beta1.enc;
  row.record["beta2"] = bp.beta2.enc;
  row.record["pass"] = row.pass;
  return row;
}

int run_census(std::optional<int64_t> sweep, std::optional<int64_t> small,
               int jobs, bool pretty) {
  if (sweep.has_value() == small.has_value()) {
    throw sf::InvalidInput("census needs exactly one of --sweep or --small");
  }

  if (small.has_value()) {
    if (*small > kSmallCap) {
      throw sf::InvalidInput(
          "census --small is exhaustive over perfect matchings and is capped "
          "at n = " +
          std::to_string(kSmallCap) + "; larger n grow factorially");
    }
    if (*small < 3) throw sf::InvalidInput("census --small needs n >= 3");
    for (int64_t n = 3; n <= *small; n += 2) {
      sf::CensusRow r = sf::exhaustive_small_group_census(n);
      json j;
      j["n"] = r.n;
      j["matchings"] = r.matchings;
      j["starters"] = r.starters;
      j["strong"] = r.strong;
      j["quotient_one"] = r.quotient_one;
      j["quotient_two"] = r.quotient_two;
      emit(j, pretty);
    }
    return kOk;
  }

  if (*sweep > kSweepCap) {
    throw sf::InvalidInput("census --sweep is capped at q = " +
                           std::to_string(kSweepCap) +
                           "; run narrower sweeps and concatenate");
  }

  std::vector<int64_t> qs;
  for (int64_t q = 5; q <= *sweep; q += 2) {
    try {
      sf::decompose(q);
      qs.push_back(q);
    } catch (const sf::InvalidInput&) {
      // q is prime-power-invalid or outside k > 1, t > 1; not a sweep row.
    }
  }

  std::vector<SweepRow> rows(qs.size());
  parallel_for(qs.size(), jobs, [&](size_t i) { rows[i] = sweep_one(qs[i]); });

  bool any_fail = false, any_disagree = false;
  for (const SweepRow& row : rows) {
    emit(row.record, pretty);
    any_fail = any_fail || !row.pass;
    any_disagree = any_disagree || !row.agree;
  }
  if (any_disagree) {
    std::cerr << "internal consistency failure: verifiers disagree\n";
    return kInconsistency;
  }
  return any_fail ? kVerificationFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strong starter construction, search, and verification"};
  app.require_subcommand(1);

  int64_t q = 0;
  std::vector<int64_t> betas;
  int64_t dinitz_raw = 0;
  bool pretty = false, all = false, require_nonzero = false;
  int jobs = 1;
  std::string verify_path;
  int64_t sweep_raw = 0, small_raw = 0;

  CLI::App* construct =
      app.add_subcommand("construct", "build a starter over F_q");
  construct->add_option("q", q, "odd prime power")->required();
  construct->add_option("betas", betas,
                        "beta1 beta2 for the two-quotient construction")
      ->expected(0, 2);
  CLI::Option* dinitz_opt = construct->add_option(
      "--dinitz", dinitz_raw, "one-quotient beta (q = 3 mod 4 path)");
  construct->add_flag("--pretty", pretty, "indented JSON");
  construct->add_flag("--require-nonzero-sums", require_nonzero,
                      "fail verification when a pair sums to zero");

  CLI::App* search =
      app.add_subcommand("search", "enumerate valid beta pairs for F_q");
  search->add_option("q", q, "odd prime power")->required();
  search->add_flag("--all", all, "print every pair, not just the first");
  search->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  search->add_flag("--pretty", pretty, "indented JSON");

  CLI::App* verify =
      app.add_subcommand("verify", "verify starter records from file or stdin");
  verify->add_option("file", verify_path, "record file ('-' for stdin)");
  verify->add_flag("--pretty", pretty, "indented JSON");
  verify->add_flag("--require-nonzero-sums", require_nonzero,
                   "fail verification when a pair sums to zero");

  CLI::App* tables =
      app.add_subcommand("tables", "render the published starter tables");
  tables->add_option("q", q, "29 or 41")->required();

  CLI::App* census = app.add_subcommand(
      "census", "sweep constructions or exhaust small cyclic groups");
  CLI::Option* sweep_opt = census->add_option(
      "--sweep", sweep_raw, "construct and verify for every valid q <= bound");
  CLI::Option* small_opt = census->add_option(
      "--small", small_raw, "exhaustive census for odd n <= bound (max 11)");
  sweep_opt->excludes(small_opt);
  census->add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  census->add_flag("--pretty", pretty, "indented JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (construct->parsed()) {
      std::optional<int64_t> dinitz;
      if (dinitz_opt->count() > 0) dinitz = dinitz_raw;
      return run_construct(q, betas, dinitz, pretty, require_nonzero);
    }
    if (search->parsed()) return run_search(q, all, jobs, pretty);
    if (verify->parsed()) return run_verify(verify_path, pretty, require_nonzero);
    if (tables->parsed()) return run_tables(q);
    if (census->parsed()) {
      std::optional<int64_t> sweep, small;
      if (sweep_opt->count() > 0) sweep = sweep_raw;
      if (small_opt->count() > 0) small = small_raw;
      return run_census(sweep, small, jobs, pretty);
    }
  } catch (const sf::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const sf::TheoremViolation& e) {
    std::cerr << "theorem guarantee failed: " << e.what() << '\n';
    return kInconsistency;
  } catch (const sf::ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return kInconsistency;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInconsistency;
  }
  return kInvalidInput;
}
