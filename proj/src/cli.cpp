#include "mirror/cli.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mirror/harness.hpp"
#include "mirror/matching.hpp"
#include "mirror/setfam.hpp"
#include "mirror/strategies.hpp"
#include "mirror/streamrec.hpp"

namespace mirror {

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kUsage = 2;

/// Thrown for bad arguments that CLI11 cannot see (missing files, bad keys).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

struct GameArgs {
  int n = 0;
  int a = 1;
  int b = 1;
  std::string alice;
  std::string bob;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string spec_file;
};

void add_game_options(CLI::App* cmd, GameArgs& args, bool with_trials) {
  cmd->add_option("--n", args.n, "ground set size");
  cmd->add_option("--a", args.a, "Alice's numbers per round")->capture_default_str();
  cmd->add_option("--b", args.b, "Bob's numbers per round")->capture_default_str();
  cmd->add_option("--alice", args.alice, "Alice strategy key");
  cmd->add_option("--bob", args.bob, "Bob strategy key");
  cmd->add_option("--seed", args.seed, "master seed")->capture_default_str();
  if (with_trials) {
    cmd->add_option("--trials", args.trials, "number of games")->capture_default_str();
    cmd->add_option("--threads", args.threads, "worker threads, 0 = all cores")
        ->capture_default_str();
    cmd->add_option("--spec", args.spec_file, "JSON experiment spec; flags override it");
  }
}

ExperimentSpec resolve_spec(const CLI::App* cmd, const GameArgs& args) {
  ExperimentSpec spec;
  spec.config = GameConfig{args.n, args.a, args.b};
  spec.alice = args.alice;
  spec.bob = args.bob;
  spec.trials = args.trials;
  spec.master_seed = args.seed;
  spec.threads = args.threads;
  if (!args.spec_file.empty()) {
    spec = ExperimentSpec::from_json(read_json_file(args.spec_file), spec);
    auto given = [cmd](const char* flag) { return cmd->count(flag) > 0; };
    if (given("--n")) spec.config.n = args.n;
    if (given("--a")) spec.config.a = args.a;
    if (given("--b")) spec.config.b = args.b;
    if (given("--alice")) spec.alice = args.alice;
    if (given("--bob")) spec.bob = args.bob;
    if (given("--trials")) spec.trials = args.trials;
    if (given("--seed")) spec.master_seed = args.seed;
    if (given("--threads")) spec.threads = args.threads;
  }
  spec.config = GameConfig::make(spec.config.n, spec.config.a, spec.config.b);
  if (spec.alice.empty() || spec.bob.empty()) throw UsageError("--alice and --bob are required");
  if (spec.trials < 1) throw UsageError("--trials must be >= 1");
  return spec;
}

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["config"] = {{"n", spec.config.n}, {"a", spec.config.a}, {"b", spec.config.b}};
  j["alice"] = spec.alice;
  j["bob"] = spec.bob;
  j["trials"] = spec.trials;
  j["seed"] = spec.master_seed;
  return j;
}

int cmd_play(const GameArgs& args, std::uint64_t games, std::ostream& out) {
  const GameConfig config = GameConfig::make(args.n, args.a, args.b);
  if (args.alice.empty() || args.bob.empty()) throw UsageError("--alice and --bob are required");
  for (std::uint64_t g = 0; g < games; ++g) {
    const std::uint64_t seed = args.seed + g;
    auto alice = make_strategy(args.alice, Player::Alice, config, seed);
    auto bob = make_strategy(args.bob, Player::Bob, config, seed);
    out << to_json(run_game(*alice, *bob, config, seed)).dump() << '\n';
  }
  return kOk;
}

int cmd_montecarlo(const ExperimentSpec& spec, std::ostream& out) {
  nlohmann::ordered_json j = spec_json(spec);
  const nlohmann::ordered_json report = to_json(montecarlo(spec));
  for (const auto& [key, value] : report.items()) j[key] = value;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_memory(const ExperimentSpec& spec, std::ostream& out) {
  const MemoryReport report = memory_profile(spec);
  nlohmann::ordered_json j = spec_json(spec);
  const nlohmann::ordered_json body = to_json(report);
  for (const auto& [key, value] : body.items()) j[key] = value;
  out << j.dump(2) << '\n';
  return report.within_budget ? kOk : kAssertionFailed;
}

int cmd_occurring(const GameArgs& args, int r, std::ostream& out) {
  const GameConfig config = GameConfig::make(args.n, args.a, args.b);
  if (args.alice.empty()) throw UsageError("--alice is required");
  auto alice = make_strategy(args.alice, Player::Alice, config, args.seed);
  const OccurringFamily occ = enumerate_occurring(*alice, config, r, args.seed);
  const int p = config.a + config.b;
  const bool covering = check_covering(occ.family, p, r);
  const BigInt bound = covering_lower_bound(config.n, p, r);

  nlohmann::ordered_json j;
  j["config"] = {{"n", config.n}, {"a", config.a}, {"b", config.b}};
  j["alice"] = args.alice;
  j["r"] = r;
  j["family"] = to_json(occ.family);
  j["size"] = occ.family.size();
  j["covering"] = covering;
  j["covering_lower_bound"] = bound.str();
  j["meets_lower_bound"] = BigInt(occ.family.size()) >= bound;
  out << j.dump(2) << '\n';
  return covering ? kOk : kAssertionFailed;
}

int cmd_recover(std::uint64_t n, std::size_t k, const std::string& stream, std::ostream& out,
                std::ostream& err) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (stream != "-" && stream != "stdin") {
    file.open(stream);
    if (!file) throw UsageError("cannot open " + stream);
    in = &file;
  }
  PowerSumSketch sketch(n, k);
  std::string line;
  std::uint64_t seen = 0;
  while (std::getline(*in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::uint64_t x = 0;
    try {
      x = std::stoull(line);
    } catch (const std::exception&) {
      throw UsageError("not an integer: '" + line + "'");
    }
    sketch.ingest(x);
    ++seen;
  }
  if (seen > n) throw UsageError("stream has more than n elements");
  const std::size_t missing = static_cast<std::size_t>(n - seen);
  if (missing != k) {
    err << "note: stream leaves " << missing << " numbers missing; --k is " << k << '\n';
  }
  if (missing > k) throw UsageError("more numbers are missing than --k power sums can recover");
  const auto roots = recover_missing(sketch, n, missing);
  out << nlohmann::json(roots).dump() << '\n';
  return kOk;
}

int cmd_setfam_check(const std::string& kind, const std::string& file, std::ostream& out) {
  const SetFamily family = family_from_json(read_json_file(file));
  nlohmann::ordered_json j;
  j["n"] = family.ground_n;
  j["size"] = family.size();
  j["kind"] = kind;
  bool valid = false;
  if (kind.starts_with("modtown:")) {
    valid = check_modtown(family, parse_modtown_spec(std::string_view(kind).substr(8)));
  } else {
    valid = check_town(family, parse_town_kind(kind));
  }
  j["valid"] = valid;
  out << j.dump(2) << '\n';
  return valid ? kOk : kAssertionFailed;
}

int cmd_setfam_search(int n, const std::string& kind, std::ostream& out) {
  const TownKind k = parse_town_kind(kind);
  const TownSearchResult result = search_max_town(n, k);
  nlohmann::ordered_json j;
  j["n"] = n;
  j["kind"] = to_string(k);
  j["max_size"] = result.max_size;
  j["max_size_without_empty"] = result.max_size_without_empty;
  j["witness"] = result.witness.to_lists();
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_setfam_mv(int m, const std::string& file, std::ostream& out) {
  const SetFamily family = family_from_json(read_json_file(file));
  const MVFamily mv = modtown_to_mv(family, m);
  nlohmann::ordered_json j;
  const nlohmann::json body = to_json(mv);
  for (const auto& [key, value] : body.items()) j[key] = value;
  j["size"] = mv.size();
  j["valid"] = check_mv(mv);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_matching_test(int n, std::uint64_t trials, std::uint64_t seed, std::ostream& out) {
  if (n < 2 || n % 2 != 0) throw UsageError("--n must be even and >= 2");
  if (trials < 1) throw UsageError("--trials must be >= 1");
  // The partner of 1 is uniform over {2..n}; at n = 4 it names the whole matching.
  std::vector<std::uint64_t> partner(static_cast<std::size_t>(n) + 1, 0);
  bool involution = true;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const MatchingOracle m = sample_matching(n, trial_seed(seed, t));
    for (int x = 1; x <= n; ++x) {
      const int y = m.match(x);
      if (y == x || m.match(y) != x) involution = false;
    }
    ++partner[static_cast<std::size_t>(m.match(1))];
  }
  const double expected = static_cast<double>(trials) / (n - 1);
  double chi2 = 0.0;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (int y = 2; y <= n; ++y) {
    const double c = static_cast<double>(partner[static_cast<std::size_t>(y)]);
    chi2 += (c - expected) * (c - expected) / expected;
    counts[std::to_string(y)] = partner[static_cast<std::size_t>(y)];
  }
  const int dof = n - 2;
  const double p_value =
      dof > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), chi2))
              : 1.0;

  nlohmann::ordered_json j;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["partner_of_1"] = std::move(counts);
  j["chi_square"] = chi2;
  j["dof"] = dof;
  j["p_value"] = p_value;
  j["involution"] = involution;
  j["uniform"] = p_value > 0.01;
  out << j.dump(2) << '\n';
  return involution && p_value > 0.01 ? kOk : kAssertionFailed;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Space-bounded strategies for the (a,b)-mirror game", "mirrorlab"};
  app.require_subcommand(1);

  GameArgs play_args;
  std::uint64_t play_games = 1;
  auto* play = app.add_subcommand("play", "referee games; one transcript JSON per line");
  add_game_options(play, play_args, false);
  play->add_option("--games", play_games, "number of games (seeds seed, seed+1, ...)")
      ->capture_default_str();

  GameArgs mc_args;
  auto* mc = app.add_subcommand("montecarlo", "Alice's win rate over seeded games");
  add_game_options(mc, mc_args, true);

  GameArgs mem_args;
  mem_args.trials = 10;
  auto* mem = app.add_subcommand("memory", "per-round state sizes against declared budgets");
  add_game_options(mem, mem_args, true);

  GameArgs occ_args;
  int occ_r = 1;
  auto* occ = app.add_subcommand("occurring", "r-occurring sets of a deterministic Alice");
  add_game_options(occ, occ_args, false);
  occ->add_option("--r", occ_r, "rounds")->required();

  std::uint64_t rec_n = 0;
  std::size_t rec_k = 0;
  std::string rec_stream = "-";
  std::uint64_t rec_seed = 0;
  auto* rec = app.add_subcommand("recover-missing", "recover the numbers absent from a stream");
  rec->add_option("--n", rec_n, "ground set size")->required();
  rec->add_option("--k", rec_k, "number of power sums tracked")->required();
  rec->add_option("--stream", rec_stream, "file with one integer per line, or - for stdin")
      ->capture_default_str();
  rec->add_option("--seed", rec_seed, "accepted for uniformity; unused");

  auto* setfam = app.add_subcommand("setfam", "set-family verifiers and searches");
  setfam->require_subcommand(1);
  std::uint64_t setfam_seed = 0;
  setfam->add_option("--seed", setfam_seed, "accepted for uniformity; unused");
  std::string check_kind;
  std::string check_file;
  auto* check = setfam->add_subcommand("check", "check a family file against a town kind");
  check->add_option("--kind", check_kind, "odd-even|even-odd|even-even|odd-odd|modtown:p,L")
      ->required();
  check->add_option("--file", check_file, "family JSON {\"n\":..,\"sets\":[[..]]}")->required();
  int search_n = 0;
  std::string search_kind;
  auto* search = setfam->add_subcommand("search-max", "exact maximum town size (n <= 8)");
  search->add_option("--n", search_n, "ground set size")->required();
  search->add_option("--kind", search_kind, "odd-even|even-odd|even-even|odd-odd")->required();
  int mv_m = 2;
  std::string mv_file;
  auto* mv = setfam->add_subcommand("mv-from-modtown", "matching vector family from a Modtown");
  mv->add_option("--m", mv_m, "modulus")->required();
  mv->add_option("--file", mv_file, "family JSON")->required();

  int mt_n = 4;
  std::uint64_t mt_trials = 30000;
  std::uint64_t mt_seed = 0;
  auto* mt = app.add_subcommand("matching-test", "uniformity test of the matching sampler");
  mt->add_option("--n", mt_n, "even ground set size")->capture_default_str();
  mt->add_option("--trials", mt_trials, "samples")->capture_default_str();
  mt->add_option("--seed", mt_seed, "master seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (*play) return cmd_play(play_args, play_games, out);
    if (*mc) return cmd_montecarlo(resolve_spec(mc, mc_args), out);
    if (*mem) return cmd_memory(resolve_spec(mem, mem_args), out);
    if (*occ) return cmd_occurring(occ_args, occ_r, out);
    if (*rec) return cmd_recover(rec_n, rec_k, rec_stream, out, err);
    if (*check) return cmd_setfam_check(check_kind, check_file, out);
    if (*search) return cmd_setfam_search(search_n, search_kind, out);
    if (*mv) return cmd_setfam_mv(mv_m, mv_file, out);
    if (*mt) return cmd_matching_test(mt_n, mt_trials, mt_seed, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StrategyFault& e) {
    err << "error: " << e.what() << '\n';
    return kAssertionFailed;
  } catch (const MirrorError& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::InconsistentSketch:
      case ErrorCode::NotModtown:
      case ErrorCode::BudgetExceeded:
        return kAssertionFailed;
      default:
        return kUsage;
    }
  }
  return kUsage;
}

}  // namespace mirror
