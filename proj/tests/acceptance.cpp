// Acceptance suite: one PASS/FAIL line per criterion.

#include <boost/math/distributions/chi_squared.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "mirror/harness.hpp"
#include "mirror/matching.hpp"
#include "mirror/setfam.hpp"
#include "mirror/strategies.hpp"
#include "mirror/streamrec.hpp"

using namespace mirror;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, title.c_str(),
              v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ExperimentSpec spec_of(int n, std::string alice, std::string bob, std::uint64_t trials,
                       std::uint64_t seed, int a = 1, int b = 1) {
  ExperimentSpec s;
  s.config = GameConfig::make(n, a, b);
  s.alice = std::move(alice);
  s.bob = std::move(bob);
  s.trials = trials;
  s.master_seed = seed;
  s.threads = 0;
  return s;
}

Verdict never_lose() {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t exhaustive_games = 0;
  std::uint64_t losses = 0;
  auto explore = [&](const Strategy& s, Player role, GameConfig c) {
    const auto r = explore_all_opponents(s, role, c);
    exhaustive_games += r.games;
    losses += r.subject_losses;
  };
  for (int n : {2, 4, 6, 8}) explore(*bob_mirror(n), Player::Bob, GameConfig::make(n));
  for (int n : {3, 5, 7}) explore(*alice_odd_mirror(n), Player::Alice, GameConfig::make(n));
  for (int n : {3, 6, 9}) explore(*bob_tuple_mirror(n, 2), Player::Bob, GameConfig::make(n, 1, 2));
  for (int n : {4, 8}) explore(*bob_tuple_mirror(n, 3), Player::Bob, GameConfig::make(n, 1, 3));

  // Random opponents: 10^4 seeded games per strategy with n spread up to 1000.
  std::uint64_t random_games = 0;
  const int games = 10000;
  for (int g = 0; g < games; ++g) {
    const std::uint64_t seed = derive_seed(0xacce, static_cast<std::uint64_t>(g));
    const int half = 2 + g % 499;  // 2..500
    auto tally = [&](const ExperimentSpec& s, Player subject) {
      auto alice = make_strategy(s.alice, Player::Alice, s.config, seed);
      auto bob = make_strategy(s.bob, Player::Bob, s.config, seed);
      const auto t = run_game(*alice, *bob, s.config, seed);
      ++random_games;
      if (t.outcome == (subject == Player::Alice ? Outcome::AliceLoses : Outcome::BobLoses)) {
        ++losses;
      }
    };
    tally(spec_of(2 * half, "random-unsaid", "mirror", 1, seed), Player::Bob);
    tally(spec_of(2 * half - 1, "odd-mirror", "random-unsaid", 1, seed), Player::Alice);
    const int b = 2 + g % 2;
    const int tuple_n = (b + 1) * (1 + (g % (999 / (b + 1))));
    tally(spec_of(tuple_n, "random-unsaid", "tuple-mirror", 1, seed, 1, b), Player::Bob);
  }
  const double secs = elapsed_since(start);
  return {losses == 0 && secs < 60.0,
          fmt("%llu losses over %llu exhaustive + %llu random games, %.1fs (limit 60s)",
              static_cast<unsigned long long>(losses),
              static_cast<unsigned long long>(exhaustive_games),
              static_cast<unsigned long long>(random_games), secs)};
}

Verdict missing_k() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t n = 10000;
  std::mt19937_64 rng(0x5eed);
  std::vector<std::uint64_t> all(n);
  std::iota(all.begin(), all.end(), 1);
  int exact = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t k = 1 + rng() % 64;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::uint64_t> missing(all.end() - static_cast<std::ptrdiff_t>(k), all.end());
    std::sort(missing.begin(), missing.end());
    PowerSumSketch sketch(n, k);
    for (std::size_t i = 0; i + k < n; ++i) sketch.ingest(all[i]);
    if (recover_missing(sketch, n, k) == missing) ++exact;
  }
  const double secs = elapsed_since(start);
  return {exact == 1000 && secs < 60.0,
          fmt("%d/1000 exact at n=10^4, k<=64, %.1fs (limit 60s)", exact, secs)};
}

Verdict rand_log() {
  const int n = 100;
  const std::uint64_t trials = 1000000;
  const auto small = montecarlo(spec_of(n, "rand-log", "smallest-unsaid", trials, 31));
  const auto large = montecarlo(spec_of(n, "rand-log", "largest-unsaid", trials, 32));
  const double p0 = 1.0 / n;
  const double sigma0 = std::sqrt(p0 * (1 - p0) / static_cast<double>(trials));
  const double floor = p0 - 3 * sigma0;
  const double p1 = small.win_rate;
  const double p2 = large.win_rate;
  const double sigma_diff =
      std::sqrt(p1 * (1 - p1) / static_cast<double>(trials) + p2 * (1 - p2) / static_cast<double>(trials));
  const bool above = p1 >= floor;
  const bool agree = std::abs(p1 - p2) <= 3 * sigma_diff;
  return {above && agree,
          fmt("win rate %.5f vs smallest-unsaid (floor %.5f), %.5f vs largest-unsaid, "
              "|diff| %.5f <= 3 sigma %.5f",
              p1, floor, p2, std::abs(p1 - p2), 3 * sigma_diff)};
}

Verdict rand_sqrt() {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 41;
  for (const char* bob : {"smallest-unsaid", "largest-unsaid", "random-unsaid"}) {
    const auto r = montecarlo(spec_of(400, "rand-sqrt", bob, 2000, seed++));
    ok = ok && r.win_rate >= 0.98;
    detail += fmt("%s %.4f; ", bob, r.win_rate);
  }
  const double secs = elapsed_since(start);
  ok = ok && secs < 300.0;
  return {ok, detail + fmt("n=400, 2000 trials each, threshold 0.98, %.1fs (limit 300s)", secs)};
}

Verdict space_scaling() {
  const auto mirror = memory_profile(spec_of(1024, "random-unsaid", "mirror", 5, 51));
  const std::size_t mirror_limit = 2 * 10;
  bool ok = mirror.within_budget && mirror.bob.overall_max_bits <= mirror_limit;
  std::string detail = fmt("bob mirror %zu bits at n=1024 (limit %zu); rand-sqrt ratios",
                           mirror.bob.overall_max_bits, mirror_limit);
  std::vector<double> ratios;
  for (int n : {100, 400, 1600}) {
    const auto r = memory_profile(spec_of(n, "rand-sqrt", "random-unsaid", 3, 52));
    ok = ok && r.within_budget;
    const double lg = std::log2(static_cast<double>(n));
    const double ratio =
        static_cast<double>(r.alice.overall_max_bits) / (std::sqrt(static_cast<double>(n)) * lg * lg);
    ratios.push_back(ratio);
    detail += fmt(" n=%d:%zu/%.0f=%.3f", n, r.alice.overall_max_bits,
                  std::sqrt(static_cast<double>(n)) * lg * lg, ratio);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  ok = ok && *hi / *lo < 2.0;
  return {ok, detail + fmt("; spread %.3fx (limit 2x)", *hi / *lo)};
}

Verdict towns() {
  const auto start = std::chrono::steady_clock::now();
  const TownKind odd_even{Parity::Odd, Parity::Even};
  const TownKind even_odd{Parity::Even, Parity::Odd};
  bool ok = true;
  std::string detail = "n: (Odd,Even) (Even,Odd) =";
  for (int n = 2; n <= 6; ++n) {
    const auto oe = max_town_size(n, odd_even);
    const auto eo = max_town_size(n, even_odd);
    ok = ok && oe == static_cast<std::size_t>(n) && eo <= static_cast<std::size_t>(n);
    detail += fmt(" %d:%zu,%zu", n, oe, eo);
  }
  const double secs = elapsed_since(start);
  return {ok && secs < 60.0, detail + fmt(", %.1fs", secs)};
}

Verdict eventown() {
  bool ok = true;
  for (int n = 2; n <= 20; n += 2) {
    const auto f = eventown_pairing(n);
    ok = ok && f.size() == (std::size_t{1} << (n / 2)) &&
         check_town(f, TownKind{Parity::Even, Parity::Even});
  }
  return {ok, "sizes 2^(n/2) and valid (Even,Even)-towns for n = 2..20"};
}

Verdict covering() {
  bool ok = true;
  std::string detail;
  for (int r : {1, 2}) {
    auto naive = alice_naive(8);
    const auto occ = enumerate_occurring(*naive, GameConfig::make(8), r);
    const bool cov = check_covering(occ.family, 2, r);
    const BigInt bound = covering_lower_bound(8, 2, r);
    ok = ok && cov && BigInt(occ.family.size()) >= bound;
    detail += fmt("r=%d: %zu sets, covering=%s, bound %s; ", r, occ.family.size(),
                  cov ? "true" : "false", bound.str().c_str());
  }
  return {ok, detail + "naive Alice, n=8"};
}

// Direct check of the modtown-to-MV precondition on element lists.
bool mv_precondition(const SetFamily& f, int m) {
  const auto lists = f.to_lists();
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].size() % static_cast<std::size_t>(m) != 0) return false;
    for (std::size_t j = i + 1; j < lists.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(lists[i].begin(), lists[i].end(), lists[j].begin(), lists[j].end(),
                            std::back_inserter(common));
      if (common.size() % static_cast<std::size_t>(m) == 0) return false;
    }
  }
  return true;
}

Verdict mv_construction() {
  std::mt19937_64 rng(0x3f);
  const std::array<int, 3> moduli = {2, 3, 6};
  int valid_ok = 0;
  int valid_total = 0;
  int invalid_rejected = 0;
  int invalid_total = 0;
  for (int attempt = 0; valid_total < 100 && attempt < 100000; ++attempt) {
    const int m = moduli[static_cast<std::size_t>(attempt) % moduli.size()];
    const int n = m + static_cast<int>(rng() % static_cast<std::uint64_t>(13 - m));
    // Greedy random growth keeps the family valid.
    std::vector<Mask> sets;
    for (int tries = 0; tries < 200 && sets.size() < 8; ++tries) {
      const Mask s = rng() & ((Mask{1} << n) - 1);
      if (s == 0 || cardinality(s) % m != 0) continue;
      bool fits = true;
      for (Mask t : sets) fits = fits && t != s && cardinality(s & t) % m != 0;
      if (fits) sets.push_back(s);
    }
    if (sets.size() < 2) continue;
    const auto fam = SetFamily::make(n, sets);
    if (!mv_precondition(fam, m)) return {false, "generator produced an invalid family"};
    ++valid_total;
    if (check_mv(modtown_to_mv(fam, m))) ++valid_ok;
  }
  for (int attempt = 0; attempt < 300; ++attempt) {
    const int m = moduli[static_cast<std::size_t>(attempt) % moduli.size()];
    const int n = 2 + static_cast<int>(rng() % 11);
    std::set<Mask> chosen;
    for (int i = 0; i < 4; ++i) chosen.insert(rng() & ((Mask{1} << n) - 1));
    const auto fam = SetFamily::make(n, {chosen.begin(), chosen.end()});
    if (mv_precondition(fam, m)) continue;
    ++invalid_total;
    try {
      modtown_to_mv(fam, m);
    } catch (const MirrorError& e) {
      if (e.code() == ErrorCode::NotModtown) ++invalid_rejected;
    }
  }
  return {valid_total == 100 && valid_ok == 100 && invalid_rejected == invalid_total &&
              invalid_total > 0,
          fmt("%d/%d valid Modtowns gave MV families passing check_mv; %d/%d invalid rejected",
              valid_ok, valid_total, invalid_rejected, invalid_total)};
}

Verdict matching_uniformity() {
  // The three matchings of [4] are named by the partner of 1.
  std::array<std::uint64_t, 3> counts{};
  const std::uint64_t seeds = 30000;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    ++counts[static_cast<std::size_t>(sample_matching(4, s).match(1) - 2)];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(seeds) / 3.0;
  for (auto c : counts) chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(2), chi2));

  bool involution = true;
  std::mt19937_64 rng(0x1f);
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 * (1 + static_cast<int>(rng() % 100));
    const auto m = sample_matching(n, rng());
    for (int x = 1; x <= n; ++x) {
      const int y = m.match(x);
      involution = involution && y >= 1 && y <= n && y != x && m.match(y) == x;
    }
  }
  return {p > 0.01 && involution,
          fmt("counts %llu/%llu/%llu, chi-square %.3f, p=%.4f (need > 0.01); involution %s over "
              "10^4 samples, n<=200",
              static_cast<unsigned long long>(counts[0]), static_cast<unsigned long long>(counts[1]),
              static_cast<unsigned long long>(counts[2]), chi2, p, involution ? "holds" : "FAILS")};
}

std::string capture(const std::string& command, int& status) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  status = pclose(pipe);
  return out;
}

Verdict reproducibility() {
  const auto dir = std::filesystem::temp_directory_path() / "mirrorlab_acceptance";
  std::filesystem::create_directories(dir);
  const auto stream = (dir / "stream.txt").string();
  {
    std::ofstream s(stream);
    for (int x = 1; x <= 50; ++x) {
      if (x != 17 && x != 33) s << x << '\n';
    }
  }
  const auto tri = (dir / "tri.json").string();
  std::ofstream(tri) << R"({"n": 3, "sets": [[1,2],[1,3],[2,3]]})";
  const auto spec = (dir / "spec.json").string();
  std::ofstream(spec) << R"({"n": 64, "alice": "rand-sqrt", "bob": "random-unsaid", "trials": 200})";

  const std::string exe = MIRRORLAB_PATH;
  const std::vector<std::string> commands = {
      "play --n 20 --alice rand-sqrt --bob random-unsaid --games 5 --seed 3",
      "montecarlo --n 100 --alice rand-log --bob smallest-unsaid --trials 20000 --seed 1",
      "montecarlo --spec " + spec + " --seed 4 --threads 0",
      "memory --n 400 --alice rand-sqrt --bob random-unsaid --trials 3 --seed 5",
      "occurring --n 8 --alice naive --r 2 --seed 6",
      "recover-missing --n 50 --k 2 --stream " + stream + " --seed 7",
      "setfam --seed 8 check --kind even-odd --file " + tri,
      "setfam --seed 8 search-max --n 5 --kind even-odd",
      "setfam --seed 8 mv-from-modtown --m 2 --file " + tri,
      "matching-test --n 4 --trials 30000 --seed 9",
  };
  int identical = 0;
  std::string mismatched;
  for (const auto& c : commands) {
    int s1 = 0;
    int s2 = 0;
    const auto full = exe + " " + c + " 2>/dev/null";
    const auto a = capture(full, s1);
    const auto b = capture(full, s2);
    if (a == b && s1 == 0 && s2 == 0 && !a.empty()) {
      ++identical;
    } else {
      mismatched += " [" + c + "]";
    }
  }
  std::filesystem::remove_all(dir);
  return {identical == static_cast<int>(commands.size()),
          fmt("%d/%zu subcommand invocations byte-identical across two runs", identical,
              commands.size()) +
              mismatched};
}

}  // namespace

int main() {
  criterion(1, "never-lose suite", never_lose);
  criterion(2, "missing-k exactness", missing_k);
  criterion(3, "rand-log win rate and strategy indifference", rand_log);
  criterion(4, "rand-sqrt win rate", rand_sqrt);
  criterion(5, "space scaling", space_scaling);
  criterion(6, "oddtown / even-odd maxima", towns);
  criterion(7, "eventown pairing size", eventown);
  criterion(8, "occurring sets are (2,r)-covering", covering);
  criterion(9, "MV construction from Modtowns", mv_construction);
  criterion(10, "matching uniformity and involution", matching_uniformity);
  criterion(11, "CLI reproducibility", reproducibility);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
