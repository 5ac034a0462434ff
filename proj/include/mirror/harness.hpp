#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/engine.hpp"
#include "mirror/setfam.hpp"

namespace mirror {

/// One batch of seeded games between two registry strategies.
struct ExperimentSpec {
  GameConfig config;
  std::string alice;
  std::string bob;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()

  /// Keys: n, a, b, alice, bob, trials, seed, threads. Missing keys keep the
  /// values already in `base`.
  static ExperimentSpec from_json(const nlohmann::json& j, ExperimentSpec base);
  static ExperimentSpec from_json(const nlohmann::json& j);
};

/// Seed of game `trial` in an experiment; independent of scheduling.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return derive_seed(master_seed, trial);
}

struct Interval {
  double low = 0.0;
  double high = 1.0;
  std::string method;  // "normal" or "clopper-pearson"
};

/// 95% interval for a binomial proportion. Normal approximation when both
/// successes and failures are at least 10, exact Clopper-Pearson otherwise.
Interval binomial_ci95(std::uint64_t successes, std::uint64_t trials);

struct WinRateReport {
  std::uint64_t trials = 0;
  std::uint64_t alice_wins = 0;  // games Alice did not lose
  double win_rate = 0.0;
  Interval ci95;
  std::uint64_t both_win = 0;
  std::uint64_t alice_loses = 0;
  std::uint64_t bob_loses = 0;
  /// "alice-repeat", "bob-repeat", "budget-exceeded:A", "malformed-move:B", ...
  std::map<std::string, std::uint64_t> losses_by_cause;
};

/// Runs spec.trials independent games. A strategy that faults (over budget,
/// malformed move) forfeits that game; the fault is counted, not thrown.
WinRateReport montecarlo(const ExperimentSpec& spec);

struct PlayerMemory {
  std::string strategy;
  std::size_t budget_bits = 0;
  std::size_t overall_max_bits = 0;
  /// Index 0 is the initial state; index t is the maximum seen during round t.
  std::vector<std::size_t> per_round_max_bits;
};

struct MemoryReport {
  PlayerMemory alice;
  PlayerMemory bob;
  bool within_budget = true;
  std::optional<std::string> violation;  // first budget fault, with player and round
};

/// Replays spec.trials games measuring both states after every transition.
MemoryReport memory_profile(const ExperimentSpec& spec);

struct ExhaustiveResult {
  std::uint64_t games = 0;            // complete games (every leaf)
  std::uint64_t subject_losses = 0;
  std::uint64_t opponent_forced = 0;  // opponent ran out of fresh numbers
  std::vector<int> counterexample;    // utterances of the first lost game
};

/// Plays `subject` against every legal opponent: every ordered choice of
/// distinct unsaid numbers at every opponent turn. A randomized subject is
/// explored for the single random tape derived from `seed`.
/// Throws TooLarge when more than `max_games` games would be needed.
ExhaustiveResult explore_all_opponents(const Strategy& subject, Player role,
                                       const GameConfig& config, std::uint64_t seed = 0,
                                       std::uint64_t max_games = 50'000'000);

/// The r-occurring sets of a fixed Alice strategy.
struct OccurringFamily {
  int r = 0;
  SetFamily family;
};

/// Every set of numbers that can have been said after r full rounds when
/// `alice` plays against some legal Bob. Throws TooLarge for n > max_n.
OccurringFamily enumerate_occurring(const Strategy& alice, const GameConfig& config, int r,
                                    std::uint64_t seed = 0, int max_n = 10);

nlohmann::ordered_json to_json(const WinRateReport& report);
nlohmann::ordered_json to_json(const MemoryReport& report);

}  // namespace mirror
