#include "mirror/harness.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "mirror/strategies.hpp"

namespace mirror {

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j, ExperimentSpec base) {
  int n = j.value("n", base.config.n);
  int a = j.value("a", base.config.a);
  int b = j.value("b", base.config.b);
  base.config = GameConfig::make(n, a, b);
  base.alice = j.value("alice", base.alice);
  base.bob = j.value("bob", base.bob);
  base.trials = j.value("trials", base.trials);
  base.master_seed = j.value("seed", base.master_seed);
  base.threads = j.value("threads", base.threads);
  if (base.trials < 1) throw MirrorError(ErrorCode::InvalidConfig, "trials must be >= 1");
  return base;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  return from_json(j, ExperimentSpec{});
}

Interval binomial_ci95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return Interval{0.0, 1.0, "none"};
  const double n = static_cast<double>(trials);
  const double x = static_cast<double>(successes);
  const std::uint64_t failures = trials - successes;
  if (successes >= 10 && failures >= 10) {
    const double p = x / n;
    const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / n);
    return Interval{std::max(0.0, p - half), std::min(1.0, p + half), "normal"};
  }
  using boost::math::beta_distribution;
  using boost::math::quantile;
  const double alpha = 0.05;
  const double low =
      successes == 0 ? 0.0 : quantile(beta_distribution<>(x, n - x + 1.0), alpha / 2);
  const double high =
      failures == 0 ? 1.0 : quantile(beta_distribution<>(x + 1.0, n - x), 1.0 - alpha / 2);
  return Interval{low, high, "clopper-pearson"};
}

namespace {

void run_block(const ExperimentSpec& spec, std::uint64_t first, std::uint64_t last,
               WinRateReport& acc) {
  for (std::uint64_t t = first; t < last; ++t) {
    const std::uint64_t seed = trial_seed(spec.master_seed, t);
    auto alice = make_strategy(spec.alice, Player::Alice, spec.config, seed);
    auto bob = make_strategy(spec.bob, Player::Bob, spec.config, seed);
    Outcome outcome;
    std::string cause;
    try {
      const Transcript tr = run_game(*alice, *bob, spec.config, seed);
      outcome = tr.outcome;
      if (outcome == Outcome::AliceLoses) cause = "alice-repeat";
      if (outcome == Outcome::BobLoses) cause = "bob-repeat";
    } catch (const StrategyFault& fault) {
      outcome = fault.player() == Player::Alice ? Outcome::AliceLoses : Outcome::BobLoses;
      cause = std::string(fault.code() == ErrorCode::BudgetExceeded ? "budget-exceeded:"
                                                                     : "malformed-move:") +
              to_string(fault.player());
    }
    ++acc.trials;
    switch (outcome) {
      case Outcome::BothWin: ++acc.both_win; break;
      case Outcome::AliceLoses: ++acc.alice_loses; break;
      case Outcome::BobLoses: ++acc.bob_loses; break;
    }
    if (!cause.empty()) ++acc.losses_by_cause[cause];
  }
}

}  // namespace

WinRateReport montecarlo(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw MirrorError(ErrorCode::InvalidConfig, "trials must be >= 1");
  // Resolve both keys once so registry errors surface before any game runs.
  (void)make_strategy(spec.alice, Player::Alice, spec.config, spec.master_seed);
  (void)make_strategy(spec.bob, Player::Bob, spec.config, spec.master_seed);

  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : spec.threads;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, spec.trials));

  std::vector<WinRateReport> partial(threads);
  if (threads == 1) {
    run_block(spec, 0, spec.trials, partial[0]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(threads);
    const std::uint64_t chunk = (spec.trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t first = std::min(spec.trials, w * chunk);
      const std::uint64_t last = std::min(spec.trials, first + chunk);
      workers.emplace_back([&, w, first, last] {
        try {
          run_block(spec, first, last, partial[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  WinRateReport report;
  for (const auto& p : partial) {
    report.trials += p.trials;
    report.both_win += p.both_win;
    report.alice_loses += p.alice_loses;
    report.bob_loses += p.bob_loses;
    for (const auto& [cause, count] : p.losses_by_cause) report.losses_by_cause[cause] += count;
  }
  report.alice_wins = report.trials - report.alice_loses;
  report.win_rate = static_cast<double>(report.alice_wins) / static_cast<double>(report.trials);
  report.ci95 = binomial_ci95(report.alice_wins, report.trials);
  return report;
}

MemoryReport memory_profile(const ExperimentSpec& spec) {
  MemoryReport report;
  {
    const auto alice = make_strategy(spec.alice, Player::Alice, spec.config, spec.master_seed);
    const auto bob = make_strategy(spec.bob, Player::Bob, spec.config, spec.master_seed);
    report.alice.strategy = alice->name();
    report.bob.strategy = bob->name();
  }

  StateObserver observer = [&report](Player p, int round, std::size_t bits) {
    PlayerMemory& mem = p == Player::Alice ? report.alice : report.bob;
    const auto slot = static_cast<std::size_t>(round);
    if (mem.per_round_max_bits.size() <= slot) mem.per_round_max_bits.resize(slot + 1, 0);
    mem.per_round_max_bits[slot] = std::max(mem.per_round_max_bits[slot], bits);
    mem.overall_max_bits = std::max(mem.overall_max_bits, bits);
  };

  for (std::uint64_t t = 0; t < spec.trials; ++t) {
    const std::uint64_t seed = trial_seed(spec.master_seed, t);
    auto alice = make_strategy(spec.alice, Player::Alice, spec.config, seed);
    auto bob = make_strategy(spec.bob, Player::Bob, spec.config, seed);
    report.alice.budget_bits = std::max(report.alice.budget_bits, alice->budget_bits());
    report.bob.budget_bits = std::max(report.bob.budget_bits, bob->budget_bits());
    try {
      (void)run_game(*alice, *bob, spec.config, seed, &observer);
    } catch (const StrategyFault& fault) {
      if (fault.code() != ErrorCode::BudgetExceeded) throw;
      report.within_budget = false;
      if (!report.violation) {
        report.violation = std::string(fault.what()) + " [trial " + std::to_string(t) + "]";
      }
    }
  }
  return report;
}

// --- exhaustive opponent trees ---------------------------------------------

namespace {

enum class Leaf { Complete, SubjectLoss, OpponentForced, RoundLimit };

class OpponentTree {
 public:
  using Visit = std::function<void(Leaf, const std::vector<char>&, const std::vector<int>&)>;

  OpponentTree(Player role, const GameConfig& config, int stop_after_round,
               std::uint64_t max_leaves, Visit visit)
      : role_(role),
        config_(config),
        stop_after_round_(stop_after_round),
        max_leaves_(max_leaves),
        visit_(std::move(visit)),
        said_(static_cast<std::size_t>(config.n) + 1, 0) {}

  void run(const Strategy& prototype, std::uint64_t seed) {
    auto subject = prototype.clone();
    Rng rng(derive_seed(seed, role_ == Player::Alice ? 1 : 2));
    subject->begin(rng);
    check_budget(*subject, 0);
    step(*subject, rng, 1, Player::Alice);
  }

 private:
  void leaf(Leaf kind) {
    if (++leaves_ > max_leaves_) {
      throw MirrorError(ErrorCode::TooLarge, "opponent tree exceeds " +
                                                 std::to_string(max_leaves_) + " games");
    }
    visit_(kind, said_, path_);
  }

  void check_budget(const Strategy& s, int round) const {
    const std::size_t bits = measure_state(s);
    if (bits > s.budget_bits()) {
      throw StrategyFault(ErrorCode::BudgetExceeded, role_, round,
                          s.name() + " holds " + std::to_string(bits) + " bits, budget " +
                              std::to_string(s.budget_bits()));
    }
  }

  void mark(int x) {
    said_[static_cast<std::size_t>(x)] = 1;
    ++said_count_;
    path_.push_back(x);
  }
  void unmark(int x) {
    said_[static_cast<std::size_t>(x)] = 0;
    --said_count_;
    path_.pop_back();
  }

  void next(Strategy& s, Rng& rng, int round, Player mover) {
    if (mover == Player::Alice) {
      step(s, rng, round, Player::Bob);
    } else if (stop_after_round_ > 0 && round >= stop_after_round_) {
      leaf(Leaf::RoundLimit);
    } else {
      step(s, rng, round + 1, Player::Alice);
    }
  }

  void step(Strategy& s, Rng& rng, int round, Player mover) {
    if (mover == role_) {
      subject_move(s, rng, round);
    } else {
      tuple_.clear();
      opponent_move(s, rng, round);
    }
  }

  void subject_move(Strategy& s, Rng& rng, int round) {
    Move move;
    s.respond(TurnInfo{round, said_count_}, rng, move);
    check_budget(s, round);
    if (static_cast<int>(move.size()) != config_.quota(role_)) {
      throw StrategyFault(ErrorCode::MalformedMove, role_, round, s.name() + " wrong length");
    }
    std::size_t applied = 0;
    bool lost = false;
    for (const int x : move) {
      if (x < 1 || x > config_.n) {
        throw StrategyFault(ErrorCode::MalformedMove, role_, round, s.name() + " out of range");
      }
      if (said_[static_cast<std::size_t>(x)] != 0) {
        path_.push_back(x);
        leaf(Leaf::SubjectLoss);
        path_.pop_back();
        lost = true;
        break;
      }
      mark(x);
      ++applied;
    }
    if (!lost) {
      if (said_count_ == config_.n) {
        leaf(Leaf::Complete);
      } else {
        next(s, rng, round, role_);
      }
    }
    for (std::size_t i = applied; i-- > 0;) unmark(move[i]);
  }

  void opponent_move(Strategy& s, Rng& rng, int round) {
    const Player mover = opponent(role_);
    const int quota = config_.quota(mover);
    if (static_cast<int>(tuple_.size()) == 0 && config_.n - said_count_ < quota) {
      leaf(Leaf::OpponentForced);
      return;
    }
    if (static_cast<int>(tuple_.size()) == quota) {
      if (said_count_ == config_.n) {
        leaf(Leaf::Complete);
        return;
      }
      auto branch = s.clone();
      Rng branch_rng = rng;
      branch->observe(tuple_, TurnInfo{round, said_count_});
      check_budget(*branch, round);
      const std::vector<int> saved = tuple_;
      next(*branch, branch_rng, round, mover);
      tuple_ = saved;
      return;
    }
    for (int x = 1; x <= config_.n; ++x) {
      if (said_[static_cast<std::size_t>(x)] != 0) continue;
      mark(x);
      tuple_.push_back(x);
      opponent_move(s, rng, round);
      tuple_.pop_back();
      unmark(x);
    }
  }

  Player role_;
  GameConfig config_;
  int stop_after_round_;
  std::uint64_t max_leaves_;
  Visit visit_;
  std::vector<char> said_;
  int said_count_ = 0;
  std::vector<int> path_;
  std::vector<int> tuple_;
  std::uint64_t leaves_ = 0;
};

}  // namespace

ExhaustiveResult explore_all_opponents(const Strategy& subject, Player role,
                                       const GameConfig& config, std::uint64_t seed,
                                       std::uint64_t max_games) {
  if (subject.quota() != config.quota(role)) {
    throw MirrorError(ErrorCode::QuotaMismatch, "subject quota does not match the config");
  }
  ExhaustiveResult result;
  OpponentTree tree(role, config, 0, max_games,
                    [&result](Leaf kind, const std::vector<char>&, const std::vector<int>& path) {
                      ++result.games;
                      if (kind == Leaf::SubjectLoss) {
                        if (result.subject_losses++ == 0) result.counterexample = path;
                      } else if (kind == Leaf::OpponentForced) {
                        ++result.opponent_forced;
                      }
                    });
  tree.run(subject, seed);
  return result;
}

OccurringFamily enumerate_occurring(const Strategy& alice, const GameConfig& config, int r,
                                    std::uint64_t seed, int max_n) {
  if (config.n > max_n || config.n > 63) {
    throw MirrorError(ErrorCode::TooLarge, "occurring-set enumeration is limited to n <= " +
                                               std::to_string(std::min(max_n, 63)));
  }
  if (r < 1 || r * (config.a + config.b) > config.n) {
    throw MirrorError(ErrorCode::OutOfRange, "need 1 <= r and r (a + b) <= n");
  }
  if (alice.quota() != config.a) {
    throw MirrorError(ErrorCode::QuotaMismatch, "Alice's quota does not match the config");
  }
  std::set<Mask> found;
  OpponentTree tree(Player::Alice, config, r, 100'000'000,
                    [&found](Leaf kind, const std::vector<char>& said, const std::vector<int>&) {
                      if (kind != Leaf::RoundLimit) return;
                      Mask m = 0;
                      for (std::size_t x = 1; x < said.size(); ++x) {
                        if (said[x] != 0) m |= Mask{1} << (x - 1);
                      }
                      found.insert(m);
                    });
  tree.run(alice, seed);
  return OccurringFamily{r, SetFamily::make(config.n, {found.begin(), found.end()})};
}

nlohmann::ordered_json to_json(const WinRateReport& report) {
  nlohmann::ordered_json j;
  j["trials"] = report.trials;
  j["alice_wins"] = report.alice_wins;
  j["win_rate"] = report.win_rate;
  j["ci95"] = {report.ci95.low, report.ci95.high};
  j["ci_method"] = report.ci95.method;
  j["outcomes"] = {{"BothWin", report.both_win},
                   {"AliceLoses", report.alice_loses},
                   {"BobLoses", report.bob_loses}};
  nlohmann::ordered_json causes = nlohmann::ordered_json::object();
  for (const auto& [cause, count] : report.losses_by_cause) causes[cause] = count;
  j["losses_by_cause"] = std::move(causes);
  return j;
}

nlohmann::ordered_json to_json(const MemoryReport& report) {
  auto player = [](const PlayerMemory& m) {
    nlohmann::ordered_json j;
    j["strategy"] = m.strategy;
    j["budget_bits"] = m.budget_bits;
    j["overall_max_bits"] = m.overall_max_bits;
    j["per_turn_max_bits"] = m.per_round_max_bits;
    return j;
  };
  nlohmann::ordered_json j;
  j["alice"] = player(report.alice);
  j["bob"] = player(report.bob);
  j["within_budget"] = report.within_budget;
  if (report.violation) j["violation"] = *report.violation;
  return j;
}

}  // namespace mirror
