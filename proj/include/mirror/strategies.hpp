#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mirror/engine.hpp"
#include "mirror/matching.hpp"
#include "mirror/streamrec.hpp"

namespace mirror {

// ---------------------------------------------------------------------------
// Low-memory strategies
// ---------------------------------------------------------------------------

/// Bob in the (1,1)-game: answers x with n + 1 - x.
/// State: the pending reply, bits_for(n) bits.
class BobMirror final : public Strategy {
 public:
  explicit BobMirror(int n);

  std::string name() const override { return "mirror"; }
  int quota() const override { return 1; }
  std::size_t budget_bits() const override { return bits_for(static_cast<std::uint64_t>(n_)); }
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<BobMirror>(*this); }

 private:
  int n_;
  int pending_ = 0;
};

/// Bob in the (1,b)-game with (b+1) | n: [n] is cut into consecutive
/// (b+1)-tuples and Bob completes whichever tuple Alice just opened.
class BobTupleMirror final : public Strategy {
 public:
  BobTupleMirror(int n, int b);

  std::string name() const override { return "tuple-mirror"; }
  int quota() const override { return b_; }
  std::size_t budget_bits() const override { return bits_for(static_cast<std::uint64_t>(n_)); }
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<BobTupleMirror>(*this);
  }

 private:
  int n_;
  int b_;
  int pending_ = 0;
};

/// Alice for odd n: opens with n, then mirrors [n-1] by answering y with n - y.
class AliceOddMirror final : public Strategy {
 public:
  explicit AliceOddMirror(int n);

  std::string name() const override { return "odd-mirror"; }
  int quota() const override { return 1; }
  std::size_t budget_bits() const override { return bits_for(static_cast<std::uint64_t>(n_)); }
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<AliceOddMirror>(*this);
  }

 private:
  int n_;
  int pending_ = 0;
};

/// Alice with a random matching M: opens with a uniform x, then answers y
/// with M(y). State: x and the pending reply.
class AliceRandLog final : public Strategy {
 public:
  /// `forced_start` pins x instead of sampling it.
  AliceRandLog(int n, MatchingOracle oracle, std::optional<int> forced_start = std::nullopt);

  std::string name() const override { return "rand-log"; }
  int quota() const override { return 1; }
  std::size_t budget_bits() const override {
    return 2 * bits_for(static_cast<std::uint64_t>(n_));
  }
  void begin(Rng& rng) override;
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<AliceRandLog>(*this);
  }

  int start() const noexcept { return start_; }
  const MatchingOracle& oracle() const noexcept { return oracle_; }

 private:
  int n_;
  MatchingOracle oracle_;
  std::optional<int> forced_start_;
  int start_ = 0;
  int pending_ = 0;
};

/// Alice with a random matching plus r = ceil(sqrt n) backup numbers and a
/// power-sum sketch of every number said so far.
///
/// Mid-game she answers y with M(y); when M(y) is a backup that has already
/// been said she substitutes an unsaid backup, and gives up with a uniform
/// guess once the backups are exhausted. Once at most k numbers remain she
/// recovers them from the sketch and says them smallest first.
///
/// Canonical state: a phase bit, then either (backups, said flags, sketch,
/// pending reply) mid-game or (remaining count, remaining numbers) in the
/// endgame.
class AliceRandSqrt final : public Strategy {
 public:
  AliceRandSqrt(int n, MatchingOracle oracle);

  std::string name() const override { return "rand-sqrt"; }
  int quota() const override { return 1; }
  std::size_t budget_bits() const override;
  void begin(Rng& rng) override;
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<AliceRandSqrt>(*this);
  }

  int backup_count() const noexcept { return r_; }
  std::size_t sketch_size() const noexcept { return k_; }
  const std::vector<int>& backups() const noexcept { return backups_; }
  bool in_endgame() const noexcept { return endgame_; }
  bool gave_up() const noexcept { return gave_up_; }
  int substitutions() const noexcept { return substitutions_; }

 private:
  void mark_said(int x);
  int say(int x);
  int backup_index(int x) const;

  int n_;
  MatchingOracle oracle_;
  int r_;
  std::size_t k_;
  std::vector<int> backups_;  // sorted
  std::vector<char> backup_said_;
  PowerSumSketch sketch_;
  int pending_ = 0;
  bool endgame_ = false;
  std::vector<int> remaining_;  // endgame only, sorted

  // Instrumentation, not part of the strategy state.
  bool gave_up_ = false;
  int substitutions_ = 0;
};

// ---------------------------------------------------------------------------
// Full-memory strategies
// ---------------------------------------------------------------------------

/// A strategy that remembers every said number in an n-bit map and picks
/// fresh numbers by a fixed rule. When fewer fresh numbers remain than its
/// quota it fills the move with the smallest numbers not already in it,
/// which forces a repeat.
class UnsaidPicker final : public Strategy {
 public:
  enum class Rule {
    Smallest,   // smallest unsaid
    Largest,    // largest unsaid
    Uniform,    // uniform over unsaid, from the random tape
    PreferSet,  // smallest unsaid in `set`, else smallest unsaid overall
    AvoidSet,   // smallest unsaid outside `set`, else smallest unsaid in it
  };

  UnsaidPicker(std::string name, int n, int quota, Rule rule, std::vector<int> set = {},
               bool with_counter = false);

  std::string name() const override { return name_; }
  int quota() const override { return quota_; }
  std::size_t budget_bits() const override;
  void observe(std::span<const int> opponent_move, const TurnInfo& turn) override;
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<UnsaidPicker>(*this);
  }

  bool is_said(int x) const { return said_[static_cast<std::size_t>(x)] != 0; }

 private:
  void mark(int x);
  int pick(Rng& rng);

  std::string name_;
  int n_;
  int quota_;
  Rule rule_;
  std::vector<char> in_set_;
  std::vector<int> set_sorted_;
  bool with_counter_;

  std::vector<char> said_;  // canonical state
  int said_count_ = 0;

  // Caches derived from said_; not part of the canonical state.
  int low_cursor_ = 1;
  int high_cursor_ = 0;
  std::vector<int> unsaid_list_;
  std::vector<int> unsaid_pos_;
};

/// Stateless: always says v, v+1, ... (wrapping in [n]).
class ConstantStrategy final : public Strategy {
 public:
  ConstantStrategy(int n, int quota, int value);

  std::string name() const override { return "constant:" + std::to_string(value_); }
  int quota() const override { return quota_; }
  std::size_t budget_bits() const override { return 0; }
  void observe(std::span<const int>, const TurnInfo&) override {}
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder&) const override {}
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<ConstantStrategy>(*this);
  }

 private:
  int n_;
  int quota_;
  int value_;
};

/// Plays a fixed list of numbers, quota at a time; state is the read position.
class ScriptedStrategy final : public Strategy {
 public:
  ScriptedStrategy(int n, int quota, std::vector<int> script);

  std::string name() const override;
  int quota() const override { return quota_; }
  std::size_t budget_bits() const override { return bits_for(script_.size()); }
  void observe(std::span<const int>, const TurnInfo&) override {}
  void respond(const TurnInfo& turn, Rng& rng, Move& out) override;
  void encode_state(StateEncoder& enc) const override;
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<ScriptedStrategy>(*this);
  }

 private:
  int n_;
  int quota_;
  std::vector<int> script_;
  std::size_t position_ = 0;
};

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

std::unique_ptr<Strategy> bob_mirror(int n);
std::unique_ptr<Strategy> bob_tuple_mirror(int n, int b);
std::unique_ptr<Strategy> alice_odd_mirror(int n);
std::unique_ptr<Strategy> alice_naive(int n, int quota = 1);
std::unique_ptr<Strategy> alice_rand_log(int n, MatchingOracle oracle);
std::unique_ptr<Strategy> alice_rand_sqrt(int n, MatchingOracle oracle);
std::unique_ptr<Strategy> adversary_smallest_unsaid(int n, int quota);
std::unique_ptr<Strategy> adversary_largest_unsaid(int n, int quota);
std::unique_ptr<Strategy> adversary_random_unsaid(int n, int quota);
std::unique_ptr<Strategy> adversary_prefer_T(int n, int quota, std::vector<int> T);
std::unique_ptr<Strategy> adversary_avoid_D(int n, int quota, std::vector<int> D);

/// Builds a strategy from a registry key such as "bob:mirror",
/// "alice:rand-sqrt" or "prefer-T:2,4". The role prefix is optional but must
/// agree with `role` when present. Strategies that need a matching oracle
/// sample it from `seed`. Throws MirrorError(UnknownStrategy) for unknown
/// keys and the factory's own errors for bad parameters.
std::unique_ptr<Strategy> make_strategy(std::string_view key, Player role,
                                        const GameConfig& config, std::uint64_t seed);

/// Registry keys with a one-line description each.
std::vector<std::pair<std::string, std::string>> strategy_catalog();

}  // namespace mirror
