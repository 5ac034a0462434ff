#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirror/bits.hpp"
#include "mirror/error.hpp"

namespace mirror {

enum class Player : std::uint8_t { Alice, Bob };
enum class Outcome : std::uint8_t { AliceLoses, BobLoses, BothWin };

const char* to_string(Player p);
const char* to_string(Outcome o);
constexpr Player opponent(Player p) { return p == Player::Alice ? Player::Bob : Player::Alice; }

using Rng = std::mt19937_64;
using Move = std::vector<int>;

/// splitmix64 finalizer over (master, index); used for every derived stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Parameters of the (a,b)-mirror game on [n]: Alice says a numbers per
/// round, Bob says b.
struct GameConfig {
  int n = 0;
  int a = 1;
  int b = 1;

  /// Throws InvalidConfig unless n, a, b >= 1 and a + b <= n.
  static GameConfig make(int n, int a = 1, int b = 1);

  int quota(Player p) const { return p == Player::Alice ? a : b; }
  int max_rounds() const { return (n + a + b - 1) / (a + b); }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

/// Both views of the clock. Rounds count Alice+Bob move pairs from 1;
/// said_count is the number of utterances before the current move, which
/// is the single-number "turn" of the (1,1)-game minus one.
struct TurnInfo {
  int round = 1;
  int said_count = 0;
};

/// A memory-bounded strategy: initial state, transition on the opponent's
/// move, and an output map.
///
/// `observe` is the transition. `respond` is the output map; it may also
/// record the strategy's own utterance, since that is a function of the
/// state it was computed from. The random tape (`rng`), any matching oracle
/// and the TurnInfo argument are inputs and are not charged to the budget.
/// Only what `encode_state` writes is.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string name() const = 0;
  virtual int quota() const = 0;
  virtual std::size_t budget_bits() const = 0;

  virtual void begin(Rng& rng) { (void)rng; }
  virtual void observe(std::span<const int> opponent_move, const TurnInfo& turn) = 0;
  virtual void respond(const TurnInfo& turn, Rng& rng, Move& out) = 0;

  /// Canonical state encoding; measure_state is the number of bits written.
  virtual void encode_state(StateEncoder& enc) const = 0;

  virtual std::unique_ptr<Strategy> clone() const = 0;
};

std::size_t measure_state(const Strategy& strategy);
std::vector<bool> serialize_state(const Strategy& strategy);

/// Raised when a strategy breaks its contract (over budget, malformed move).
class StrategyFault : public MirrorError {
 public:
  StrategyFault(ErrorCode code, Player player, int round, const std::string& what)
      : MirrorError(code, what), player_(player), round_(round) {}

  Player player() const noexcept { return player_; }
  int round() const noexcept { return round_; }

 private:
  Player player_;
  int round_;
};

struct MoveEntry {
  Player player = Player::Alice;
  int round = 1;
  std::uint32_t offset = 0;  // index of the first number in `utterances`
  std::uint32_t length = 0;
};

struct Transcript {
  GameConfig config;
  std::vector<MoveEntry> moves;
  std::vector<int> utterances;  // every number in the order it was said
  Outcome outcome = Outcome::BothWin;
  std::optional<int> losing_number;
  std::optional<std::uint64_t> seed;

  std::span<const int> numbers(std::size_t move_index) const {
    const auto& m = moves[move_index];
    return std::span<const int>(utterances).subspan(m.offset, m.length);
  }
  void append(Player player, int round, std::span<const int> numbers);
};

/// Per-transition hook: (player, round, measured state bits).
using StateObserver = std::function<void(Player, int, std::size_t)>;

/// Referees one game. The mover of a short final round must still produce
/// a full quota, so any forced repeat loses. Throws StrategyFault on a
/// budget overrun or a malformed move, MirrorError(QuotaMismatch) when a
/// strategy's quota disagrees with the config.
Transcript run_game(Strategy& alice, Strategy& bob, const GameConfig& config,
                    std::uint64_t seed, const StateObserver* observer = nullptr);

/// Re-checks every transcript invariant against the recorded moves.
bool replay(const Transcript& transcript);

nlohmann::ordered_json to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::ordered_json& j);

}  // namespace mirror
