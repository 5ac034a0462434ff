#include "mirror/engine.hpp"

#include <algorithm>
#include <string>

namespace mirror {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::QuotaMismatch: return "QuotaMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MalformedMove: return "MalformedMove";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateModulus: return "DegenerateModulus";
    case ErrorCode::InconsistentSketch: return "InconsistentSketch";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::EvenN: return "EvenN";
    case ErrorCode::Indivisible: return "Indivisible";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotModtown: return "NotModtown";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownStrategy: return "UnknownStrategy";
  }
  return "Unknown";
}

const char* to_string(Player p) { return p == Player::Alice ? "A" : "B"; }

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::AliceLoses: return "AliceLoses";
    case Outcome::BobLoses: return "BobLoses";
    case Outcome::BothWin: return "BothWin";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GameConfig GameConfig::make(int n, int a, int b) {
  if (n < 1 || a < 1 || b < 1) {
    throw MirrorError(ErrorCode::InvalidConfig, "n, a, b must all be positive");
  }
  if (a + b > n) {
    throw MirrorError(ErrorCode::InvalidConfig,
                      "a + b = " + std::to_string(a + b) + " exceeds n = " + std::to_string(n));
  }
  return GameConfig{n, a, b};
}

std::size_t measure_state(const Strategy& strategy) {
  StateEncoder enc;
  strategy.encode_state(enc);
  return enc.size();
}

std::vector<bool> serialize_state(const Strategy& strategy) {
  StateEncoder enc(/*record=*/true);
  strategy.encode_state(enc);
  return enc.bits();
}

void Transcript::append(Player player, int round, std::span<const int> nums) {
  moves.push_back(MoveEntry{player, round, static_cast<std::uint32_t>(utterances.size()),
                            static_cast<std::uint32_t>(nums.size())});
  utterances.insert(utterances.end(), nums.begin(), nums.end());
}

namespace {

void check_budget(const Strategy& s, Player p, int round, const StateObserver* observer) {
  const std::size_t bits = measure_state(s);
  if (observer != nullptr) (*observer)(p, round, bits);
  if (bits > s.budget_bits()) {
    throw StrategyFault(ErrorCode::BudgetExceeded, p, round,
                        s.name() + " holds " + std::to_string(bits) + " bits, budget " +
                            std::to_string(s.budget_bits()) + " (player " + to_string(p) +
                            ", round " + std::to_string(round) + ")");
  }
}

}  // namespace

Transcript run_game(Strategy& alice, Strategy& bob, const GameConfig& config, std::uint64_t seed,
                    const StateObserver* observer) {
  if (alice.quota() != config.a || bob.quota() != config.b) {
    throw MirrorError(ErrorCode::QuotaMismatch, "strategy quotas (" +
                                                    std::to_string(alice.quota()) + "," +
                                                    std::to_string(bob.quota()) +
                                                    ") do not match the game config");
  }
  const int n = config.n;

  Transcript t;
  t.config = config;
  t.seed = seed;
  t.utterances.reserve(static_cast<std::size_t>(n + std::max(config.a, config.b)));
  t.moves.reserve(static_cast<std::size_t>(2 * config.max_rounds()));

  Rng alice_rng(derive_seed(seed, 1));
  Rng bob_rng(derive_seed(seed, 2));
  Strategy* players[2] = {&alice, &bob};
  Rng* rngs[2] = {&alice_rng, &bob_rng};

  alice.begin(alice_rng);
  check_budget(alice, Player::Alice, 0, observer);
  bob.begin(bob_rng);
  check_budget(bob, Player::Bob, 0, observer);

  std::vector<char> said(static_cast<std::size_t>(n) + 1, 0);
  int said_count = 0;
  Move move;

  for (int round = 1;; ++round) {
    for (const Player mover : {Player::Alice, Player::Bob}) {
      const int idx = mover == Player::Alice ? 0 : 1;
      Strategy& s = *players[idx];
      const TurnInfo turn{round, said_count};

      move.clear();
      s.respond(turn, *rngs[idx], move);
      check_budget(s, mover, round, observer);

      const int quota = config.quota(mover);
      if (static_cast<int>(move.size()) != quota) {
        throw StrategyFault(ErrorCode::MalformedMove, mover, round,
                            s.name() + " emitted " + std::to_string(move.size()) +
                                " numbers, quota is " + std::to_string(quota));
      }
      for (const int x : move) {
        if (x < 1 || x > n) {
          throw StrategyFault(ErrorCode::MalformedMove, mover, round,
                              s.name() + " emitted " + std::to_string(x) + " outside [1, " +
                                  std::to_string(n) + "]");
        }
      }

      for (std::size_t i = 0; i < move.size(); ++i) {
        const int x = move[i];
        if (said[static_cast<std::size_t>(x)] != 0) {
          t.append(mover, round, std::span<const int>(move).first(i + 1));
          t.outcome = mover == Player::Alice ? Outcome::AliceLoses : Outcome::BobLoses;
          t.losing_number = x;
          return t;
        }
        said[static_cast<std::size_t>(x)] = 1;
        ++said_count;
      }
      t.append(mover, round, move);
      if (said_count == n) {
        t.outcome = Outcome::BothWin;
        return t;
      }

      const int other = 1 - idx;
      players[other]->observe(move, TurnInfo{round, said_count});
      check_budget(*players[other], opponent(mover), round, observer);
    }
  }
}

bool replay(const Transcript& t) {
  const GameConfig& c = t.config;
  if (c.n < 1 || c.a < 1 || c.b < 1 || c.a + c.b > c.n) return false;
  if (t.moves.empty()) return false;

  std::vector<char> said(static_cast<std::size_t>(c.n) + 1, 0);
  int said_count = 0;
  std::size_t expected_offset = 0;

  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const MoveEntry& m = t.moves[i];
    const Player expected_player = i % 2 == 0 ? Player::Alice : Player::Bob;
    if (m.player != expected_player) return false;
    if (m.round != static_cast<int>(i / 2) + 1) return false;
    if (m.offset != expected_offset || m.offset + m.length > t.utterances.size()) return false;
    expected_offset += m.length;

    const bool last = i + 1 == t.moves.size();
    const int quota = c.quota(m.player);
    if (static_cast<int>(m.length) > quota || m.length == 0) return false;
    if (!last && static_cast<int>(m.length) != quota) return false;

    const auto nums = t.numbers(i);
    for (std::size_t j = 0; j < nums.size(); ++j) {
      const int x = nums[j];
      if (x < 1 || x > c.n) return false;
      if (said[static_cast<std::size_t>(x)] != 0) {
        // A repeat must be the final utterance of the game and match the outcome.
        if (!last || j + 1 != nums.size()) return false;
        const Outcome loss =
            m.player == Player::Alice ? Outcome::AliceLoses : Outcome::BobLoses;
        return t.outcome == loss && t.losing_number == x;
      }
      said[static_cast<std::size_t>(x)] = 1;
      ++said_count;
    }
    if (static_cast<int>(m.length) != quota) return false;  // truncation only on a loss
    if (said_count == c.n) {
      return last && t.outcome == Outcome::BothWin && !t.losing_number.has_value();
    }
  }
  return false;
}

nlohmann::ordered_json to_json(const Transcript& t) {
  nlohmann::ordered_json j;
  j["config"] = {{"n", t.config.n}, {"a", t.config.a}, {"b", t.config.b}};
  auto moves = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < t.moves.size(); ++i) {
    const auto nums = t.numbers(i);
    nlohmann::ordered_json m;
    m["player"] = to_string(t.moves[i].player);
    m["numbers"] = std::vector<int>(nums.begin(), nums.end());
    moves.push_back(std::move(m));
  }
  j["moves"] = std::move(moves);
  j["outcome"] = to_string(t.outcome);
  if (t.losing_number) j["losing_number"] = *t.losing_number;
  if (t.seed) {
    j["seed"] = *t.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

Transcript transcript_from_json(const nlohmann::ordered_json& j) {
  Transcript t;
  const auto& cfg = j.at("config");
  t.config = GameConfig{cfg.at("n").get<int>(), cfg.at("a").get<int>(), cfg.at("b").get<int>()};
  int index = 0;
  for (const auto& m : j.at("moves")) {
    const std::string who = m.at("player").get<std::string>();
    if (who != "A" && who != "B") {
      throw MirrorError(ErrorCode::MalformedMove, "player must be \"A\" or \"B\"");
    }
    const auto nums = m.at("numbers").get<std::vector<int>>();
    t.append(who == "A" ? Player::Alice : Player::Bob, index / 2 + 1, nums);
    ++index;
  }
  const std::string outcome = j.at("outcome").get<std::string>();
  if (outcome == "AliceLoses") {
    t.outcome = Outcome::AliceLoses;
  } else if (outcome == "BobLoses") {
    t.outcome = Outcome::BobLoses;
  } else if (outcome == "BothWin") {
    t.outcome = Outcome::BothWin;
  } else {
    throw MirrorError(ErrorCode::MalformedMove, "unknown outcome " + outcome);
  }
  if (j.contains("losing_number") && !j["losing_number"].is_null()) {
    t.losing_number = j["losing_number"].get<int>();
  }
  if (j.contains("seed") && !j["seed"].is_null()) t.seed = j["seed"].get<std::uint64_t>();
  return t;
}

}  // namespace mirror
