#include "mirror/strategies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace mirror {

namespace {

unsigned width_of(int n) { return bits_for(static_cast<std::uint64_t>(n)); }

void require_even(int n, const char* who) {
  if (n < 2 || n % 2 != 0) {
    throw MirrorError(ErrorCode::OddN, std::string(who) + " needs an even n, got " +
                                           std::to_string(n));
  }
}

}  // namespace

// --- BobMirror -------------------------------------------------------------

BobMirror::BobMirror(int n) : n_(n) { require_even(n, "bob_mirror"); }

void BobMirror::observe(std::span<const int> opponent_move, const TurnInfo&) {
  pending_ = opponent_move.front();
}

void BobMirror::respond(const TurnInfo&, Rng&, Move& out) {
  out.push_back(pending_ == 0 ? 1 : n_ + 1 - pending_);
}

void BobMirror::encode_state(StateEncoder& enc) const {
  enc.put(static_cast<std::uint64_t>(pending_), width_of(n_));
}

// --- BobTupleMirror --------------------------------------------------------

BobTupleMirror::BobTupleMirror(int n, int b) : n_(n), b_(b) {
  if (b < 1 || n < b + 1 || n % (b + 1) != 0) {
    throw MirrorError(ErrorCode::Indivisible, "tuple mirror needs (b+1) | n; b = " +
                                                  std::to_string(b) + ", n = " +
                                                  std::to_string(n));
  }
}

void BobTupleMirror::observe(std::span<const int> opponent_move, const TurnInfo&) {
  pending_ = opponent_move.front();
}

void BobTupleMirror::respond(const TurnInfo&, Rng&, Move& out) {
  const int x = pending_ == 0 ? 1 : pending_;
  const int first = (x - 1) / (b_ + 1) * (b_ + 1) + 1;
  for (int y = first; y <= first + b_; ++y) {
    if (y != x) out.push_back(y);
  }
}

void BobTupleMirror::encode_state(StateEncoder& enc) const {
  enc.put(static_cast<std::uint64_t>(pending_), width_of(n_));
}

// --- AliceOddMirror --------------------------------------------------------

AliceOddMirror::AliceOddMirror(int n) : n_(n) {
  if (n < 1 || n % 2 == 0) {
    throw MirrorError(ErrorCode::EvenN, "odd mirror needs an odd n, got " + std::to_string(n));
  }
}

void AliceOddMirror::observe(std::span<const int> opponent_move, const TurnInfo&) {
  pending_ = opponent_move.front();
}

void AliceOddMirror::respond(const TurnInfo&, Rng&, Move& out) {
  // pending_ == 0 only before Bob has spoken.
  out.push_back(pending_ == 0 ? n_ : n_ - pending_);
}

void AliceOddMirror::encode_state(StateEncoder& enc) const {
  enc.put(static_cast<std::uint64_t>(pending_), width_of(n_));
}

// --- AliceRandLog ----------------------------------------------------------

AliceRandLog::AliceRandLog(int n, MatchingOracle oracle, std::optional<int> forced_start)
    : n_(n), oracle_(std::move(oracle)), forced_start_(forced_start) {
  require_even(n, "alice_rand_log");
  if (oracle_.n() != n) {
    throw MirrorError(ErrorCode::DimensionMismatch, "oracle is over a different n");
  }
  if (forced_start && (*forced_start < 1 || *forced_start > n)) {
    throw MirrorError(ErrorCode::OutOfRange, "forced start outside [n]");
  }
}

void AliceRandLog::begin(Rng& rng) {
  pending_ = 0;
  if (forced_start_) {
    start_ = *forced_start_;
  } else {
    start_ = std::uniform_int_distribution<int>(1, n_)(rng);
  }
}

void AliceRandLog::observe(std::span<const int> opponent_move, const TurnInfo&) {
  pending_ = opponent_move.front();
}

void AliceRandLog::respond(const TurnInfo&, Rng&, Move& out) {
  out.push_back(pending_ == 0 ? start_ : oracle_.match(pending_));
}

void AliceRandLog::encode_state(StateEncoder& enc) const {
  enc.put(static_cast<std::uint64_t>(start_), width_of(n_));
  enc.put(static_cast<std::uint64_t>(pending_), width_of(n_));
}

// --- AliceRandSqrt ---------------------------------------------------------

namespace {

int backup_count_for(int n) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return r;
}

std::size_t sketch_size_for(int n, int r) {
  const double k = std::ceil(static_cast<double>(r) * std::log2(static_cast<double>(n)));
  return std::min(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
}

}  // namespace

AliceRandSqrt::AliceRandSqrt(int n, MatchingOracle oracle)
    : n_(n),
      oracle_(std::move(oracle)),
      r_(backup_count_for(n)),
      k_(sketch_size_for(n, r_)),
      sketch_(static_cast<std::uint64_t>(n), k_) {
  require_even(n, "alice_rand_sqrt");
  if (n < 16) {
    throw MirrorError(ErrorCode::OutOfRange, "alice_rand_sqrt needs n >= 16");
  }
  if (oracle_.n() != n) {
    throw MirrorError(ErrorCode::DimensionMismatch, "oracle is over a different n");
  }
}

std::size_t AliceRandSqrt::budget_bits() const {
  const std::size_t w = width_of(n_);
  const std::size_t r = static_cast<std::size_t>(r_);
  const std::size_t midgame = 1 + r * w + r + sketch_.encoded_bits() + w;
  const std::size_t endgame = 1 + bits_for(k_) + k_ * w;
  return std::max(midgame, endgame);
}

void AliceRandSqrt::begin(Rng& rng) {
  // Floyd's sampler: a uniform r-subset of [n].
  std::set<int> chosen;
  for (int j = n_ - r_ + 1; j <= n_; ++j) {
    const int t = std::uniform_int_distribution<int>(1, j)(rng);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  backups_.assign(chosen.begin(), chosen.end());
  backup_said_.assign(backups_.size(), 0);
  sketch_ = PowerSumSketch(static_cast<std::uint64_t>(n_), k_, sketch_.field());
  pending_ = 0;
  endgame_ = false;
  remaining_.clear();
  gave_up_ = false;
  substitutions_ = 0;
}

int AliceRandSqrt::backup_index(int x) const {
  const auto it = std::lower_bound(backups_.begin(), backups_.end(), x);
  return (it != backups_.end() && *it == x) ? static_cast<int>(it - backups_.begin()) : -1;
}

void AliceRandSqrt::mark_said(int x) {
  sketch_.ingest(static_cast<std::uint64_t>(x));
  const int i = backup_index(x);
  if (i >= 0) backup_said_[static_cast<std::size_t>(i)] = 1;
}

int AliceRandSqrt::say(int x) {
  mark_said(x);
  return x;
}

void AliceRandSqrt::observe(std::span<const int> opponent_move, const TurnInfo&) {
  const int y = opponent_move.front();
  if (endgame_) {
    const auto it = std::lower_bound(remaining_.begin(), remaining_.end(), y);
    if (it != remaining_.end() && *it == y) remaining_.erase(it);
    return;
  }
  mark_said(y);
  pending_ = y;
}

void AliceRandSqrt::respond(const TurnInfo& turn, Rng& rng, Move& out) {
  if (turn.said_count == 0) {
    const auto i = std::uniform_int_distribution<std::size_t>(0, backups_.size() - 1)(rng);
    out.push_back(say(backups_[i]));
    return;
  }

  if (!endgame_ && static_cast<std::size_t>(n_ - turn.said_count) <= k_) {
    const std::size_t missing = static_cast<std::size_t>(n_ - turn.said_count);
    const auto roots = recover_missing(sketch_, static_cast<std::uint64_t>(n_), missing);
    remaining_.assign(roots.begin(), roots.end());
    endgame_ = true;
    backups_.clear();
    backup_said_.clear();
    pending_ = 0;
  }
  if (endgame_) {
    // remaining_ is never empty here: the game ends as soon as [n] is said.
    out.push_back(remaining_.front());
    remaining_.erase(remaining_.begin());
    return;
  }

  const int z = oracle_.match(pending_);
  const int i = backup_index(z);
  if (i < 0 || backup_said_[static_cast<std::size_t>(i)] == 0) {
    out.push_back(say(z));
    return;
  }

  std::vector<int> unsaid;
  for (std::size_t j = 0; j < backups_.size(); ++j) {
    if (backup_said_[j] == 0) unsaid.push_back(backups_[j]);
  }
  if (unsaid.empty()) {
    gave_up_ = true;
    out.push_back(say(std::uniform_int_distribution<int>(1, n_)(rng)));
    return;
  }
  ++substitutions_;
  const auto j = std::uniform_int_distribution<std::size_t>(0, unsaid.size() - 1)(rng);
  out.push_back(say(unsaid[j]));
}

void AliceRandSqrt::encode_state(StateEncoder& enc) const {
  const unsigned w = width_of(n_);
  enc.put_flag(endgame_);
  if (endgame_) {
    enc.put(remaining_.size(), bits_for(k_));
    for (const int x : remaining_) enc.put(static_cast<std::uint64_t>(x), w);
    return;
  }
  for (const int x : backups_) enc.put(static_cast<std::uint64_t>(x), w);
  enc.put_bitmap(std::span<const char>(backup_said_));
  sketch_.encode(enc);
  enc.put(static_cast<std::uint64_t>(pending_), w);
}

// --- UnsaidPicker ----------------------------------------------------------

UnsaidPicker::UnsaidPicker(std::string name, int n, int quota, Rule rule, std::vector<int> set,
                           bool with_counter)
    : name_(std::move(name)),
      n_(n),
      quota_(quota),
      rule_(rule),
      in_set_(static_cast<std::size_t>(n) + 1, 0),
      with_counter_(with_counter),
      said_(static_cast<std::size_t>(n) + 1, 0),
      high_cursor_(n) {
  if (n < 1 || quota < 1) {
    throw MirrorError(ErrorCode::InvalidConfig, "picker needs n >= 1 and quota >= 1");
  }
  for (const int x : set) {
    if (x < 1 || x > n) {
      throw MirrorError(ErrorCode::OutOfRange,
                        "set element " + std::to_string(x) + " outside [1, " +
                            std::to_string(n) + "]");
    }
    in_set_[static_cast<std::size_t>(x)] = 1;
  }
  for (int x = 1; x <= n; ++x) {
    if (in_set_[static_cast<std::size_t>(x)] != 0) set_sorted_.push_back(x);
  }
  if (rule_ == Rule::Uniform) {
    unsaid_list_.resize(static_cast<std::size_t>(n));
    unsaid_pos_.resize(static_cast<std::size_t>(n) + 1);
    for (int x = 1; x <= n; ++x) {
      unsaid_list_[static_cast<std::size_t>(x - 1)] = x;
      unsaid_pos_[static_cast<std::size_t>(x)] = x - 1;
    }
  }
}

std::size_t UnsaidPicker::budget_bits() const {
  return static_cast<std::size_t>(n_) + (with_counter_ ? width_of(n_) : 0);
}

void UnsaidPicker::mark(int x) {
  auto& flag = said_[static_cast<std::size_t>(x)];
  if (flag != 0) return;
  flag = 1;
  ++said_count_;
  if (rule_ == Rule::Uniform) {
    const int pos = unsaid_pos_[static_cast<std::size_t>(x)];
    const int last = unsaid_list_.back();
    unsaid_list_[static_cast<std::size_t>(pos)] = last;
    unsaid_pos_[static_cast<std::size_t>(last)] = pos;
    unsaid_list_.pop_back();
  }
}

void UnsaidPicker::observe(std::span<const int> opponent_move, const TurnInfo&) {
  for (const int x : opponent_move) mark(x);
}

int UnsaidPicker::pick(Rng& rng) {
  while (low_cursor_ <= n_ && is_said(low_cursor_)) ++low_cursor_;
  if (low_cursor_ > n_) return 0;

  switch (rule_) {
    case Rule::Smallest:
      return low_cursor_;
    case Rule::Largest:
      while (high_cursor_ >= 1 && is_said(high_cursor_)) --high_cursor_;
      return high_cursor_;
    case Rule::Uniform: {
      const auto i =
          std::uniform_int_distribution<std::size_t>(0, unsaid_list_.size() - 1)(rng);
      return unsaid_list_[i];
    }
    case Rule::PreferSet:
      for (const int x : set_sorted_) {
        if (!is_said(x)) return x;
      }
      return low_cursor_;
    case Rule::AvoidSet:
      for (int x = low_cursor_; x <= n_; ++x) {
        if (!is_said(x) && in_set_[static_cast<std::size_t>(x)] == 0) return x;
      }
      for (const int x : set_sorted_) {
        if (!is_said(x)) return x;
      }
      return 0;
  }
  return 0;
}

void UnsaidPicker::respond(const TurnInfo&, Rng& rng, Move& out) {
  while (static_cast<int>(out.size()) < quota_) {
    const int x = pick(rng);
    if (x == 0) break;
    out.push_back(x);
    mark(x);
  }
  // Out of fresh numbers: a full move is still owed, so it must repeat.
  for (int v = 1; static_cast<int>(out.size()) < quota_ && v <= n_; ++v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
}

void UnsaidPicker::encode_state(StateEncoder& enc) const {
  enc.put_bitmap(std::span<const char>(said_).subspan(1));
  if (with_counter_) enc.put(static_cast<std::uint64_t>(said_count_), width_of(n_));
}

// --- ConstantStrategy / ScriptedStrategy -----------------------------------

ConstantStrategy::ConstantStrategy(int n, int quota, int value)
    : n_(n), quota_(quota), value_(value) {
  if (value < 1 || value > n || quota > n) {
    throw MirrorError(ErrorCode::OutOfRange, "constant value outside [n]");
  }
}

void ConstantStrategy::respond(const TurnInfo&, Rng&, Move& out) {
  for (int i = 0; i < quota_; ++i) out.push_back((value_ - 1 + i) % n_ + 1);
}

ScriptedStrategy::ScriptedStrategy(int n, int quota, std::vector<int> script)
    : n_(n), quota_(quota), script_(std::move(script)) {
  for (const int x : script_) {
    if (x < 1 || x > n) throw MirrorError(ErrorCode::OutOfRange, "script entry outside [n]");
  }
}

std::string ScriptedStrategy::name() const {
  std::string s = "script:";
  for (std::size_t i = 0; i < script_.size(); ++i) {
    if (i != 0) s += ',';
    s += std::to_string(script_[i]);
  }
  return s;
}

void ScriptedStrategy::respond(const TurnInfo&, Rng&, Move& out) {
  while (static_cast<int>(out.size()) < quota_ && position_ < script_.size()) {
    out.push_back(script_[position_++]);
  }
  for (int v = 1; static_cast<int>(out.size()) < quota_ && v <= n_; ++v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
}

void ScriptedStrategy::encode_state(StateEncoder& enc) const {
  enc.put(position_, bits_for(script_.size()));
}

// --- factories -------------------------------------------------------------

std::unique_ptr<Strategy> bob_mirror(int n) { return std::make_unique<BobMirror>(n); }

std::unique_ptr<Strategy> bob_tuple_mirror(int n, int b) {
  return std::make_unique<BobTupleMirror>(n, b);
}

std::unique_ptr<Strategy> alice_odd_mirror(int n) { return std::make_unique<AliceOddMirror>(n); }

std::unique_ptr<Strategy> alice_naive(int n, int quota) {
  return std::make_unique<UnsaidPicker>("naive", n, quota, UnsaidPicker::Rule::Smallest,
                                        std::vector<int>{}, /*with_counter=*/true);
}

std::unique_ptr<Strategy> alice_rand_log(int n, MatchingOracle oracle) {
  return std::make_unique<AliceRandLog>(n, std::move(oracle));
}

std::unique_ptr<Strategy> alice_rand_sqrt(int n, MatchingOracle oracle) {
  return std::make_unique<AliceRandSqrt>(n, std::move(oracle));
}

std::unique_ptr<Strategy> adversary_smallest_unsaid(int n, int quota) {
  return std::make_unique<UnsaidPicker>("smallest-unsaid", n, quota,
                                        UnsaidPicker::Rule::Smallest);
}

std::unique_ptr<Strategy> adversary_largest_unsaid(int n, int quota) {
  return std::make_unique<UnsaidPicker>("largest-unsaid", n, quota, UnsaidPicker::Rule::Largest);
}

std::unique_ptr<Strategy> adversary_random_unsaid(int n, int quota) {
  return std::make_unique<UnsaidPicker>("random-unsaid", n, quota, UnsaidPicker::Rule::Uniform);
}

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::unique_ptr<Strategy> adversary_prefer_T(int n, int quota, std::vector<int> T) {
  std::string name = "prefer-T:" + join(T);
  return std::make_unique<UnsaidPicker>(std::move(name), n, quota, UnsaidPicker::Rule::PreferSet,
                                        std::move(T));
}

std::unique_ptr<Strategy> adversary_avoid_D(int n, int quota, std::vector<int> D) {
  std::string name = "avoid-D:" + join(D);
  return std::make_unique<UnsaidPicker>(std::move(name), n, quota, UnsaidPicker::Rule::AvoidSet,
                                        std::move(D));
}

// --- registry --------------------------------------------------------------

namespace {

std::vector<int> parse_int_list(std::string_view text, std::string_view key) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw MirrorError(ErrorCode::UnknownStrategy,
                        "bad integer list in strategy key '" + std::string(key) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void require_role(Player role, Player wanted, std::string_view key) {
  if (role != wanted) {
    throw MirrorError(ErrorCode::UnknownStrategy,
                      std::string(key) + " is only defined for " +
                          (wanted == Player::Alice ? "Alice" : "Bob"));
  }
}

void require_unit_quotas(const GameConfig& c, std::string_view key) {
  if (c.a != 1 || c.b != 1) {
    throw MirrorError(ErrorCode::QuotaMismatch, std::string(key) + " plays the (1,1)-game only");
  }
}

}  // namespace

std::unique_ptr<Strategy> make_strategy(std::string_view key, Player role,
                                        const GameConfig& config, std::uint64_t seed) {
  const std::string_view full = key;
  if (key.starts_with("alice:")) {
    require_role(role, Player::Alice, full);
    key.remove_prefix(6);
  } else if (key.starts_with("bob:")) {
    require_role(role, Player::Bob, full);
    key.remove_prefix(4);
  }
  const auto colon = key.find(':');
  const std::string_view name = key.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : key.substr(colon + 1);
  const int n = config.n;
  const int quota = config.quota(role);

  if (name == "mirror") {
    require_role(role, Player::Bob, full);
    require_unit_quotas(config, full);
    return bob_mirror(n);
  }
  if (name == "tuple-mirror") {
    require_role(role, Player::Bob, full);
    if (config.a != 1) {
      throw MirrorError(ErrorCode::QuotaMismatch, "tuple-mirror plays the (1,b)-game only");
    }
    return bob_tuple_mirror(n, config.b);
  }
  if (name == "odd-mirror") {
    require_role(role, Player::Alice, full);
    require_unit_quotas(config, full);
    return alice_odd_mirror(n);
  }
  if (name == "naive") return alice_naive(n, quota);
  if (name == "rand-log" || name == "rand-sqrt") {
    require_role(role, Player::Alice, full);
    require_unit_quotas(config, full);
    auto oracle = sample_matching(n, derive_seed(seed, 3));
    if (name == "rand-log") return alice_rand_log(n, std::move(oracle));
    return alice_rand_sqrt(n, std::move(oracle));
  }
  if (name == "smallest-unsaid") return adversary_smallest_unsaid(n, quota);
  if (name == "largest-unsaid") return adversary_largest_unsaid(n, quota);
  if (name == "random-unsaid") return adversary_random_unsaid(n, quota);
  if (name == "prefer-T") return adversary_prefer_T(n, quota, parse_int_list(args, full));
  if (name == "avoid-D") return adversary_avoid_D(n, quota, parse_int_list(args, full));
  if (name == "constant") {
    const auto v = parse_int_list(args, full);
    if (v.size() != 1) throw MirrorError(ErrorCode::UnknownStrategy, "constant:<value>");
    return std::make_unique<ConstantStrategy>(n, quota, v.front());
  }
  if (name == "script") {
    return std::make_unique<ScriptedStrategy>(n, quota, parse_int_list(args, full));
  }
  throw MirrorError(ErrorCode::UnknownStrategy, "unknown strategy '" + std::string(full) + "'");
}

std::vector<std::pair<std::string, std::string>> strategy_catalog() {
  return {
      {"bob:mirror", "answer x with n+1-x; (1,1)-game, even n"},
      {"bob:tuple-mirror", "complete the consecutive (b+1)-tuple Alice opened; (b+1) | n"},
      {"alice:odd-mirror", "open with n, then answer y with n-y; odd n"},
      {"naive", "say the smallest unsaid numbers, n-bit map plus counter"},
      {"alice:rand-log", "open with a uniform x, answer y with M(y)"},
      {"alice:rand-sqrt", "matching mirror with sqrt(n) backups and a power-sum endgame"},
      {"smallest-unsaid", "full-memory adversary, smallest unsaid first"},
      {"largest-unsaid", "full-memory adversary, largest unsaid first"},
      {"random-unsaid", "full-memory adversary, uniform unsaid"},
      {"prefer-T:<list>", "smallest unsaid in T, then smallest unsaid overall"},
      {"avoid-D:<list>", "smallest unsaid outside D, then smallest unsaid in D"},
      {"constant:<v>", "stateless; always says v (then v+1, ... for larger quotas)"},
      {"script:<list>", "plays a fixed list of numbers in order"},
  };
}

}  // namespace mirror
