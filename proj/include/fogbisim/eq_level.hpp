#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fogbisim/lts.hpp"

namespace fogbisim {

inline constexpr std::uint64_t kDefaultBudget = 2'000'000;
/// Caps above this are clamped; exploration then ends on the budget first.
inline constexpr std::uint64_t kMaxCap = std::uint64_t{1} << 62;

struct EqLevelResult {
  bool finite = false;
  std::uint64_t value = 0;  // the level if finite, otherwise the cap
  /// Every explored pair was expanded (no pair was cut off by the cap), so an
  /// AtLeast result also proves bisimilarity.
  bool closed = false;
  std::uint64_t pairs = 0;

  static EqLevelResult Finite(std::uint64_t k) { return {true, k, false, 0}; }
  static EqLevelResult AtLeast(std::uint64_t cap) { return {false, cap, false, 0}; }
  bool operator==(const EqLevelResult& o) const { return finite == o.finite && value == o.value; }
};

std::string to_string(const EqLevelResult& r);

struct GameConfig {
  std::uint64_t cap = 8;
  VarMode variable_mode = VarMode::SelfLoop;
  std::uint64_t budget = kDefaultBudget;  // distinct pairs explored
};

/// Spoiler strategy: a move on one side, and one subtree per Duplicator reply.
struct Certificate {
  StateId left = 0;
  StateId right = 0;
  bool spoiler_right = false;  // which side Spoiler moves on
  ActionId action = 0;
  StateId target = 0;
  struct Reply {
    StateId target = 0;
    std::unique_ptr<Certificate> next;
  };
  std::vector<Reply> replies;

  std::size_t depth() const;
};

/// Bounded equivalence level by backward induction on the explored game
/// graph. Throws BudgetExceeded when more than cfg.budget pairs are needed.
EqLevelResult eq_level_bounded(Lts& lts, StateId s, StateId t, std::uint64_t cap,
                               std::uint64_t budget = kDefaultBudget,
                               std::unique_ptr<Certificate>* certificate = nullptr);

EqLevelResult eq_level_bounded(const Grammar& g, TermRef e, TermRef f, const GameConfig& cfg,
                               std::unique_ptr<Certificate>* certificate = nullptr);

/// Spoiler certificate for a Finite result; throws PreconditionError otherwise.
std::unique_ptr<Certificate> spoiler_certificate(const Grammar& g, TermRef e, TermRef f, const GameConfig& cfg);

/// Replays a certificate against every Duplicator reply using only the
/// transition relation; true iff Spoiler wins within `rounds` rounds.
bool replay_certificate(Lts& lts, const Certificate& cert, std::uint64_t rounds);

std::string certificate_json(Lts& lts, const Certificate& cert);

/// Partitions of the states reachable from the seeds within k steps by
/// the approximants of orders 0..k. Blocks are numbered by first occurrence
/// in `states`. Exact for every state at distance d from the seeds at
/// orders <= k + 1 - d.
struct SimPartitions {
  std::vector<StateId> states;
  std::vector<std::vector<std::uint32_t>> block;  // block[level][state index]
  std::uint32_t index_of(StateId s) const;
};

SimPartitions sim_k_partition(Lts& lts, const std::vector<StateId>& seeds, std::uint64_t k,
                              std::uint64_t budget = kDefaultBudget);

/// Level read off the partitions for two of their states, in the same form
/// as eq_level_bounded with cap k.
EqLevelResult level_from_partitions(const SimPartitions& p, StateId s, StateId t);

enum class Decision { Bisimilar, NotBisimilar, Inconclusive };

struct DecideResult {
  Decision decision = Decision::Inconclusive;
  std::uint64_t level = 0;  // for NotBisimilar
  std::uint64_t states = 0;
};

/// Exact answer when the states reachable from s and t number at most budget.
DecideResult finite_state_decide(Lts& lts, StateId s, StateId t, std::uint64_t budget = kDefaultBudget);
DecideResult finite_state_decide(const Grammar& g, TermRef e, TermRef f, std::uint64_t budget = kDefaultBudget,
                                 VarMode mode = VarMode::SelfLoop);

}  // namespace fogbisim
