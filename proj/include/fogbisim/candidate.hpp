#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fogbisim/bigint.hpp"
#include "fogbisim/eq_level.hpp"
#include "fogbisim/grammar.hpp"
#include "fogbisim/ordinal.hpp"

namespace fogbisim {

using TermPair = std::pair<TermRef, TermRef>;

struct CandidateParams {
  std::size_t n = 0;
  BigInt s = 1;
  BigInt g = 0;
  BigInt c = 1;
};

enum class OracleKind { Exact, Effective };

inline constexpr std::uint64_t kDefaultPairsBudget = 100'000'000;

struct CandidateOptions {
  OracleKind oracle = OracleKind::Exact;
  /// States for the exact oracle, game pairs for the effective one.
  std::uint64_t budget = kDefaultBudget;
  /// Largest admissible value of the pair-count bound before enumerating.
  std::uint64_t pairs_budget = kDefaultPairsBudget;
  /// Recompute P_j subtracting the worklists above j instead of above i.
  bool subtract_above_j = false;
  bool check_invariants = true;
};

struct CandidateState {
  std::map<TermPair, std::uint64_t> basis;  // pair -> stored level
  std::vector<BigInt> s_arr, e_arr;         // index 0..n
  std::vector<std::vector<TermPair>> worklists;
  BigInt bound;  // E_B
};

struct TraceEntry {
  std::uint64_t iter = 0;
  Ordinal rank;
  BigInt control;  // N
  std::optional<TermPair> pair;
  std::uint64_t level = 0;
  std::vector<BigInt> s_arr, e_arr;
  BigInt bound;
};

struct CandidateResult {
  BigInt bound;
  CandidateState state;
  std::vector<TraceEntry> trace;
  std::vector<std::string> violations;  // failed loop-invariant checks
};

/// Upper bound on the number of pairs for index i and size bound s_i.
BigInt pairs_bound(const Grammar& g, std::size_t i, const BigInt& s_i);

/// Ordered pairs whose variables are exactly x1..xj for some j <= i and
/// whose joint size is at most s_i, in canonical order. Throws
/// BudgetExceeded when pairs_bound exceeds `pairs_budget`.
std::vector<TermPair> pairs_set(const Grammar& g, std::size_t i, const BigInt& s_i,
                                std::uint64_t pairs_budget = kDefaultPairsBudget);

/// max over right-hand sides of ntsize.
BigInt size_increase(const Grammar& g);

/// Level if el(E,F) <= c*(E_B*size + size^2), otherwise nullopt (omega).
std::optional<std::uint64_t> eq_level_effective(const Grammar& g, const BigInt& bound, const BigInt& c, TermRef e,
                                                TermRef f, std::uint64_t budget = kDefaultBudget);

CandidateResult candidate_bound(const Grammar& g, const CandidateParams& p, const CandidateOptions& opt = {});

Ordinal rank(const CandidateState& st);
/// max{n+1, E_B, max s_i, max |P_i|}.
BigInt control_value(const CandidateState& st, std::size_t n);

/// Loop invariant of the main loop; returns a description of each failure.
std::vector<std::string> check_candidate_invariant(const Grammar& g, const CandidateParams& p,
                                                   const CandidateState& st);

/// pairs_i \ B contains only bisimilar pairs, for every i (exact oracle).
bool is_full(const Grammar& g, const CandidateParams& p, const CandidateState& st,
             std::uint64_t budget = kDefaultBudget, std::uint64_t pairs_budget = kDefaultPairsBudget);
/// pairs_i \ B contains only pairs above the threshold for E_B, for every i.
bool is_complete(const Grammar& g, const CandidateParams& p, const CandidateState& st,
                 std::uint64_t budget = kDefaultBudget, std::uint64_t pairs_budget = kDefaultPairsBudget);

/// 2^(2n+6) * c^2 * g^2 * max(1,|G|)^3.
BigInt control_factor(const CandidateParams& p, const BigInt& grammar_size);
/// next <= 2^(factor * cur^4).
bool control_step_ok(const BigInt& next, const BigInt& cur, const BigInt& factor);

std::string format_pair(const Grammar& g, const TermPair& p);
/// `iter=L rank=<CNF> pair=<E>|<F> level=<k> N=<val>`; the closing entry
/// has pair=- level=-.
std::string format_trace_line(const Grammar& g, const TraceEntry& t);

}  // namespace fogbisim
