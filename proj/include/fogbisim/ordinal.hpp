#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fogbisim/bigint.hpp"

namespace fogbisim {

/// Ordinal up to omega^omega: a Cantor normal form below omega^omega, or the
/// single marker omega^omega itself.
class Ordinal {
 public:
  Ordinal() = default;
  static Ordinal finite(const BigInt& k);
  /// omega^k * c
  static Ordinal omega_pow(std::size_t k, const BigInt& c = 1);
  static Ordinal omega_omega();
  /// Coefficients listed from degree 0 upwards; trailing zeros are dropped.
  static Ordinal from_coefficients(std::vector<BigInt> low_to_high);
  /// `w^2*3+w*1+4`, `w^w`, `w`, `0`; `omega` and `ω` are accepted for `w`.
  static Ordinal parse(std::string_view text);

  bool is_zero() const { return !top_ && coeff_.empty(); }
  bool is_top() const { return top_; }
  bool is_successor() const { return !top_ && !coeff_.empty() && coeff_[0] > 0; }
  bool is_limit() const { return top_ || (!coeff_.empty() && coeff_[0] == 0); }
  /// Degree of the leading term; 0 for finite ordinals.
  std::size_t degree() const;
  BigInt coeff(std::size_t k) const;
  const std::vector<BigInt>& coefficients() const { return coeff_; }

  /// max(degree, max coefficient); not defined for omega^omega.
  BigInt norm() const;
  Ordinal operator+(const Ordinal& other) const;
  /// beta for this = beta + 1.
  Ordinal predecessor() const;
  /// lambda(x) for a limit lambda.
  Ordinal fund(const BigInt& x) const;

  std::string to_string() const;

  std::strong_ordering operator<=>(const Ordinal& other) const;
  bool operator==(const Ordinal& other) const { return (*this <=> other) == 0; }

 private:
  std::vector<BigInt> coeff_;  // low to high, last entry nonzero
  bool top_ = false;
};

/// Monotone inflationary control function.
struct ControlFunction {
  std::string name;
  std::function<BigInt(const BigInt&)> apply;
};

/// succ: x+1; double: 2x; square: max(x, x*x); exp: 2^(x+1)(x+1)-1.
ControlFunction control_function(std::string_view name);

inline constexpr std::uint64_t kDefaultStepBudget = 10'000'000;

struct HierarchyResult {
  BigInt hardy;   // h^alpha(x)
  BigInt cichon;  // h_alpha(x): number of h applications performed
};

/// Evaluates both hierarchies in one iterative pass; throws BudgetExceeded
/// once more than `budget` applications of h would be needed.
HierarchyResult hierarchies(const ControlFunction& h, const Ordinal& alpha, const BigInt& x,
                            std::uint64_t budget = kDefaultStepBudget);
BigInt hardy(const ControlFunction& h, const Ordinal& alpha, const BigInt& x,
             std::uint64_t budget = kDefaultStepBudget);
BigInt cichon(const ControlFunction& h, const Ordinal& alpha, const BigInt& x,
              std::uint64_t budget = kDefaultStepBudget);

/// Longest (N0,h)-controlled strictly descending sequence of ordinals below
/// omega^(n+1), by exhaustive search. `budget` bounds search states.
std::uint64_t max_controlled_descent(std::size_t n, std::uint64_t n0, const ControlFunction& h,
                                     std::uint64_t budget = kDefaultStepBudget);

/// All ordinals below omega^(max_degree+1) with norm <= bound, ascending.
std::vector<Ordinal> ordinals_with_norm_at_most(std::size_t max_degree, std::uint64_t bound);

}  // namespace fogbisim
