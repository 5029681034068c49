#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fogbisim {

using BigInt = boost::multiprecision::cpp_int;

/// Largest result (in bits) that pow_checked is willing to materialise.
inline constexpr std::uint64_t kMaxMaterialisedBits = std::uint64_t{1} << 26;

/// base^exp, refusing (BudgetExceeded) when the result would exceed
/// kMaxMaterialisedBits. 0^0 = 1.
BigInt pow_checked(const BigInt& base, const BigInt& exp);

std::string to_string(const BigInt& value);
BigInt parse_bigint(std::string_view text);

std::size_t decimal_digits(const BigInt& value);
std::size_t bit_length(const BigInt& value);

/// value <= 2^exponent, decided without materialising 2^exponent.
bool leq_pow2(const BigInt& value, const BigInt& exponent);

/// Narrowing with a range check; throws BudgetExceeded on overflow.
std::uint64_t to_u64(const BigInt& value, std::string_view what);

}  // namespace fogbisim
