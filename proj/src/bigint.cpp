#include "fogbisim/bigint.hpp"

#include <cctype>

#include "fogbisim/error.hpp"

namespace fogbisim {

std::size_t bit_length(const BigInt& value) {
  if (value == 0) return 0;
  BigInt mag = value < 0 ? BigInt(-value) : value;
  return static_cast<std::size_t>(boost::multiprecision::msb(mag)) + 1;
}

BigInt pow_checked(const BigInt& base, const BigInt& exp) {
  if (exp < 0) throw InputError("negative exponent");
  if (exp == 0) return 1;
  if (base == 0 || base == 1) return base;
  if (base == -1) return (exp % 2 == 0) ? BigInt(1) : BigInt(-1);
  // |base|^exp has about exp * log2|base| bits.
  const BigInt estimated = exp * BigInt(bit_length(base) - 1);
  if (estimated > kMaxMaterialisedBits) {
    throw BudgetExceeded("integer power too large to materialise (about " +
                         to_string(estimated) + " bits)");
  }
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

std::string to_string(const BigInt& value) { return value.str(); }

BigInt parse_bigint(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t j = text.size();
  while (j > i && std::isspace(static_cast<unsigned char>(text[j - 1]))) --j;
  text = text.substr(i, j - i);
  if (text.empty()) throw InputError("expected a natural number");
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw InputError("expected a natural number, got '" + std::string(text) + "'");
    }
  }
  return BigInt(std::string(text));
}

std::size_t decimal_digits(const BigInt& value) {
  std::string s = value.str();
  return s[0] == '-' ? s.size() - 1 : s.size();
}

bool leq_pow2(const BigInt& value, const BigInt& exponent) {
  if (value <= 0) return true;
  if (exponent < 0) return false;
  // value < 2^bit_length(value), so any exponent at least that large wins.
  if (exponent >= BigInt(bit_length(value))) return true;
  BigInt power = BigInt(1) << static_cast<unsigned>(exponent);
  return value <= power;
}

std::uint64_t to_u64(const BigInt& value, std::string_view what) {
  if (value < 0 || value > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw BudgetExceeded(std::string(what) + " out of machine range: " + value.str());
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace fogbisim
