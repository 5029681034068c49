#include "fogbisim/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "fogbisim/error.hpp"

namespace fogbisim {

namespace {

void trim_zeros(std::vector<BigInt>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

Ordinal Ordinal::finite(const BigInt& k) {
  if (k < 0) throw InputError("ordinals are nonnegative");
  Ordinal o;
  if (k > 0) o.coeff_.push_back(k);
  return o;
}

Ordinal Ordinal::omega_pow(std::size_t k, const BigInt& c) {
  if (c < 0) throw InputError("ordinals are nonnegative");
  Ordinal o;
  if (c == 0) return o;
  o.coeff_.assign(k + 1, 0);
  o.coeff_[k] = c;
  return o;
}

Ordinal Ordinal::omega_omega() {
  Ordinal o;
  o.top_ = true;
  return o;
}

Ordinal Ordinal::from_coefficients(std::vector<BigInt> low_to_high) {
  for (const auto& c : low_to_high) {
    if (c < 0) throw InputError("ordinals are nonnegative");
  }
  Ordinal o;
  o.coeff_ = std::move(low_to_high);
  trim_zeros(o.coeff_);
  return o;
}

std::size_t Ordinal::degree() const {
  if (top_) throw PreconditionError("omega^omega has no finite degree");
  return coeff_.empty() ? 0 : coeff_.size() - 1;
}

BigInt Ordinal::coeff(std::size_t k) const { return k < coeff_.size() ? coeff_[k] : BigInt(0); }

BigInt Ordinal::norm() const {
  if (top_) throw PreconditionError("norm is defined below omega^omega only");
  BigInt n = static_cast<long long>(degree());
  for (const auto& c : coeff_) n = std::max(n, c);
  return n;
}

Ordinal Ordinal::operator+(const Ordinal& b) const {
  if (b.is_zero()) return *this;
  if (b.top_) {
    if (top_) throw PreconditionError("sum exceeds omega^omega");
    return b;
  }
  if (top_) throw PreconditionError("sum exceeds omega^omega");
  const std::size_t d = b.degree();
  Ordinal out;
  out.coeff_ = b.coeff_;
  if (coeff_.size() > d) {
    out.coeff_.resize(std::max(coeff_.size(), b.coeff_.size()), 0);
    out.coeff_[d] += coeff_[d];
    for (std::size_t k = d + 1; k < coeff_.size(); ++k) out.coeff_[k] = coeff_[k];
  }
  trim_zeros(out.coeff_);
  return out;
}

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw PreconditionError("predecessor of a non-successor ordinal");
  Ordinal o = *this;
  o.coeff_[0] -= 1;
  trim_zeros(o.coeff_);
  return o;
}

Ordinal Ordinal::fund(const BigInt& x) const {
  if (!is_limit()) throw PreconditionError("fundamental sequence of a non-limit ordinal " + to_string());
  if (x < 0) throw InputError("negative argument");
  if (top_) {
    if (x + 1 > BigInt(kDefaultStepBudget)) throw BudgetExceeded("omega^(x+1) with x too large to represent");
    return omega_pow(static_cast<std::size_t>(x) + 1);
  }
  std::size_t low = 0;
  while (coeff_[low] == 0) ++low;  // lowest term omega^low, low >= 1
  Ordinal o = *this;
  o.coeff_[low] -= 1;
  o.coeff_[low - 1] = x + 1;
  trim_zeros(o.coeff_);
  return o;
}

std::string Ordinal::to_string() const {
  if (top_) return "w^w";
  if (coeff_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = coeff_.size(); k-- > 0;) {
    const auto& c = coeff_[k];
    if (c == 0) continue;
    if (!first) out << '+';
    first = false;
    if (k == 0) {
      out << c.str();
      continue;
    }
    out << 'w';
    if (k > 1) out << '^' << k;
    if (c != 1) out << '*' << c.str();
  }
  return out.str();
}

Ordinal Ordinal::parse(std::string_view raw) {
  std::string text;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    unsigned char ch = static_cast<unsigned char>(raw[i]);
    if (std::isspace(ch)) continue;
    if (ch == 0xCF && i + 1 < raw.size() && static_cast<unsigned char>(raw[i + 1]) == 0x89) {
      text.push_back('w');
      ++i;
      continue;
    }
    text.push_back(static_cast<char>(ch));
  }
  for (std::size_t p; (p = text.find("omega")) != std::string::npos;) text.replace(p, 5, "w");
  if (text.empty()) throw InputError("empty ordinal");
  if (text == "w^w") return omega_omega();
  Ordinal sum;
  std::size_t pos = 0;
  auto number = [&](const char* what) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw InputError(std::string("expected ") + what + " in ordinal '" + text + "'");
    return BigInt(text.substr(start, pos - start));
  };
  bool first = true;
  std::size_t prev_degree = 0;
  bool prev_set = false;
  while (pos < text.size()) {
    if (!first) {
      if (text[pos] != '+') throw InputError("expected '+' in ordinal '" + text + "'");
      ++pos;
    }
    first = false;
    std::size_t degree = 0;
    BigInt c = 1;
    if (pos < text.size() && text[pos] == 'w') {
      ++pos;
      degree = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        BigInt d = number("an exponent");
        if (d > 100000) throw InputError("exponent too large in ordinal '" + text + "'");
        degree = static_cast<std::size_t>(d);
      }
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        c = number("a coefficient");
      }
    } else {
      c = number("a term");
    }
    if (prev_set && degree >= prev_degree) {
      throw InputError("terms must be in strictly decreasing degree in '" + text + "'");
    }
    prev_degree = degree;
    prev_set = true;
    sum = sum + omega_pow(degree, c);
  }
  return sum;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
  if (top_ || o.top_) return static_cast<int>(top_) <=> static_cast<int>(o.top_);
  if (coeff_.size() != o.coeff_.size()) return coeff_.size() <=> o.coeff_.size();
  for (std::size_t k = coeff_.size(); k-- > 0;) {
    if (coeff_[k] != o.coeff_[k]) return coeff_[k] < o.coeff_[k] ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

ControlFunction control_function(std::string_view name) {
  if (name == "succ") return {"succ", [](const BigInt& x) -> BigInt { return x + 1; }};
  if (name == "double") return {"double", [](const BigInt& x) -> BigInt { return 2 * x; }};
  if (name == "square") return {"square", [](const BigInt& x) -> BigInt { return x * x > x ? BigInt(x * x) : x; }};
  if (name == "exp") {
    return {"exp", [](const BigInt& x) -> BigInt {
              return pow_checked(2, x + 1) * (x + 1) - 1;
            }};
  }
  throw InputError("unknown control function '" + std::string(name) + "' (succ, double, square, exp)");
}

HierarchyResult hierarchies(const ControlFunction& h, const Ordinal& alpha, const BigInt& x0, std::uint64_t budget) {
  if (x0 < 0) throw InputError("negative argument");
  Ordinal a = alpha;
  BigInt x = x0;
  std::uint64_t steps = 0;
  while (!a.is_zero()) {
    if (a.is_limit()) {
      a = a.fund(x);
      continue;
    }
    if (++steps > budget) {
      throw BudgetExceeded("hierarchy evaluation exceeded " + std::to_string(budget) + " applications of h");
    }
    x = h.apply(x);
    a = a.predecessor();
  }
  return {x, BigInt(steps)};
}

BigInt hardy(const ControlFunction& h, const Ordinal& alpha, const BigInt& x, std::uint64_t budget) {
  return hierarchies(h, alpha, x, budget).hardy;
}

BigInt cichon(const ControlFunction& h, const Ordinal& alpha, const BigInt& x, std::uint64_t budget) {
  return hierarchies(h, alpha, x, budget).cichon;
}

std::vector<Ordinal> ordinals_with_norm_at_most(std::size_t max_degree, std::uint64_t bound) {
  std::vector<Ordinal> out;
  const std::size_t top = std::min<std::size_t>(max_degree, bound);
  std::vector<BigInt> c(top + 1, 0);
  while (true) {
    out.push_back(Ordinal::from_coefficients(c));
    std::size_t k = 0;
    while (k <= top && c[k] == bound) c[k++] = 0;
    if (k > top) break;
    c[k] += 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::remove_if(out.begin(), out.end(), [&](const Ordinal& o) { return o.norm() > bound; }), out.end());
  return out;
}

std::uint64_t max_controlled_descent(std::size_t n, std::uint64_t n0, const ControlFunction& h, std::uint64_t budget) {
  // bounds[l] = h^l(N0), extended lazily.
  std::vector<std::uint64_t> bounds{n0};
  auto bound_at = [&](std::size_t l) {
    while (bounds.size() <= l) {
      BigInt next = h.apply(BigInt(bounds.back()));
      if (next > BigInt(budget)) throw BudgetExceeded("controlled descent norms exceed the search budget");
      bounds.push_back(static_cast<std::uint64_t>(next));
    }
    return bounds[l];
  };
  std::map<std::pair<std::vector<BigInt>, std::size_t>, std::uint64_t> memo;
  std::map<std::uint64_t, std::vector<Ordinal>> candidates;
  auto below = [&](std::uint64_t b) -> const std::vector<Ordinal>& {
    auto it = candidates.find(b);
    if (it == candidates.end()) it = candidates.emplace(b, ordinals_with_norm_at_most(n, b)).first;
    return it->second;
  };
  std::uint64_t states = 0;
  // longest(alpha, l): longest controlled sequence whose l-th element is alpha.
  std::function<std::uint64_t(const Ordinal&, std::size_t)> longest = [&](const Ordinal& a, std::size_t l) {
    auto key = std::make_pair(a.coefficients(), l);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    if (++states > budget) throw BudgetExceeded("controlled descent search exceeded its budget");
    std::uint64_t best = 1;
    if (!a.is_zero()) {
      for (const auto& b : below(bound_at(l + 1))) {
        if (!(b < a)) break;
        best = std::max(best, 1 + longest(b, l + 1));
      }
    }
    memo.emplace(key, best);
    return best;
  };
  std::uint64_t best = 0;
  for (const auto& a : below(n0)) best = std::max(best, longest(a, 0));
  return best;
}

}  // namespace fogbisim
