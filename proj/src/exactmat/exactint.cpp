#include "galdual/exactmat.hpp"

#include <limits>

namespace galdual {

namespace {

bool fits_int64(const BigInt& v) {
  static const BigInt lo = std::numeric_limits<std::int64_t>::min();
  static const BigInt hi = std::numeric_limits<std::int64_t>::max();
  return v >= lo && v <= hi;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

Prime::Prime(std::uint32_t value) : value_(value) {
  if (!is_prime(value))
    throw MathError("not a prime: " + std::to_string(value));
}

NonIntegralError::NonIntegralError(std::size_t row, std::size_t col)
    : MathError("entry (" + std::to_string(row + 1) + "," +
                std::to_string(col + 1) + ") is not integral at l"),
      row_(row),
      col_(col) {}

ExactInt::ExactInt(const BigInt& v) {
  if (fits_int64(v))
    rep_ = static_cast<std::int64_t>(v);
  else
    rep_ = v;
}

BigInt ExactInt::big() const {
  if (is_small()) return BigInt(small());
  return std::get<BigInt>(rep_);
}

bool ExactInt::is_zero() const { return is_small() && small() == 0; }

int ExactInt::sign() const {
  if (is_small()) return (small() > 0) - (small() < 0);
  return std::get<BigInt>(rep_).sign();
}

std::int64_t ExactInt::mod(std::int64_t m) const {
  if (is_small()) {
    std::int64_t r = small() % m;
    return r < 0 ? r + m : r;
  }
  BigInt r = std::get<BigInt>(rep_) % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

ExactInt ExactInt::divexact(std::int64_t m) const {
  if (is_small()) {
    // INT64_MIN / -1 is the only overflow.
    if (!(small() == std::numeric_limits<std::int64_t>::min() && m == -1))
      return ExactInt(small() / m);
  }
  return ExactInt(BigInt(big() / m));
}

std::string ExactInt::str() const {
  if (is_small()) return std::to_string(small());
  return std::get<BigInt>(rep_).str();
}

ExactInt operator+(const ExactInt& a, const ExactInt& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t r;
    if (!__builtin_add_overflow(a.small(), b.small(), &r)) return ExactInt(r);
  }
  return ExactInt(BigInt(a.big() + b.big()));
}

ExactInt operator-(const ExactInt& a, const ExactInt& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t r;
    if (!__builtin_sub_overflow(a.small(), b.small(), &r)) return ExactInt(r);
  }
  return ExactInt(BigInt(a.big() - b.big()));
}

ExactInt operator*(const ExactInt& a, const ExactInt& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t r;
    if (!__builtin_mul_overflow(a.small(), b.small(), &r)) return ExactInt(r);
  }
  return ExactInt(BigInt(a.big() * b.big()));
}

ExactInt ExactInt::operator-() const { return ExactInt(0) - *this; }

bool operator==(const ExactInt& a, const ExactInt& b) {
  // Values are kept demoted whenever they fit, so representations agree.
  if (a.is_small() != b.is_small()) return false;
  if (a.is_small()) return a.small() == b.small();
  return std::get<BigInt>(a.rep_) == std::get<BigInt>(b.rep_);
}

bool operator<(const ExactInt& a, const ExactInt& b) {
  if (a.is_small() && b.is_small()) return a.small() < b.small();
  return a.big() < b.big();
}

ExactInt ExactInt::pow(std::int64_t base, unsigned exp) {
  ExactInt r(1);
  ExactInt b(base);
  while (exp--) r *= b;
  return r;
}

}  // namespace galdual
