#pragma once

// Exact linear algebra over F_l, Z/l^kZ and Z[1/l].
//
// Two matrix kinds live here:
//   LAdicMatrix  entries num/l^k with integer numerators (the ring Z[1/l]),
//                used for isogeny and polarization transformations in V_l.
//   ModMatrix    entries reduced modulo l^k, used for mod-l Galois images
//                and intertwiners.
//
// Text format shared by the CLI and golden files: rows separated by ';',
// entries by ',', each entry either `n` or `n/l^k`.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace galdual {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Errors

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public MathError {
 public:
  using MathError::MathError;
};

class SingularMatrixError : public MathError {
 public:
  SingularMatrixError(const std::string& what, std::string det)
      : MathError(what), det_(std::move(det)) {}
  const std::string& det() const { return det_; }

 private:
  std::string det_;
};

class NonIntegralError : public MathError {
 public:
  NonIntegralError(std::size_t row, std::size_t col);
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class ParseError : public MathError {
 public:
  using MathError::MathError;
};

// ---------------------------------------------------------------------------
// Prime

class Prime {
 public:
  explicit Prime(std::uint32_t value);
  std::uint32_t value() const { return value_; }
  operator std::uint32_t() const { return value_; }
  friend bool operator==(Prime, Prime) = default;

  // True for the primes the verification suite is stated for.
  bool in_verified_range() const {
    return value_ == 2 || value_ == 3 || value_ == 5 || value_ == 7;
  }

 private:
  std::uint32_t value_;
};

bool is_prime(std::uint64_t n);
std::uint64_t ipow(std::uint64_t base, unsigned exp);

// ---------------------------------------------------------------------------
// ExactInt: a 64-bit integer that promotes itself to arbitrary precision on
// overflow and demotes again when the value fits.

class ExactInt {
 public:
  ExactInt(std::int64_t v = 0) : rep_(v) {}  // NOLINT(implicit)
  explicit ExactInt(const BigInt& v);

  bool is_small() const { return std::holds_alternative<std::int64_t>(rep_); }
  std::int64_t small() const { return std::get<std::int64_t>(rep_); }
  BigInt big() const;

  bool is_zero() const;
  int sign() const;
  // Remainder in [0, m).
  std::int64_t mod(std::int64_t m) const;
  bool divisible_by(std::int64_t m) const { return mod(m) == 0; }
  // Exact division; precondition: divisible.
  ExactInt divexact(std::int64_t m) const;
  std::string str() const;

  friend ExactInt operator+(const ExactInt& a, const ExactInt& b);
  friend ExactInt operator-(const ExactInt& a, const ExactInt& b);
  friend ExactInt operator*(const ExactInt& a, const ExactInt& b);
  ExactInt operator-() const;
  ExactInt& operator+=(const ExactInt& b) { return *this = *this + b; }
  ExactInt& operator-=(const ExactInt& b) { return *this = *this - b; }
  ExactInt& operator*=(const ExactInt& b) { return *this = *this * b; }
  friend bool operator==(const ExactInt& a, const ExactInt& b);
  friend bool operator<(const ExactInt& a, const ExactInt& b);

  static ExactInt pow(std::int64_t base, unsigned exp);

 private:
  std::variant<std::int64_t, BigInt> rep_;
};

// ---------------------------------------------------------------------------
// LAdicNumber: num / l^exp, normalized so that exp == 0 or l does not divide
// num. Zero is stored as 0/l^0.

class LAdicNumber {
 public:
  LAdicNumber(Prime ell, ExactInt num = 0, unsigned exp = 0);

  Prime ell() const { return Prime(ell_); }
  const ExactInt& numerator() const { return num_; }
  unsigned exponent() const { return exp_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integral() const { return exp_ == 0; }

  // l-adic valuation; throws for zero.
  int valuation() const;
  // Residue modulo m (m a power of l); precondition: integral.
  std::int64_t mod(std::int64_t m) const;
  // Inverse inside Z[1/l]; only +-l^j are invertible there.
  LAdicNumber inverse() const;
  bool is_unit_in_ring() const;

  std::string str() const;
  static LAdicNumber parse(std::string_view text, Prime ell);

  friend LAdicNumber operator+(const LAdicNumber& a, const LAdicNumber& b);
  friend LAdicNumber operator-(const LAdicNumber& a, const LAdicNumber& b);
  friend LAdicNumber operator*(const LAdicNumber& a, const LAdicNumber& b);
  LAdicNumber operator-() const;
  friend bool operator==(const LAdicNumber& a, const LAdicNumber& b) {
    return a.ell_ == b.ell_ && a.exp_ == b.exp_ && a.num_ == b.num_;
  }

 private:
  void normalize();

  ExactInt num_;
  unsigned exp_;
  std::uint32_t ell_;
};

// ---------------------------------------------------------------------------
// LAdicMatrix

class LAdicMatrix {
 public:
  LAdicMatrix(Prime ell, std::size_t n);
  LAdicMatrix(Prime ell, std::size_t n, std::vector<LAdicNumber> entries);

  static LAdicMatrix identity(Prime ell, std::size_t n);
  static LAdicMatrix diagonal(Prime ell, std::span<const LAdicNumber> diag);
  // From integer rows, e.g. {{0, 3}, {-3, 0}}.
  static LAdicMatrix from_integers(
      Prime ell, const std::vector<std::vector<std::int64_t>>& rows);
  static LAdicMatrix parse(std::string_view text, Prime ell);

  Prime ell() const { return ell_; }
  std::size_t size() const { return n_; }
  const LAdicNumber& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * n_ + c];
  }
  LAdicNumber& operator()(std::size_t r, std::size_t c) {
    return entries_[r * n_ + c];
  }

  bool is_integral() const;
  // Largest denominator exponent among the entries.
  unsigned max_exponent() const;
  bool is_alternating() const;
  LAdicMatrix transpose() const;
  LAdicMatrix scaled(const LAdicNumber& s) const;

  std::string str() const;

  friend LAdicMatrix operator*(const LAdicMatrix& a, const LAdicMatrix& b);
  friend LAdicMatrix operator+(const LAdicMatrix& a, const LAdicMatrix& b);
  friend LAdicMatrix operator-(const LAdicMatrix& a, const LAdicMatrix& b);
  friend bool operator==(const LAdicMatrix& a, const LAdicMatrix& b) {
    return a.ell_ == b.ell_ && a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  Prime ell_;
  std::size_t n_;
  std::vector<LAdicNumber> entries_;
};

// ---------------------------------------------------------------------------
// ModMatrix over Z/l^kZ

class ModMatrix {
 public:
  using Entry = std::uint32_t;

  ModMatrix(Prime ell, unsigned k, std::size_t n);
  // Entries are reduced on construction; negative inputs allowed.
  ModMatrix(Prime ell, unsigned k, std::size_t n,
            std::span<const std::int64_t> entries);
  ModMatrix(Prime ell, unsigned k,
            const std::vector<std::vector<std::int64_t>>& rows);

  static ModMatrix identity(Prime ell, unsigned k, std::size_t n);
  static ModMatrix parse(std::string_view text, Prime ell, unsigned k);

  Prime ell() const { return ell_; }
  unsigned precision() const { return k_; }
  std::uint32_t modulus() const { return modulus_; }
  std::size_t size() const { return n_; }
  Entry operator()(std::size_t r, std::size_t c) const {
    return entries_[r * n_ + c];
  }
  void set(std::size_t r, std::size_t c, std::int64_t v);
  const std::vector<Entry>& entries() const { return entries_; }

  bool is_identity() const;
  bool is_invertible() const;
  ModMatrix transpose() const;
  ModMatrix scaled(std::int64_t s) const;
  std::string str() const;

  friend ModMatrix operator*(const ModMatrix& a, const ModMatrix& b);
  friend ModMatrix operator+(const ModMatrix& a, const ModMatrix& b);
  friend ModMatrix operator-(const ModMatrix& a, const ModMatrix& b);
  friend bool operator==(const ModMatrix& a, const ModMatrix& b) {
    return a.modulus_ == b.modulus_ && a.n_ == b.n_ &&
           a.entries_ == b.entries_;
  }
  friend bool operator<(const ModMatrix& a, const ModMatrix& b) {
    return a.entries_ < b.entries_;
  }

 private:
  Prime ell_;
  unsigned k_;
  std::uint32_t modulus_;
  std::size_t n_;
  std::vector<Entry> entries_;
};

struct ModMatrixHash {
  std::size_t operator()(const ModMatrix& m) const noexcept;
};

// ---------------------------------------------------------------------------
// Operations

LAdicMatrix mat_mul(const LAdicMatrix& a, const LAdicMatrix& b);
ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b);

LAdicMatrix mat_inv(const LAdicMatrix& a);
ModMatrix mat_inv(const ModMatrix& a);

LAdicNumber det(const LAdicMatrix& a);
std::uint32_t det(const ModMatrix& a);

// Coefficients c[0..n] of det(x I - A), lowest degree first; c[n] == 1.
// Requires a prime modulus.
std::vector<std::uint32_t> charpoly(const ModMatrix& a);
// Evaluates a polynomial (lowest degree first) at a square matrix.
ModMatrix poly_eval(std::span<const std::uint32_t> coeffs, const ModMatrix& a);

ModMatrix reduce_mod(const LAdicMatrix& a, unsigned k);
// Integer lift with entries in [0, l^k).
LAdicMatrix lift(const ModMatrix& a);

struct SmithForm {
  // l-valuations of the elementary divisors, weakly increasing.
  std::vector<int> valuations;
};

SmithForm smith_normal_form(const LAdicMatrix& a);

// Linear algebra over F_p on dense row-major systems.
using ModVector = std::vector<std::uint32_t>;
std::size_t rank_mod_prime(std::vector<ModVector> rows, std::uint32_t p);
// Basis of {x : rows * x = 0}, in reduced echelon parametrization: the basis
// vector for free column f has a 1 at f and zeros at the other free columns.
std::vector<ModVector> nullspace_mod_prime(std::vector<ModVector> rows,
                                           std::size_t ncols, std::uint32_t p);

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t m);

}  // namespace galdual
