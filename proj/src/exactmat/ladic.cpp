#include "galdual/exactmat.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <sstream>

namespace galdual {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// LAdicNumber

LAdicNumber::LAdicNumber(Prime ell, ExactInt num, unsigned exp)
    : num_(std::move(num)), exp_(exp), ell_(ell.value()) {
  normalize();
}

void LAdicNumber::normalize() {
  if (num_.is_zero()) {
    exp_ = 0;
    return;
  }
  const auto l = static_cast<std::int64_t>(ell_);
  while (exp_ > 0 && num_.divisible_by(l)) {
    num_ = num_.divexact(l);
    --exp_;
  }
}

int LAdicNumber::valuation() const {
  if (is_zero()) throw MathError("valuation of zero");
  if (exp_ > 0) return -static_cast<int>(exp_);
  const auto l = static_cast<std::int64_t>(ell_);
  int v = 0;
  ExactInt n = num_;
  while (n.divisible_by(l)) {
    n = n.divexact(l);
    ++v;
  }
  return v;
}

std::int64_t LAdicNumber::mod(std::int64_t m) const {
  if (exp_ != 0) throw MathError("residue of a non-integral l-adic number");
  return num_.mod(m);
}

bool LAdicNumber::is_unit_in_ring() const {
  if (is_zero()) return false;
  if (exp_ > 0) return num_ == ExactInt(1) || num_ == ExactInt(-1);
  const auto l = static_cast<std::int64_t>(ell_);
  ExactInt n = num_;
  while (n.divisible_by(l)) n = n.divexact(l);
  return n == ExactInt(1) || n == ExactInt(-1);
}

LAdicNumber LAdicNumber::inverse() const {
  if (!is_unit_in_ring())
    throw MathError(str() + " is not invertible in Z[1/" +
                    std::to_string(ell_) + "]");
  const int s = num_.sign();
  if (exp_ > 0)
    return LAdicNumber(Prime(ell_), ExactInt::pow(ell_, exp_) * ExactInt(s), 0);
  const int v = valuation();
  return LAdicNumber(Prime(ell_), ExactInt(s), static_cast<unsigned>(v));
}

std::string LAdicNumber::str() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/l^" + std::to_string(exp_);
}

LAdicNumber LAdicNumber::parse(std::string_view text, Prime ell) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) -> BigInt {
    s = trim(s);
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) throw ParseError("bad integer '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j])))
        throw ParseError("bad integer '" + std::string(s) + "'");
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };

  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return LAdicNumber(ell, ExactInt(parse_int(text)), 0);

  std::string_view den = trim(text.substr(slash + 1));
  if (den.size() < 3 || den.substr(0, 2) != "l^")
    throw ParseError("denominator must be l^k in '" + std::string(text) + "'");
  const BigInt k = parse_int(den.substr(2));
  if (k < 0 || k > 64)
    throw ParseError("denominator exponent out of range in '" +
                     std::string(text) + "'");
  return LAdicNumber(ell, ExactInt(parse_int(text.substr(0, slash))),
                     static_cast<unsigned>(k));
}

LAdicNumber operator+(const LAdicNumber& a, const LAdicNumber& b) {
  if (a.ell_ != b.ell_) throw DimensionError("l-adic numbers over different l");
  const unsigned k = std::max(a.exp_, b.exp_);
  const auto l = static_cast<std::int64_t>(a.ell_);
  ExactInt sum = a.num_ * ExactInt::pow(l, k - a.exp_) +
                 b.num_ * ExactInt::pow(l, k - b.exp_);
  return LAdicNumber(Prime(a.ell_), std::move(sum), k);
}

LAdicNumber LAdicNumber::operator-() const {
  return LAdicNumber(Prime(ell_), -num_, exp_);
}

LAdicNumber operator-(const LAdicNumber& a, const LAdicNumber& b) {
  return a + (-b);
}

LAdicNumber operator*(const LAdicNumber& a, const LAdicNumber& b) {
  if (a.ell_ != b.ell_) throw DimensionError("l-adic numbers over different l");
  if (a.is_zero() || b.is_zero()) return LAdicNumber(Prime(a.ell_));
  return LAdicNumber(Prime(a.ell_), a.num_ * b.num_, a.exp_ + b.exp_);
}

// ---------------------------------------------------------------------------
// LAdicMatrix

LAdicMatrix::LAdicMatrix(Prime ell, std::size_t n)
    : ell_(ell), n_(n), entries_(n * n, LAdicNumber(ell)) {}

LAdicMatrix::LAdicMatrix(Prime ell, std::size_t n,
                         std::vector<LAdicNumber> entries)
    : ell_(ell), n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n)
    throw DimensionError("expected " + std::to_string(n * n) + " entries");
  for (const auto& e : entries_)
    if (e.ell() != ell) throw DimensionError("entry over a different l");
}

LAdicMatrix LAdicMatrix::identity(Prime ell, std::size_t n) {
  LAdicMatrix m(ell, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = LAdicNumber(ell, 1);
  return m;
}

LAdicMatrix LAdicMatrix::diagonal(Prime ell, std::span<const LAdicNumber> d) {
  LAdicMatrix m(ell, d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

LAdicMatrix LAdicMatrix::from_integers(
    Prime ell, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t n = rows.size();
  LAdicMatrix m(ell, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw DimensionError("matrix is not square");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = LAdicNumber(ell, rows[r][c]);
  }
  return m;
}

namespace {

std::vector<std::vector<std::string_view>> split_matrix_text(
    std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(start, end - start);
    std::vector<std::string_view> cells;
    std::size_t cs = 0;
    while (cs <= row.size()) {
      std::size_t ce = row.find(',', cs);
      if (ce == std::string_view::npos) ce = row.size();
      cells.push_back(row.substr(cs, ce - cs));
      cs = ce + 1;
    }
    rows.push_back(std::move(cells));
    start = end + 1;
  }
  const std::size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n)
      throw ParseError("matrix text is not square: '" + std::string(text) +
                       "'");
  return rows;
}

}  // namespace

LAdicMatrix LAdicMatrix::parse(std::string_view text, Prime ell) {
  const auto cells = split_matrix_text(text);
  const std::size_t n = cells.size();
  std::vector<LAdicNumber> entries;
  entries.reserve(n * n);
  for (const auto& row : cells)
    for (auto cell : row) entries.push_back(LAdicNumber::parse(cell, ell));
  return LAdicMatrix(ell, n, std::move(entries));
}

bool LAdicMatrix::is_integral() const {
  for (const auto& e : entries_)
    if (!e.is_integral()) return false;
  return true;
}

unsigned LAdicMatrix::max_exponent() const {
  unsigned k = 0;
  for (const auto& e : entries_) k = std::max(k, e.exponent());
  return k;
}

bool LAdicMatrix::is_alternating() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (!(*this)(i, i).is_zero()) return false;
    for (std::size_t j = i + 1; j < n_; ++j)
      if (!((*this)(i, j) + (*this)(j, i)).is_zero()) return false;
  }
  return true;
}

LAdicMatrix LAdicMatrix::transpose() const {
  LAdicMatrix t(ell_, n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

LAdicMatrix LAdicMatrix::scaled(const LAdicNumber& s) const {
  LAdicMatrix m = *this;
  for (auto& e : m.entries_) e = e * s;
  return m;
}

std::string LAdicMatrix::str() const {
  std::string out;
  for (std::size_t r = 0; r < n_; ++r) {
    if (r) out += ';';
    for (std::size_t c = 0; c < n_; ++c) {
      if (c) out += ',';
      out += (*this)(r, c).str();
    }
  }
  return out;
}

LAdicMatrix operator*(const LAdicMatrix& a, const LAdicMatrix& b) {
  return mat_mul(a, b);
}

LAdicMatrix operator+(const LAdicMatrix& a, const LAdicMatrix& b) {
  if (a.n_ != b.n_ || a.ell_ != b.ell_)
    throw DimensionError("matrix sum: dimension or l mismatch");
  LAdicMatrix r = a;
  for (std::size_t i = 0; i < r.entries_.size(); ++i)
    r.entries_[i] = a.entries_[i] + b.entries_[i];
  return r;
}

LAdicMatrix operator-(const LAdicMatrix& a, const LAdicMatrix& b) {
  if (a.n_ != b.n_ || a.ell_ != b.ell_)
    throw DimensionError("matrix difference: dimension or l mismatch");
  LAdicMatrix r = a;
  for (std::size_t i = 0; i < r.entries_.size(); ++i)
    r.entries_[i] = a.entries_[i] - b.entries_[i];
  return r;
}

LAdicMatrix mat_mul(const LAdicMatrix& a, const LAdicMatrix& b) {
  if (a.size() != b.size())
    throw DimensionError("mat_mul: dimensions " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  if (a.ell() != b.ell()) throw DimensionError("mat_mul: different l");
  const std::size_t n = a.size();
  const Prime ell = a.ell();
  LAdicMatrix r(ell, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      LAdicNumber acc(ell);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& x = a(i, k);
        const auto& y = b(k, j);
        if (x.is_zero() || y.is_zero()) continue;
        acc = acc + x * y;
      }
      r(i, j) = acc;
    }
  return r;
}

namespace {

// Integer matrix l^K * a with K the largest denominator exponent.
std::vector<BigInt> scaled_integers(const LAdicMatrix& a, unsigned K) {
  const std::size_t n = a.size();
  const auto l = static_cast<std::int64_t>(a.ell().value());
  std::vector<BigInt> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = a(i, j);
      m[i * n + j] =
          e.numerator().big() * ExactInt::pow(l, K - e.exponent()).big();
    }
  return m;
}

BigInt bareiss_det(std::vector<BigInt> m, std::size_t n) {
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p * n + k] == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m[k * n + c], m[p * n + c]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i * n + j] =
            (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
    prev = m[k * n + k];
  }
  return sign * m[(n - 1) * n + (n - 1)];
}

}  // namespace

LAdicNumber det(const LAdicMatrix& a) {
  const std::size_t n = a.size();
  const unsigned K = a.max_exponent();
  const BigInt d = bareiss_det(scaled_integers(a, K), n);
  return LAdicNumber(a.ell(), ExactInt(d), static_cast<unsigned>(K * n));
}

LAdicMatrix mat_inv(const LAdicMatrix& a) {
  const std::size_t n = a.size();
  const Prime ell = a.ell();
  const LAdicNumber d = det(a);
  if (d.is_zero())
    throw SingularMatrixError("mat_inv: singular matrix (det 0)", d.str());
  if (!d.is_unit_in_ring())
    throw SingularMatrixError(
        "mat_inv: det " + d.str() + " is not a unit in Z[1/l]", d.str());

  std::vector<Rational> m(n * 2 * n);
  const std::size_t w = 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = a(i, j);
      m[i * w + j] = Rational(e.numerator().big(),
                              ExactInt::pow(ell, e.exponent()).big());
    }
    m[i * w + n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (m[p * w + c] == 0) ++p;  // det != 0 guarantees a pivot
    if (p != c)
      for (std::size_t j = 0; j < w; ++j) std::swap(m[p * w + j], m[c * w + j]);
    const Rational piv = m[c * w + c];
    for (std::size_t j = 0; j < w; ++j) m[c * w + j] /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i * w + c] == 0) continue;
      const Rational f = m[i * w + c];
      for (std::size_t j = 0; j < w; ++j) m[i * w + j] -= f * m[c * w + j];
    }
  }

  LAdicMatrix inv(ell, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& q = m[i * w + n + j];
      BigInt den = boost::multiprecision::denominator(q);
      unsigned k = 0;
      while (den % ell.value() == 0) {
        den /= ell.value();
        ++k;
      }
      // Unreachable when det is +-l^j.
      if (den != 1)
        throw SingularMatrixError("mat_inv: inverse leaves Z[1/l]", d.str());
      inv(i, j) =
          LAdicNumber(ell, ExactInt(boost::multiprecision::numerator(q)), k);
    }
  return inv;
}

ModMatrix reduce_mod(const LAdicMatrix& a, unsigned k) {
  const std::size_t n = a.size();
  const auto m = static_cast<std::int64_t>(ipow(a.ell(), k));
  std::vector<std::int64_t> v(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const auto& e = a(r, c);
      if (!e.is_integral()) throw NonIntegralError(r, c);
      v[r * n + c] = e.mod(m);
    }
  return ModMatrix(a.ell(), k, n, v);
}

LAdicMatrix lift(const ModMatrix& a) {
  const std::size_t n = a.size();
  LAdicMatrix m(a.ell(), n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      m(r, c) = LAdicNumber(a.ell(), static_cast<std::int64_t>(a(r, c)));
  return m;
}

SmithForm smith_normal_form(const LAdicMatrix& a) {
  const std::size_t n = a.size();
  const auto l = static_cast<std::int64_t>(a.ell().value());
  const unsigned K = a.max_exponent();
  std::vector<BigInt> m = scaled_integers(a, K);

  auto val = [&](const BigInt& x) {
    int v = 0;
    BigInt y = x;
    while (y % l == 0) {
      y /= l;
      ++v;
    }
    return v;
  };

  SmithForm out;
  for (std::size_t t = 0; t < n; ++t) {
    // Pivot of minimal valuation in the trailing block.
    std::size_t pr = n, pc = n;
    int best = 0;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (m[i * n + j] == 0) continue;
        const int v = val(m[i * n + j]);
        if (pr == n || v < best) {
          best = v;
          pr = i;
          pc = j;
        }
      }
    if (pr == n)
      throw SingularMatrixError("smith_normal_form: singular matrix", "0");
    for (std::size_t j = 0; j < n; ++j) std::swap(m[t * n + j], m[pr * n + j]);
    for (std::size_t i = 0; i < n; ++i) std::swap(m[i * n + t], m[i * n + pc]);

    const BigInt lv = ExactInt::pow(l, static_cast<unsigned>(best)).big();
    const BigInt unit = m[t * n + t] / lv;
    // Rows below: row_i <- unit*row_i - (a_it / l^v) row_t.
    for (std::size_t i = t + 1; i < n; ++i) {
      if (m[i * n + t] == 0) continue;
      const BigInt f = m[i * n + t] / lv;
      for (std::size_t j = t; j < n; ++j)
        m[i * n + j] = unit * m[i * n + j] - f * m[t * n + j];
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (m[t * n + j] == 0) continue;
      const BigInt f = m[t * n + j] / lv;
      for (std::size_t i = t; i < n; ++i)
        m[i * n + j] = unit * m[i * n + j] - f * m[i * n + t];
    }
    out.valuations.push_back(best - static_cast<int>(K));
  }
  std::sort(out.valuations.begin(), out.valuations.end());
  return out;
}

}  // namespace galdual
