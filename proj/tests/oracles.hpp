#pragma once

// Independent test oracles. These deliberately avoid the library's
// algorithms: cofactor expansion instead of elimination, polynomial Laplace
// expansion instead of Hessenberg reduction, brute-force set enumeration
// instead of lattice bases.

#include "galdual/exactmat.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace galdual::oracle {

using Rational = boost::multiprecision::cpp_rational;
using RatMatrix = std::vector<std::vector<Rational>>;

inline RatMatrix to_rational(const LAdicMatrix& a) {
  const std::size_t n = a.size();
  RatMatrix m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = a(i, j);
      BigInt den = 1;
      for (unsigned k = 0; k < e.exponent(); ++k) den *= a.ell().value();
      m[i][j] = Rational(e.numerator().big(), den);
    }
  return m;
}

// Cofactor expansion along the first row.
inline Rational laplace_det(const RatMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    RatMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    const Rational term = m[0][c] * laplace_det(minor);
    total += (c % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

// Inverse by the adjugate formula.
inline RatMatrix adjugate_inverse(const RatMatrix& m) {
  const std::size_t n = m.size();
  const Rational d = laplace_det(m);
  RatMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      RatMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Rational> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      const Rational cof = laplace_det(minor);
      inv[i][j] = ((i + j) % 2 == 0 ? cof : Rational(-cof)) / d;
    }
  return inv;
}

inline RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.size();
  RatMatrix c(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Polynomials over F_p, lowest degree first.
using Poly = std::vector<std::int64_t>;

inline Poly poly_mul(const Poly& a, const Poly& b, std::int64_t p) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

inline Poly poly_add(const Poly& a, const Poly& b, std::int64_t p, bool sub = false) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i)
    r[i] = ((r[i] + (sub ? p - b[i] : b[i])) % p + p) % p;
  return r;
}

inline Poly poly_det(const std::vector<std::vector<Poly>>& m, std::int64_t p) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly total{0};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    total = poly_add(total, poly_mul(m[0][c], poly_det(minor, p), p), p, c % 2 == 1);
  }
  return total;
}

// det(x I - A) by Laplace expansion over F_p[x].
inline std::vector<std::uint32_t> charpoly_laplace(const ModMatrix& a) {
  const std::int64_t p = a.modulus();
  const std::size_t n = a.size();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t v = (p - a(i, j)) % p;
      m[i][j] = (i == j) ? Poly{v, 1} : Poly{v};
    }
  Poly d = poly_det(m, p);
  d.resize(n + 1, 0);
  return {d.begin(), d.end()};
}

// Expansion of prod (x - r_i) over F_p.
inline std::vector<std::uint32_t> poly_from_roots(const std::vector<std::int64_t>& roots,
                                                  std::int64_t p) {
  Poly r{1};
  for (auto root : roots) r = poly_mul(r, Poly{((-root) % p + p) % p, 1}, p);
  return {r.begin(), r.end()};
}

// Random invertible matrix mod p built as a product of elementary matrices
// and unit diagonal scalings.
inline ModMatrix random_invertible(Prime ell, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> coef(0, ell - 1);
  std::uniform_int_distribution<std::int64_t> unit(1, ell - 1);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  ModMatrix m = ModMatrix::identity(ell, 1, n);
  for (int step = 0; step < 12; ++step) {
    ModMatrix e = ModMatrix::identity(ell, 1, n);
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j)
      e.set(i, i, unit(rng));
    else
      e.set(i, j, coef(rng));
    m = m * e;
  }
  return m;
}

// Orbit count of a permutation group by union-find over generator edges.
inline std::size_t orbit_count(std::size_t degree,
                               const std::vector<std::vector<std::uint32_t>>& gens) {
  std::vector<std::size_t> parent(degree);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens)
    for (std::size_t i = 0; i < degree; ++i) parent[find(i)] = find(g[i]);
  std::size_t count = 0;
  for (std::size_t i = 0; i < degree; ++i) count += (find(i) == i);
  return count;
}

// Brute-force F_2 arithmetic on 16-bit codes (bit 4r+c), independent of the
// library's packed helpers.
using Code = std::uint32_t;

inline Code code_of(const ModMatrix& m) {
  Code c = 0;
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k)
      if (m(r, k) % 2) c |= 1u << (4 * r + k);
  return c;
}

inline Code mul2(Code a, Code b) {
  Code out = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      int s = 0;
      for (int k = 0; k < 4; ++k) s ^= ((a >> (4 * r + k)) & 1) & ((b >> (4 * k + c)) & 1);
      if (s) out |= 1u << (4 * r + c);
    }
  return out;
}

// Invertible iff no nonzero vector is killed.
inline bool invertible2(Code a) {
  for (unsigned v = 1; v < 16; ++v) {
    unsigned image = 0;
    for (int r = 0; r < 4; ++r) {
      unsigned bit = 0;
      for (int c = 0; c < 4; ++c) bit ^= ((a >> (4 * r + c)) & 1) & ((v >> c) & 1);
      image |= bit << r;
    }
    if (image == 0) return false;
  }
  return true;
}

inline Code transpose2(Code a) {
  Code out = 0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if ((a >> (4 * r + c)) & 1) out |= 1u << (4 * c + r);
  return out;
}

// Inverse as the last power before the identity.
inline Code inverse2(Code a) {
  Code prev = 0x8421, cur = a;
  while (cur != 0x8421) {
    prev = cur;
    cur = mul2(cur, a);
  }
  return prev;
}

}  // namespace galdual::oracle
