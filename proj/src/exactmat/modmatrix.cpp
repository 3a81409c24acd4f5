#include "galdual/exactmat.hpp"

#include <algorithm>

namespace galdual {

namespace {

std::uint32_t reduce(std::int64_t v, std::uint32_t m) {
  std::int64_t r = v % static_cast<std::int64_t>(m);
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

void require_same_ring(const ModMatrix& a, const ModMatrix& b,
                       const char* what) {
  if (a.size() != b.size())
    throw DimensionError(std::string(what) + ": dimensions " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  if (a.modulus() != b.modulus())
    throw DimensionError(std::string(what) + ": moduli " +
                         std::to_string(a.modulus()) + " and " +
                         std::to_string(b.modulus()));
}

}  // namespace

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t m) {
  std::int64_t t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    const std::int64_t q = r / nr;
    std::tie(t, nt) = std::pair(nt, t - q * nt);
    std::tie(r, nr) = std::pair(nr, r - q * nr);
  }
  if (r != 1)
    throw MathError(std::to_string(a) + " is not a unit mod " +
                    std::to_string(m));
  return reduce(t, m);
}

ModMatrix::ModMatrix(Prime ell, unsigned k, std::size_t n)
    : ell_(ell),
      k_(k),
      modulus_(static_cast<std::uint32_t>(ipow(ell, k))),
      n_(n),
      entries_(n * n, 0) {
  if (k == 0) throw MathError("ModMatrix precision must be at least 1");
}

ModMatrix::ModMatrix(Prime ell, unsigned k, std::size_t n,
                     std::span<const std::int64_t> entries)
    : ModMatrix(ell, k, n) {
  if (entries.size() != n * n)
    throw DimensionError("expected " + std::to_string(n * n) + " entries");
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries_[i] = reduce(entries[i], modulus_);
}

ModMatrix::ModMatrix(Prime ell, unsigned k,
                     const std::vector<std::vector<std::int64_t>>& rows)
    : ModMatrix(ell, k, rows.size()) {
  for (std::size_t r = 0; r < n_; ++r) {
    if (rows[r].size() != n_) throw DimensionError("matrix is not square");
    for (std::size_t c = 0; c < n_; ++c) set(r, c, rows[r][c]);
  }
}

ModMatrix ModMatrix::identity(Prime ell, unsigned k, std::size_t n) {
  ModMatrix m(ell, k, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

ModMatrix ModMatrix::parse(std::string_view text, Prime ell, unsigned k) {
  const LAdicMatrix a = LAdicMatrix::parse(text, ell);
  return reduce_mod(a, k);
}

void ModMatrix::set(std::size_t r, std::size_t c, std::int64_t v) {
  entries_[r * n_ + c] = reduce(v, modulus_);
}

bool ModMatrix::is_identity() const {
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c)
      if (entries_[r * n_ + c] != (r == c ? 1u : 0u)) return false;
  return true;
}

bool ModMatrix::is_invertible() const { return det(*this) % ell_ != 0; }

ModMatrix ModMatrix::transpose() const {
  ModMatrix t(ell_, k_, n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c)
      t.entries_[c * n_ + r] = entries_[r * n_ + c];
  return t;
}

ModMatrix ModMatrix::scaled(std::int64_t s) const {
  ModMatrix m = *this;
  const std::uint64_t f = reduce(s, modulus_);
  for (auto& e : m.entries_) e = static_cast<Entry>(e * f % modulus_);
  return m;
}

std::string ModMatrix::str() const {
  std::string out;
  for (std::size_t r = 0; r < n_; ++r) {
    if (r) out += ';';
    for (std::size_t c = 0; c < n_; ++c) {
      if (c) out += ',';
      out += std::to_string(entries_[r * n_ + c]);
    }
  }
  return out;
}

ModMatrix operator*(const ModMatrix& a, const ModMatrix& b) {
  return mat_mul(a, b);
}

ModMatrix operator+(const ModMatrix& a, const ModMatrix& b) {
  require_same_ring(a, b, "matrix sum");
  ModMatrix r = a;
  for (std::size_t i = 0; i < r.entries_.size(); ++i)
    r.entries_[i] = (a.entries_[i] + b.entries_[i]) % a.modulus_;
  return r;
}

ModMatrix operator-(const ModMatrix& a, const ModMatrix& b) {
  require_same_ring(a, b, "matrix difference");
  ModMatrix r = a;
  for (std::size_t i = 0; i < r.entries_.size(); ++i)
    r.entries_[i] = (a.entries_[i] + a.modulus_ - b.entries_[i]) % a.modulus_;
  return r;
}

ModMatrix mat_mul(const ModMatrix& a, const ModMatrix& b) {
  require_same_ring(a, b, "mat_mul");
  const std::size_t n = a.size();
  const std::uint64_t m = a.modulus();
  std::vector<std::int64_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc += std::uint64_t{a(i, k)} * b(k, j);
      out[i * n + j] = static_cast<std::int64_t>(acc % m);
    }
  return ModMatrix(a.ell(), a.precision(), n, out);
}

std::uint32_t det(const ModMatrix& a) {
  const LAdicNumber d = det(lift(a));
  return static_cast<std::uint32_t>(d.mod(a.modulus()));
}

ModMatrix mat_inv(const ModMatrix& a) {
  const std::size_t n = a.size();
  const std::uint32_t m = a.modulus();
  const std::uint32_t l = a.ell();
  std::vector<std::uint64_t> w(n * 2 * n, 0);
  const std::size_t cols = 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i * cols + j] = a(i, j);
    w[i * cols + n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && w[p * cols + c] % l == 0) ++p;
    if (p == n) {
      const std::uint32_t d = det(a);
      throw SingularMatrixError(
          "mat_inv: matrix is not invertible mod " + std::to_string(m) +
              " (det " + std::to_string(d) + ")",
          std::to_string(d));
    }
    if (p != c)
      for (std::size_t j = 0; j < cols; ++j)
        std::swap(w[p * cols + j], w[c * cols + j]);
    const std::uint64_t inv =
        inverse_mod(static_cast<std::uint32_t>(w[c * cols + c]), m);
    for (std::size_t j = 0; j < cols; ++j)
      w[c * cols + j] = w[c * cols + j] * inv % m;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || w[i * cols + c] == 0) continue;
      const std::uint64_t f = w[i * cols + c];
      for (std::size_t j = 0; j < cols; ++j)
        w[i * cols + j] = (w[i * cols + j] + (m - f) * w[c * cols + j]) % m;
    }
  }
  std::vector<std::int64_t> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i * n + j] = static_cast<std::int64_t>(w[i * cols + n + j]);
  return ModMatrix(a.ell(), a.precision(), n, out);
}

// Reduction to upper Hessenberg form followed by the standard determinant
// recurrence on the leading principal minors of x I - H.
std::vector<std::uint32_t> charpoly(const ModMatrix& a) {
  if (a.precision() != 1)
    throw MathError("charpoly: modulus " + std::to_string(a.modulus()) +
                    " is not prime");
  const std::size_t n = a.size();
  const std::uint64_t p = a.modulus();
  std::vector<std::uint64_t> h(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] = a(i, j);
  auto H = [&](std::size_t i, std::size_t j) -> std::uint64_t& {
    return h[i * n + j];
  };

  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t piv = m;
    while (piv < n && H(piv, m - 1) == 0) ++piv;
    if (piv == n) continue;
    if (piv != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(H(piv, j), H(m, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(H(i, piv), H(i, m));
    }
    const std::uint64_t tinv =
        inverse_mod(static_cast<std::uint32_t>(H(m, m - 1)), static_cast<std::uint32_t>(p));
    for (std::size_t i = m + 1; i < n; ++i) {
      if (H(i, m - 1) == 0) continue;
      const std::uint64_t u = H(i, m - 1) * tinv % p;
      // row_i -= u row_m; col_m += u col_i (similarity transform).
      for (std::size_t j = 0; j < n; ++j) H(i, j) = (H(i, j) + (p - u) * H(m, j)) % p;
      for (std::size_t r = 0; r < n; ++r) H(r, m) = (H(r, m) + u * H(r, i)) % p;
    }
  }

  // polys[k] = charpoly of the leading k x k block.
  std::vector<std::vector<std::uint64_t>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t mm = k - 1;  // index of the new row/column
    std::vector<std::uint64_t> next(k + 1, 0);
    // (x - h_mm) * p_{k-1}
    for (std::size_t d = 0; d < polys[k - 1].size(); ++d) {
      next[d + 1] = (next[d + 1] + polys[k - 1][d]) % p;
      next[d] = (next[d] + (p - H(mm, mm)) * polys[k - 1][d]) % p;
    }
    // - sum_{i < mm} h_{i,mm} * prod_{j=i+1..mm} h_{j,j-1} * p_i
    std::uint64_t prod = 1;
    for (std::size_t ii = mm; ii-- > 0;) {
      prod = prod * H(ii + 1, ii) % p;
      const std::uint64_t coef = H(ii, mm) * prod % p;
      if (coef == 0) continue;
      for (std::size_t d = 0; d < polys[ii].size(); ++d)
        next[d] = (next[d] + (p - coef) * polys[ii][d]) % p;
    }
    polys[k] = std::move(next);
  }
  std::vector<std::uint32_t> out(polys[n].begin(), polys[n].end());
  return out;
}

ModMatrix poly_eval(std::span<const std::uint32_t> coeffs, const ModMatrix& a) {
  ModMatrix acc(a.ell(), a.precision(), a.size());
  const ModMatrix id = ModMatrix::identity(a.ell(), a.precision(), a.size());
  for (std::size_t i = coeffs.size(); i-- > 0;)
    acc = acc * a + id.scaled(coeffs[i]);
  return acc;
}

std::size_t ModMatrixHash::operator()(const ModMatrix& m) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull ^ m.modulus();
  for (auto e : m.entries()) {
    h ^= e;
    h *= 0x100000001b3ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Dense systems over F_p

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<ModVector>& rows, std::size_t ncols,
                              std::uint32_t p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    const std::uint64_t inv = inverse_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = static_cast<std::uint32_t>(x * inv % p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint64_t f = rows[i][c];
      for (std::size_t j = 0; j < ncols; ++j)
        rows[i][j] = static_cast<std::uint32_t>(
            (rows[i][j] + (p - f) * rows[r][j]) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank_mod_prime(std::vector<ModVector> rows, std::uint32_t p) {
  if (rows.empty()) return 0;
  return rref(rows, rows.front().size(), p).size();
}

std::vector<ModVector> nullspace_mod_prime(std::vector<ModVector> rows,
                                           std::size_t ncols, std::uint32_t p) {
  for (const auto& r : rows)
    if (r.size() != ncols) throw DimensionError("nullspace: ragged system");
  const auto pivots = rref(rows, ncols, p);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<ModVector> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    ModVector v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = (p - rows[i][f]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace galdual
