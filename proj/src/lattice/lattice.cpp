#include "galdual/lattice.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <sstream>

namespace galdual {

namespace {

// Valuation of a nonzero residue 0 < x < l^n.
unsigned residue_valuation(std::int64_t x, std::int64_t l) {
  unsigned v = 0;
  while (x % l == 0) {
    x /= l;
    ++v;
  }
  return v;
}

std::int64_t reduce(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

// Echelon basis of the Z-span of `rows`, which must have full rank `dim`.
std::vector<std::vector<BigInt>> hermite_basis(std::vector<std::vector<BigInt>> rows,
                                               std::size_t dim) {
  std::size_t top = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    for (;;) {
      std::size_t pivot = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        if (pivot == rows.size() || abs(rows[r][c]) < abs(rows[pivot][c])) pivot = r;
      }
      if (pivot == rows.size()) break;
      std::swap(rows[top], rows[pivot]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const BigInt q = rows[r][c] / rows[top][c];
        for (std::size_t k = c; k < dim; ++k) rows[r][k] -= q * rows[top][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (top < rows.size() && rows[top][c] != 0) ++top;
  }
  if (top != dim) throw std::logic_error("lattice is not of full rank");
  rows.resize(dim);
  return rows;
}

std::vector<IntVector> span_mod(const std::vector<IntVector>& gens, std::size_t dim,
                                std::int64_t m) {
  constexpr std::size_t kLimit = std::size_t{1} << 22;
  std::set<IntVector> seen{IntVector(dim, 0)};
  for (const auto& g : gens) {
    std::set<IntVector> next;
    for (const auto& x : seen) {
      IntVector y = x;
      for (std::int64_t t = 0; t < m; ++t) {
        if (!next.insert(y).second) break;
        for (std::size_t i = 0; i < dim; ++i) y[i] = (y[i] + g[i]) % m;
      }
      if (next.size() > kLimit) throw MathError("subgroup too large to enumerate");
    }
    seen = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

IsotropyError::IsotropyError(std::size_t first, std::size_t second, std::int64_t pairing)
    : MathError("kernel is not isotropic: generators " + std::to_string(first + 1) +
                " and " + std::to_string(second + 1) + " pair to " +
                std::to_string(pairing)),
      first_(first),
      second_(second) {}

// ---------------------------------------------------------------------------
// KernelSpec

KernelSpec::KernelSpec(Prime ell_, unsigned n_, std::size_t dim_,
                       std::vector<IntVector> generators_)
    : ell(ell_), n(n_), dim(dim_), generators(std::move(generators_)) {
  if (n == 0 && !generators.empty()) throw KernelError("kernel exponent must be positive");
  if (ipow(ell, n) > (std::uint64_t{1} << 31)) throw KernelError("l^n too large");
  const std::int64_t m = modulus();
  for (auto& g : generators) {
    if (g.size() != dim) throw DimensionError("generator length differs from dim");
    bool zero = true;
    for (auto& x : g) {
      x = reduce(x, m);
      zero = zero && x == 0;
    }
    if (zero) throw KernelError("generator is zero mod l^n");
  }
}

std::vector<unsigned> KernelSpec::generator_orders() const {
  std::vector<unsigned> out;
  for (const auto& g : generators) {
    unsigned v = n;
    for (auto x : g)
      if (x != 0) v = std::min(v, residue_valuation(x, ell));
    out.push_back(n - v);
  }
  return out;
}

unsigned KernelSpec::log_order() const {
  if (generators.empty()) return 0;
  const std::int64_t m = modulus();
  std::vector<std::vector<BigInt>> rows;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<BigInt> r(dim, 0);
    r[i] = m;
    rows.push_back(std::move(r));
  }
  for (const auto& g : generators) rows.emplace_back(g.begin(), g.end());
  const auto basis = hermite_basis(std::move(rows), dim);
  unsigned v = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    BigInt d = abs(basis[i][i]);
    while (d % ell.value() == 0) {
      d /= ell.value();
      ++v;
    }
  }
  return n * static_cast<unsigned>(dim) - v;
}

std::vector<IntVector> KernelSpec::elements() const {
  return span_mod(generators, dim, modulus());
}

std::string KernelSpec::str() const {
  std::ostringstream os;
  os << "ell=" << ell.value() << " n=" << n << " dim=" << dim << " gens=";
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (k) os << ',';
    os << '(';
    for (std::size_t i = 0; i < dim; ++i) os << (i ? "," : "") << generators[k][i];
    os << ')';
  }
  return os.str();
}

KernelSpec KernelSpec::parse(std::string_view text) {
  auto number = [](std::string_view s, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
  };
  std::optional<std::int64_t> ell, n, dim;
  std::vector<IntVector> gens;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string_view val = std::string_view(tok).substr(eq + 1);
    if (key == "ell") {
      ell = number(val, "ell");
    } else if (key == "n") {
      n = number(val, "n");
    } else if (key == "dim") {
      dim = number(val, "dim");
    } else if (key == "gens") {
      std::size_t pos = 0;
      while (pos < val.size()) {
        if (val[pos] != '(') throw ParseError("generator must start with '('");
        const auto close = val.find(')', pos);
        if (close == std::string_view::npos) throw ParseError("unterminated generator");
        IntVector g;
        std::string_view body = val.substr(pos + 1, close - pos - 1);
        while (!body.empty()) {
          const auto comma = body.find(',');
          g.push_back(number(body.substr(0, comma), "generator entry"));
          if (comma == std::string_view::npos) break;
          body.remove_prefix(comma + 1);
        }
        gens.push_back(std::move(g));
        pos = close + 1;
        if (pos < val.size()) {
          if (val[pos] != ',') throw ParseError("expected ',' between generators");
          ++pos;
        }
      }
    } else {
      throw ParseError("unknown key '" + key + "'");
    }
  }
  if (!ell || !n || !dim) throw ParseError("kernel spec needs ell, n and dim");
  if (*ell < 2 || *n < 0 || *dim < 1) throw ParseError("kernel spec values out of range");
  return KernelSpec(Prime(static_cast<std::uint32_t>(*ell)), static_cast<unsigned>(*n),
                    static_cast<std::size_t>(*dim), std::move(gens));
}

// ---------------------------------------------------------------------------
// Change of basis

LAdicMatrix change_basis_from_transformation(const LAdicMatrix& n) { return mat_inv(n); }

LAdicMatrix change_basis_from_kernel(const KernelSpec& h) {
  const Prime l = h.ell;
  const std::size_t dim = h.dim;
  if (h.generators.empty()) return LAdicMatrix::identity(l, dim);

  const auto orders = h.generator_orders();
  const unsigned log_h = h.log_order();
  unsigned total = 0;
  for (auto o : orders) total += o;
  if (total != log_h) throw KernelError("generators are not independent");

  auto lifted_column = [&](LAdicMatrix& m, std::size_t col, const IntVector& g) {
    for (std::size_t r = 0; r < dim; ++r) m(r, col) = LAdicNumber(l, g[r], h.n);
  };

  LAdicMatrix m = LAdicMatrix::identity(l, dim);
  std::vector<bool> used(dim, false);
  bool placed = true;
  for (std::size_t k = 0; k < h.generators.size() && placed; ++k) {
    const auto& g = h.generators[k];
    const unsigned v = h.n - orders[k];
    placed = false;
    for (std::size_t i = dim; i-- > 0;) {
      if (used[i] || g[i] == 0 || residue_valuation(g[i], l) != v) continue;
      used[i] = true;
      lifted_column(m, i, g);
      placed = true;
      break;
    }
  }
  const LAdicNumber dm = det(m);
  const bool valid = placed && !dm.is_zero() && dm.is_unit_in_ring() &&
                     dm.valuation() == -static_cast<int>(log_h);
  if (!valid) {
    // Fall back to an echelon basis of l^n L = l^n Z^dim + span(h~).
    std::vector<std::vector<BigInt>> rows;
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<BigInt> r(dim, 0);
      r[i] = h.modulus();
      rows.push_back(std::move(r));
    }
    for (const auto& g : h.generators) rows.emplace_back(g.begin(), g.end());
    const auto basis = hermite_basis(std::move(rows), dim);
    m = LAdicMatrix(l, dim);
    for (std::size_t c = 0; c < dim; ++c)
      for (std::size_t r = 0; r < dim; ++r)
        m(r, c) = LAdicNumber(l, ExactInt(basis[c][r]), h.n);
  }

  if (h.modulus() <= 8 && log_h <= 12) {
    auto expected = h.elements();
    auto got = lattice_quotient(m, h.n);
    if (expected != got) throw std::logic_error("kernel lattice does not reproduce H");
  }
  return m;
}

LAdicMatrix dual_isogeny_matrix(const LAdicMatrix& n) { return n.transpose(); }

LAdicMatrix pullback_polarization(const LAdicMatrix& n_lambda, const LAdicMatrix& n_f) {
  if (n_lambda.size() != n_f.size())
    throw DimensionError("polarization and isogeny sizes differ");
  return n_f.transpose() * n_lambda * n_f;
}

Pushforward pushforward_polarization(const LAdicMatrix& n_lambda0, const LAdicMatrix& n_g,
                                     const KernelSpec& ker_g) {
  const std::size_t dim = n_lambda0.size();
  if (n_g.size() != dim || ker_g.dim != dim)
    throw DimensionError("pushforward operands have different sizes");
  if (!n_lambda0.is_integral()) throw MathError("polarization matrix is not integral at l");
  const Prime l = n_lambda0.ell();
  const std::int64_t m = ker_g.modulus();
  const ModMatrix nmod = reduce_mod(n_lambda0, std::max(ker_g.n, 1u));

  const auto& gens = ker_g.generators;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
          s = (s + gens[i][r] * static_cast<std::int64_t>(nmod(r, c)) % m * gens[j][c]) % m;
      if (s != 0) throw IsotropyError(i, j, s);
    }

  std::int64_t d = 1;
  for (unsigned e = 0;; ++e, d *= l) {
    bool kills = true;
    for (const auto& g : gens)
      for (std::size_t r = 0; r < dim && kills; ++r) {
        std::int64_t s = 0;
        for (std::size_t c = 0; c < dim; ++c)
          s = (s + static_cast<std::int64_t>(nmod(r, c)) * g[c]) % m;
        kills = (d % m) * s % m == 0;
      }
    if (kills) break;
    if (e >= ker_g.n) throw std::logic_error("no power of l kills the kernel");
  }

  const LAdicMatrix g_inv = mat_inv(n_g);
  if (!same_lattice(g_inv, change_basis_from_kernel(ker_g)))
    throw KernelError("isogeny matrix does not have the stated kernel");
  return {g_inv.transpose() * n_lambda0.scaled(LAdicNumber(l, d)) * g_inv, d};
}

// ---------------------------------------------------------------------------
// Polarization types

std::vector<std::int64_t> polarization_type(const LAdicMatrix& n) {
  if (n.size() % 2 != 0) throw DimensionError("polarization matrix has odd size");
  if (!n.is_alternating()) throw MathError("polarization matrix is not alternating");
  if (!n.is_integral()) throw MathError("polarization matrix is not integral at l");
  const auto snf = smith_normal_form(n);
  std::vector<std::int64_t> type;
  for (std::size_t i = 0; i < snf.valuations.size(); i += 2) {
    if (snf.valuations[i] != snf.valuations[i + 1])
      throw MathError("elementary divisor with odd multiplicity");
    type.push_back(static_cast<std::int64_t>(
        ipow(n.ell(), static_cast<unsigned>(snf.valuations[i]))));
  }
  return type;
}

std::vector<std::int64_t> polarization_type(const LAdicMatrix& n, std::size_t g) {
  if (n.size() != 2 * g) throw DimensionError("polarization matrix is not 2g x 2g");
  return polarization_type(n);
}

LAdicMatrix standard_polarization_matrix(Prime ell, const std::vector<std::int64_t>& type) {
  const std::size_t g = type.size();
  if (g == 0) throw DimensionError("empty polarization type");
  for (std::size_t i = 0; i < g; ++i) {
    if (type[i] <= 0) throw MathError("polarization type entries must be positive");
    if (i + 1 < g && type[i + 1] % type[i] != 0)
      throw MathError("polarization type is not a divisor chain");
  }
  LAdicMatrix m(ell, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    m(i, g + i) = LAdicNumber(ell, type[i]);
    m(g + i, i) = LAdicNumber(ell, -type[i]);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Conjugation and lattice comparison

LAdicMatrix conjugate_by(const LAdicMatrix& m, const LAdicMatrix& a) {
  return mat_inv(m) * a * m;
}

Conjugator::Conjugator(LAdicMatrix m) : m_(std::move(m)), m_inv_(mat_inv(m_)) {}

LAdicMatrix Conjugator::operator()(const LAdicMatrix& a) const { return m_inv_ * a * m_; }

ModConjugator::ModConjugator(const LAdicMatrix& m, unsigned k)
    : ell_(m.ell()), k_(k), n_(m.size()) {
  if (n_ > 8) throw DimensionError("conjugator supports sizes up to 8");
  if (k == 0) throw MathError("output precision must be positive");
  const LAdicMatrix inv = mat_inv(m);
  const unsigned s = m.max_exponent(), t = inv.max_exponent();
  shift_ = s + t;
  if (ipow(ell_, k_ + shift_) > (std::uint64_t{1} << 20))
    throw MathError("conjugation precision too large");
  in_mod_ = static_cast<std::int64_t>(ipow(ell_, k_ + shift_));
  out_mod_ = static_cast<std::int64_t>(ipow(ell_, k_));
  divisor_ = static_cast<std::int64_t>(ipow(ell_, shift_));
  const unsigned in_k = k_ + shift_;
  left_ = std::vector<std::int64_t>(n_ * n_);
  right_ = std::vector<std::int64_t>(n_ * n_);
  const ModMatrix left = reduce_mod(inv.scaled(LAdicNumber(ell_, ExactInt::pow(ell_, t))), in_k);
  const ModMatrix right = reduce_mod(m.scaled(LAdicNumber(ell_, ExactInt::pow(ell_, s))), in_k);
  for (std::size_t i = 0; i < n_ * n_; ++i) {
    left_[i] = left.entries()[i];
    right_[i] = right.entries()[i];
  }
}

void ModConjugator::apply(std::span<const std::int64_t> x, std::span<std::int64_t> out) const {
  const std::size_t n = n_;
  std::array<std::int64_t, 64> xr{}, tmp{};
  for (std::size_t i = 0; i < n * n; ++i) xr[i] = ((x[i] % in_mod_) + in_mod_) % in_mod_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t a = left_[i * n + k];
      if (a == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        tmp[i * n + j] = (tmp[i * n + j] + a * xr[k * n + j]) % in_mod_;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < n; ++k) s = (s + tmp[i * n + k] * right_[k * n + j]) % in_mod_;
      if (s % divisor_ != 0) throw NonIntegralError(i, j);
      out[i * n + j] = (s / divisor_) % out_mod_;
    }
}

ModMatrix ModConjugator::operator()(const ModMatrix& x) const {
  if (x.size() != n_) throw DimensionError("conjugator size mismatch");
  if (x.ell() != ell_ || x.precision() < input_precision())
    throw MathError("input known to insufficient precision for conjugation");
  std::vector<std::int64_t> in(x.entries().begin(), x.entries().end());
  std::vector<std::int64_t> out(n_ * n_);
  apply(in, out);
  return ModMatrix(ell_, k_, n_, out);
}

bool same_lattice(const LAdicMatrix& a, const LAdicMatrix& b) {
  const LAdicMatrix x = mat_inv(a) * b;
  return x.is_integral() && det(x).valuation() == 0;
}

std::vector<IntVector> lattice_quotient(const LAdicMatrix& m, unsigned n) {
  const Prime l = m.ell();
  const std::size_t dim = m.size();
  const auto mod = static_cast<std::int64_t>(ipow(l, n));
  const LAdicMatrix scaled = m.scaled(LAdicNumber(l, mod));
  if (!scaled.is_integral()) throw MathError("lattice is not contained in l^-n Z^dim");
  std::vector<IntVector> cols;
  for (std::size_t c = 0; c < dim; ++c) {
    IntVector v(dim);
    for (std::size_t r = 0; r < dim; ++r) v[r] = scaled(r, c).mod(mod);
    cols.push_back(std::move(v));
  }
  return span_mod(cols, dim, mod);
}

}  // namespace galdual
