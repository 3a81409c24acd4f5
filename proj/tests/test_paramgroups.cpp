#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

#include "galdual/paramgroups.hpp"

#include <array>
#include <random>
#include <set>

using namespace galdual;
using namespace galdual::fixtures;
using oracle::Rational;
using oracle::RatMatrix;

namespace {

using Key = std::array<std::int64_t, 16>;

std::int64_t md(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

Key key_of(const ModMatrix& g) {
  Key k{};
  for (std::size_t i = 0; i < 16; ++i) k[i] = g.entries()[i];
  return k;
}

std::set<Key> keys_of(const std::vector<ModMatrix>& v) {
  std::set<Key> s;
  for (const auto& g : v) s.insert(key_of(g));
  return s;
}

Key mul(const Key& a, const Key& b, std::int64_t l) {
  Key c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s += a[i * 4 + k] * b[k * 4 + j];
      c[i * 4 + j] = s % l;
    }
  return c;
}

// The displayed subgroups, written out entry by entry.
std::set<Key> a_closed_form(std::int64_t l, bool trivial) {
  std::set<Key> out;
  for (std::int64_t a = 1; a < l; ++a) {
    if (trivial && a != 1) continue;
    for (std::int64_t d = 1; d < l; ++d)
      for (std::int64_t b1 = 0; b1 < l; ++b1)
        for (std::int64_t b2 = 0; b2 < l; ++b2)
          for (std::int64_t w1 = 0; w1 < l; ++w1)
            for (std::int64_t w2 = 0; w2 < l; ++w2)
              for (std::int64_t x = 0; x < l; ++x)
                out.insert({a, b1, x, md(-b2, l), 0, d, w1, 0, 0, 0, a, 0, 0, 0, w2, d});
  }
  return out;
}

std::set<Key> adual_closed_form(std::int64_t l, bool trivial) {
  std::set<Key> out;
  for (std::int64_t a = 1; a < l; ++a) {
    if (trivial && a != 1) continue;
    for (std::int64_t d = 1; d < l; ++d)
      for (std::int64_t b1 = 0; b1 < l; ++b1)
        for (std::int64_t b2 = 0; b2 < l; ++b2)
          for (std::int64_t w1 = 0; w1 < l; ++w1)
            for (std::int64_t w2 = 0; w2 < l; ++w2)
              for (std::int64_t z = 0; z < l; ++z)
                out.insert({d, 0, 0, 0, md(-b1, l), a, 0, 0, z, md(-w1, l), d, md(-w2, l),
                            b2, 0, 0, a});
  }
  return out;
}

// Exact rational conjugation M^{-1} X M, then reduction mod l.
struct RationalConjugator {
  RatMatrix m, m_inv;
  explicit RationalConjugator(const LAdicMatrix& literal)
      : m(oracle::to_rational(literal)), m_inv(oracle::adjugate_inverse(m)) {}
  Key operator()(const RatMatrix& x, std::int64_t l) const {
    const RatMatrix y = oracle::rat_mul(m_inv, oracle::rat_mul(x, m));
    Key k{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        REQUIRE(denominator(y[i][j]) % l != 0);
        const Rational v = y[i][j];
        // numerator * denominator^{-1} mod l
        const auto num = static_cast<std::int64_t>(numerator(v) % l);
        const auto den = static_cast<std::int64_t>(denominator(v) % l);
        std::int64_t inv = 1;
        for (std::int64_t t = 1; t < l; ++t)
          if (md(den * t, l) == 1) inv = t;
        k[i * 4 + j] = md(num * inv, l);
      }
    return k;
  }
};

RatMatrix g_rational(const ParamPoint& p) {
  const std::int64_t l = p.ell;
  return {{p.a + p.x1 * l, p.b1 + p.y1 * l, 0, 0},
          {p.w1 * l, p.d + p.z1 * l, 0, 0},
          {0, 0, p.a + p.x2 * l, p.b2 + p.y2 * l},
          {0, 0, p.w2 * l, p.d + p.z2 * l}};
}

ParamPoint random_point(Prime ell, Twist twist, std::mt19937_64& rng, bool with_y) {
  const std::int64_t l = ell;
  auto digit = [&] { return static_cast<std::int64_t>(rng() % l); };
  auto unit = [&] { return 1 + static_cast<std::int64_t>(rng() % (l - 1)); };
  const std::int64_t a = twist == Twist::trivial ? 1 : unit();
  const std::int64_t d = unit();
  const std::int64_t b1 = digit(), b2 = digit(), w1 = digit(), w2 = digit(), x1 = digit(),
                     x2 = digit();
  if (!with_y) return ParamPoint::solve(ell, twist, a, d, b1, b2, w1, w2, x1, x2);
  return ParamPoint::solve(ell, twist, a, d, b1, b2, w1, w2, x1, x2, digit(), digit(), digit());
}

std::set<Key> closure_oracle(const std::vector<ModMatrix>& gens, std::int64_t l) {
  Key id{};
  for (int i = 0; i < 4; ++i) id[i * 5] = 1;
  std::set<Key> seen{id};
  std::vector<Key> frontier{id};
  while (!frontier.empty()) {
    std::vector<Key> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        const Key y = mul(x, key_of(g), l);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

TEST_CASE("G_l elements") {
  const Prime l(3);
  const ParamPoint id = ParamPoint::solve(l, Twist::generic, 1, 1, 0, 0, 0, 0, 0, 0);
  CHECK(g_ell_element(id).is_identity());
  const ParamPoint p = ParamPoint::solve(l, Twist::generic, 2, 1, 1, 0, 0, 0, 0, 0);
  CHECK(p.z1 == p.z2);
  CHECK(g_ell_element(p) ==
        ModMatrix(l, 2, {{2, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}}));
  CHECK(p.epsilon() == 2);

  ParamPoint bad = p;
  bad.z1 = (bad.z1 + 1) % 3;
  CHECK_THROWS_AS(bad.validate(), ConstraintError);
  CHECK_THROWS_AS(g_ell_element(bad), ConstraintError);
  CHECK_THROWS_AS(ParamPoint::solve(l, Twist::trivial, 2, 1, 0, 0, 0, 0, 0, 0), ConstraintError);
  CHECK_THROWS_AS(ParamPoint::solve(l, Twist::generic, 0, 1, 0, 0, 0, 0, 0, 0), ConstraintError);
  CHECK_THROWS_AS(ParamPoint::solve(l, Twist::generic, 1, 1, 3, 0, 0, 0, 0, 0), ConstraintError);
}

TEST_CASE("property: determinant condition holds mod l^2") {
  std::mt19937_64 rng(0xde7);
  for (int trial = 0; trial < 200; ++trial) {
    const Prime l(kPrimes[trial % 4]);
    const ParamPoint p = random_point(l, trial % 3 ? Twist::generic : Twist::trivial, rng, true);
    const RatMatrix g = g_rational(p);
    const std::int64_t m = static_cast<std::int64_t>(l) * l;
    const Rational d1 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    const Rational d2 = g[2][2] * g[3][3] - g[2][3] * g[3][2];
    const Rational diff = d1 - d2;
    CHECK(numerator(diff) % m == 0);
  }
}

TEST_CASE("change-of-basis matrices come out of the lattice calculus") {
  for (auto p : kPrimes) {
    const Prime l(p);
    CHECK(quotient_change_of_basis(l) == m_q(l));
    CHECK(polarization_change_of_basis(l) == m_lambda(l));
  }
}

TEST_CASE("exact conjugates match the displayed l-adic families") {
  std::mt19937_64 rng(0xa11);
  for (int trial = 0; trial < 120; ++trial) {
    const Prime l(kPrimes[trial % 4]);
    const std::int64_t L = l;
    const ParamPoint p = random_point(l, Twist::generic, rng, true);
    LAdicMatrix x(l, 4);
    const RatMatrix g = g_rational(p);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        x(i, j) = LAdicNumber(l, static_cast<std::int64_t>(numerator(g[i][j])));
    const LAdicMatrix y = conjugate_by(m_q(l), x);
    const LAdicMatrix expected_y = LAdicMatrix::from_integers(
        l, {{p.a + p.x1 * L, p.b1 + p.y1 * L, p.x1 - p.x2, -p.b2 - p.y2 * L},
            {p.w1 * L, p.d + p.z1 * L, p.w1, 0},
            {0, 0, p.a + p.x2 * L, p.b2 * L + p.y2 * L * L},
            {0, 0, p.w2, p.d + p.z2 * L}});
    CHECK(y == expected_y);
    // The second display uses the determinant condition for the (3,1) entry,
    // which our truncated digits satisfy modulo l only.
    const ModMatrix z = reduce_mod(conjugate_by(m_lambda(l), y), 1);
    const ModMatrix expected_z(
        l, 1,
        {{p.d + p.z1 * L, -p.w1 * L, 0, 0},
         {-p.b1 - p.y1 * L, p.a + p.x1 * L, 0, 0},
         {p.z1 - p.z2, -p.w1, p.d + p.z2 * L, -p.w2},
         {p.b2 + p.y2 * L, 0, -p.b2 * L - p.y2 * L * L, p.a + p.x2 * L}});
    CHECK(z == expected_z);
  }
}

TEST_CASE("image orders") {
  CHECK(image_rho_A(Prime(2), Twist::generic).order() == 32);
  CHECK(image_rho_A(Prime(3), Twist::generic).order() == 972);
  CHECK(image_rho_A(Prime(3), Twist::trivial).order() == 486);
  CHECK(image_rho_A(Prime(5), Twist::generic).order() == 16 * 3125);
  CHECK(image_rho_A(Prime(2), Twist::trivial).elements ==
        image_rho_A(Prime(2), Twist::generic).elements);
  CHECK(param_point_count(Prime(3), Twist::generic) == 2 * 2 * 729);
  CHECK_THROWS_AS(image_rho_A(Prime(11), Twist::generic), std::invalid_argument);
}

TEST_CASE("rho_A images agree with exact rational conjugation") {
  for (std::uint32_t p : {2u, 3u}) {
    const Prime l(p);
    const RationalConjugator conj(m_q(l));
    std::set<Key> via_oracle;
    for_each_param_point(l, Twist::generic, [&](const ParamPoint& pt) {
      via_oracle.insert(conj(g_rational(pt), p));
    });
    CHECK(keys_of(image_rho_A(l, Twist::generic).elements) == via_oracle);
  }
}

TEST_CASE("A-images are exactly the displayed shape") {
  for (auto p : kPrimes) {
    if (p == 7) continue;
    const Prime l(p);
    for (Twist t : {Twist::generic, Twist::trivial}) {
      const auto img = image_rho_A(l, t);
      CHECK(keys_of(img.elements) == a_closed_form(p, t == Twist::trivial));
      for (const auto& g : img.elements) REQUIRE(matches_a_shape(g));
    }
  }
}

TEST_CASE("A-dual images: both routes give the displayed shape") {
  for (auto p : kPrimes) {
    if (p == 7) continue;
    const Prime l(p);
    for (Twist t : {Twist::generic, Twist::trivial}) {
      const auto iso = image_rho_Adual_isogeny(l, t);
      const auto con = image_rho_Adual_contragredient(l, t);
      CHECK(iso.elements == con.elements);
      CHECK(keys_of(iso.elements) == adual_closed_form(p, t == Twist::trivial));
      for (const auto& g : iso.elements) REQUIRE(matches_adual_shape(g));
    }
  }
  CHECK(image_rho_Adual_isogeny(Prime(3), Twist::generic).order() == 972);
}

TEST_CASE("contragredient of a diagonal-plus-b1 element") {
  const Prime l(5);
  const std::int64_t a = 2, d = 3, b1 = 4;
  const ParamPoint p = ParamPoint::solve(l, Twist::generic, a, d, b1, 0, 0, 0, 0, 0);
  CHECK(rho_A(p) == a_shape(l, a, d, b1, 0, 0, 0, 0));
  CHECK(rho_Adual_contragredient(p) == adual_shape(l, a, d, b1, 0, 0, 0, 0));
  const ParamPoint id = ParamPoint::solve(l, Twist::generic, 1, 1, 0, 0, 0, 0, 0, 0);
  CHECK(rho_Adual_contragredient(id).is_identity());
}

TEST_CASE("property: routes agree pointwise and ignore the truncated digits") {
  std::mt19937_64 rng(0x7007e);
  for (int trial = 0; trial < 300; ++trial) {
    const Prime l(kPrimes[trial % 4]);
    const Twist t = trial % 5 == 0 ? Twist::trivial : Twist::generic;
    const ParamPoint full = random_point(l, t, rng, true);
    const ParamPoint base =
        ParamPoint::solve(l, t, full.a, full.d, full.b1, full.b2, full.w1, full.w2, full.x1, full.x2);
    CHECK(rho_A(full) == rho_A(base));
    CHECK(rho_Adual_isogeny(full) == rho_Adual_isogeny(base));
    CHECK(rho_Adual_isogeny(full) == rho_Adual_contragredient(full));
    CHECK(rho_A(full) == a_shape(l, full.a, full.d, full.b1, full.b2, full.w1, full.w2,
                                 full.x1 - full.x2));
    CHECK(rho_Adual_isogeny(full) == adual_shape(l, full.a, full.d, full.b1, full.b2, full.w1,
                                                 full.w2, full.z1 - full.z2));
  }
}

TEST_CASE("closure: images are groups generated by the generator set") {
  for (std::uint32_t p : {2u, 3u}) {
    const Prime l(p);
    const auto img = image_rho_A(l, Twist::generic);
    const auto keys = keys_of(img.elements);
    for (const auto& x : img.elements)
      for (const auto& y : img.elements) REQUIRE(keys.count(mul(key_of(x), key_of(y), p)));
  }
  for (auto p : kPrimes) {
    if (p == 7) continue;
    const Prime l(p);
    for (Twist t : {Twist::generic, Twist::trivial})
      for (Route r : {Route::quotient, Route::isogeny, Route::contragredient}) {
        const auto img = r == Route::quotient ? image_rho_A(l, t)
                         : r == Route::isogeny ? image_rho_Adual_isogeny(l, t)
                                               : image_rho_Adual_contragredient(l, t);
        CHECK(closure_oracle(img.generators, p) == keys_of(img.elements));
      }
  }
}

TEST_CASE("paired images") {
  const auto pairs = paired_group(Prime(2), Twist::generic);
  CHECK(pairs.size() == 32);
  std::set<Key> firsts, seconds;
  for (const auto& [x, y] : pairs) {
    firsts.insert(key_of(x));
    seconds.insert(key_of(y));
  }
  CHECK(firsts.size() == 32);
  CHECK(seconds.size() == 32);
  bool has_identity = false;
  for (const auto& [x, y] : pairs) has_identity |= x.is_identity() && y.is_identity();
  CHECK(has_identity);
  CHECK(paired_group(Prime(3), Twist::generic).size() == 972);
  CHECK(paired_group(Prime(3), Twist::trivial).size() == 486);
}

TEST_CASE("property: semisimplifications agree") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const Prime l(p);
    for (Twist t : {Twist::generic, Twist::trivial}) {
      std::size_t checked = 0;
      for (const auto& [x, y] : paired_group(l, t)) {
        const std::int64_t a = x(0, 0), d = x(1, 1);
        const auto cp = charpoly(x);
        REQUIRE(cp == charpoly(y));
        REQUIRE(cp == oracle::poly_from_roots({a, a, d, d}, p));
        ++checked;
      }
      CHECK(checked >= 16);
    }
  }
}

TEST_CASE("names round trip") {
  CHECK(parse_twist(to_string(Twist::trivial)) == Twist::trivial);
  CHECK(parse_side(to_string(Side::Adual)) == Side::Adual);
  CHECK_THROWS_AS(parse_twist("odd"), ParseError);
  CHECK(primitive_root(Prime(7)) == 3);
  CHECK(primitive_root(Prime(2)) == 1);
}
