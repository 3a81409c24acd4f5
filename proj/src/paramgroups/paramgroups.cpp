#include "galdual/paramgroups.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace galdual {

namespace {

using Mat4 = std::array<std::int64_t, 16>;

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

void require_verified(Prime ell) {
  if (!ell.in_verified_range())
    throw std::invalid_argument("image groups are only built for l in {2,3,5,7}");
}

struct Conjugators {
  ModConjugator quotient_k1;  // X mod l^2 -> rho_A mod l
  ModConjugator quotient_k2;  // X mod l^3 -> T_l A action mod l^2
  ModConjugator polarization_k1;
};

const Conjugators& conjugators(Prime ell) {
  static std::mutex lock;
  static std::map<std::uint32_t, std::unique_ptr<Conjugators>> cache;
  std::lock_guard guard(lock);
  auto& slot = cache[ell.value()];
  if (!slot) {
    const LAdicMatrix mq = quotient_change_of_basis(ell);
    const LAdicMatrix ml = polarization_change_of_basis(ell);
    slot = std::make_unique<Conjugators>(
        Conjugators{ModConjugator(mq, 1), ModConjugator(mq, 2), ModConjugator(ml, 1)});
  }
  return *slot;
}

Mat4 g_entries(const ParamPoint& p) {
  const std::int64_t l = p.ell;
  return {p.a + p.x1 * l, p.b1 + p.y1 * l, 0, 0,
          p.w1 * l, p.d + p.z1 * l, 0, 0,
          0, 0, p.a + p.x2 * l, p.b2 + p.y2 * l,
          0, 0, p.w2 * l, p.d + p.z2 * l};
}

// 4-bit packing of a 4x4 matrix mod l <= 7.
std::uint64_t pack(const Mat4& m) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < 16; ++i) key |= static_cast<std::uint64_t>(m[i]) << (4 * i);
  return key;
}

ModMatrix unpack(Prime ell, std::uint64_t key) {
  std::array<std::int64_t, 16> e{};
  for (std::size_t i = 0; i < 16; ++i) e[i] = static_cast<std::int64_t>((key >> (4 * i)) & 0xF);
  return ModMatrix(ell, 1, 4, e);
}

Mat4 fast_rho_A(const Conjugators& c, const ParamPoint& p) {
  Mat4 out{};
  c.quotient_k1.apply(g_entries(p), out);
  return out;
}

Mat4 fast_rho_Adual_isogeny(const Conjugators& c, const ParamPoint& p) {
  Mat4 y{}, out{};
  c.quotient_k2.apply(g_entries(p), y);
  c.polarization_k1.apply(y, out);
  return out;
}

ModMatrix contragredient(const ModMatrix& g, std::int64_t eps) {
  return mat_inv(g).transpose().scaled(eps);
}

unsigned thread_count(const EnumerationOptions& opts) {
  if (opts.threads) return opts.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::int64_t> a_values(Prime ell, Twist twist) {
  if (twist == Twist::trivial) return {1};
  std::vector<std::int64_t> v;
  for (std::int64_t a = 1; a < ell; ++a) v.push_back(a);
  return v;
}

// Runs body(point, local_state) over disjoint (a, d, b1) slabs in parallel
// and returns the per-thread states.
template <typename State, typename Body>
std::vector<State> parallel_enumerate(Prime ell, Twist twist, const EnumerationOptions& opts,
                                      Body body) {
  const std::int64_t l = ell;
  std::vector<std::array<std::int64_t, 3>> slabs;
  for (auto a : a_values(ell, twist))
    for (std::int64_t d = 1; d < l; ++d)
      for (std::int64_t b1 = 0; b1 < l; ++b1) slabs.push_back({a, d, b1});
  const unsigned threads = std::min<unsigned>(thread_count(opts), slabs.size());
  std::vector<State> states(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned t) {
    try {
      for (std::size_t s = t; s < slabs.size(); s += threads) {
        const auto [a, d, b1] = slabs[s];
        for (std::int64_t b2 = 0; b2 < l; ++b2)
          for (std::int64_t w1 = 0; w1 < l; ++w1)
            for (std::int64_t w2 = 0; w2 < l; ++w2)
              for (std::int64_t x1 = 0; x1 < l; ++x1)
                for (std::int64_t x2 = 0; x2 < l; ++x2)
                  body(ParamPoint::solve(ell, twist, a, d, b1, b2, w1, w2, x1, x2), states[t]);
        if (states[t].size() > opts.max_elements)
          throw ResourceError("image enumeration exceeded its element budget");
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return states;
}

std::vector<ModMatrix> sorted_elements(Prime ell, const std::unordered_set<std::uint64_t>& keys) {
  std::vector<ModMatrix> out;
  out.reserve(keys.size());
  for (auto k : keys) out.push_back(unpack(ell, k));
  std::sort(out.begin(), out.end());
  return out;
}

std::unordered_set<std::uint64_t> merge_keys(std::vector<std::unordered_set<std::uint64_t>>& states) {
  std::unordered_set<std::uint64_t> all;
  for (auto& s : states) {
    all.insert(s.begin(), s.end());
    s = {};
  }
  return all;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(Twist t) { return t == Twist::generic ? "generic" : "trivial"; }

Twist parse_twist(std::string_view text) {
  if (text == "generic") return Twist::generic;
  if (text == "trivial") return Twist::trivial;
  throw ParseError("unknown twist '" + std::string(text) + "'");
}

std::string_view to_string(Side s) { return s == Side::A ? "A" : "Adual"; }

Side parse_side(std::string_view text) {
  if (text == "A") return Side::A;
  if (text == "Adual") return Side::Adual;
  throw ParseError("unknown side '" + std::string(text) + "'");
}

std::string_view to_string(Route r) {
  switch (r) {
    case Route::quotient: return "quotient";
    case Route::contragredient: return "contragredient";
    case Route::isogeny: return "isogeny";
  }
  return "";
}

std::uint32_t primitive_root(Prime ell) {
  const std::uint32_t l = ell;
  for (std::uint32_t g = 1; g < l; ++g) {
    std::uint32_t x = 1, order = 0;
    do {
      x = x * g % l;
      ++order;
    } while (x != 1);
    if (order == l - 1) return g;
  }
  throw std::logic_error("no primitive root");
}

// ---------------------------------------------------------------------------
// ParamPoint

std::int64_t ParamPoint::epsilon() const { return mod(a * d, ell); }

void ParamPoint::validate() const {
  const std::int64_t l = ell;
  auto digit = [&](std::int64_t v, const char* name) {
    if (v < 0 || v >= l) throw ConstraintError(std::string(name) + " is not a residue mod l");
  };
  if (a < 1 || a >= l) throw ConstraintError("a must lie in 1..l-1");
  if (d < 1 || d >= l) throw ConstraintError("d must lie in 1..l-1");
  digit(b1, "b1");
  digit(b2, "b2");
  digit(w1, "w1");
  digit(w2, "w2");
  digit(x1, "x1");
  digit(x2, "x2");
  digit(y1, "y1");
  digit(y2, "y2");
  digit(z1, "z1");
  digit(z2, "z2");
  if (twist == Twist::trivial && a != 1) throw ConstraintError("trivial twist forces a = 1");
  if (mod(a * (z1 - z2) - (b1 * w1 - b2 * w2 - d * x1 + d * x2), l) != 0)
    throw ConstraintError("determinant condition det(A1) = det(A2) fails");
}

ParamPoint ParamPoint::solve(Prime ell, Twist twist, std::int64_t a, std::int64_t d,
                             std::int64_t b1, std::int64_t b2, std::int64_t w1,
                             std::int64_t w2, std::int64_t x1, std::int64_t x2,
                             std::int64_t y1, std::int64_t y2, std::int64_t z2) {
  const std::int64_t l = ell;
  ParamPoint p{ell, twist, a, d, b1, b2, w1, w2, x1, x2, y1, y2, 0, z2};
  if (a < 1 || a >= l) throw ConstraintError("a must lie in 1..l-1");
  const std::int64_t a_inv = inverse_mod(static_cast<std::uint32_t>(a), ell);
  p.z1 = mod(z2 + a_inv * (b1 * w1 - b2 * w2 - d * x1 + d * x2), l);
  p.validate();
  return p;
}

ModMatrix g_ell_element(const ParamPoint& p, unsigned precision) {
  p.validate();
  return ModMatrix(p.ell, precision, 4, g_entries(p));
}

// ---------------------------------------------------------------------------
// Change of basis

LAdicMatrix quotient_change_of_basis(Prime ell) {
  return change_basis_from_kernel(KernelSpec(ell, 1, 4, {{1, 0, 1, 0}}));
}

LAdicMatrix polarization_change_of_basis(Prime ell) {
  const LAdicMatrix principal = LAdicMatrix::from_integers(
      ell, {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}});
  const KernelSpec kernel(ell, 1, 4, {{1, 0, 1, 0}});
  const auto push =
      pushforward_polarization(principal, mat_inv(change_basis_from_kernel(kernel)), kernel);
  return change_basis_from_transformation(push.matrix);
}

// ---------------------------------------------------------------------------
// Per-point images

ModMatrix rho_A(const ParamPoint& p) {
  return conjugators(p.ell).quotient_k1(g_ell_element(p, 2));
}

ModMatrix rho_Adual_isogeny(const ParamPoint& p) {
  const auto& c = conjugators(p.ell);
  return c.polarization_k1(c.quotient_k2(g_ell_element(p, 3)));
}

ModMatrix rho_Adual_contragredient(const ParamPoint& p) {
  return contragredient(rho_A(p), p.epsilon());
}

// ---------------------------------------------------------------------------
// Closed forms

ModMatrix a_shape(Prime ell, std::int64_t a, std::int64_t d, std::int64_t b1, std::int64_t b2,
                  std::int64_t w1, std::int64_t w2, std::int64_t x) {
  return ModMatrix(ell, 1, {{a, b1, x, -b2}, {0, d, w1, 0}, {0, 0, a, 0}, {0, 0, w2, d}});
}

ModMatrix adual_shape(Prime ell, std::int64_t a, std::int64_t d, std::int64_t b1,
                      std::int64_t b2, std::int64_t w1, std::int64_t w2, std::int64_t z) {
  return ModMatrix(ell, 1, {{d, 0, 0, 0}, {-b1, a, 0, 0}, {z, -w1, d, -w2}, {b2, 0, 0, a}});
}

namespace {

bool shape_check(const ModMatrix& g, const std::vector<std::pair<int, int>>& zeros) {
  if (g.size() != 4 || g.precision() != 1) return false;
  for (auto [r, c] : zeros)
    if (g(r, c) != 0) return false;
  return g(0, 0) != 0 && g(1, 1) != 0;
}

}  // namespace

bool matches_a_shape(const ModMatrix& g) {
  return shape_check(g, {{1, 0}, {1, 3}, {2, 0}, {2, 1}, {2, 3}, {3, 0}, {3, 1}}) &&
         g(0, 0) == g(2, 2) && g(1, 1) == g(3, 3);
}

bool matches_adual_shape(const ModMatrix& g) {
  return shape_check(g, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {3, 1}, {3, 2}}) &&
         g(0, 0) == g(2, 2) && g(1, 1) == g(3, 3);
}

// ---------------------------------------------------------------------------
// Enumeration

bool ImageGroup::contains(const ModMatrix& g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

void for_each_param_point(Prime ell, Twist twist,
                          const std::function<void(const ParamPoint&)>& f) {
  const std::int64_t l = ell;
  for (auto a : a_values(ell, twist))
    for (std::int64_t d = 1; d < l; ++d)
      for (std::int64_t b1 = 0; b1 < l; ++b1)
        for (std::int64_t b2 = 0; b2 < l; ++b2)
          for (std::int64_t w1 = 0; w1 < l; ++w1)
            for (std::int64_t w2 = 0; w2 < l; ++w2)
              for (std::int64_t x1 = 0; x1 < l; ++x1)
                for (std::int64_t x2 = 0; x2 < l; ++x2)
                  f(ParamPoint::solve(ell, twist, a, d, b1, b2, w1, w2, x1, x2));
}

std::size_t param_point_count(Prime ell, Twist twist) {
  return a_values(ell, twist).size() * (ell - 1) * ipow(ell, 6);
}

ImageGroup image_rho_A(Prime ell, Twist twist, const EnumerationOptions& opts) {
  require_verified(ell);
  const auto& c = conjugators(ell);
  auto states = parallel_enumerate<std::unordered_set<std::uint64_t>>(
      ell, twist, opts, [&](const ParamPoint& p, auto& set) { set.insert(pack(fast_rho_A(c, p))); });
  ImageGroup g{ell, twist, Route::quotient, sorted_elements(ell, merge_keys(states)), {}};
  g.generators = image_generators(ell, twist, Route::quotient).generators;
  return g;
}

ImageGroup image_rho_Adual_isogeny(Prime ell, Twist twist, const EnumerationOptions& opts) {
  require_verified(ell);
  const auto& c = conjugators(ell);
  auto states = parallel_enumerate<std::unordered_set<std::uint64_t>>(
      ell, twist, opts,
      [&](const ParamPoint& p, auto& set) { set.insert(pack(fast_rho_Adual_isogeny(c, p))); });
  ImageGroup g{ell, twist, Route::isogeny, sorted_elements(ell, merge_keys(states)), {}};
  g.generators = image_generators(ell, twist, Route::isogeny).generators;
  return g;
}

ImageGroup image_rho_Adual_contragredient(Prime ell, Twist twist,
                                          const EnumerationOptions& opts) {
  require_verified(ell);
  const auto& c = conjugators(ell);
  // rho_A image keyed to the similitude factor of the point it came from.
  using EpsMap = std::unordered_map<std::uint64_t, std::int64_t>;
  auto states = parallel_enumerate<EpsMap>(ell, twist, opts, [&](const ParamPoint& p, EpsMap& m) {
    const auto [it, fresh] = m.emplace(pack(fast_rho_A(c, p)), p.epsilon());
    if (!fresh && it->second != p.epsilon())
      throw std::logic_error("similitude factor is not a function of the image");
  });
  EpsMap all;
  for (auto& s : states) {
    for (const auto& [k, e] : s) {
      const auto [it, fresh] = all.emplace(k, e);
      if (!fresh && it->second != e)
        throw std::logic_error("similitude factor is not a function of the image");
    }
    s = EpsMap();
  }
  std::vector<ModMatrix> out;
  out.reserve(all.size());
  for (const auto& [k, e] : all) out.push_back(contragredient(unpack(ell, k), e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  ImageGroup g{ell, twist, Route::contragredient, std::move(out), {}};
  g.generators = image_generators(ell, twist, Route::contragredient).generators;
  return g;
}

namespace {

std::vector<ParamPoint> generator_points(Prime ell, Twist twist) {
  const std::int64_t r = primitive_root(ell);
  std::vector<ParamPoint> pts;
  auto add = [&](std::int64_t a, std::int64_t d, std::int64_t b1, std::int64_t b2,
                 std::int64_t w1, std::int64_t w2, std::int64_t x1, std::int64_t x2) {
    pts.push_back(ParamPoint::solve(ell, twist, a, d, b1, b2, w1, w2, x1, x2));
  };
  if (twist == Twist::generic && r != 1) add(r, 1, 0, 0, 0, 0, 0, 0);
  if (r != 1) add(1, r, 0, 0, 0, 0, 0, 0);
  add(1, 1, 1, 0, 0, 0, 0, 0);
  add(1, 1, 0, 1, 0, 0, 0, 0);
  add(1, 1, 0, 0, 1, 0, 0, 0);
  add(1, 1, 0, 0, 0, 1, 0, 0);
  add(1, 1, 0, 0, 0, 0, 1, 0);
  add(1, 1, 0, 0, 0, 0, 0, 1);
  return pts;
}

}  // namespace

ImageGroup image_generators(Prime ell, Twist twist, Route route) {
  require_verified(ell);
  ImageGroup g{ell, twist, route, {}, {}};
  for (const auto& p : generator_points(ell, twist)) {
    ModMatrix m = route == Route::quotient         ? rho_A(p)
                  : route == Route::contragredient ? rho_Adual_contragredient(p)
                                                   : rho_Adual_isogeny(p);
    if (!m.is_identity() && std::find(g.generators.begin(), g.generators.end(), m) ==
                                g.generators.end())
      g.generators.push_back(std::move(m));
  }
  return g;
}

std::vector<MatrixPair> paired_group(Prime ell, Twist twist, const EnumerationOptions& opts) {
  require_verified(ell);
  const auto& c = conjugators(ell);
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const noexcept {
      return std::hash<std::uint64_t>()(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
    }
  };
  using PairSet = std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash>;
  auto states = parallel_enumerate<PairSet>(ell, twist, opts, [&](const ParamPoint& p, PairSet& s) {
    s.emplace(pack(fast_rho_A(c, p)), pack(fast_rho_Adual_isogeny(c, p)));
  });
  PairSet all;
  for (auto& s : states) {
    all.insert(s.begin(), s.end());
    s = PairSet();
  }
  std::vector<MatrixPair> out;
  out.reserve(all.size());
  for (const auto& [x, y] : all) out.emplace_back(unpack(ell, x), unpack(ell, y));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MatrixPair> paired_generators(Prime ell, Twist twist) {
  require_verified(ell);
  std::vector<MatrixPair> out;
  for (const auto& p : generator_points(ell, twist)) {
    MatrixPair pr{rho_A(p), rho_Adual_isogeny(p)};
    if (pr.first.is_identity() && pr.second.is_identity()) continue;
    if (std::find(out.begin(), out.end(), pr) == out.end()) out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace galdual
