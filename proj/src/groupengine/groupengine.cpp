#include "galdual/groupengine.hpp"

#include "galdual/gf2.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace galdual {

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  while (exp--) r *= base;
  return r;
}

void require_prime_modulus(const ModMatrix& m) {
  if (m.precision() != 1) throw DimensionError("expected a matrix over F_l");
}

ModMatrix identity_like(const ModMatrix& m) {
  return ModMatrix::identity(m.ell(), m.precision(), m.size());
}

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : p) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<ModMatrix> generate_closure(const std::vector<ModMatrix>& generators,
                                        std::size_t cap) {
  if (generators.empty()) throw std::invalid_argument("closure needs at least one generator");
  std::unordered_set<ModMatrix, ModMatrixHash> seen;
  std::deque<ModMatrix> queue;
  ModMatrix e = identity_like(generators.front());
  seen.insert(e);
  queue.push_back(e);
  while (!queue.empty()) {
    ModMatrix x = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      ModMatrix y = x * g;
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw CapExceededError(seen.size());
        queue.push_back(std::move(y));
      }
    }
  }
  std::vector<ModMatrix> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool closed_under(const std::vector<ModMatrix>& elements,
                  const std::vector<ModMatrix>& generators) {
  if (elements.empty()) return false;
  auto has = [&](const ModMatrix& m) {
    return std::binary_search(elements.begin(), elements.end(), m);
  };
  if (!has(identity_like(elements.front()))) return false;
  for (const auto& g : generators)
    if (!has(g)) return false;
  for (const auto& x : elements)
    for (const auto& g : generators)
      if (!has(x * g)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Intertwiners

IntertwinerSpace intertwiner_space(const std::vector<MatrixPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("intertwiner space needs at least one pair");
  const auto& first = pairs.front().first;
  require_prime_modulus(first);
  const std::size_t n = first.size();
  const std::uint32_t p = first.modulus();
  std::vector<ModVector> rows;
  rows.reserve(pairs.size() * n * n);
  for (const auto& [g, h] : pairs) {
    if (g.size() != n || h.size() != n || g.modulus() != p || h.modulus() != p)
      throw DimensionError("intertwiner pairs must share size and field");
    // (X g - h X)(i, j) with X(r, c) at index r*n + c.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ModVector row(n * n, 0);
        for (std::size_t k = 0; k < n; ++k) {
          row[i * n + k] = (row[i * n + k] + g(k, j)) % p;
          row[k * n + j] = (row[k * n + j] + p - h(i, k)) % p;
        }
        rows.push_back(std::move(row));
      }
  }
  IntertwinerSpace space{first.ell(), n, {}};
  for (const auto& v : nullspace_mod_prime(std::move(rows), n * n, p)) {
    std::vector<std::int64_t> e(v.begin(), v.end());
    space.basis.emplace_back(first.ell(), 1, n, e);
  }
  return space;
}

namespace {

bool intertwines(const ModMatrix& y, const std::vector<MatrixPair>& pairs) {
  for (const auto& [g, h] : pairs)
    if (y * g != h * y) return false;
  return true;
}

ModMatrix combine(const IntertwinerSpace& s, const std::vector<std::uint32_t>& coeffs) {
  const std::uint32_t p = s.ell;
  std::vector<std::int64_t> acc(s.n * s.n, 0);
  for (std::size_t b = 0; b < s.basis.size(); ++b) {
    if (!coeffs[b]) continue;
    const auto& e = s.basis[b].entries();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (acc[i] + coeffs[b] * e[i]) % p;
  }
  return ModMatrix(s.ell, 1, s.n, acc);
}

}  // namespace

EquivalenceVerdict representations_equivalent(const std::vector<MatrixPair>& pairs,
                                              std::uint64_t seed) {
  constexpr std::uint64_t kExhaustiveLimit = 1'000'000;
  constexpr std::uint64_t kFallbackLimit = 1'000'000'000;
  constexpr std::uint64_t kSamples = 10'000;

  EquivalenceVerdict v;
  IntertwinerSpace space = intertwiner_space(pairs);
  v.intertwiner_dim = space.dim();
  if (space.dim() == 0) {
    v.exhaustive = true;
    return v;
  }
  const std::uint32_t p = space.ell;
  const double log_size = static_cast<double>(space.dim()) * std::log(static_cast<double>(p));

  auto accept = [&](const ModMatrix& x) {
    if (det(x) == 0) return false;
    if (!intertwines(x, pairs)) throw MathError("intertwiner basis failed verification");
    v.equivalent = true;
    v.witness = x;
    return true;
  };

  auto walk = [&] {
    std::vector<std::uint32_t> c(space.dim(), 0);
    while (true) {
      std::size_t i = 0;
      while (i < c.size() && ++c[i] == p) c[i++] = 0;
      if (i == c.size()) break;
      ++v.candidates_checked;
      if (accept(combine(space, c))) return;
    }
    v.exhaustive = true;
  };

  if (log_size <= std::log(static_cast<double>(kExhaustiveLimit))) {
    walk();
    return v;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> digit(0, p - 1);
  std::vector<std::uint32_t> c(space.dim());
  for (std::uint64_t s = 0; s < kSamples; ++s) {
    for (auto& x : c) x = digit(rng);
    ++v.candidates_checked;
    if (accept(combine(space, c))) return v;
  }
  if (log_size > std::log(static_cast<double>(kFallbackLimit)))
    throw ResourceError("intertwiner space of dimension " + std::to_string(space.dim()) +
                        " is too large for an exhaustive search");
  walk();
  return v;
}

std::optional<ModMatrix> matrix_subgroups_conjugate(const std::vector<ModMatrix>& h1,
                                                    const std::vector<ModMatrix>& h1_generators,
                                                    const std::vector<ModMatrix>& h2) {
  if (h1.size() != h2.size()) return std::nullopt;
  if (h1.empty()) throw std::invalid_argument("empty subgroup");
  const auto& ref = h1.front();
  require_prime_modulus(ref);

  if (ref.modulus() == 2 && ref.size() == 4) {
    std::vector<char> in_h2(1 << 16, 0);
    for (const auto& m : h2) in_h2[gf2::from_matrix(m)] = 1;
    std::vector<gf2::Mat> gens;
    for (const auto& g : h1_generators) gens.push_back(gf2::from_matrix(g));
    for (gf2::Mat x : gf2::gl4()) {
      const gf2::Mat xi = gf2::inverse(x);
      bool ok = true;
      for (gf2::Mat g : gens)
        if (!in_h2[gf2::mul(gf2::mul(x, g), xi)]) {
          ok = false;
          break;
        }
      if (ok) return gf2::to_matrix(x);
    }
    return std::nullopt;
  }

  const std::size_t n = ref.size();
  const std::uint32_t p = ref.modulus();
  if (static_cast<double>(n * n) * std::log(static_cast<double>(p)) > std::log(1 << 20))
    throw ResourceError("ambient GL_n(F_l) is too large to search");
  const std::uint64_t total = ipow(p, n * n);
  std::vector<std::int64_t> e(n * n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (auto& x : e) {
      x = static_cast<std::int64_t>(c % p);
      c /= p;
    }
    ModMatrix x(ref.ell(), 1, n, e);
    if (det(x) == 0) continue;
    ModMatrix xi = mat_inv(x);
    bool ok = true;
    for (const auto& g : h1_generators)
      if (!std::binary_search(h2.begin(), h2.end(), x * g * xi)) {
        ok = false;
        break;
      }
    if (ok) return x;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Permutations

Perm compose(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw DimensionError("permutation degrees differ");
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

std::string to_string(const Perm& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  return os.str();
}

std::vector<std::uint32_t> point_vector(Prime ell, std::size_t n, std::uint32_t index) {
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) {
    x = index % ell;
    index /= ell;
  }
  return v;
}

std::uint32_t point_index(Prime ell, const std::vector<std::uint32_t>& v) {
  std::uint32_t idx = 0;
  for (std::size_t i = v.size(); i-- > 0;) idx = idx * ell + v[i];
  return idx;
}

Perm matrix_permutation(const ModMatrix& g) {
  require_prime_modulus(g);
  const std::size_t n = g.size();
  const std::uint32_t p = g.modulus();
  const std::uint32_t count = static_cast<std::uint32_t>(ipow(p, n));
  Perm out(count);
  std::vector<std::uint32_t> w(n);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto v = point_vector(g.ell(), n, i);
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += std::uint64_t{g(r, c)} * v[c];
      w[r] = static_cast<std::uint32_t>(acc % p);
    }
    out[i] = point_index(g.ell(), w);
  }
  return out;
}

PermGroup perm_closure(std::size_t degree, const std::vector<Perm>& generators,
                       std::size_t cap) {
  PermGroup g;
  g.degree = degree;
  g.generators = generators;
  Perm e(degree);
  std::iota(e.begin(), e.end(), 0u);
  std::unordered_set<Perm, PermHash> seen{e};
  std::deque<Perm> queue{e};
  while (!queue.empty()) {
    Perm x = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : generators) {
      Perm y = compose(x, s);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw CapExceededError(seen.size());
        queue.push_back(std::move(y));
      }
    }
  }
  g.elements.assign(seen.begin(), seen.end());
  std::sort(g.elements.begin(), g.elements.end());
  return g;
}

PermGroup to_permutation_group(const std::vector<ModMatrix>& elements,
                               const std::vector<ModMatrix>& generators) {
  if (elements.empty() && generators.empty())
    throw std::invalid_argument("permutation group needs elements or generators");
  const auto& ref = elements.empty() ? generators.front() : elements.front();
  const std::size_t degree = ipow(ref.modulus(), ref.size());
  std::vector<Perm> gens;
  for (const auto& g : generators) gens.push_back(matrix_permutation(g));
  if (elements.empty()) return perm_closure(degree, gens);
  PermGroup out;
  out.degree = degree;
  out.generators = std::move(gens);
  out.elements.reserve(elements.size());
  for (const auto& g : elements) out.elements.push_back(matrix_permutation(g));
  std::sort(out.elements.begin(), out.elements.end());
  out.elements.erase(std::unique(out.elements.begin(), out.elements.end()), out.elements.end());
  return out;
}

PermGroup to_permutation_group(const ImageGroup& g) {
  return to_permutation_group(g.elements, g.generators);
}

std::vector<std::size_t> permutation_character(const PermGroup& p) {
  std::vector<std::size_t> out;
  out.reserve(p.elements.size());
  for (const auto& g : p.elements) {
    std::size_t fix = 0;
    for (std::size_t i = 0; i < g.size(); ++i) fix += g[i] == i;
    out.push_back(fix);
  }
  return out;
}

std::map<std::size_t, std::size_t> character_multiset(const PermGroup& p) {
  std::map<std::size_t, std::size_t> out;
  for (auto f : permutation_character(p)) ++out[f];
  return out;
}

std::size_t trivial_multiplicity(const PermGroup& p) {
  if (p.elements.empty()) throw std::invalid_argument("trivial multiplicity of an empty group");
  std::size_t total = 0;
  for (auto f : permutation_character(p)) total += f;
  if (total % p.elements.size() != 0)
    throw MathError("fixed-point total is not divisible by the group order");
  return total / p.elements.size();
}

std::vector<std::vector<std::uint32_t>> orbits(const PermGroup& p) {
  std::vector<std::uint32_t> parent(p.degree);
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto& acting = p.generators.empty() ? p.elements : p.generators;
  for (const auto& g : acting)
    for (std::uint32_t i = 0; i < p.degree; ++i) {
      auto a = find(i), b = find(g[i]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < p.degree; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

// ---------------------------------------------------------------------------
// Conjugacy of permutation groups in Sym(Omega)

namespace {

constexpr std::uint32_t kUnset = 0xFFFFFFFFu;

// A permutation group with its Cayley table and per-element invariants.
struct IndexedGroup {
  std::size_t n = 0;
  std::size_t degree = 0;
  const std::vector<Perm>* elems = nullptr;
  std::unordered_map<Perm, std::uint32_t, PermHash> index;
  std::vector<std::uint32_t> table;  // table[i*n + j] = e_i e_j
  std::vector<std::uint32_t> inv;
  std::vector<std::uint32_t> gens;
  std::vector<std::uint32_t> signature;
  std::uint32_t identity = 0;

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table[a * n + b]; }

  struct Orbit {
    std::uint32_t rep;
    std::vector<std::uint32_t> points;
    std::vector<std::uint32_t> transversal;  // transversal[k] maps rep to points[k]
    std::vector<std::uint32_t> stabilizer;
  };
  std::vector<Orbit> orbit_data;
};

// Element order and fixed-point count.
std::vector<std::uint32_t> fingerprint(const Perm& p) {
  std::uint64_t order = 1;
  std::uint32_t fixed = 0;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len == 1) ++fixed;
    order = std::lcm(order, len);
  }
  return {static_cast<std::uint32_t>(order), fixed};
}

void build(IndexedGroup& g, const PermGroup& p,
           std::map<std::vector<std::uint32_t>, std::uint32_t>& signatures) {
  g.n = p.elements.size();
  g.degree = p.degree;
  g.elems = &p.elements;
  for (std::uint32_t i = 0; i < g.n; ++i) g.index.emplace(p.elements[i], i);
  Perm e(p.degree);
  std::iota(e.begin(), e.end(), 0u);
  auto find = [&](const Perm& x) {
    auto it = g.index.find(x);
    if (it == g.index.end()) throw MathError("permutation group element list is not closed");
    return it->second;
  };
  g.identity = find(e);
  g.table.resize(g.n * g.n);
  for (std::uint32_t i = 0; i < g.n; ++i)
    for (std::uint32_t j = 0; j < g.n; ++j)
      g.table[i * g.n + j] = find(compose(p.elements[i], p.elements[j]));
  g.inv.resize(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i)
    for (std::uint32_t j = 0; j < g.n; ++j)
      if (g.table[i * g.n + j] == g.identity) {
        g.inv[i] = j;
        break;
      }
  for (const auto& s : p.generators) g.gens.push_back(find(s));
  if (g.gens.empty())
    for (std::uint32_t i = 0; i < g.n; ++i) g.gens.push_back(i);
  g.signature.resize(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i) {
    auto ct = fingerprint(p.elements[i]);
    auto [it, inserted] =
        signatures.emplace(std::move(ct), static_cast<std::uint32_t>(signatures.size()));
    g.signature[i] = it->second;
  }

  std::vector<char> seen(p.degree, 0);
  for (std::uint32_t rep = 0; rep < p.degree; ++rep) {
    if (seen[rep]) continue;
    IndexedGroup::Orbit o;
    o.rep = rep;
    o.points.push_back(rep);
    o.transversal.push_back(g.identity);
    seen[rep] = 1;
    for (std::size_t k = 0; k < o.points.size(); ++k)
      for (auto s : g.gens) {
        std::uint32_t q = p.elements[s][o.points[k]];
        if (seen[q]) continue;
        seen[q] = 1;
        o.points.push_back(q);
        o.transversal.push_back(g.mul(s, o.transversal[k]));
      }
    for (std::uint32_t i = 0; i < g.n; ++i)
      if (p.elements[i][rep] == rep) o.stabilizer.push_back(i);
    g.orbit_data.push_back(std::move(o));
  }
}

// Generators of g1 chosen so that each enlarges the subgroup, preferring
// elements whose signature is rare in g2.
std::vector<std::uint32_t> search_generators(const IndexedGroup& g1, const IndexedGroup& g2) {
  std::map<std::uint32_t, std::size_t> freq;
  for (auto s : g2.signature) ++freq[s];
  std::vector<std::uint32_t> order(g1.n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return freq[g1.signature[a]] < freq[g1.signature[b]];
  });
  std::vector<char> in_sub(g1.n, 0);
  in_sub[g1.identity] = 1;
  std::vector<std::uint32_t> members{g1.identity};
  std::vector<std::uint32_t> chosen;
  while (members.size() < g1.n) {
    std::uint32_t pick = kUnset;
    for (auto c : order)
      if (!in_sub[c]) {
        pick = c;
        break;
      }
    chosen.push_back(pick);
    for (std::size_t k = 0; k < members.size(); ++k)
      for (auto s : chosen) {
        auto y = g1.mul(members[k], s);
        if (!in_sub[y]) {
          in_sub[y] = 1;
          members.push_back(y);
        }
      }
  }
  return chosen;
}

class ConjugacySearch {
 public:
  ConjugacySearch(const IndexedGroup& g1, const IndexedGroup& g2, std::uint64_t budget)
      : g1_(g1), g2_(g2), budget_(budget) {
    gens_ = search_generators(g1, g2);
    for (std::uint32_t i = 0; i < g2.n; ++i) by_signature_[g2.signature[i]].push_back(i);
    class_rep_ = conjugacy_class_reps(g2);
  }

  std::optional<Perm> run() {
    std::vector<std::uint32_t> phi(g1_.n, kUnset), rev(g2_.n, kUnset);
    phi[g1_.identity] = g2_.identity;
    rev[g2_.identity] = g1_.identity;
    return extend(0, phi, rev);
  }

  std::uint64_t tried() const { return tried_; }
  bool exhausted() const { return exhausted_; }

 private:
  static std::vector<char> conjugacy_class_reps(const IndexedGroup& g) {
    std::vector<char> rep(g.n, 0), done(g.n, 0);
    for (std::uint32_t x = 0; x < g.n; ++x) {
      if (done[x]) continue;
      rep[x] = 1;
      for (std::uint32_t c = 0; c < g.n; ++c) done[g.mul(g.mul(c, x), g.inv[c])] = 1;
    }
    return rep;
  }

  // Extends phi along the generated subgroup; false on any inconsistency.
  bool propagate(std::size_t level, std::vector<std::uint32_t>& phi,
                 std::vector<std::uint32_t>& rev, std::vector<std::uint32_t>& images) const {
    std::vector<std::uint32_t> queue;
    for (std::uint32_t x = 0; x < g1_.n; ++x)
      if (phi[x] != kUnset) queue.push_back(x);
    for (std::size_t k = 0; k < queue.size(); ++k) {
      const auto x = queue[k];
      for (std::size_t j = 0; j <= level; ++j) {
        const auto y = g1_.mul(x, gens_[j]);
        const auto img = g2_.mul(phi[x], images[j]);
        if (phi[y] != kUnset) {
          if (phi[y] != img) return false;
          continue;
        }
        if (rev[img] != kUnset || g1_.signature[y] != g2_.signature[img]) return false;
        phi[y] = img;
        rev[img] = y;
        queue.push_back(y);
      }
    }
    return true;
  }

  std::optional<Perm> extend(std::size_t level, const std::vector<std::uint32_t>& phi,
                             const std::vector<std::uint32_t>& rev) {
    if (level == gens_.size()) {
      ++tried_;
      return realize(phi, rev);
    }
    const auto s = gens_[level];
    auto it = by_signature_.find(g1_.signature[s]);
    if (it == by_signature_.end()) return std::nullopt;
    for (auto t : it->second) {
      if (level == 0 && !class_rep_[t]) continue;
      if (tried_ >= budget_) {
        exhausted_ = true;
        return std::nullopt;
      }
      auto phi2 = phi;
      auto rev2 = rev;
      images_.resize(level + 1);
      images_[level] = t;
      if (!propagate(level, phi2, rev2, images_)) continue;
      if (auto r = extend(level + 1, phi2, rev2)) return r;
      if (exhausted_) return std::nullopt;
    }
    return std::nullopt;
  }

  // c in g1 with c K c^-1 = H, where membership in H is given by a mask.
  std::optional<std::uint32_t> conjugator(const std::vector<std::uint32_t>& k,
                                          const std::vector<char>& h_mask) const {
    for (std::uint32_t c = 0; c < g1_.n; ++c) {
      bool ok = true;
      for (auto x : k)
        if (!h_mask[g1_.mul(g1_.mul(c, x), g1_.inv[c])]) {
          ok = false;
          break;
        }
      if (ok) return c;
    }
    return std::nullopt;
  }

  // Builds pi with pi g pi^-1 = phi(g) when the two actions are equivalent.
  std::optional<Perm> realize(const std::vector<std::uint32_t>& phi,
                              const std::vector<std::uint32_t>& rev) const {
    const auto& o1 = g1_.orbit_data;
    const auto& o2 = g2_.orbit_data;
    std::vector<char> used(o2.size(), 0);
    Perm pi(g1_.degree, kUnset);
    for (const auto& a : o1) {
      std::vector<char> h_mask(g1_.n, 0);
      for (auto x : a.stabilizer) h_mask[x] = 1;
      bool matched = false;
      for (std::size_t j = 0; j < o2.size() && !matched; ++j) {
        const auto& b = o2[j];
        if (used[j] || b.points.size() != a.points.size() ||
            b.stabilizer.size() != a.stabilizer.size())
          continue;
        std::vector<std::uint32_t> pulled;
        pulled.reserve(b.stabilizer.size());
        for (auto k : b.stabilizer) pulled.push_back(rev[k]);
        auto c = conjugator(pulled, h_mask);
        if (!c) continue;
        used[j] = 1;
        matched = true;
        const auto base = (*g2_.elems)[phi[*c]][b.rep];
        for (std::size_t k = 0; k < a.points.size(); ++k)
          pi[a.points[k]] = (*g2_.elems)[phi[a.transversal[k]]][base];
      }
      if (!matched) return std::nullopt;
    }
    const Perm pinv = inverse(pi);
    for (auto s : g1_.gens)
      if (compose(compose(pi, (*g1_.elems)[s]), pinv) != (*g2_.elems)[phi[s]])
        throw MathError("constructed conjugating permutation failed verification");
    return pi;
  }

  const IndexedGroup& g1_;
  const IndexedGroup& g2_;
  std::uint64_t budget_;
  std::vector<std::uint32_t> gens_;
  std::vector<std::uint32_t> images_;
  std::map<std::uint32_t, std::vector<std::uint32_t>> by_signature_;
  std::vector<char> class_rep_;
  std::uint64_t tried_ = 0;
  bool exhausted_ = false;
};

}  // namespace

PermConjugacyVerdict perm_groups_conjugate(const PermGroup& p1, const PermGroup& p2,
                                           std::size_t max_order,
                                           std::uint64_t max_isomorphisms) {
  PermConjugacyVerdict v;
  if (p1.degree != p2.degree) {
    v.reason = "degrees differ";
    return v;
  }
  if (p1.order() != p2.order()) {
    v.reason = "orders differ";
    return v;
  }
  if (p1.order() > max_order)
    throw ResourceError("permutation groups of order " + std::to_string(p1.order()) +
                        " exceed the search limit of " + std::to_string(max_order));

  std::map<std::vector<std::uint32_t>, std::uint32_t> signatures;
  IndexedGroup g1, g2;
  build(g1, p1, signatures);
  build(g2, p2, signatures);

  auto sig_counts = [](const IndexedGroup& g) {
    std::map<std::uint32_t, std::size_t> c;
    for (auto s : g.signature) ++c[s];
    return c;
  };
  if (sig_counts(g1) != sig_counts(g2)) {
    v.reason = "order and fixed-point fingerprints differ";
    return v;
  }
  auto orbit_sizes = [](const IndexedGroup& g) {
    std::vector<std::size_t> s;
    for (const auto& o : g.orbit_data) s.push_back(o.points.size());
    std::sort(s.begin(), s.end());
    return s;
  };
  if (orbit_sizes(g1) != orbit_sizes(g2)) {
    v.reason = "orbit sizes differ";
    return v;
  }

  ConjugacySearch search(g1, g2, max_isomorphisms);
  auto pi = search.run();
  v.isomorphisms_tried = search.tried();
  if (pi) {
    v.conjugate = true;
    v.witness = std::move(pi);
    v.reason = "conjugating permutation found";
    return v;
  }
  if (search.exhausted())
    throw ResourceError("isomorphism budget of " + std::to_string(max_isomorphisms) +
                        " exhausted");
  v.reason = "no isomorphism is induced by a permutation of the points";
  return v;
}

// ---------------------------------------------------------------------------
// Stable lines and fixed vectors

std::vector<StableLine> common_stable_lines(const std::vector<ModMatrix>& test,
                                            const std::vector<ModMatrix>* evaluate) {
  if (test.empty()) throw std::invalid_argument("stable lines need at least one matrix");
  const auto& ref = test.front();
  require_prime_modulus(ref);
  const std::size_t n = ref.size();
  const std::uint32_t p = ref.modulus();
  const auto count = static_cast<std::uint32_t>(ipow(p, n));
  const auto& eval = evaluate ? *evaluate : test;

  // Eigenvalue of g on v, or p when v is not an eigenvector.
  auto eigenvalue = [&](const ModMatrix& g, const std::vector<std::uint32_t>& v,
                        std::size_t pivot) {
    std::vector<std::uint32_t> w(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < n; ++c) acc += std::uint64_t{g(r, c)} * v[c];
      w[r] = static_cast<std::uint32_t>(acc % p);
    }
    const std::uint32_t lambda = w[pivot];
    for (std::size_t r = 0; r < n; ++r)
      if (w[r] != (std::uint64_t{lambda} * v[r]) % p) return p;
    return lambda;
  };

  std::vector<StableLine> out;
  for (std::uint32_t idx = 1; idx < count; ++idx) {
    auto v = point_vector(ref.ell(), n, idx);
    std::size_t pivot = 0;
    while (v[pivot] == 0) ++pivot;
    if (v[pivot] != 1) continue;
    bool stable = true;
    for (const auto& g : test)
      if (eigenvalue(g, v, pivot) == p) {
        stable = false;
        break;
      }
    if (!stable) continue;
    StableLine line{v, {}};
    line.character.reserve(eval.size());
    for (const auto& g : eval) {
      auto lambda = eigenvalue(g, v, pivot);
      if (lambda == p) throw MathError("line is not stable under an evaluated element");
      line.character.push_back(lambda);
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::vector<StableLine> common_stable_lines(const ImageGroup& g) {
  const auto& test = g.generators.empty() ? g.elements : g.generators;
  const auto& eval = g.elements.empty() ? g.generators : g.elements;
  return common_stable_lines(test, &eval);
}

std::size_t fixed_vectors(const std::vector<ModMatrix>& generators, std::size_t n) {
  if (generators.empty()) return n;
  const std::uint32_t p = generators.front().modulus();
  std::vector<ModVector> rows;
  for (const auto& g : generators) {
    require_prime_modulus(g);
    if (g.size() != n) throw DimensionError("fixed vectors: size mismatch");
    for (std::size_t r = 0; r < n; ++r) {
      ModVector row(n);
      for (std::size_t c = 0; c < n; ++c) row[c] = (g(r, c) + (r == c ? p - 1 : 0)) % p;
      rows.push_back(std::move(row));
    }
  }
  return n - rank_mod_prime(std::move(rows), p);
}

std::size_t fixed_vectors(const ImageGroup& g) {
  const auto& gens = g.generators.empty() ? g.elements : g.generators;
  return fixed_vectors(gens, 4);
}

}  // namespace galdual
