#include "galdual/formstab.hpp"

#include "galdual/gf2.hpp"
#include "galdual/groupengine.hpp"
#include "galdual/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace galdual {

using gf2::Mat;

namespace {

constexpr std::size_t kMaxStructureOrder = 10'000;

bool is_alternating2(Mat j) {
  for (int i = 0; i < 4; ++i)
    if (gf2::entry(j, i, i)) return false;
  return gf2::transpose(j) == j;
}

Mat congruent(Mat g, Mat j) { return gf2::mul(gf2::mul(gf2::transpose(g), j), g); }

std::size_t element_order(Mat g) {
  std::size_t k = 1;
  for (Mat x = g; x != gf2::kIdentity; x = gf2::mul(x, g)) ++k;
  return k;
}

Mat power(Mat g, std::size_t e) {
  Mat r = gf2::kIdentity;
  for (std::size_t i = 0; i < e; ++i) r = gf2::mul(r, g);
  return r;
}

std::vector<Mat> to_codes(const std::vector<ModMatrix>& g) {
  std::vector<Mat> out;
  out.reserve(g.size());
  for (const auto& m : g) out.push_back(gf2::from_matrix(m));
  return out;
}

std::vector<ModMatrix> to_matrices(std::vector<Mat> codes) {
  std::vector<ModMatrix> out;
  out.reserve(codes.size());
  for (Mat c : codes) out.push_back(gf2::to_matrix(c));
  std::sort(out.begin(), out.end());
  return out;
}

// Bitset over the elements of an ambient group.
using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : b) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// A subgroup of GL_4(F_2) with its elements indexed.
class Ambient {
 public:
  explicit Ambient(std::vector<Mat> elems) : elems_(std::move(elems)), index_(1 << 16, -1) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    for (std::size_t i = 0; i < elems_.size(); ++i) index_[elems_[i]] = static_cast<int>(i);
    if (index_[gf2::kIdentity] < 0) throw MathError("element set does not contain the identity");
    for (Mat a : elems_)
      if (!gf2::invertible(a)) throw MathError("element set contains a singular matrix");
  }

  std::size_t size() const { return elems_.size(); }
  Mat at(std::size_t i) const { return elems_[i]; }
  const std::vector<Mat>& elements() const { return elems_; }
  bool contains(Mat m) const { return index_[m] >= 0; }
  std::size_t index(Mat m) const {
    if (index_[m] < 0) throw MathError("product left the element set");
    return static_cast<std::size_t>(index_[m]);
  }
  std::size_t words() const { return (elems_.size() + 63) / 64; }

  Bits empty_bits() const { return Bits(words(), 0); }
  void set(Bits& b, Mat m) const {
    auto i = index(m);
    b[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool test(const Bits& b, Mat m) const {
    if (index_[m] < 0) return false;
    auto i = static_cast<std::size_t>(index_[m]);
    return (b[i / 64] >> (i % 64)) & 1;
  }
  std::vector<Mat> members(const Bits& b) const {
    std::vector<Mat> out;
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if ((b[i / 64] >> (i % 64)) & 1) out.push_back(elems_[i]);
    return out;
  }

  // Subgroup generated by gens, as a member list (identity first).
  std::vector<Mat> closure(const std::vector<Mat>& gens) const {
    Bits seen = empty_bits();
    std::vector<Mat> out{gf2::kIdentity};
    set(seen, gf2::kIdentity);
    for (std::size_t k = 0; k < out.size(); ++k)
      for (Mat s : gens) {
        Mat y = gf2::mul(out[k], s);
        if (!test(seen, y)) {
          set(seen, y);
          out.push_back(y);
        }
      }
    return out;
  }

  Bits bits_of(const std::vector<Mat>& members) const {
    Bits b = empty_bits();
    for (Mat m : members) set(b, m);
    return b;
  }

  bool is_closed() const {
    for (Mat a : elems_)
      for (Mat b : elems_)
        if (!contains(gf2::mul(a, b))) return false;
    return true;
  }

 private:
  std::vector<Mat> elems_;
  std::vector<int> index_;
};

std::vector<std::vector<Mat>> conjugacy_classes(const Ambient& g) {
  std::vector<char> done(g.size(), 0);
  std::vector<std::vector<Mat>> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (done[i]) continue;
    std::set<Mat> cls;
    for (Mat c : g.elements()) cls.insert(gf2::mul(gf2::mul(c, g.at(i)), gf2::inverse(c)));
    for (Mat m : cls) done[g.index(m)] = 1;
    out.emplace_back(cls.begin(), cls.end());
  }
  return out;
}

std::vector<Mat> derived_subgroup(const Ambient& g, const std::vector<Mat>& h) {
  std::set<Mat> comms;
  for (Mat a : h)
    for (Mat b : h)
      comms.insert(gf2::mul(gf2::mul(a, b), gf2::inverse(gf2::mul(b, a))));
  return g.closure({comms.begin(), comms.end()});
}

// The quotient of g by a normal subgroup n, as a small abstract group.
struct Quotient {
  std::vector<Mat> reps;                  // one element per coset
  std::vector<std::size_t> coset;         // coset index of each element of g
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;

  std::size_t size() const { return reps.size(); }
};

Quotient make_quotient(const Ambient& g, const std::vector<Mat>& n) {
  Quotient q;
  q.coset.assign(g.size(), SIZE_MAX);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (q.coset[i] != SIZE_MAX) continue;
    const std::size_t id = q.reps.size();
    q.reps.push_back(g.at(i));
    for (Mat x : n) q.coset[g.index(gf2::mul(g.at(i), x))] = id;
  }
  q.identity = q.coset[g.index(gf2::kIdentity)];
  q.table.assign(q.size(), std::vector<std::size_t>(q.size()));
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b)
      q.table[a][b] = q.coset[g.index(gf2::mul(q.reps[a], q.reps[b]))];
  return q;
}

// Normal subgroups of q of the given order, as sorted index lists.
std::vector<std::vector<std::size_t>> normal_subgroups_of_order(const Quotient& q,
                                                                std::size_t order) {
  std::vector<std::size_t> inv(q.size());
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b)
      if (q.table[a][b] == q.identity) inv[a] = b;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<char> done(q.size(), 0);
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (done[x] || x == q.identity) continue;
    std::set<std::size_t> cls;
    for (std::size_t c = 0; c < q.size(); ++c) cls.insert(q.table[q.table[c][x]][inv[c]]);
    for (auto m : cls) done[m] = 1;
    classes.emplace_back(cls.begin(), cls.end());
  }
  if (classes.size() > 20) throw ResourceError("quotient has too many conjugacy classes");
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << classes.size()); ++mask) {
    std::vector<std::size_t> members{q.identity};
    for (std::size_t c = 0; c < classes.size(); ++c)
      if ((mask >> c) & 1) members.insert(members.end(), classes[c].begin(), classes[c].end());
    if (members.size() != order) continue;
    std::vector<char> in(q.size(), 0);
    for (auto m : members) in[m] = 1;
    bool closed = true;
    for (auto a : members)
      for (auto b : members)
        if (!in[q.table[a][b]]) closed = false;
    if (!closed) continue;
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

bool is_abelian(const Quotient& q, const std::vector<std::size_t>& h) {
  for (auto a : h)
    for (auto b : h)
      if (q.table[a][b] != q.table[b][a]) return false;
  return true;
}

bool quotient_is_s3xs3(const Quotient& q) {
  if (q.size() != 36) return false;
  // Two commuting nonabelian normal subgroups of order 6 meeting trivially;
  // the nonabelian group of order 6 is S3.
  auto sixes = normal_subgroups_of_order(q, 6);
  for (std::size_t i = 0; i < sixes.size(); ++i)
    for (std::size_t j = i + 1; j < sixes.size(); ++j) {
      const auto& a = sixes[i];
      const auto& b = sixes[j];
      if (is_abelian(q, a) || is_abelian(q, b)) continue;
      std::vector<std::size_t> meet;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(meet));
      if (meet.size() != 1) continue;
      bool commute = true;
      for (auto x : a)
        for (auto y : b)
          if (q.table[x][y] != q.table[y][x]) commute = false;
      if (commute) return true;
    }
  return false;
}

// A subgroup meeting n trivially and mapping onto the quotient.
std::optional<std::vector<Mat>> find_complement(const Ambient& g, const std::vector<Mat>& n,
                                                const Quotient& q) {
  // Greedy generating set of the quotient.
  std::vector<std::size_t> qgens;
  std::vector<char> reached(q.size(), 0);
  reached[q.identity] = 1;
  std::vector<std::size_t> members{q.identity};
  for (std::size_t x = 0; x < q.size() && members.size() < q.size(); ++x) {
    if (reached[x]) continue;
    qgens.push_back(x);
    for (std::size_t k = 0; k < members.size(); ++k)
      for (auto s : qgens) {
        auto y = q.table[members[k]][s];
        if (!reached[y]) {
          reached[y] = 1;
          members.push_back(y);
        }
      }
  }
  const Bits n_bits = g.bits_of(n);
  std::vector<Mat> chosen;
  std::function<std::optional<std::vector<Mat>>(std::size_t)> search =
      [&](std::size_t level) -> std::optional<std::vector<Mat>> {
    if (level == qgens.size()) {
      auto k = g.closure(chosen);
      if (k.size() == q.size()) return k;
      return std::nullopt;
    }
    for (Mat x : n) {
      chosen.push_back(gf2::mul(q.reps[qgens[level]], x));
      auto k = g.closure(chosen);
      bool ok = k.size() <= q.size();
      if (ok)
        for (Mat m : k)
          if (m != gf2::kIdentity && g.test(n_bits, m)) {
            ok = false;
            break;
          }
      if (ok)
        if (auto r = search(level + 1)) return r;
      chosen.pop_back();
    }
    return std::nullopt;
  };
  return search(0);
}

// Smallest generating set found greedily in increasing code order.
std::vector<Mat> greedy_generators(const Ambient& g, const std::vector<Mat>& members) {
  std::vector<Mat> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Mat> gens;
  Bits reached = g.bits_of({gf2::kIdentity});
  std::size_t count = 1;
  for (Mat m : sorted) {
    if (count == members.size()) break;
    if (g.test(reached, m)) continue;
    gens.push_back(m);
    auto span = g.closure(gens);
    reached = g.bits_of(span);
    count = span.size();
  }
  return gens;
}

std::string generator_dump(const std::vector<ModMatrix>& gens) {
  std::string out;
  for (const auto& g : gens) out += g.str() + "|";
  return out;
}

}  // namespace

AlternatingForm AlternatingForm::from_matrix(const ModMatrix& m) {
  const Mat j = gf2::from_matrix(m);
  if (!is_alternating2(j)) throw MathError("form is not alternating over F_2");
  return {gf2::to_matrix(j), static_cast<unsigned>(gf2::rank(j))};
}

AlternatingForm polarization_form() {
  const Prime two(2);
  const LAdicMatrix principal = LAdicMatrix::from_integers(
      two, {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}});
  const KernelSpec kernel(two, 1, 4, {{1, 0, 1, 0}});
  const auto push =
      pushforward_polarization(principal, mat_inv(change_basis_from_kernel(kernel)), kernel);
  return AlternatingForm::from_matrix(reduce_mod(push.matrix, 1));
}

AlternatingForm standard_symplectic_form() {
  return AlternatingForm::from_matrix(ModMatrix(
      Prime(2), 1, {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
}

AlternatingForm zero_form() { return AlternatingForm::from_matrix(ModMatrix(Prime(2), 1, 4)); }

std::vector<FormOrbit> alternating_form_orbits() {
  std::vector<Mat> forms;
  for (unsigned m = 0; m < (1u << 16); ++m)
    if (is_alternating2(static_cast<Mat>(m))) forms.push_back(static_cast<Mat>(m));
  std::set<Mat> remaining(forms.begin(), forms.end());
  std::vector<FormOrbit> out;
  while (!remaining.empty()) {
    const Mat j = *remaining.begin();
    std::set<Mat> orbit;
    for (Mat g : gf2::gl4()) orbit.insert(congruent(g, j));
    for (Mat x : orbit) remaining.erase(x);
    out.push_back({static_cast<unsigned>(gf2::rank(j)), orbit.size(), gf2::to_matrix(j)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return out;
}

std::vector<ModMatrix> similitude_stabilizer(const AlternatingForm& j) {
  const Mat form = gf2::from_matrix(j.matrix);
  std::vector<Mat> out;
  for (Mat g : gf2::gl4())
    if (congruent(g, form) == form) out.push_back(g);
  return to_matrices(std::move(out));
}

StructureInvariants structure_invariants(const std::vector<ModMatrix>& elements) {
  if (elements.size() > kMaxStructureOrder)
    throw ResourceError("group of order " + std::to_string(elements.size()) +
                        " is too large for structure analysis");
  Ambient g(to_codes(elements));
  if (!g.is_closed()) throw MathError("element set is not closed under multiplication");

  StructureInvariants s;
  s.order = g.size();
  s.exponent = 1;
  for (Mat x : g.elements()) s.exponent = std::lcm(s.exponent, element_order(x));

  std::vector<Mat> current = g.elements();
  s.derived_series.push_back(current.size());
  while (current.size() > 1) {
    auto next = derived_subgroup(g, current);
    if (next.size() == current.size()) break;
    current = std::move(next);
    s.derived_series.push_back(current.size());
  }
  s.solvable = current.size() == 1;

  if (g.size() % 16 != 0) return s;
  std::vector<std::vector<Mat>> involution_classes;
  for (auto& cls : conjugacy_classes(g))
    if (cls.front() != gf2::kIdentity && element_order(cls.front()) == 2)
      involution_classes.push_back(std::move(cls));
  if (involution_classes.size() > 20) throw ResourceError("too many involution classes");

  for (std::uint32_t mask = 1; mask < (1u << involution_classes.size()); ++mask) {
    std::vector<Mat> n{gf2::kIdentity};
    for (std::size_t c = 0; c < involution_classes.size(); ++c)
      if ((mask >> c) & 1)
        n.insert(n.end(), involution_classes[c].begin(), involution_classes[c].end());
    if (n.size() != 16) continue;
    const Bits nb = g.bits_of(n);
    bool ok = true;
    for (Mat a : n)
      for (Mat b : n)
        if (gf2::mul(a, b) != gf2::mul(b, a) || !g.test(nb, gf2::mul(a, b))) ok = false;
    if (!ok) continue;
    s.has_c2_4_normal = true;
    s.normal_subgroup = to_matrices(n);
    const Quotient q = make_quotient(g, n);
    if (!quotient_is_s3xs3(q)) continue;
    s.quotient_is_s3xs3 = true;
    if (auto k = find_complement(g, n, q)) {
      s.has_complement = true;
      s.complement = to_matrices(*k);
      return s;
    }
  }
  return s;
}

std::vector<SubgroupClassRecord> subgroup_conjugacy_classes(const std::vector<ModMatrix>& elements,
                                                            std::size_t max_classes) {
  Ambient g(to_codes(elements));
  if (!g.is_closed()) throw MathError("element set is not closed under multiplication");

  std::vector<std::size_t> primes;
  for (std::size_t p = 2, n = g.size(); p <= n; ++p)
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }

  std::unordered_set<Bits, BitsHash> seen;
  struct Pending {
    std::vector<Mat> members;
    std::vector<Mat> gens;
  };
  std::vector<Pending> queue;
  std::vector<SubgroupClassRecord> records;

  // Registers the conjugacy class of a subgroup not seen before.
  auto add_class = [&](std::vector<Mat> members, std::vector<Mat> gens) {
    Bits b = g.bits_of(members);
    if (seen.count(b)) return;
    std::set<Bits> conjugates;
    for (Mat c : g.elements()) {
      const Mat ci = gf2::inverse(c);
      Bits cb = g.empty_bits();
      for (Mat h : members) g.set(cb, gf2::mul(gf2::mul(c, h), ci));
      conjugates.insert(std::move(cb));
    }
    for (const auto& cb : conjugates) seen.insert(cb);
    if (records.size() >= max_classes)
      throw ResourceError("subgroup class budget of " + std::to_string(max_classes) +
                          " exceeded");
    const auto rep = g.members(*conjugates.begin());
    SubgroupClassRecord r;
    r.order = rep.size();
    r.class_size = conjugates.size();
    r.generators = to_matrices(greedy_generators(g, rep));
    std::sort(r.generators.begin(), r.generators.end());
    r.representative = to_matrices(rep);
    records.push_back(std::move(r));
    queue.push_back({std::move(members), std::move(gens)});
  };

  add_class({gf2::kIdentity}, {});
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Pending h = queue[k];
    const Bits hb = g.bits_of(h.members);
    for (Mat x : g.elements()) {
      if (g.test(hb, x)) continue;
      bool normalizes = true;
      const Mat xi = gf2::inverse(x);
      for (Mat s : h.gens)
        if (!g.test(hb, gf2::mul(gf2::mul(x, s), xi))) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      bool prime_step = false;
      for (auto p : primes)
        if (g.test(hb, power(x, p))) {
          prime_step = true;
          break;
        }
      if (!prime_step) continue;
      auto gens = h.gens;
      gens.push_back(x);
      auto members = g.closure(gens);
      add_class(std::move(members), std::move(gens));
    }
  }

  for (const auto& r : records) {
    Ambient check(to_codes(r.representative));
    if (!check.is_closed()) throw MathError("class representative is not a subgroup");
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    if (a.order != b.order) return a.order < b.order;
    return generator_dump(a.generators) < generator_dump(b.generators);
  });
  return records;
}

std::vector<ModMatrix> contragredient_image(const std::vector<ModMatrix>& h) {
  std::vector<Mat> out;
  for (const auto& m : h) out.push_back(gf2::transpose(gf2::inverse(gf2::from_matrix(m))));
  return to_matrices(std::move(out));
}

Census contragredient_census(std::vector<SubgroupClassRecord> classes,
                             const AlternatingForm& j) {
  const Mat form = gf2::from_matrix(j.matrix);
  for (const auto& r : classes)
    for (const auto& g : r.generators)
      if (congruent(gf2::from_matrix(g), form) != form)
        throw MathError("class generator does not preserve the form");
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < classes.size(); i = next++) {
      auto& r = classes[i];
      if (r.generators.empty()) {
        r.self_dual_as_rep = true;
        r.image_conjugate_to_dual = true;
        continue;
      }
      std::vector<MatrixPair> pairs;
      for (const auto& h : r.generators) pairs.emplace_back(h, contragredient_image({h}).front());
      r.self_dual_as_rep = representations_equivalent(pairs).equivalent;
      r.image_conjugate_to_dual =
          matrix_subgroups_conjugate(r.representative, r.generators,
                                     contragredient_image(r.representative))
              .has_value();
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  Census c;
  for (const auto& r : classes) {
    c.not_rep_equivalent += !r.self_dual_as_rep;
    c.not_subgroup_conjugate += !r.image_conjugate_to_dual;
  }
  c.classes = std::move(classes);
  return c;
}

std::string render_census(const Census& c) {
  std::ostringstream os;
  for (const auto& r : c.classes) {
    os << "order=" << r.order << " rep_equiv=" << (r.self_dual_as_rep ? "true" : "false")
       << " subgrp_conj=" << (r.image_conjugate_to_dual ? "true" : "false") << '\n';
    for (const auto& g : r.generators) os << "  gen " << g.str() << '\n';
  }
  return os.str();
}

}  // namespace galdual
