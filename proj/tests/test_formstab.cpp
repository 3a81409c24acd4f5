#include "doctest.h"
#include "oracles.hpp"

#include "galdual/formstab.hpp"
#include "galdual/groupengine.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace galdual;
using oracle::Code;
using oracle::code_of;
using oracle::inverse2;
using oracle::invertible2;
using oracle::mul2;
using oracle::transpose2;

namespace {

ModMatrix m2(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::vector<std::vector<std::int64_t>> r;
  for (const auto& row : rows) r.emplace_back(row);
  return ModMatrix(Prime(2), 1, r);
}

ModMatrix from_code(Code c) {
  std::vector<std::int64_t> e(16);
  for (int i = 0; i < 16; ++i) e[i] = (c >> i) & 1;
  return ModMatrix(Prime(2), 1, 4, e);
}

std::set<Code> codes(const std::vector<ModMatrix>& g) {
  std::set<Code> s;
  for (const auto& m : g) s.insert(code_of(m));
  return s;
}

std::vector<ModMatrix> group_of(const std::vector<ModMatrix>& gens) { return generate_closure(gens); }

// Every subgroup of a small group by testing all subsets that contain the
// identity for closure.
std::vector<std::set<Code>> all_subgroups(const std::set<Code>& g) {
  std::vector<Code> others;
  for (Code c : g)
    if (c != 0x8421) others.push_back(c);
  REQUIRE(others.size() <= 15);
  std::vector<std::set<Code>> out;
  for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
    std::set<Code> h{0x8421};
    for (std::size_t i = 0; i < others.size(); ++i)
      if ((mask >> i) & 1) h.insert(others[i]);
    bool closed = true;
    for (Code a : h) {
      for (Code b : h)
        if (!h.count(mul2(a, b))) {
          closed = false;
          break;
        }
      if (!closed) break;
    }
    if (closed) out.push_back(std::move(h));
  }
  return out;
}

std::set<Code> conjugate_set(const std::set<Code>& h, Code c) {
  std::set<Code> out;
  const Code ci = inverse2(c);
  for (Code x : h) out.insert(mul2(mul2(c, x), ci));
  return out;
}

std::size_t brute_class_count(const std::set<Code>& g) {
  auto subs = all_subgroups(g);
  std::set<std::set<Code>> remaining(subs.begin(), subs.end());
  std::size_t classes = 0;
  while (!remaining.empty()) {
    const auto h = *remaining.begin();
    for (Code c : g) remaining.erase(conjugate_set(h, c));
    ++classes;
  }
  return classes;
}

std::vector<ModMatrix> the_576_group() { return similitude_stabilizer(polarization_form()); }

const std::vector<SubgroupClassRecord>& the_128_classes() {
  static const auto classes = subgroup_conjugacy_classes(the_576_group());
  return classes;
}

const Census& the_census() {
  static const Census c = contragredient_census(the_128_classes(), polarization_form());
  return c;
}

}  // namespace

TEST_CASE("the polarization form mod 2") {
  auto j = polarization_form();
  CHECK(j.rank == 2);
  CHECK(j.matrix == m2({{0, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}));
  CHECK_THROWS_AS(AlternatingForm::from_matrix(m2({{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}})),
                  MathError);
  CHECK_THROWS_AS(AlternatingForm::from_matrix(m2({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}})),
                  MathError);
  CHECK(standard_symplectic_form().rank == 4);
  CHECK(zero_form().rank == 0);
}

TEST_CASE("alternating forms fall into three orbits; the degenerate nonzero one is unique") {
  auto orbits = alternating_form_orbits();
  REQUIRE(orbits.size() == 3);
  CHECK(orbits[0].rank == 0);
  CHECK(orbits[0].size == 1);
  CHECK(orbits[1].rank == 2);
  CHECK(orbits[1].size == 35);
  CHECK(orbits[2].rank == 4);
  CHECK(orbits[2].size == 28);

  // Count alternating matrices by rank directly: rank 2 iff nonzero with
  // nonzero kernel.
  std::size_t alternating = 0, rank2 = 0;
  for (Code c = 0; c < (1u << 16); ++c) {
    if (transpose2(c) != c) continue;
    bool diag_zero = true;
    for (int i = 0; i < 4; ++i) diag_zero &= !((c >> (5 * i)) & 1);
    if (!diag_zero) continue;
    ++alternating;
    if (c != 0 && !invertible2(c)) ++rank2;
  }
  CHECK(alternating == 64);
  CHECK(rank2 == 35);
}

TEST_CASE("similitude stabilizers by exhaustive filtering") {
  auto g = the_576_group();
  CHECK(g.size() == 576);
  CHECK(similitude_stabilizer(standard_symplectic_form()).size() == 720);
  CHECK(similitude_stabilizer(zero_form()).size() == 20160);

  // Independent filter with the brute-force arithmetic.
  const Code j = code_of(polarization_form().matrix);
  std::set<Code> brute;
  for (Code c = 0; c < (1u << 16); ++c)
    if (invertible2(c) && mul2(mul2(transpose2(c), j), c) == j) brute.insert(c);
  CHECK(brute == codes(g));
}

TEST_CASE("structure of the 576-element stabilizer") {
  auto g = the_576_group();
  auto s = structure_invariants(g);
  CHECK(s.order == 576);
  CHECK(s.exponent == 12);
  CHECK(s.solvable);
  CHECK(s.derived_series.front() == 576);
  CHECK(s.derived_series.back() == 1);
  REQUIRE(s.has_c2_4_normal);
  CHECK(s.quotient_is_s3xs3);
  REQUIRE(s.has_complement);

  const auto n = codes(s.normal_subgroup);
  const auto k = codes(s.complement);
  const auto all = codes(g);
  CHECK(n.size() == 16);
  CHECK(k.size() == 36);
  for (Code a : n) {
    CHECK(mul2(a, a) == 0x8421u);
    for (Code x : all) CHECK(n.count(mul2(mul2(x, a), inverse2(x))));
  }
  std::set<Code> meet;
  std::set_intersection(n.begin(), n.end(), k.begin(), k.end(), std::inserter(meet, meet.end()));
  CHECK(meet == std::set<Code>{0x8421});
  for (Code a : k)
    for (Code b : k) CHECK(k.count(mul2(a, b)));
  std::set<Code> products;
  for (Code a : n)
    for (Code b : k) products.insert(mul2(a, b));
  CHECK(products == all);
}

TEST_CASE("structure of small groups") {
  // S3 permuting the first three coordinates.
  auto s3 = group_of({m2({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                      m2({{0, 0, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}})});
  auto a = structure_invariants(s3);
  CHECK(a.order == 6);
  CHECK(a.exponent == 6);
  CHECK(a.solvable);
  CHECK(a.derived_series == std::vector<std::size_t>{6, 3, 1});

  // Block unipotent [[I, A], [0, I]].
  auto c24 = group_of({m2({{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}})});
  auto b = structure_invariants(c24);
  CHECK(b.order == 16);
  CHECK(b.exponent == 2);
  CHECK(b.derived_series == std::vector<std::size_t>{16, 1});

  const auto cycle = m2({{0, 0, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
  CHECK_THROWS_AS(structure_invariants({from_code(0x8421), cycle}), MathError);
}

TEST_CASE("subgroup classes of small groups against all-subsets enumeration") {
  auto c2c2 = group_of({m2({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                        m2({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}})});
  auto s3 = group_of({m2({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                      m2({{0, 0, 1, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}})});
  // Upper unitriangular 3x3 matrices over F_2 form D4.
  auto d4 = group_of({m2({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                      m2({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}})});
  auto c24 = group_of({m2({{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
                       m2({{1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}})});
  REQUIRE(d4.size() == 8);

  struct Case {
    const char* name;
    std::vector<ModMatrix> g;
    std::size_t classes;
    std::size_t subgroups;
  };
  for (const auto& c : {Case{"C2xC2", c2c2, 5, 5}, Case{"S3", s3, 4, 6}, Case{"D4", d4, 8, 10},
                        Case{"C2^4", c24, 67, 67}}) {
    CAPTURE(c.name);
    auto records = subgroup_conjugacy_classes(c.g);
    const auto set = codes(c.g);
    CHECK(records.size() == c.classes);
    CHECK(records.size() == brute_class_count(set));
    std::size_t total = 0;
    for (const auto& r : records) total += r.class_size;
    CHECK(total == c.subgroups);
    CHECK(total == all_subgroups(set).size());
  }
}

TEST_CASE("the 576-group has 128 classes of subgroups") {
  const auto& classes = the_128_classes();
  CHECK(classes.size() == 128);
  const auto g = codes(the_576_group());
  std::size_t orders_ok = 0;
  for (const auto& r : classes) {
    const auto h = codes(r.representative);
    CHECK(h.size() == r.order);
    CHECK(576 % r.order == 0);
    for (Code a : h)
      for (Code b : h) REQUIRE(h.count(mul2(a, b)));
    // Orbit-stabilizer: class size times normalizer order.
    std::size_t normalizer = 0;
    for (Code c : g) normalizer += conjugate_set(h, c) == h;
    CHECK(r.class_size * normalizer == 576);
    CHECK(codes(generate_closure(r.generators.empty()
                                     ? std::vector<ModMatrix>{from_code(0x8421)}
                                     : r.generators)) == h);
    ++orders_ok;
  }
  CHECK(orders_ok == 128);
  CHECK(classes.front().order == 1);
  CHECK(classes.back().order == 576);
  for (std::size_t i = 1; i < classes.size(); ++i)
    CHECK(classes[i - 1].order <= classes[i].order);
}

TEST_CASE("property: class representatives are pairwise non-conjugate") {
  const auto& classes = the_128_classes();
  const auto g = codes(the_576_group());
  std::map<std::size_t, std::vector<std::set<Code>>> by_order;
  for (const auto& r : classes) by_order[r.order].push_back(codes(r.representative));
  std::size_t pairs = 0;
  for (const auto& [order, reps] : by_order)
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        bool conj = false;
        for (Code c : g)
          if (conjugate_set(reps[i], c) == reps[j]) {
            conj = true;
            break;
          }
        CHECK_FALSE(conj);
        ++pairs;
      }
  CHECK(pairs >= 100);
}

TEST_CASE("contragredient census") {
  const auto& c = the_census();
  CHECK(c.not_rep_equivalent == 78);
  CHECK(c.not_subgroup_conjugate == 52);

  std::size_t smallest = 576;
  bool whole_group_listed = false;
  for (const auto& r : c.classes) {
    if (r.order == 1) {
      CHECK(r.self_dual_as_rep);
      CHECK(r.image_conjugate_to_dual);
    }
    // Rep equivalence gives subgroup conjugacy through the same witness.
    if (r.self_dual_as_rep) CHECK(r.image_conjugate_to_dual);
    if (!r.self_dual_as_rep) {
      smallest = std::min(smallest, r.order);
      whole_group_listed |= r.order == 576;
    }
  }
  CHECK(smallest == 4);
  CHECK(whole_group_listed);

  auto text = render_census(c);
  CHECK(text.rfind("order=1 rep_equiv=true subgrp_conj=true\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '=') == 3 * 128);

  auto bad = the_128_classes();
  CHECK_THROWS_AS(contragredient_census(bad, standard_symplectic_form()), MathError);
}

TEST_CASE("census verdicts agree with brute force on classes of order at most 8") {
  const auto& c = the_census();
  std::set<Code> gl;
  for (Code x = 0; x < (1u << 16); ++x)
    if (invertible2(x)) gl.insert(x);
  REQUIRE(gl.size() == 20160);
  std::size_t checked = 0;
  for (const auto& r : c.classes) {
    if (r.order > 8 || r.order == 1) continue;
    std::vector<Code> gens;
    for (const auto& g : r.generators) gens.push_back(code_of(g));
    const auto h = codes(r.representative);
    std::set<Code> dual;
    for (Code x : h) dual.insert(transpose2(inverse2(x)));
    bool rep_equiv = false, conj = false;
    for (Code x : gl) {
      bool intertwines = true, conjugates = true;
      const Code xi = inverse2(x);
      for (Code s : gens) {
        if (mul2(x, s) != mul2(transpose2(inverse2(s)), x)) intertwines = false;
        if (!dual.count(mul2(mul2(x, s), xi))) conjugates = false;
      }
      rep_equiv |= intertwines;
      conj |= conjugates;
      if (rep_equiv && conj) break;
    }
    CHECK(rep_equiv == r.self_dual_as_rep);
    CHECK(conj == r.image_conjugate_to_dual);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("property: the contragredient is an involution on classes") {
  const auto& c = the_census();
  for (const auto& r : c.classes) {
    auto once = contragredient_image(r.representative);
    CHECK(contragredient_image(once) == r.representative);
    // Conjugacy back from the image holds exactly when it holds forward.
    auto back = matrix_subgroups_conjugate(once, contragredient_image(r.generators),
                                           r.representative);
    CHECK(back.has_value() == r.image_conjugate_to_dual);
  }
}
