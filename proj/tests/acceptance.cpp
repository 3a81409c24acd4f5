// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Arithmetic is exact; only wall-clock limits carry a tolerance.

#include "galdual/constants.hpp"
#include "galdual/formstab.hpp"
#include "galdual/groupengine.hpp"
#include "galdual/verifier.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

using namespace galdual;

namespace {

// Wall-clock limits in milliseconds.
constexpr std::int64_t kLimitLattice = 1'000;
constexpr std::int64_t kLimitType = 1'000;
constexpr std::int64_t kLimitRoutes = 60'000;
constexpr std::int64_t kLimitShapes = 60'000;
constexpr std::int64_t kLimitTheorem = 60'000;
constexpr std::int64_t kLimitSemisimp = 60'000;
constexpr std::int64_t kLimitPermutation = 120'000;
constexpr std::int64_t kLimitCensus = 600'000;
constexpr std::int64_t kLimitProperties = 60'000;

constexpr std::size_t kPropertyCases = 100;

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
  void require(const CheckReport& r) {
    require(r.status == Status::pass, r.check_id + " " + render_params(r) + ": " + r.reason);
  }
  static std::string render_params(const CheckReport& r) {
    std::string out;
    for (const auto& [k, v] : r.params) out += k + "=" + v + " ";
    return out;
  }
};

CheckReport check(const char* id, std::optional<unsigned> ell = std::nullopt,
                  std::optional<Twist> t = std::nullopt) {
  CheckParams p;
  p.ell = ell;
  p.twist = t;
  return run_check(id, p);
}

int failures = 0;

void criterion(int number, const char* title, std::int64_t limit_ms,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  out.require(ms <= limit_ms, "over the time limit");
  if (!out.ok) ++failures;
  std::printf("%s %d %s (%lld ms, limit %lld ms)%s%s\n", out.ok ? "PASS" : "FAIL", number, title,
              static_cast<long long>(ms), static_cast<long long>(limit_ms),
              out.ok ? "" : ": ", out.note.c_str());
  std::fflush(stdout);
}

const std::vector<unsigned> kAll{2, 3, 5, 7};
const std::vector<unsigned> kOdd{3, 5, 7};

// ---------------------------------------------------------------------------
// Property batteries

void closure_battery(Outcome& out, std::mt19937_64& rng) {
  const Prime two(2);
  for (std::size_t i = 0; i < kPropertyCases; ++i) {
    std::vector<ModMatrix> gens;
    for (std::size_t k = 0; k < 1 + i % 2; ++k) gens.push_back(oracle::random_invertible(two, 4, rng));
    const auto g = generate_closure(gens);
    out.require(closed_under(g, gens), "closure is closed");
    out.require(constants::kGL4F2Order % g.size() == 0, "closure order divides |GL_4(F_2)|");
  }
}

void route_battery(Outcome& out, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < kPropertyCases; ++i) {
    const Prime l(kAll[i % 4]);
    const Twist t = i % 3 == 0 ? Twist::trivial : Twist::generic;
    const std::int64_t p = l;
    std::uniform_int_distribution<std::int64_t> unit(1, p - 1), digit(0, p - 1);
    const std::int64_t a = t == Twist::trivial ? 1 : unit(rng), d = unit(rng);
    std::int64_t v[9];
    for (auto& x : v) x = digit(rng);
    const auto full = ParamPoint::solve(l, t, a, d, v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]);
    const auto base = ParamPoint::solve(l, t, a, d, v[0], v[1], v[2], v[3], v[4], v[5]);
    out.require(rho_Adual_isogeny(full) == rho_Adual_contragredient(full), "routes agree");
    out.require(rho_A(full) == rho_A(base), "truncated digits ignored");
  }
}

void smith_battery(Outcome& out, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> entry(-30, 30), coef(-3, 3), index(0, 3);
  for (std::size_t i = 0; i < kPropertyCases; ++i) {
    const Prime l(kAll[i % 4]);
    std::vector<std::vector<std::int64_t>> rows(4, std::vector<std::int64_t>(4));
    for (auto& r : rows)
      for (auto& x : r) x = entry(rng);
    const auto a = LAdicMatrix::from_integers(l, rows);
    if (det(a).is_zero()) continue;
    auto shear = [&] {
      auto m = LAdicMatrix::identity(l, 4);
      for (int k = 0; k < 6; ++k) {
        const auto r = index(rng), c = index(rng);
        if (r == c) continue;
        auto e = LAdicMatrix::identity(l, 4);
        e(r, c) = LAdicNumber(l, coef(rng));
        m = m * e;
      }
      return m;
    };
    const auto b = shear() * a * shear();
    out.require(smith_normal_form(a).valuations == smith_normal_form(b).valuations,
                "Smith valuations invariant");
  }
}

void burnside_battery(Outcome& out, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < kPropertyCases; ++i) {
    const std::size_t degree = 3 + i % 5;
    std::vector<Perm> gens;
    for (std::size_t k = 0; k < 1 + i % 3; ++k) {
      Perm p(degree);
      std::iota(p.begin(), p.end(), 0u);
      std::shuffle(p.begin(), p.end(), rng);
      gens.push_back(std::move(p));
    }
    const auto g = perm_closure(degree, gens);
    out.require(trivial_multiplicity(g) == oracle::orbit_count(degree, gens),
                "Burnside count equals union-find orbit count");
  }
}

void substitution_battery(Outcome& out, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < kPropertyCases; ++i) {
    const Prime l(kAll[i % 3]);
    const auto y = oracle::random_invertible(l, 4, rng);
    const auto y_inv = mat_inv(y);
    std::vector<MatrixPair> pairs;
    for (int k = 0; k < 2; ++k) {
      const auto g = oracle::random_invertible(l, 4, rng);
      pairs.emplace_back(g, y * g * y_inv);
    }
    const auto v = representations_equivalent(pairs, i + 1);
    out.require(v.equivalent && v.witness.has_value(), "conjugated representation is equivalent");
    if (!v.witness) continue;
    const auto w_inv = mat_inv(*v.witness);
    for (const auto& [g, h] : pairs)
      out.require(*v.witness * g * w_inv == h, "witness intertwines");
  }
}

void involution_battery(Outcome& out) {
  const auto g = similitude_stabilizer(polarization_form());
  const auto census = contragredient_census(subgroup_conjugacy_classes(g), polarization_form());
  out.require(census.classes.size() >= kPropertyCases, "enough classes");
  for (const auto& c : census.classes) {
    const auto dual = contragredient_image(c.representative);
    out.require(contragredient_image(dual) == c.representative, "contragredient is an involution");
    std::vector<ModMatrix> dual_gens;
    for (const auto& h : c.generators) dual_gens.push_back(mat_inv(h).transpose());
    const bool back = matrix_subgroups_conjugate(dual, dual_gens, c.representative).has_value();
    out.require(back == c.image_conjugate_to_dual, "conjugacy is symmetric");
    out.require(!c.self_dual_as_rep || c.image_conjugate_to_dual,
                "equivalent representations have conjugate images");
  }
}

}  // namespace

int main() {
  criterion(1, "lattice golden examples", kLimitLattice, [](Outcome& out) {
    for (unsigned p : kAll) out.require(check("lattice-examples", p));
  });

  criterion(2, "type (1,l) of the glued polarization", kLimitType, [](Outcome& out) {
    for (unsigned p : kAll) {
      const auto r = check("type-1-ell", p);
      out.require(r);
      out.require(r.counts.count("type_d2") && r.counts.at("type_d2") == p, "type (1,l)");
    }
  });

  std::vector<CheckReport> routes;
  criterion(3, "dual-route agreement", kLimitRoutes, [&](Outcome& out) {
    for (unsigned p : kAll)
      for (Twist t : {Twist::generic, Twist::trivial}) {
        routes.push_back(check("dual-route-agreement", p, t));
        out.require(routes.back());
        if (p == 7)
          out.require(routes.back().counts.at("points") ==
                          static_cast<std::int64_t>(constants::kSamplesEll7),
                      "10^4 samples at l = 7");
      }
  });

  criterion(4, "shapes, surjectivity and group orders", kLimitShapes, [&](Outcome& out) {
    out.require(routes.size() == 8, "route reports available");
    for (const auto& r : routes) {
      out.require(r);
      out.require(r.counts.count("z_formula_ok") && r.counts.at("z_formula_ok") == r.counts.at("points"),
                  "(3,1) entry formula");
      if (r.params.at("ell") == "7") continue;
      const bool trivial = r.params.at("twist") == "trivial";
      const auto expected = static_cast<std::int64_t>(
          constants::image_order(static_cast<unsigned>(std::stoi(r.params.at("ell"))), trivial));
      out.require(r.counts.at("order_A") == expected && r.counts.at("order_Adual") == expected &&
                      r.counts.at("pattern_size") == expected,
                  "order matches constant and pattern");
    }
    out.require(constants::kOrderGeneric2 == 32 && constants::kOrderGeneric3 == 972,
                "stored orders");
    // Every instance of the displayed patterns occurs, for l <= 5.
    for (unsigned p : {2u, 3u, 5u})
      for (Twist t : {Twist::generic, Twist::trivial}) {
        const Prime l(p);
        std::vector<ModMatrix> pattern_a, pattern_d;
        const std::int64_t q = p;
        for (std::int64_t a = 1; a < q; ++a) {
          if (t == Twist::trivial && a != 1) continue;
          for (std::int64_t d = 1; d < q; ++d)
            for (std::int64_t code = 0; code < q * q * q * q * q; ++code) {
              std::int64_t v[5], c = code;
              for (auto& x : v) x = c % q, c /= q;
              pattern_a.push_back(a_shape(l, a, d, v[0], v[1], v[2], v[3], v[4]));
              pattern_d.push_back(adual_shape(l, a, d, v[0], v[1], v[2], v[3], v[4]));
            }
        }
        std::sort(pattern_a.begin(), pattern_a.end());
        std::sort(pattern_d.begin(), pattern_d.end());
        out.require(image_rho_A(l, t).elements == pattern_a, "A image equals its pattern");
        out.require(image_rho_Adual_isogeny(l, t).elements == pattern_d,
                    "A-dual image equals its pattern");
      }
  });

  criterion(5, "main theorem and stable lines", kLimitTheorem, [](Outcome& out) {
    for (unsigned p : kAll) {
      const auto r = check("thm-main-rep-nonisomorphic", p);
      out.require(r);
      out.require(r.counts.at("invertible_found") == 0, "no invertible intertwiner");
    }
    for (unsigned p : kOdd) out.require(check("stable-lines", p));
  });

  criterion(6, "semisimplifications agree", kLimitSemisimp, [](Outcome& out) {
    for (unsigned p : kAll)
      for (Twist t : {Twist::generic, Twist::trivial}) out.require(check("semisimp-charpoly", p, t));
  });

  criterion(7, "permutation propositions", kLimitPermutation, [](Outcome& out) {
    out.require(check("perm-conj", 2u));
    out.require(check("perm-conj", 3u));
    out.require(check("perm-char-distinct", 3u));
    const auto m = check("trivial-multiplicity", 3u);
    out.require(m);
    out.require(m.counts.at("multiplicity_A") != m.counts.at("multiplicity_Adual"),
                "multiplicities differ");
    for (unsigned p : kOdd) out.require(check("fixed-points", p));
  });

  criterion(8, "F_2 census", kLimitCensus, [](Outcome& out) {
    out.require(check("census-576"));
    out.require(check("census-128"));
    out.require(check("census-78-52"));
  });

  criterion(9, "property batteries", kLimitProperties, [](Outcome& out) {
    std::mt19937_64 rng(0xacce97);
    closure_battery(out, rng);
    route_battery(out, rng);
    smith_battery(out, rng);
    burnside_battery(out, rng);
    substitution_battery(out, rng);
    involution_battery(out);
  });

  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
