#include "galdual/verifier.hpp"

#include "galdual/constants.hpp"
#include "galdual/formstab.hpp"
#include "galdual/groupengine.hpp"
#include "galdual/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

namespace galdual {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

std::string_view to_string(Profile p) { return p == Profile::quick ? "quick" : "full"; }

Profile parse_profile(std::string_view text) {
  if (text == "quick") return Profile::quick;
  if (text == "full") return Profile::full;
  throw std::invalid_argument("unknown profile: " + std::string(text));
}

bool CheckContext::expect(bool ok, const std::string& name) {
  if (!ok && report_.status != Status::fail) {
    report_.status = Status::fail;
    report_.reason = "assertion failed: " + name;
  }
  return ok;
}

namespace {

constexpr unsigned kSupportedPrimes[] = {2, 3, 5, 7};

LAdicNumber num(Prime l, std::int64_t n) { return LAdicNumber(l, n); }
LAdicNumber over_l(Prime l, std::int64_t n) { return LAdicNumber(l, n, 1); }

LAdicMatrix literal(Prime l, std::initializer_list<std::initializer_list<LAdicNumber>> rows) {
  std::vector<LAdicNumber> e;
  for (const auto& r : rows) e.insert(e.end(), r.begin(), r.end());
  return LAdicMatrix(l, rows.size(), std::move(e));
}

// Displayed change of coordinates for the quotient by <P + Q>.
LAdicMatrix displayed_m_q(Prime l) {
  return literal(l, {{num(l, 1), num(l, 0), over_l(l, 1), num(l, 0)},
                     {num(l, 0), num(l, 1), num(l, 0), num(l, 0)},
                     {num(l, 0), num(l, 0), over_l(l, 1), num(l, 0)},
                     {num(l, 0), num(l, 0), num(l, 0), num(l, 1)}});
}

LAdicMatrix displayed_n_lambda(Prime l) {
  const std::int64_t L = l;
  return LAdicMatrix::from_integers(
      l, {{0, L, 0, 0}, {-L, 0, -1, 0}, {0, 1, 0, 1}, {0, 0, -1, 0}});
}

LAdicMatrix product_polarization_times_l(Prime l) {
  const std::int64_t L = l;
  return LAdicMatrix::from_integers(
      l, {{0, L, 0, 0}, {-L, 0, 0, 0}, {0, 0, 0, L}, {0, 0, -L, 0}});
}

std::int64_t mod(std::int64_t v, std::int64_t m) { return ((v % m) + m) % m; }

ParamPoint random_point(Prime l, Twist t, std::mt19937_64& rng) {
  const std::int64_t p = l;
  std::uniform_int_distribution<std::int64_t> unit(1, p - 1), digit(0, p - 1);
  const std::int64_t a = t == Twist::trivial ? 1 : unit(rng);
  const std::int64_t d = unit(rng);
  std::int64_t v[9];
  for (auto& x : v) x = digit(rng);
  return ParamPoint::solve(l, t, a, d, v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]);
}

// All points for l <= 5, a fixed-seed sample at l = 7.
void for_each_test_point(Prime l, Twist t, const std::function<void(const ParamPoint&)>& f) {
  if (l != 7) {
    for_each_param_point(l, t, f);
    return;
  }
  std::mt19937_64 rng(0x5eed0007ULL + (t == Twist::trivial ? 1 : 0));
  for (std::size_t i = 0; i < constants::kSamplesEll7; ++i) f(random_point(l, t, rng));
}

std::string dump(const std::vector<ModMatrix>& ms) {
  std::string out;
  for (const auto& m : ms) {
    if (!out.empty()) out += '\n';
    out += m.str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Check bodies

void lattice_examples(const Prime* lp, Twist, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const std::int64_t L = l;
  std::int64_t matched = 0;
  auto record = [&](bool ok, const std::string& name) { matched += ctx.expect(ok, name); };

  const auto scalar = LAdicMatrix::from_integers(l, {{L, 0}, {0, L}});
  record(change_basis_from_transformation(scalar) ==
             literal(l, {{over_l(l, 1), num(l, 0)}, {num(l, 0), over_l(l, 1)}}),
         "multiplication-by-l change of basis");

  record(change_basis_from_kernel(KernelSpec(l, 1, 2, {{1, 0}})) ==
             literal(l, {{over_l(l, 1), num(l, 0)}, {num(l, 0), num(l, 1)}}),
         "cyclic kernel change of basis");

  const auto mq = change_basis_from_kernel(KernelSpec(l, 1, 4, {{1, 0, 1, 0}}));
  record(mq == displayed_m_q(l), "quotient change of basis M_q");

  const auto principal = LAdicMatrix::from_integers(l, {{0, 1}, {-1, 0}});
  const auto push = pushforward_polarization(principal, LAdicMatrix::from_integers(l, {{L, 0}, {0, 1}}),
                                             KernelSpec(l, 1, 2, {{1, 0}}));
  record(push.matrix == principal && push.d == L, "pushforward of the principal polarization");

  ctx.count("examples", 4);
  ctx.count("matched", matched);
  ctx.witness("M_q\n" + mq.str() + "\npushforward d=" + std::to_string(push.d) + "\n" +
              push.matrix.str());
}

void type_1_ell(const Prime* lp, Twist, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto mq = change_basis_from_kernel(KernelSpec(l, 1, 4, {{1, 0, 1, 0}}));
  const auto n = pullback_polarization(product_polarization_times_l(l), mq);
  ctx.expect(n == displayed_n_lambda(l), "N_lambda matches the displayed matrix");
  ctx.expect(n.is_alternating(), "N_lambda alternating");

  const auto vals = smith_normal_form(n).valuations;
  ctx.expect(vals == std::vector<int>{0, 0, 1, 1}, "Smith valuations (0,0,1,1)");
  std::int64_t cokernel = 1;
  for (int v : vals) cokernel *= static_cast<std::int64_t>(ipow(l, static_cast<unsigned>(std::max(v, 0))));
  ctx.count("cokernel_size", cokernel);
  ctx.expect(cokernel == static_cast<std::int64_t>(l) * l, "cokernel has l^2 elements");

  const auto type = polarization_type(n, 2);
  ctx.expect(type == std::vector<std::int64_t>{1, static_cast<std::int64_t>(l)}, "type (1,l)");
  if (type.size() == 2) {
    ctx.count("type_d1", type[0]);
    ctx.count("type_d2", type[1]);
  }
  ctx.witness(n.str());
}

void dual_route_agreement(const Prime* lp, Twist t, const CheckParams& params, CheckContext& ctx) {
  const Prime l = *lp;
  const bool trivial = t == Twist::trivial;
  const std::int64_t p = l;

  std::int64_t points = 0, z_formula_ok = 0;
  for_each_test_point(l, t, [&](const ParamPoint& pt) {
    ++points;
    const auto ga = rho_A(pt);
    const auto iso = rho_Adual_isogeny(pt);
    const auto con = rho_Adual_contragredient(pt);
    if (!ctx.expect(iso == con, "routes agree at a point")) return;
    ctx.expect(ga == a_shape(l, pt.a, pt.d, pt.b1, pt.b2, pt.w1, pt.w2, pt.x1 - pt.x2),
               "A closed form at a point");
    ctx.expect(iso == adual_shape(l, pt.a, pt.d, pt.b1, pt.b2, pt.w1, pt.w2, pt.z1 - pt.z2),
               "A-dual closed form at a point");
    const std::int64_t ainv = inverse_mod(static_cast<std::uint32_t>(mod(pt.a, p)),
                                          static_cast<std::uint32_t>(p));
    const std::int64_t z = mod(ainv * mod(pt.b1 * pt.w1 - pt.b2 * pt.w2 - pt.d * pt.x1 + pt.d * pt.x2, p), p);
    z_formula_ok += ctx.expect(iso(2, 0) == static_cast<std::uint32_t>(z), "(3,1) entry formula");
  });
  ctx.count("points", points);
  ctx.count("z_formula_ok", z_formula_ok);

  if (l == 7 && params.profile == Profile::quick) {
    ctx.count("mode_sampled", 1);
    return;
  }

  const auto a = image_rho_A(l, t);
  const auto iso = image_rho_Adual_isogeny(l, t);
  const auto con = image_rho_Adual_contragredient(l, t);
  ctx.expect(iso.elements == con.elements, "contragredient image equals isogeny image");
  ctx.count("order_A", static_cast<std::int64_t>(a.order()));
  ctx.count("order_Adual", static_cast<std::int64_t>(iso.order()));
  const auto expected = constants::image_order(l, trivial);
  ctx.expect(a.order() == expected, "order of A image equals the stored constant");
  ctx.expect(iso.order() == expected, "order of A-dual image equals the stored constant");

  // Size of the displayed pattern; shape-matching images of this size fill it.
  std::int64_t pattern = ipow(l, 5);
  for (int i = 0; i < (trivial ? 1 : 2); ++i) pattern *= p - 1;
  ctx.count("pattern_size", pattern);
  bool shapes = true;
  for (const auto& g : a.elements) shapes &= matches_a_shape(g) && (!trivial || g(0, 0) == 1);
  ctx.expect(shapes, "A image inside the displayed pattern");
  shapes = true;
  for (const auto& g : iso.elements) shapes &= matches_adual_shape(g) && (!trivial || g(1, 1) == 1);
  ctx.expect(shapes, "A-dual image inside the displayed pattern");
  ctx.expect(static_cast<std::int64_t>(a.order()) == pattern, "A image fills the pattern");
  ctx.expect(static_cast<std::int64_t>(iso.order()) == pattern, "A-dual image fills the pattern");
  ctx.expect(closed_under(a.elements, a.generators), "A image closed");
  ctx.expect(closed_under(iso.elements, iso.generators), "A-dual image closed");
}

void main_theorem(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto pairs = l == 7 ? paired_generators(l, t) : paired_group(l, t);
  ctx.count("pairs", static_cast<std::int64_t>(pairs.size()));
  const auto space = intertwiner_space(pairs);
  const auto verdict = representations_equivalent(pairs);
  ctx.count("intertwiner_dim", static_cast<std::int64_t>(verdict.intertwiner_dim));
  ctx.count("invertible_found", verdict.equivalent ? 1 : 0);
  ctx.count("candidates_checked", static_cast<std::int64_t>(verdict.candidates_checked));
  ctx.count("exhaustive", verdict.exhaustive ? 1 : 0);
  ctx.expect(!verdict.equivalent, "no invertible intertwiner");
  ctx.expect(verdict.exhaustive, "span walked exhaustively");
  if (verdict.witness)
    ctx.witness("equivalence\n" + verdict.witness->str());
  else
    ctx.witness("intertwiner basis\n" + dump(space.basis));
}

void stable_lines(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  std::vector<ModMatrix> ea, ed;
  std::vector<std::int64_t> as, ds, eps;
  for_each_test_point(l, t, [&](const ParamPoint& pt) {
    ea.push_back(rho_A(pt));
    ed.push_back(rho_Adual_isogeny(pt));
    as.push_back(mod(pt.a, l));
    ds.push_back(mod(pt.d, l));
    eps.push_back(pt.epsilon());
  });
  const auto ga = image_generators(l, t, Route::quotient);
  const auto gd = image_generators(l, t, Route::isogeny);
  const auto la = common_stable_lines(ga.generators, &ea);
  const auto ld = common_stable_lines(gd.generators, &ed);
  ctx.count("points", static_cast<std::int64_t>(ea.size()));
  ctx.count("lines_A", static_cast<std::int64_t>(la.size()));
  ctx.count("lines_Adual", static_cast<std::int64_t>(ld.size()));
  ctx.expect(la.size() == 1, "exactly one stable line for A");
  ctx.expect(ld.size() == 1, "exactly one stable line for A-dual");
  if (ctx.failed()) return;
  ctx.expect(la[0].line == std::vector<std::uint32_t>{1, 0, 0, 0}, "A line is span(e1)");
  ctx.expect(ld[0].line == std::vector<std::uint32_t>{0, 0, 1, 0}, "A-dual line is span(e3)");
  bool chars_a = true, chars_d = true, product = true;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    chars_a &= la[0].character[i] == as[i];
    chars_d &= ld[0].character[i] == ds[i];
    product &= mod(static_cast<std::int64_t>(la[0].character[i]) * ld[0].character[i], l) == eps[i];
  }
  ctx.expect(chars_a, "A line character is a");
  ctx.expect(chars_d, "A-dual line character is d");
  ctx.expect(product, "product of the characters is the similitude character");
}

// Coefficients of (x - a)^2 (x - d)^2 mod l, lowest degree first.
std::vector<std::uint32_t> expected_charpoly(std::int64_t a, std::int64_t d, std::int64_t l) {
  std::vector<std::int64_t> poly{1};
  for (std::int64_t root : {a, a, d, d}) {
    std::vector<std::int64_t> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= root * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<std::uint32_t> out;
  for (auto c : poly) out.push_back(static_cast<std::uint32_t>(mod(c, l)));
  return out;
}

void semisimp_charpoly(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  std::int64_t points = 0, agree = 0;
  std::optional<std::string> counterexample;
  for_each_test_point(l, t, [&](const ParamPoint& pt) {
    ++points;
    const auto ga = rho_A(pt);
    const auto gd = rho_Adual_isogeny(pt);
    const auto ca = charpoly(ga);
    const auto cd = charpoly(gd);
    // a d a^-1 = d.
    const auto want = expected_charpoly(pt.a, pt.d, l);
    if (ca == cd && ca == want) {
      ++agree;
    } else if (!counterexample) {
      counterexample = ga.str() + "\n" + gd.str();
    }
  });
  ctx.count("points", points);
  ctx.count("agree", agree);
  ctx.expect(agree == points, "charpolys agree and factor as (x-a)^2 (x-d)^2");
  if (counterexample) ctx.witness(*counterexample);
}

void perm_conj(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto pa = to_permutation_group(image_rho_A(l, t));
  const auto pd = to_permutation_group(image_rho_Adual_isogeny(l, t));
  ctx.count("degree", static_cast<std::int64_t>(pa.degree));
  ctx.count("order", static_cast<std::int64_t>(pa.order()));
  const auto verdict = perm_groups_conjugate(pa, pd);
  ctx.count("isomorphisms_tried", static_cast<std::int64_t>(verdict.isomorphisms_tried));
  if (!ctx.expect(verdict.conjugate && verdict.witness.has_value(), "permutation groups conjugate"))
    return;
  const Perm& pi = *verdict.witness;
  const Perm pi_inv = inverse(pi);
  bool ok = true;
  for (const auto& g : pa.generators)
    ok &= std::binary_search(pd.elements.begin(), pd.elements.end(), compose(compose(pi, g), pi_inv));
  ctx.expect(ok, "witness conjugates generators into the A-dual group");
  ctx.witness(to_string(pi));
}

void perm_char_distinct(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto ma = character_multiset(to_permutation_group(image_rho_A(l, t)));
  const auto md = character_multiset(to_permutation_group(image_rho_Adual_isogeny(l, t)));
  for (auto [fix, n] : ma) ctx.count("A_fix_" + std::to_string(fix), static_cast<std::int64_t>(n));
  for (auto [fix, n] : md) ctx.count("Adual_fix_" + std::to_string(fix), static_cast<std::int64_t>(n));
  ctx.expect(ma != md, "permutation character multisets differ");
}

void trivial_multiplicity_check(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto pa = to_permutation_group(image_rho_A(l, t));
  const auto pd = to_permutation_group(image_rho_Adual_isogeny(l, t));
  const auto na = trivial_multiplicity(pa);
  const auto nd = trivial_multiplicity(pd);
  ctx.count("multiplicity_A", static_cast<std::int64_t>(na));
  ctx.count("multiplicity_Adual", static_cast<std::int64_t>(nd));
  ctx.count("orbits_A", static_cast<std::int64_t>(orbits(pa).size()));
  ctx.count("orbits_Adual", static_cast<std::int64_t>(orbits(pd).size()));
  ctx.expect(na != nd, "multiplicities differ");
  ctx.expect(na == orbits(pa).size() && nd == orbits(pd).size(), "Burnside matches orbit count");
  ctx.expect(na == constants::kTrivialMultiplicityA3, "A multiplicity equals the stored constant");
  ctx.expect(nd == constants::kTrivialMultiplicityAdual3,
             "A-dual multiplicity equals the stored constant");
}

void fixed_points(const Prime* lp, Twist t, const CheckParams&, CheckContext& ctx) {
  const Prime l = *lp;
  const auto fa = fixed_vectors(image_generators(l, t, Route::quotient));
  const auto fd = fixed_vectors(image_generators(l, t, Route::isogeny));
  ctx.count("fixed_dim_A", static_cast<std::int64_t>(fa));
  ctx.count("fixed_dim_Adual", static_cast<std::int64_t>(fd));
  ctx.expect(fa >= 1, "A has a rational l-torsion point");
  ctx.expect(fd == 0, "A-dual has no rational l-torsion point");
}

std::vector<ModMatrix> stabilizer_group() { return similitude_stabilizer(polarization_form()); }

void census_576(const Prime*, Twist, const CheckParams&, CheckContext& ctx) {
  const auto form = polarization_form();
  ctx.count("form_rank", form.rank);
  const auto orbits = alternating_form_orbits();
  for (const auto& o : orbits) ctx.count("forms_rank_" + std::to_string(o.rank), static_cast<std::int64_t>(o.size));
  const auto g = similitude_stabilizer(form);
  const auto sp = similitude_stabilizer(standard_symplectic_form());
  const auto gl = similitude_stabilizer(zero_form());
  ctx.count("order_GL4", static_cast<std::int64_t>(gl.size()));
  ctx.count("order_Sp4", static_cast<std::int64_t>(sp.size()));
  ctx.expect(gl.size() == constants::kGL4F2Order, "GL_4(F_2) order");
  ctx.expect(sp.size() == constants::kSp4F2Order, "Sp_4(F_2) order");

  const auto s = structure_invariants(g);
  ctx.count("order", static_cast<std::int64_t>(s.order));
  ctx.count("exponent", static_cast<std::int64_t>(s.exponent));
  ctx.count("solvable", s.solvable ? 1 : 0);
  for (std::size_t i = 0; i < s.derived_series.size(); ++i)
    ctx.count("derived_" + std::to_string(i), static_cast<std::int64_t>(s.derived_series[i]));
  ctx.expect(s.order == constants::kStabilizerOrder, "stabilizer order 576");
  ctx.expect(s.exponent == constants::kStabilizerExponent, "exponent 12");
  ctx.expect(s.solvable, "solvable");
  ctx.expect(s.has_c2_4_normal, "normal C2^4");
  ctx.expect(s.quotient_is_s3xs3, "quotient S3 x S3");
  ctx.expect(s.has_complement, "complement exists");
  ctx.witness("form\n" + form.matrix.str());
}

void census_128(const Prime*, Twist, const CheckParams&, CheckContext& ctx) {
  const auto classes = subgroup_conjugacy_classes(stabilizer_group());
  std::size_t subgroups = 0;
  for (const auto& c : classes) subgroups += c.class_size;
  ctx.count("classes", static_cast<std::int64_t>(classes.size()));
  ctx.count("subgroups", static_cast<std::int64_t>(subgroups));
  ctx.expect(classes.size() == constants::kSubgroupClasses, "128 conjugacy classes");
}

void census_78_52(const Prime*, Twist, const CheckParams&, CheckContext& ctx) {
  const auto g = stabilizer_group();
  const auto census = contragredient_census(subgroup_conjugacy_classes(g), polarization_form());
  ctx.count("classes", static_cast<std::int64_t>(census.classes.size()));
  ctx.count("not_rep_equivalent", static_cast<std::int64_t>(census.not_rep_equivalent));
  ctx.count("not_subgroup_conjugate", static_cast<std::int64_t>(census.not_subgroup_conjugate));
  ctx.expect(census.not_rep_equivalent == constants::kNotRepEquivalent, "78 not self-dual as representations");
  ctx.expect(census.not_subgroup_conjugate == constants::kNotSubgroupConjugate,
             "52 not conjugate to their contragredient");

  Census listed;
  std::size_t smallest = 0;
  bool whole = false;
  for (const auto& c : census.classes) {
    if (c.self_dual_as_rep) continue;
    if (smallest == 0 || c.order < smallest) smallest = c.order;
    whole |= c.order == g.size();
    listed.classes.push_back(c);
  }
  ctx.count("smallest_non_self_dual", static_cast<std::int64_t>(smallest));
  ctx.count("whole_group_listed", whole ? 1 : 0);
  ctx.expect(smallest == constants::kSmallestNonSelfDual, "smallest non-self-dual order 4");
  ctx.expect(whole, "whole group is non-self-dual");
  listed.not_rep_equivalent = census.not_rep_equivalent;
  listed.not_subgroup_conjugate = census.not_subgroup_conjugate;
  ctx.witness(render_census(listed));
}

std::vector<CheckDefinition> build_registry() {
  const std::vector<unsigned> all{2, 3, 5, 7}, odd{3, 5, 7};
  const std::vector<Twist> both{Twist::generic, Twist::trivial};
  return {
      {"census-128", "conjugacy classes of subgroups of the stabilizer", {}, {}, true, census_128},
      {"census-576", "stabilizer of the polarization form and its structure", {}, {}, true, census_576},
      {"census-78-52", "contragredient census", {}, {}, true, census_78_52},
      {"dual-route-agreement", "A-dual image by both routes, shapes and orders", all, both, false,
       dual_route_agreement},
      {"fixed-points", "rational l-torsion on A but not on A-dual", odd, {Twist::trivial}, false,
       fixed_points},
      {"lattice-examples", "worked lattice examples", all, {}, false, lattice_examples},
      {"perm-char-distinct", "permutation character multisets differ", {3}, {Twist::trivial}, false,
       perm_char_distinct},
      {"perm-conj", "permutation actions conjugate", {2, 3}, {Twist::generic}, false, perm_conj},
      {"semisimp-charpoly", "A and A-dual have the same semisimplification", all, both, false,
       semisimp_charpoly},
      {"stable-lines", "unique stable lines and their characters", odd, {Twist::generic}, false,
       stable_lines},
      {"thm-main-rep-nonisomorphic", "A[l] and A-dual[l] not isomorphic", all, {Twist::generic},
       false, main_theorem},
      {"trivial-multiplicity", "orbit counts differ", {3}, {Twist::trivial}, false,
       trivial_multiplicity_check},
      {"type-1-ell", "the glued polarization has type (1,l)", all, {}, false, type_1_ell},
  };
}

const CheckDefinition& find_check(std::string_view id) {
  for (const auto& c : registry())
    if (c.id == id) return c;
  throw UnknownCheckError("unknown check: " + std::string(id));
}

CheckReport execute(const CheckDefinition& def, const CheckParams& params) {
  CheckReport report;
  report.check_id = def.id;

  if (def.ells.empty() && params.ell)
    throw InvalidParamsError(def.id + " takes no --ell");
  if (def.twists.empty() && params.twist)
    throw InvalidParamsError(def.id + " takes no --twist");
  if (!def.ells.empty() && !params.ell) throw InvalidParamsError(def.id + " requires --ell");

  std::optional<Prime> ell;
  if (params.ell) {
    if (!is_prime(*params.ell)) throw InvalidParamsError("ell must be prime");
    report.params["ell"] = std::to_string(*params.ell);
  }
  Twist twist = Twist::generic;
  if (!def.twists.empty()) {
    twist = params.twist.value_or(def.twists.front());
    if (std::find(def.twists.begin(), def.twists.end(), twist) == def.twists.end())
      throw InvalidParamsError(def.id + " does not accept twist " + std::string(to_string(twist)));
    report.params["twist"] = std::string(to_string(twist));
  }

  if (params.ell) {
    const unsigned p = *params.ell;
    if (std::find(std::begin(kSupportedPrimes), std::end(kSupportedPrimes), p) == std::end(kSupportedPrimes)) {
      report.status = Status::skipped;
      report.reason = "outside paper range";
      return report;
    }
    if (std::find(def.ells.begin(), def.ells.end(), p) == def.ells.end())
      throw InvalidParamsError(def.id + " does not accept ell=" + std::to_string(p));
    ell.emplace(p);
  }

  const auto start = std::chrono::steady_clock::now();
  CheckContext ctx(report);
  try {
    def.body(ell ? &*ell : nullptr, twist, params, ctx);
  } catch (const std::exception& e) {
    report.status = Status::fail;
    report.reason = std::string("exception: ") + e.what();
  }
  report.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

}  // namespace

const std::vector<CheckDefinition>& registry() {
  static const std::vector<CheckDefinition> checks = build_registry();
  return checks;
}

CheckReport run_check(std::string_view check_id, const CheckParams& params) {
  return execute(find_check(check_id), params);
}

std::vector<CheckReport> run_all(Profile profile, unsigned threads) {
  return run_all(registry(), profile, threads);
}

std::vector<CheckReport> run_all(const std::vector<CheckDefinition>& checks, Profile profile,
                                 unsigned threads) {
  struct Job {
    const CheckDefinition* def;
    CheckParams params;
  };
  std::vector<const CheckDefinition*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->id < b->id; });

  std::vector<Job> jobs;
  for (const auto* def : sorted) {
    if (def->full_only && profile == Profile::quick) continue;
    const std::vector<std::optional<unsigned>> ells =
        def->ells.empty() ? std::vector<std::optional<unsigned>>{std::nullopt}
                          : std::vector<std::optional<unsigned>>(def->ells.begin(), def->ells.end());
    std::vector<std::optional<Twist>> twists{std::nullopt};
    if (!def->twists.empty()) twists.assign(def->twists.begin(), def->twists.end());
    for (const auto& e : ells)
      for (const auto& t : twists) jobs.push_back({def, {e, t, profile}});
  }

  std::vector<CheckReport> reports(jobs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) reports[i] = execute(*jobs[i].def, jobs[i].params);
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return reports;
}

std::string render(const CheckReport& r, bool include_runtime) {
  std::ostringstream out;
  out << "check " << r.check_id << '\n';
  for (const auto& [k, v] : r.params) out << "  param " << k << '=' << v << '\n';
  out << "  status " << to_string(r.status) << '\n';
  if (!r.reason.empty()) out << "  reason " << r.reason << '\n';
  for (const auto& [k, v] : r.counts) out << "  count " << k << '=' << v << '\n';
  if (r.witness) {
    out << "  witness <<<\n" << *r.witness;
    if (!r.witness->empty() && r.witness->back() != '\n') out << '\n';
    out << ">>>\n";
  }
  if (include_runtime) out << "  runtime_ms " << r.runtime_ms << '\n';
  return out.str();
}

std::string render(const std::vector<CheckReport>& reports, bool include_runtime) {
  std::string out;
  for (const auto& r : reports) out += render(r, include_runtime);
  return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::none_of(reports.begin(), reports.end(),
                      [](const CheckReport& r) { return r.status == Status::fail; });
}

}  // namespace galdual
