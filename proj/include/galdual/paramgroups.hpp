#pragma once

// The mod-l Galois images of the glued surface A = (E1 x E2)/<P + Q> and of
// its dual, built by enumerating the l-adic image G_l of E1 x E2 and moving
// it through the change-of-basis matrices of the quotient and polarization
// isogenies.
//
// G_l elements are carried modulo l^3: one conjugation by M_q costs one digit
// and the second conjugation by M_lambda costs another. The free Z_l digits
// are truncated to residues mod l.

#include "galdual/exactmat.hpp"
#include "galdual/lattice.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace galdual {

enum class Twist { generic, trivial };
std::string_view to_string(Twist t);
Twist parse_twist(std::string_view text);

enum class Side { A, Adual };
std::string_view to_string(Side s);
Side parse_side(std::string_view text);

class ConstraintError : public MathError {
 public:
  using MathError::MathError;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamPoint {
  Prime ell;
  Twist twist = Twist::generic;
  std::int64_t a = 1, d = 1;
  std::int64_t b1 = 0, b2 = 0;
  std::int64_t w1 = 0, w2 = 0;
  std::int64_t x1 = 0, x2 = 0;
  std::int64_t y1 = 0, y2 = 0;
  std::int64_t z1 = 0, z2 = 0;

  // The similitude factor a*d mod l.
  std::int64_t epsilon() const;
  // Throws ConstraintError on out-of-range digits, a != 1 under the trivial
  // twist, or a violated determinant condition.
  void validate() const;

  // Fills z1 from the determinant condition; y1, y2, z2 stay as given.
  static ParamPoint solve(Prime ell, Twist twist, std::int64_t a, std::int64_t d,
                          std::int64_t b1, std::int64_t b2, std::int64_t w1, std::int64_t w2,
                          std::int64_t x1, std::int64_t x2, std::int64_t y1 = 0,
                          std::int64_t y2 = 0, std::int64_t z2 = 0);
};

// The block-diagonal G_l element, modulo l^precision (default l^2).
ModMatrix g_ell_element(const ParamPoint& p, unsigned precision = 2);

// The change-of-basis matrices, obtained through the lattice calculus:
// M_q from the kernel <(1,0,1,0)>, M_lambda as the inverse of the pushforward
// of the product principal polarization.
LAdicMatrix quotient_change_of_basis(Prime ell);
LAdicMatrix polarization_change_of_basis(Prime ell);

// Per-point images mod l.
ModMatrix rho_A(const ParamPoint& p);
ModMatrix rho_Adual_contragredient(const ParamPoint& p);
ModMatrix rho_Adual_isogeny(const ParamPoint& p);

// Closed forms read from the displayed subgroups. x is x1 - x2 and z is
// z1 - z2.
ModMatrix a_shape(Prime ell, std::int64_t a, std::int64_t d, std::int64_t b1, std::int64_t b2,
                  std::int64_t w1, std::int64_t w2, std::int64_t x);
ModMatrix adual_shape(Prime ell, std::int64_t a, std::int64_t d, std::int64_t b1,
                      std::int64_t b2, std::int64_t w1, std::int64_t w2, std::int64_t z);
bool matches_a_shape(const ModMatrix& g);
bool matches_adual_shape(const ModMatrix& g);

enum class Route { quotient, contragredient, isogeny };
std::string_view to_string(Route r);

struct ImageGroup {
  Prime ell;
  Twist twist;
  Route route;
  // Sorted and deduplicated; empty in generators-only mode.
  std::vector<ModMatrix> elements;
  std::vector<ModMatrix> generators;

  std::size_t order() const { return elements.size(); }
  bool contains(const ModMatrix& g) const;
};

struct EnumerationOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::size_t max_elements = 4'000'000;
};

// Calls f on every ParamPoint with y1 = y2 = z2 = 0 and z1 solved.
void for_each_param_point(Prime ell, Twist twist, const std::function<void(const ParamPoint&)>& f);
std::size_t param_point_count(Prime ell, Twist twist);

ImageGroup image_rho_A(Prime ell, Twist twist, const EnumerationOptions& opts = {});
ImageGroup image_rho_Adual_contragredient(Prime ell, Twist twist,
                                          const EnumerationOptions& opts = {});
ImageGroup image_rho_Adual_isogeny(Prime ell, Twist twist, const EnumerationOptions& opts = {});

// Generators-only mode: images of points with a single nonzero free digit
// (a or d a primitive root), mapped through the given route.
ImageGroup image_generators(Prime ell, Twist twist, Route route);

// Simultaneous images (rho_A(p), rho_Adual(p)), deduplicated as pairs and
// sorted.
using MatrixPair = std::pair<ModMatrix, ModMatrix>;
std::vector<MatrixPair> paired_group(Prime ell, Twist twist, const EnumerationOptions& opts = {});
std::vector<MatrixPair> paired_generators(Prime ell, Twist twist);

std::uint32_t primitive_root(Prime ell);

}  // namespace galdual
