#pragma once

// Literal matrices transcribed from the worked examples, used as frozen
// expected values. Nothing here is computed by the library.

#include "galdual/exactmat.hpp"

#include <cstdint>

namespace galdual::fixtures {

inline LAdicMatrix lad(Prime ell, std::initializer_list<std::initializer_list<LAdicNumber>> rows) {
  std::vector<LAdicNumber> e;
  for (const auto& r : rows) e.insert(e.end(), r.begin(), r.end());
  return LAdicMatrix(ell, rows.size(), std::move(e));
}

inline LAdicNumber num(Prime ell, std::int64_t n) { return LAdicNumber(ell, n); }
// n / l
inline LAdicNumber over_l(Prime ell, std::int64_t n) { return LAdicNumber(ell, n, 1); }

// Change of coordinates for the quotient by <P_{1,1} + Q_{1,1}>.
inline LAdicMatrix m_q(Prime l) {
  return lad(l, {{num(l, 1), num(l, 0), over_l(l, 1), num(l, 0)},
                 {num(l, 0), num(l, 1), num(l, 0), num(l, 0)},
                 {num(l, 0), num(l, 0), over_l(l, 1), num(l, 0)},
                 {num(l, 0), num(l, 0), num(l, 0), num(l, 1)}});
}

// l times the product principal polarization.
inline LAdicMatrix n_l_lambda0(Prime l) {
  const std::int64_t L = l;
  return LAdicMatrix::from_integers(
      l, {{0, L, 0, 0}, {-L, 0, 0, 0}, {0, 0, 0, L}, {0, 0, -L, 0}});
}

// The (1,l) polarization on the glued surface.
inline LAdicMatrix n_lambda(Prime l) {
  const std::int64_t L = l;
  return LAdicMatrix::from_integers(
      l, {{0, L, 0, 0}, {-L, 0, -1, 0}, {0, 1, 0, 1}, {0, 0, -1, 0}});
}

inline LAdicMatrix m_lambda(Prime l) {
  return lad(l, {{num(l, 0), over_l(l, -1), num(l, 0), over_l(l, 1)},
                 {over_l(l, 1), num(l, 0), num(l, 0), num(l, 0)},
                 {num(l, 0), num(l, 0), num(l, 0), num(l, -1)},
                 {over_l(l, -1), num(l, 0), num(l, 1), num(l, 0)}});
}

inline LAdicMatrix principal_2x2(Prime l) {
  return LAdicMatrix::from_integers(l, {{0, 1}, {-1, 0}});
}

inline const std::vector<std::uint32_t> kPrimes{2, 3, 5, 7};

}  // namespace galdual::fixtures
