#pragma once

// Values recomputed by the verification suite and compared against these.
// Each was obtained once by exhaustive computation and is checked in so that
// drift shows up as a failing check.

#include <cstddef>

namespace galdual::constants {

// |image of rho_A| for the generic twist, full parameter enumeration.
inline constexpr std::size_t kOrderGeneric2 = 32;
inline constexpr std::size_t kOrderGeneric3 = 972;
inline constexpr std::size_t kOrderGeneric5 = 50'000;
inline constexpr std::size_t kOrderGeneric7 = 605'052;

// Same with the trivial twist (a = 1).
inline constexpr std::size_t kOrderTrivial2 = 32;
inline constexpr std::size_t kOrderTrivial3 = 486;
inline constexpr std::size_t kOrderTrivial5 = 12'500;
inline constexpr std::size_t kOrderTrivial7 = 100'842;

// Orbit counts on F_3^4 at l = 3 under the trivial twist, by Burnside over
// the 486-element groups.
inline constexpr std::size_t kTrivialMultiplicityA3 = 9;
inline constexpr std::size_t kTrivialMultiplicityAdual3 = 11;

// The F_2 census.
inline constexpr std::size_t kStabilizerOrder = 576;
inline constexpr std::size_t kStabilizerExponent = 12;
inline constexpr std::size_t kSubgroupClasses = 128;
inline constexpr std::size_t kNotRepEquivalent = 78;
inline constexpr std::size_t kNotSubgroupConjugate = 52;
inline constexpr std::size_t kSmallestNonSelfDual = 4;

// Cross-check orders from exhaustive filtering of GL_4(F_2).
inline constexpr std::size_t kGL4F2Order = 20'160;
inline constexpr std::size_t kSp4F2Order = 720;

// Samples drawn at l = 7 where full enumeration is not used.
inline constexpr std::size_t kSamplesEll7 = 10'000;

constexpr std::size_t image_order(unsigned ell, bool trivial_twist) {
  switch (ell) {
    case 2: return trivial_twist ? kOrderTrivial2 : kOrderGeneric2;
    case 3: return trivial_twist ? kOrderTrivial3 : kOrderGeneric3;
    case 5: return trivial_twist ? kOrderTrivial5 : kOrderGeneric5;
    case 7: return trivial_twist ? kOrderTrivial7 : kOrderGeneric7;
    default: return 0;
  }
}

}  // namespace galdual::constants
