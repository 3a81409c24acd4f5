#pragma once

// Finite group machinery over F_l matrices and permutations of F_l^4:
// closures, intertwiners, subgroup conjugacy, permutation characters,
// permutation-group conjugacy in the symmetric group, stable lines.

#include "galdual/exactmat.hpp"
#include "galdual/paramgroups.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace galdual {

class CapExceededError : public ResourceError {
 public:
  CapExceededError(std::size_t partial)
      : ResourceError("closure exceeded its cap after " + std::to_string(partial) + " elements"),
        partial_(partial) {}
  std::size_t partial_size() const { return partial_; }

 private:
  std::size_t partial_;
};

// Sorted element list of the group generated by `generators`.
std::vector<ModMatrix> generate_closure(const std::vector<ModMatrix>& generators,
                                        std::size_t cap = 2'000'000);

// True when `elements` contains the identity and is closed under right
// multiplication by each of `generators` (which must lie in it); together
// with equal size this certifies that elements is the generated group.
bool closed_under(const std::vector<ModMatrix>& elements,
                  const std::vector<ModMatrix>& generators);

// ---------------------------------------------------------------------------
// Linear representations

struct IntertwinerSpace {
  Prime ell;
  std::size_t n;
  std::vector<ModMatrix> basis;
  std::size_t dim() const { return basis.size(); }
};

// {X : X g = g' X for every pair (g, g')} over F_l.
IntertwinerSpace intertwiner_space(const std::vector<MatrixPair>& pairs);

struct EquivalenceVerdict {
  bool equivalent = false;
  // Y with Y g Y^-1 = g' for every pair.
  std::optional<ModMatrix> witness;
  std::size_t intertwiner_dim = 0;
  std::uint64_t candidates_checked = 0;
  // True when a negative verdict comes from walking the whole span.
  bool exhaustive = false;
};

EquivalenceVerdict representations_equivalent(const std::vector<MatrixPair>& pairs,
                                              std::uint64_t seed = 1);

// Searches `ambient` for X with X H1 X^-1 = H2, testing generators of H1
// only. Element lists must be sorted. Over F_2 in dimension 4 the ambient
// defaults to GL_4(F_2).
std::optional<ModMatrix> matrix_subgroups_conjugate(const std::vector<ModMatrix>& h1,
                                                    const std::vector<ModMatrix>& h1_generators,
                                                    const std::vector<ModMatrix>& h2);

// ---------------------------------------------------------------------------
// Permutation actions on F_l^4

// p[i] is the image of point i; composition (p q)[i] = p[q[i]] matches the
// matrix product.
using Perm = std::vector<std::uint32_t>;

Perm compose(const Perm& p, const Perm& q);
Perm inverse(const Perm& p);
std::string to_string(const Perm& p);

// Vector v with index sum v_i l^i (i from 0).
std::vector<std::uint32_t> point_vector(Prime ell, std::size_t n, std::uint32_t index);
std::uint32_t point_index(Prime ell, const std::vector<std::uint32_t>& v);

Perm matrix_permutation(const ModMatrix& g);

struct PermGroup {
  std::size_t degree = 0;
  std::vector<Perm> elements;  // sorted
  std::vector<Perm> generators;
  std::size_t order() const { return elements.size(); }
};

PermGroup to_permutation_group(const std::vector<ModMatrix>& elements,
                               const std::vector<ModMatrix>& generators);
PermGroup to_permutation_group(const ImageGroup& g);
PermGroup perm_closure(std::size_t degree, const std::vector<Perm>& generators,
                       std::size_t cap = 100'000);

// Fixed-point count of each element, aligned with P.elements.
std::vector<std::size_t> permutation_character(const PermGroup& p);
// Fixed-point count -> number of elements.
std::map<std::size_t, std::size_t> character_multiset(const PermGroup& p);
// Number of orbits, by Burnside's lemma.
std::size_t trivial_multiplicity(const PermGroup& p);
std::vector<std::vector<std::uint32_t>> orbits(const PermGroup& p);

struct PermConjugacyVerdict {
  bool conjugate = false;
  // pi with pi g pi^-1 in P2 for every g in P1.
  std::optional<Perm> witness;
  std::uint64_t isomorphisms_tried = 0;
  std::string reason;
};

PermConjugacyVerdict perm_groups_conjugate(const PermGroup& p1, const PermGroup& p2,
                                           std::size_t max_order = 2000,
                                           std::uint64_t max_isomorphisms = 200'000);

// ---------------------------------------------------------------------------
// Stable lines and fixed vectors

struct StableLine {
  std::vector<std::uint32_t> line;  // first nonzero coordinate is 1
  // Eigenvalue of each element in the list the line was computed against.
  std::vector<std::uint32_t> character;
};

// Lines stable under every element of `test`; characters are evaluated on
// `evaluate` (defaults to `test`).
std::vector<StableLine> common_stable_lines(const std::vector<ModMatrix>& test,
                                            const std::vector<ModMatrix>* evaluate = nullptr);
// Uses the generators for the stability test, characters on the elements
// (or on the generators in generators-only mode).
std::vector<StableLine> common_stable_lines(const ImageGroup& g);

// dim of the intersection of ker(g - I).
std::size_t fixed_vectors(const std::vector<ModMatrix>& generators, std::size_t n = 4);
std::size_t fixed_vectors(const ImageGroup& g);

}  // namespace galdual
