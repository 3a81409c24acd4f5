#pragma once

// Subgroups of the similitude group of an alternating form on F_2^4 and their
// behaviour under the contragredient h -> (h^-1)^T.

#include "galdual/exactmat.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace galdual {

struct AlternatingForm {
  ModMatrix matrix;  // 4x4 over F_2, zero diagonal, symmetric
  unsigned rank = 0;

  // Throws MathError when m is not alternating over F_2.
  static AlternatingForm from_matrix(const ModMatrix& m);
};

// The pairing of the (1,2) polarization reduced mod 2; its radical is
// 2-dimensional.
AlternatingForm polarization_form();
AlternatingForm standard_symplectic_form();
AlternatingForm zero_form();

struct FormOrbit {
  unsigned rank;
  std::size_t size;
  ModMatrix representative;
};

// Orbits of GL_4(F_2) on the 64 alternating forms under J -> g^T J g,
// ordered by rank.
std::vector<FormOrbit> alternating_form_orbits();

// {g in GL_4(F_2) : g^T J g = J}, sorted.
std::vector<ModMatrix> similitude_stabilizer(const AlternatingForm& j);

struct StructureInvariants {
  std::size_t order = 0;
  std::size_t exponent = 0;
  bool solvable = false;
  // Orders along the derived series, starting with the group itself.
  std::vector<std::size_t> derived_series;
  // An elementary abelian normal subgroup of order 16 with quotient S3 x S3
  // and a complement, when one exists.
  bool has_c2_4_normal = false;
  bool quotient_is_s3xs3 = false;
  bool has_complement = false;
  std::vector<ModMatrix> normal_subgroup;
  std::vector<ModMatrix> complement;
};

// For subgroups of GL_4(F_2) of order at most 10^4.
StructureInvariants structure_invariants(const std::vector<ModMatrix>& g);

struct SubgroupClassRecord {
  std::vector<ModMatrix> representative;  // sorted
  std::vector<ModMatrix> generators;
  std::size_t order = 0;
  std::size_t class_size = 0;
  bool self_dual_as_rep = false;
  bool image_conjugate_to_dual = false;
};

// One representative per conjugacy class of subgroups, by cyclic extension.
// Requires a solvable group; ordered by (order, generator dump).
std::vector<SubgroupClassRecord> subgroup_conjugacy_classes(const std::vector<ModMatrix>& g,
                                                            std::size_t max_classes = 20'000);

struct Census {
  std::size_t not_rep_equivalent = 0;
  std::size_t not_subgroup_conjugate = 0;
  std::vector<SubgroupClassRecord> classes;
};

// Fills the two booleans of each record. Over F_2 the similitude character
// is trivial, so the twisted contragredient is h -> (h^-1)^T. Throws when a
// generator does not preserve j.
Census contragredient_census(std::vector<SubgroupClassRecord> classes,
                             const AlternatingForm& j);

// (h^-1)^T applied elementwise, sorted.
std::vector<ModMatrix> contragredient_image(const std::vector<ModMatrix>& h);

// One line per class: `order=<k> rep_equiv=<bool> subgrp_conj=<bool>`
// followed by indented `gen <matrix>` lines.
std::string render_census(const Census& c);

}  // namespace galdual
