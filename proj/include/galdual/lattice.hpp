#pragma once

// Change-of-basis calculus for isogenies and polarizations on l-adic Tate
// lattices. A lattice in V_l is represented by a matrix whose columns are a
// basis, written in the coordinates of a fixed reference lattice.
//
// Conventions:
//  * N_f is the matrix of the transformation V_l f; its change-of-basis
//    matrix is M_f = N_f^{-1}.
//  * Polarizations are given by their pairing matrix, which is alternating.
//  * Only l-power kernels are supported; other primes split off per prime.

#include "galdual/exactmat.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace galdual {

class KernelError : public MathError {
 public:
  using MathError::MathError;
};

class IsotropyError : public MathError {
 public:
  IsotropyError(std::size_t first, std::size_t second, std::int64_t pairing);
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

using IntVector = std::vector<std::int64_t>;

// A finite subgroup H of (Z/l^n Z)^dim given by generators; text form
// `ell=3 n=1 dim=4 gens=(1,0,1,0),(0,1,0,0)`.
struct KernelSpec {
  Prime ell;
  unsigned n;
  std::size_t dim;
  std::vector<IntVector> generators;

  KernelSpec(Prime ell, unsigned n, std::size_t dim,
             std::vector<IntVector> generators);

  std::int64_t modulus() const { return static_cast<std::int64_t>(ipow(ell, n)); }
  // log_l of the order of each generator.
  std::vector<unsigned> generator_orders() const;
  // log_l |H|.
  unsigned log_order() const;
  // Every element of H; only for small groups.
  std::vector<IntVector> elements() const;

  std::string str() const;
  static KernelSpec parse(std::string_view text);
};

struct PolarizationSpec {
  LAdicMatrix matrix;
  std::optional<std::vector<std::int64_t>> type;
};

// M_f = N_f^{-1}.
LAdicMatrix change_basis_from_transformation(const LAdicMatrix& n);

// Basis of the lattice L with Z^dim <= L <= l^-n Z^dim and l^n (L / Z^dim)
// equal to H. Lifted generators h~/l^n become columns; each replaces the
// standard basis vector at the last coordinate where the generator has
// minimal valuation, and the remaining columns are standard basis vectors.
LAdicMatrix change_basis_from_kernel(const KernelSpec& h);

// N_{f dual} = N_f^T.
LAdicMatrix dual_isogeny_matrix(const LAdicMatrix& n);

// N_f^T N_lambda N_f.
LAdicMatrix pullback_polarization(const LAdicMatrix& n_lambda,
                                  const LAdicMatrix& n_f);

struct Pushforward {
  LAdicMatrix matrix;
  std::int64_t d;
};

// (N_g^T)^{-1} (d N_lambda0) N_g^{-1} with d the least power of l such that
// ker g lies in ker(d lambda0).
Pushforward pushforward_polarization(const LAdicMatrix& n_lambda0,
                                     const LAdicMatrix& n_g,
                                     const KernelSpec& ker_g);

// Type (d_1 | ... | d_g) of an alternating, nonsingular, l-integral pairing,
// restricted to its l-part. The second form also checks that n is 2g x 2g.
std::vector<std::int64_t> polarization_type(const LAdicMatrix& n);
std::vector<std::int64_t> polarization_type(const LAdicMatrix& n, std::size_t g);

// The block matrix (0 D; -D 0).
LAdicMatrix standard_polarization_matrix(Prime ell,
                                         const std::vector<std::int64_t>& type);

// M^{-1} A M.
LAdicMatrix conjugate_by(const LAdicMatrix& m, const LAdicMatrix& a);

// Conjugation with the inverse computed once.
class Conjugator {
 public:
  explicit Conjugator(LAdicMatrix m);
  const LAdicMatrix& matrix() const { return m_; }
  const LAdicMatrix& inverse() const { return m_inv_; }
  LAdicMatrix operator()(const LAdicMatrix& a) const;

 private:
  LAdicMatrix m_;
  LAdicMatrix m_inv_;
};

// Conjugation X -> M^{-1} X M on integer matrices known modulo a power of l.
// With l^s M and l^t M^{-1} integral, the result modulo l^k only depends on X
// modulo l^(k+s+t), which is what input_precision() reports.
class ModConjugator {
 public:
  ModConjugator(const LAdicMatrix& m, unsigned k);
  unsigned input_precision() const { return k_ + shift_; }
  unsigned output_precision() const { return k_; }

  // Throws NonIntegralError when the conjugate is not integral.
  ModMatrix operator()(const ModMatrix& x) const;
  // Row-major n*n integers in, residues modulo l^k out.
  void apply(std::span<const std::int64_t> x, std::span<std::int64_t> out) const;

 private:
  Prime ell_;
  unsigned k_;
  unsigned shift_;
  std::size_t n_;
  std::int64_t in_mod_;
  std::int64_t out_mod_;
  std::int64_t divisor_;
  std::vector<std::int64_t> left_;
  std::vector<std::int64_t> right_;
};

// True when the column lattices of a and b coincide over Z_l.
bool same_lattice(const LAdicMatrix& a, const LAdicMatrix& b);

// The set l^n (L / Z^dim) inside (Z/l^n)^dim for the column lattice L of m,
// by enumerating coefficient vectors. Requires l^-n Z^dim to contain L.
std::vector<IntVector> lattice_quotient(const LAdicMatrix& m, unsigned n);

}  // namespace galdual
