#ifndef PZETA_LATTICE_HPP
#define PZETA_LATTICE_HPP

#include <vector>

#include "pzeta/numbers.hpp"
#include "pzeta/padic.hpp"

namespace pzeta {

// Canonical basis of a full-rank lattice in Q_p^N: upper triangular with
// columns as generators, diagonal (i,i) exactly p^{e_i}, and entry (i,j) for
// j > i the canonical residue of its coset mod p^{e_i}. Two lattices are
// equal iff their canonical bases are identical.
class TriangularBasis {
 public:
  TriangularBasis(Int prime, std::vector<long> diag_exponents,
                  std::vector<std::vector<Rational>> entries);

  const Int& prime() const { return prime_; }
  int dimension() const { return static_cast<int>(exponents_.size()); }
  const std::vector<long>& diag_exponents() const { return exponents_; }
  const Rational& entry(int i, int j) const { return entries_[i][j]; }
  const std::vector<std::vector<Rational>>& matrix() const { return entries_; }

  bool operator==(const TriangularBasis& o) const {
    return prime_ == o.prime_ && exponents_ == o.exponents_ &&
           entries_ == o.entries_;
  }
  bool operator!=(const TriangularBasis& o) const { return !(*this == o); }

 private:
  Int prime_;
  std::vector<long> exponents_;
  std::vector<std::vector<Rational>> entries_;
};

// A left coset representative.GL_M(Z_p) inside Q_p^{M^2}.
class CosetPiece {
 public:
  CosetPiece(Int prime, std::vector<std::vector<PadicScalar>> representative);
  static CosetPiece from_rational(const Int& prime,
                                  const std::vector<std::vector<Rational>>& m,
                                  int precision_k = 64);

  const Int& prime() const { return prime_; }
  int dimension() const { return static_cast<int>(rep_.size()); }
  const std::vector<std::vector<PadicScalar>>& representative() const {
    return rep_;
  }

 private:
  Int prime_;
  std::vector<std::vector<PadicScalar>> rep_;
};

// Column-style Hermite reduction over Z_p. Generators are the columns of the
// input; only unit column scalings, swaps and Z_p-column combinations are
// used, so the generated lattice is unchanged. Throws SingularInputError when
// the columns do not span, InsufficientPrecisionError when a pivot or residue
// decision needs digits beyond the stored precision.
TriangularBasis canonicalize(const Int& prime,
                             const std::vector<std::vector<PadicScalar>>& columns);

// Same reduction on exactly known generators (no precision bookkeeping).
TriangularBasis canonicalize_exact(const Int& prime,
                                   const std::vector<std::vector<Rational>>& columns);

// [Z_p^N : L] = p^{sum e_i} for a sublattice of Z_p^N.
Int lattice_index(const TriangularBasis& L);

// mu(A.GL_M(Z_p)) = |det A|^M with mu normalised so mu(Z_p^{M^2}) = 1.
Rational haar_coset_measure(const CosetPiece& A);

// Exhaustive count of residue matrices mod p^k lying in
// A.GL_M(Z_p) ∩ M_M(Z_p), divided by p^{k M^2}. Independent of the measure
// formula; the two are reconciled through the GL-volume constant
// residue_count_oracle(identity).
Rational residue_count_oracle(const CosetPiece& A, int k,
                              const Int& enumeration_budget = Int(1) << 28);

// Codes the coset h + p·e of a lattice e in Q_p^n as the lattice in
// Q_p^{n+1} spanned by (h,1) and p·e ⊕ 0; injective on distinct cosets.
TriangularBasis encode_torsor(const TriangularBasis& e,
                              const std::vector<Rational>& h);

// The counting identity behind the coset integral: every normalized product
// piece integrates to exactly 1, so the sum counts the pieces.
Int count_via_integral(const std::vector<std::vector<CosetPiece>>& pieces);

}  // namespace pzeta

#endif
