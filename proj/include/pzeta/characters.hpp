#ifndef PZETA_CHARACTERS_HPP
#define PZETA_CHARACTERS_HPP

#include <memory>
#include <vector>

#include "pzeta/cyclo.hpp"
#include "pzeta/enumerate.hpp"
#include "pzeta/subgroup.hpp"

namespace pzeta {

// A homomorphism H -> Q_p/Z_p given by exponents over a basis of the
// abelianization of H (modulo the relator closure when present). Values are
// exact rationals j/p^m mod 1.
class LinearCharacter {
 public:
  LinearCharacter(std::shared_ptr<const AbelianStructure> ab,
                  std::vector<Int> exponents);

  const AbelianStructure& ab() const { return *ab_; }
  const std::shared_ptr<const AbelianStructure>& ab_ptr() const { return ab_; }
  const SubgroupBasis& domain() const { return ab_->domain; }
  const std::vector<Int>& exponents() const { return exponents_; }
  bool is_trivial() const;

  QpModZp evaluate(const Coords& h) const;

 private:
  std::shared_ptr<const AbelianStructure> ab_;
  std::vector<Int> exponents_;
};

// The induced character Ind_H^G(chi), represented by its inducing pair.
struct InducedPair {
  std::shared_ptr<const FiniteQuotient> parent;
  LinearCharacter chi;

  const SubgroupBasis& subgroup() const { return chi.domain(); }
  Int degree() const { return chi.domain().index(); }
};

// Abelianization of H: quotient by the commutator subgroup joined with the
// relator closure, so its characters are exactly the p-admissible linear
// characters of the relator quotient's subgroup.
std::shared_ptr<const AbelianStructure> abelianization(
    const std::shared_ptr<const FiniteQuotient>& Q, const SubgroupBasis& H);

// All characters of H's abelianization, enumerated as exponent tuples.
std::vector<LinearCharacter> linear_characters(
    const std::shared_ptr<const AbelianStructure>& ab,
    const Int& budget = Int(1) << 20);

// (g.chi)(g h g^-1) = chi(h) on the conjugate subgroup g H g^-1.
LinearCharacter conjugate_character(const std::shared_ptr<const FiniteQuotient>& Q,
                                    const Coords& g, const LinearCharacter& chi);

// Restriction of a character of the whole group to the domain of target_ab.
LinearCharacter restrict_character(const LinearCharacter& psi,
                                   const std::shared_ptr<const AbelianStructure>& target_ab);

// Mackey irreducibility: Ind chi is irreducible iff for every double coset
// representative g outside H the restrictions of g.chi and chi to
// gHg^-1 ∩ H differ somewhere.
bool is_induced_irreducible(const InducedPair& pair);

// Ind chi1 = Ind chi2 iff some g makes the restrictions agree on
// g H1 g^-1 ∩ H2.
bool induced_equal(const InducedPair& a, const InducedPair& b);

// (H, Res_H(psi) * chi); induces psi * Ind(chi), so twisting commutes with
// induction.
InducedPair twist(const LinearCharacter& psi, const InducedPair& pair);

// Twist equivalence: some linear character of the whole quotient twists one
// induced character onto the other. Decided without enumerating characters:
// the difference character must vanish on (gH1g^-1 ∩ H2) ∩ ker(G -> G^ab).
bool twist_equivalent(const InducedPair& a, const InducedPair& b);

// Number of twist isoclasses of irreducible degree-p^n characters.
Int count_twist_isoclasses(std::shared_ptr<const FiniteQuotient> Q, int n,
                           const EnumOptions& opts = {});

// ---- cyclotomic brute-force oracle -----------------------------------

// Character values on conjugacy class representatives.
struct ClassFunction {
  std::vector<CycloSum> values;  // aligned with OracleContext::class_reps
};

// Dense element/conjugacy-class data of a small quotient.
struct OracleContext {
  std::shared_ptr<const FiniteQuotient> Q;
  std::vector<Coords> elements;     // canonical, sorted
  std::vector<Coords> class_reps;   // lex-least member per class
  std::vector<Int> class_sizes;
  std::vector<std::size_t> class_of;  // index into class_reps per element
};

OracleContext make_oracle_context(std::shared_ptr<const FiniteQuotient> Q,
                                  const Int& budget);

// Ind chi(g) = (1/|H|) sum over x in G with x g x^-1 in H of chi(x g x^-1),
// evaluated in the cyclotomic group ring.
ClassFunction oracle_induced_table(const OracleContext& ctx,
                                   const InducedPair& pair);

// <s1, s2> = (1/|G|) sum_g s1(g) conj(s2(g)); inner products of characters
// are rational integers, so a non-rational reduction is an invariant
// violation.
Rational oracle_inner(const OracleContext& ctx, const ClassFunction& s1,
                      const ClassFunction& s2);

}  // namespace pzeta

#endif
