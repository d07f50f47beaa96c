#ifndef PZETA_SUBGROUP_HPP
#define PZETA_SUBGROUP_HPP

#include <optional>
#include <vector>

#include "pzeta/quotient.hpp"

namespace pzeta {

// Echelonized basis of a subgroup of a free-mode quotient. Row i (when
// present) is supported on coordinates >= i with coordinate i exactly
// p^{e_i}; every subgroup element factors uniquely as the ordered product
// prod_i row_i^{nu_i} with nu_i in [0, p^{k-e_i}). Missing levels carry
// e_i = k. The canonical form is unique per subgroup, so basis equality
// decides subgroup equality.
class SubgroupBasis {
 public:
  SubgroupBasis() = default;

  static SubgroupBasis trivial(const FiniteQuotient& q);
  static SubgroupBasis whole_group(const FiniteQuotient& q);
  static SubgroupBasis closure(const FiniteQuotient& q,
                               const std::vector<Coords>& gens);
  // Closure that gives up (returning nullopt) as soon as the generated
  // subgroup's index drops below p^min_index_exponent. Row exponents only
  // ever decrease during closure, so the abort is sound.
  static std::optional<SubgroupBasis> closure_bounded(
      const FiniteQuotient& q, const std::vector<Coords>& gens,
      int min_index_exponent);

  // Closure that also tracks, for every basis row, its image in the free
  // abelianization Z^{#gens} of the generator alphabet. Word bookkeeping is
  // exact because only abelianized exponents are ever consumed downstream.
  struct WithWords;
  static WithWords closure_with_words(const FiniteQuotient& q,
                                      const std::vector<Coords>& gens);

  const FiniteQuotient& group() const { return *q_; }
  int rank() const { return static_cast<int>(e_.size()); }
  // e_[i] in [0, k]; e_[i] == k means no row at level i.
  const std::vector<int>& exponents() const { return e_; }
  const std::vector<Coords>& rows() const { return rows_; }
  bool has_row(int level) const { return e_[level] < q_->precision(); }
  // Levels carrying a row, ascending; these are the polycyclic generators.
  std::vector<int> row_levels() const;

  Int order() const;
  Int index() const;

  bool contains(const Coords& x) const;
  bool contains_subgroup(const SubgroupBasis& other) const;
  // Exponent of each row in the unique factorization of x, or nullopt when
  // x is not a member. Indexed by level; empty levels get 0.
  std::optional<std::vector<Int>> decompose(const Coords& x) const;

  // Canonical representative of the coset x*H (coordinate i reduced into
  // [0, p^{e_i}) level by level). The greedy reduction realizes the
  // lexicographically least element of the coset.
  Coords coset_rep(const Coords& x) const;

  // Enumerates all members; guarded by an element budget.
  std::vector<Coords> elements(const Int& budget) const;

  SubgroupBasis conjugated(const Coords& g) const;
  bool is_normal() const;  // under conjugation by the quotient's generators

  bool operator==(const SubgroupBasis& o) const {
    return e_ == o.e_ && rows_ == o.rows_;
  }
  bool operator!=(const SubgroupBasis& o) const { return !(*this == o); }
  bool operator<(const SubgroupBasis& o) const {
    if (e_ != o.e_) return e_ < o.e_;
    return rows_ < o.rows_;
  }

 private:
  struct Builder;

  const FiniteQuotient* q_ = nullptr;
  std::vector<int> e_;
  std::vector<Coords> rows_;
};

struct SubgroupBasis::WithWords {
  SubgroupBasis basis;
  std::vector<std::vector<Int>> row_words;  // indexed like rows(), by level
};

// Subgroup generated by gens together with all conjugates by the quotient's
// generators (the normal closure).
SubgroupBasis normal_closure(const FiniteQuotient& q,
                             const std::vector<Coords>& gens);

// [H,H] as a subgroup of H (closed under conjugation by H).
SubgroupBasis commutator_subgroup(const FiniteQuotient& q,
                                  const SubgroupBasis& H);

SubgroupBasis join(const FiniteQuotient& q, const SubgroupBasis& a,
                   const SubgroupBasis& b);

// Orbit of the coset base*A under left multiplication by the group generated
// by actor_gens, with a Schreier transversal and Schreier generators of the
// stabilizer of the base point. The stabilizer of base*A in the actors is
// actors ∩ base A base^{-1}.
struct CosetOrbit {
  std::vector<Coords> points;       // canonical coset representatives
  std::vector<Coords> transversal;  // t_i * base-coset = points[i]
  std::vector<Coords> stabilizer_gens;
};
CosetOrbit coset_orbit(const FiniteQuotient& q, const SubgroupBasis& A,
                       const Coords& base, const std::vector<Coords>& actor_gens,
                       bool want_stabilizer = true);

// Structure of the finite abelian p-group A = H/K for K normal in H with
// [H,H] <= K: cyclic factor orders, realizing elements, and the exact
// decomposition map. Computed from the triangular relation lattice of the
// polycyclic generators via Smith normal form.
struct AbelianStructure {
  std::vector<Int> orders;          // orders p^{m_i} of the kept factors
  std::vector<Coords> basis;        // elements of H realizing each factor
  std::vector<int> levels;          // levels of the generator rows, ascending
  std::vector<std::vector<Int>> transform;  // t = transform * nu, then mod
  std::vector<int> kept;            // coordinates of transform with order > 1
  std::vector<Int> all_orders;      // diagonal of the Smith form
  SubgroupBasis domain;             // H

  Int order() const;
  // Exponent tuple of h over the kept basis (reduced mod orders).
  std::vector<Int> decompose(const Coords& h) const;
};

AbelianStructure abelian_quotient(const FiniteQuotient& q,
                                  const SubgroupBasis& H,
                                  const SubgroupBasis& K);

// Smith normal form over Z for small matrices: returns diagonal d plus
// unimodular U and U^{-1} with U*M*W = diag(d) for some unimodular W.
struct SmithResult {
  std::vector<Int> diagonal;
  std::vector<std::vector<Int>> U;
  std::vector<std::vector<Int>> U_inv;
};
SmithResult smith_normal_form(std::vector<std::vector<Int>> m);

}  // namespace pzeta

#endif
