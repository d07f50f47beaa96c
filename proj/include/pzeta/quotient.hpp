#ifndef PZETA_QUOTIENT_HPP
#define PZETA_QUOTIENT_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "pzeta/numbers.hpp"
#include "pzeta/presentation.hpp"

namespace pzeta {

class SubgroupBasis;

// Coordinate tuple of a quotient element, each entry reduced mod p^k.
using Coords = std::vector<std::uint64_t>;

// The finite p-group quotient of a Mal'cev presentation at modulus p^k.
// Without relators the underlying set is (Z/p^k)^R with the reduced
// polynomial law ("free mode"). With relators, elements are canonical coset
// representatives modulo the normal closure N of the relator images; the
// subgroup machinery still works in free coordinates on preimages containing
// N. Immutable after build_quotient; safe to share across threads.
class FiniteQuotient {
 public:
  ~FiniteQuotient();

  const MalcevPresentation& presentation() const { return *pres_; }
  const std::shared_ptr<const MalcevPresentation>& presentation_ptr() const {
    return pres_;
  }
  const Int& prime() const { return p_; }
  int precision() const { return k_; }
  std::uint64_t modulus() const { return pk_; }
  int rank() const { return rank_; }
  const Int& order() const { return order_; }
  bool has_relators() const { return relator_closure_ != nullptr; }
  const SubgroupBasis* relator_closure() const { return relator_closure_.get(); }

  // --- free-mode operations on raw coordinates -------------------------
  Coords free_identity() const { return Coords(rank_, 0); }
  bool is_identity(const Coords& x) const;
  Coords free_multiply(const Coords& a, const Coords& b) const;
  Coords free_inverse(const Coords& a) const;
  Coords free_power(const Coords& a, const Int& e) const;
  Coords free_power_u64(const Coords& a, std::uint64_t e) const;
  Coords free_conjugate(const Coords& g, const Coords& x) const;  // g x g^-1
  Coords free_commutator(const Coords& a, const Coords& b) const;
  Coords generator(int i) const;

  // --- canonical-representative operations (respecting relators) -------
  Coords reduce(const Coords& x) const;
  Coords multiply(const Coords& a, const Coords& b) const;
  Coords inverse(const Coords& a) const;
  Coords power(const Coords& a, const Int& e) const;

  // valuation of a coordinate value; k for zero
  int coord_valuation(std::uint64_t c) const;
  std::uint64_t p_ui() const { return p_ui_; }

 private:
  friend std::shared_ptr<const FiniteQuotient> build_quotient(
      std::shared_ptr<const MalcevPresentation> pres, const Int& p, int k,
      unsigned validation_samples);

  FiniteQuotient() = default;

  struct Term {
    std::uint64_t coeff;
    std::vector<unsigned> x_exps, y_exps;
  };

  std::uint64_t eval_polynomial(int coord, const Coords& a, const Coords& b) const;

  std::shared_ptr<const MalcevPresentation> pres_;
  Int p_;
  int k_ = 0;
  std::uint64_t pk_ = 0;
  std::uint64_t p_ui_ = 0;
  int rank_ = 0;
  Int order_;
  std::vector<std::vector<Term>> law_;
  std::unique_ptr<const SubgroupBasis> relator_closure_;
};

// Builds the quotient, validating mod-p^k normality of the congruence kernel
// by exact sampling and computing the relator normal closure when present.
// Throws InvalidPresentationError on validation failure, BudgetExceededError
// when p^k does not fit the coordinate arithmetic.
std::shared_ptr<const FiniteQuotient> build_quotient(
    std::shared_ptr<const MalcevPresentation> pres, const Int& p, int k,
    unsigned validation_samples = 1000);

// An element of a finite quotient: canonical coordinates plus its context.
class GroupElement {
 public:
  GroupElement(std::shared_ptr<const FiniteQuotient> ctx, Coords coords);

  const std::shared_ptr<const FiniteQuotient>& context() const { return ctx_; }
  const Coords& coords() const { return coords_; }

  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;
  GroupElement pow(const Int& e) const;
  bool operator==(const GroupElement& o) const;

 private:
  std::shared_ptr<const FiniteQuotient> ctx_;
  Coords coords_;
};

}  // namespace pzeta

#endif
