#ifndef PZETA_ENUMERATE_HPP
#define PZETA_ENUMERATE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pzeta/subgroup.hpp"

namespace pzeta {

enum class CountVariant {
  All,
  Normal,
  ConjugacyClasses,
  QuotientIso,
  TwistIsoclasses,
  ProPIso,         // Proposition cases out of scope; rejected at the interface
  ProPEquivalence,
};

CountVariant parse_variant(const std::string& name);
std::string variant_name(CountVariant v);

struct EnumOptions {
  int workers = 1;
  // |Q| up to which handles carry full sorted element sets.
  Int fingerprint_budget = Int(1) << 12;
  // |Q| cap for the brute-force subgroup lattice oracle.
  Int brute_budget = Int(1) << 10;
  // Cap on materializing raw coordinate tuples.
  Int element_iteration_budget = Int(1) << 20;
  // Cap on good-basis candidates per enumeration call.
  Int candidate_budget = Int(1) << 27;
  // Quotient-isomorphism testing allows index up to p^iso_index_cap.
  int iso_index_cap = 4;
  // Element budget for the cyclotomic character oracle.
  Int oracle_budget = 8 * 81;
  unsigned stabilization_retries = 3;
  int class_buffer = -1;  // -1: use the presentation's nilpotency class
};

// The triangular generator candidate of a finite-index subgroup: row i
// encodes h_i = a_i^{lambda_ii} a_{i+1}^{lambda_i,i+1} ... a_R^{lambda_iR}
// with lambda_ii = p^{e_i} and lambda_ij in [0, p^{e_j}) for j > i.
struct GoodBasis {
  std::vector<int> diag_exponents;
  std::vector<std::vector<std::uint64_t>> lambda;  // full R x R matrix

  bool operator<(const GoodBasis& o) const {
    if (diag_exponents != o.diag_exponents)
      return diag_exponents < o.diag_exponents;
    return lambda < o.lambda;
  }
  bool operator==(const GoodBasis& o) const {
    return diag_exponents == o.diag_exponents && lambda == o.lambda;
  }
};

// A deduplicated finite-index subgroup. The canonical echelon basis is the
// working identity; handles of quotients small enough also carry the full
// sorted element list, which is the fingerprint of record.
class SubgroupHandle {
 public:
  SubgroupHandle(std::shared_ptr<const FiniteQuotient> parent,
                 SubgroupBasis basis, std::optional<GoodBasis> good_basis,
                 std::optional<std::vector<Coords>> elements);

  const std::shared_ptr<const FiniteQuotient>& parent() const { return parent_; }
  const SubgroupBasis& basis() const { return basis_; }
  const std::optional<GoodBasis>& good_basis() const { return good_basis_; }
  const Int& index() const { return index_; }
  const Int& element_count() const { return element_count_; }
  const std::optional<std::vector<Coords>>& elements() const { return elements_; }
  std::string fingerprint() const;

  bool operator==(const SubgroupHandle& o) const {
    return basis_ == o.basis_;
  }
  bool operator<(const SubgroupHandle& o) const { return basis_ < o.basis_; }

 private:
  std::shared_ptr<const FiniteQuotient> parent_;
  SubgroupBasis basis_;
  std::optional<GoodBasis> good_basis_;
  Int index_;
  Int element_count_;
  std::optional<std::vector<Coords>> elements_;
};

// All subgroups of index p^n, found by iterating good-basis candidates with
// sum of diagonal exponents n, closing each candidate, and keeping closures
// of index exactly p^n. Complete relative to the brute-force oracle;
// deterministic output order independent of the worker count.
std::vector<SubgroupHandle> enumerate_subgroups(
    std::shared_ptr<const FiniteQuotient> Q, int n,
    const EnumOptions& opts = {});

bool is_normal(const SubgroupHandle& h);

// Every subgroup of Q, as sorted element lists of canonical representatives,
// built from cyclic subgroups upward. Exact and complete; the oracle against
// which enumerate_subgroups is checked.
std::vector<std::vector<Coords>> brute_force_all_subgroups(
    std::shared_ptr<const FiniteQuotient> Q, const EnumOptions& opts = {});

// Number of conjugation orbits on the index-p^n subgroups.
Int conjugacy_class_count(std::shared_ptr<const FiniteQuotient> Q, int n,
                          const EnumOptions& opts = {});

// Number of isomorphism classes among quotients Q/H over normal H of index
// p^n: invariant screening plus generator-image backtracking.
Int quotient_iso_count(std::shared_ptr<const FiniteQuotient> Q, int n,
                       const EnumOptions& opts = {});

Int count_for_variant(std::shared_ptr<const FiniteQuotient> Q, int n,
                      CountVariant variant, const EnumOptions& opts = {});

struct StabilizedCount {
  Int value;
  int precision_used;
};

// Computes the count at precisions k and k+1 with k = n + class buffer,
// accepting only when they agree; otherwise raises k up to the retry cap and
// finally throws NoStabilizationError.
StabilizedCount stabilized_count(
    std::shared_ptr<const MalcevPresentation> pres, const Int& p, int n,
    CountVariant variant, const EnumOptions& opts = {});

}  // namespace pzeta

#endif
