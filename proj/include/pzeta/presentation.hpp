#ifndef PZETA_PRESENTATION_HPP
#define PZETA_PRESENTATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pzeta/numbers.hpp"

namespace pzeta {

// One monomial coeff * prod x_j^{xe_j} * prod y_j^{ye_j} of a product
// polynomial. Exponent vectors are indexed by coordinate (0-based) and only
// coordinates below the polynomial's own may appear.
struct MonomialTerm {
  Int coeff;
  std::vector<unsigned> x_exps;
  std::vector<unsigned> y_exps;
};

// A torsion-free f.g. nilpotent group in Mal'cev coordinates: coordinate i of
// x*y is x_i + y_i + P_i(x_1..x_{i-1}, y_1..y_{i-1}) with integral P_i, so
// reduction mod p^k is a homomorphism onto a finite p-group for every p.
// Optional relators present a quotient Gamma = Delta/Theta.
class MalcevPresentation {
 public:
  static MalcevPresentation from_json_text(const std::string& text);
  static MalcevPresentation load_file(const std::string& path);

  const std::string& name() const { return name_; }
  int rank() const { return rank_; }
  int nilpotency_class() const { return class_; }
  const std::vector<std::vector<MonomialTerm>>& products() const {
    return products_;
  }
  const std::vector<std::vector<Int>>& relators() const { return relators_; }

  // Exact integer-coordinate group operations (no modulus).
  std::vector<Int> multiply(const std::vector<Int>& a,
                            const std::vector<Int>& b) const;
  std::vector<Int> inverse(const std::vector<Int>& a) const;
  std::vector<Int> identity() const { return std::vector<Int>(rank_, Int(0)); }

  // Exact randomized associativity check; throws InvalidPresentationError.
  void validate_associativity(unsigned samples = 1000) const;

  // Canonical serialization; the digest is embedded in every report.
  std::string canonical_json() const;
  std::uint64_t fingerprint() const;

 private:
  MalcevPresentation() = default;

  Int eval_product_polynomial(int coord, const std::vector<Int>& a,
                              const std::vector<Int>& b) const;

  std::string name_;
  int rank_ = 0;
  int class_ = 0;
  std::vector<std::vector<MonomialTerm>> products_;
  std::vector<std::vector<Int>> relators_;
};

}  // namespace pzeta

#endif
