#include "pzeta/quotient.hpp"

#include <random>

#include "pzeta/subgroup.hpp"

namespace pzeta {

FiniteQuotient::~FiniteQuotient() = default;

std::uint64_t FiniteQuotient::eval_polynomial(int coord, const Coords& a,
                                              const Coords& b) const {
  std::uint64_t acc = 0;
  for (const auto& term : law_[coord]) {
    std::uint64_t m = term.coeff;
    for (std::size_t j = 0; j < term.x_exps.size() && m != 0; ++j)
      for (unsigned e = 0; e < term.x_exps[j]; ++e) m = (m * a[j]) % pk_;
    for (std::size_t j = 0; j < term.y_exps.size() && m != 0; ++j)
      for (unsigned e = 0; e < term.y_exps[j]; ++e) m = (m * b[j]) % pk_;
    acc = (acc + m) % pk_;
  }
  return acc;
}

bool FiniteQuotient::is_identity(const Coords& x) const {
  for (std::uint64_t c : x)
    if (c != 0) return false;
  return true;
}

Coords FiniteQuotient::free_multiply(const Coords& a, const Coords& b) const {
  Coords z(rank_);
  for (int i = 0; i < rank_; ++i)
    z[i] = (a[i] + b[i] + eval_polynomial(i, a, b)) % pk_;
  return z;
}

Coords FiniteQuotient::free_inverse(const Coords& a) const {
  Coords z(rank_, 0);
  for (int i = 0; i < rank_; ++i) {
    std::uint64_t t = (a[i] + eval_polynomial(i, z, a)) % pk_;
    z[i] = (pk_ - t) % pk_;
  }
  return z;
}

Coords FiniteQuotient::free_power(const Coords& a, const Int& e) const {
  if (e < 0) return free_power(free_inverse(a), -e);
  if (e.fits_ulong_p()) return free_power_u64(a, e.get_ui());
  Coords acc = free_identity();
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    acc = free_multiply(acc, acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = free_multiply(acc, a);
  }
  return acc;
}

Coords FiniteQuotient::free_power_u64(const Coords& a, std::uint64_t e) const {
  Coords acc = free_identity();
  if (e == 0) return acc;
  int bits = 64 - __builtin_clzll(e);
  for (int i = bits; i-- > 0;) {
    acc = free_multiply(acc, acc);
    if ((e >> i) & 1) acc = free_multiply(acc, a);
  }
  return acc;
}

Coords FiniteQuotient::free_conjugate(const Coords& g, const Coords& x) const {
  return free_multiply(free_multiply(g, x), free_inverse(g));
}

Coords FiniteQuotient::free_commutator(const Coords& a, const Coords& b) const {
  return free_multiply(free_multiply(free_inverse(a), free_inverse(b)),
                       free_multiply(a, b));
}

Coords FiniteQuotient::generator(int i) const {
  Coords g(rank_, 0);
  g[i] = 1 % pk_;
  return reduce(g);
}

Coords FiniteQuotient::reduce(const Coords& x) const {
  if (!relator_closure_) return x;
  return relator_closure_->coset_rep(x);
}

Coords FiniteQuotient::multiply(const Coords& a, const Coords& b) const {
  return reduce(free_multiply(a, b));
}

Coords FiniteQuotient::inverse(const Coords& a) const {
  return reduce(free_inverse(a));
}

Coords FiniteQuotient::power(const Coords& a, const Int& e) const {
  return reduce(free_power(a, e));
}

int FiniteQuotient::coord_valuation(std::uint64_t c) const {
  if (c == 0) return k_;
  int v = 0;
  while (c % p_ui_ == 0) {
    c /= p_ui_;
    ++v;
  }
  return v;
}

std::shared_ptr<const FiniteQuotient> build_quotient(
    std::shared_ptr<const MalcevPresentation> pres, const Int& p, int k,
    unsigned validation_samples) {
  if (!is_prime(p)) throw InputError("build_quotient: p must be prime");
  if (k < 1) throw InputError("build_quotient: precision must be >= 1");

  auto q = std::shared_ptr<FiniteQuotient>(new FiniteQuotient());
  q->pres_ = pres;
  q->p_ = p;
  q->k_ = k;
  q->rank_ = pres->rank();
  Int pk = pow_int(p, static_cast<unsigned long>(k));
  if (pk >= (Int(1) << 31))
    throw BudgetExceededError("build_quotient: p^k exceeds coordinate budget");
  q->pk_ = pk.get_ui();
  q->p_ui_ = p.get_ui();

  // Reduce the product law mod p^k once.
  for (const auto& poly : pres->products()) {
    std::vector<FiniteQuotient::Term> terms;
    for (const auto& t : poly) {
      FiniteQuotient::Term term;
      term.coeff = mod_positive(t.coeff, pk).get_ui();
      if (term.coeff == 0) continue;
      term.x_exps = t.x_exps;
      term.y_exps = t.y_exps;
      terms.push_back(std::move(term));
    }
    q->law_.push_back(std::move(terms));
  }

  // Exact sampling check that the mod-p^k congruence kernel is normal in the
  // integral-coordinate group: g (p^k r) g^{-1} must have all coordinates
  // divisible by p^k.
  std::mt19937_64 rng(0x5eed0002);
  std::uniform_int_distribution<long> small(0, 1000);
  for (unsigned s = 0; s < validation_samples; ++s) {
    std::vector<Int> g(q->rank_), x(q->rank_);
    for (int i = 0; i < q->rank_; ++i) {
      g[i] = Int(small(rng)) % pk;
      x[i] = pk * Int(small(rng) % 7);
    }
    std::vector<Int> conj =
        pres->multiply(pres->multiply(g, x), pres->inverse(g));
    for (int i = 0; i < q->rank_; ++i)
      if (mod_positive(conj[i], pk) != 0)
        throw InvalidPresentationError(
            "build_quotient: congruence kernel not normal mod p^k");
  }

  q->order_ = pow_int(pk, static_cast<unsigned long>(q->rank_));

  if (!pres->relators().empty()) {
    std::vector<Coords> images;
    for (const auto& rel : pres->relators()) {
      Coords c(q->rank_);
      for (int i = 0; i < q->rank_; ++i)
        c[i] = mod_positive(rel[i], pk).get_ui();
      images.push_back(std::move(c));
    }
    SubgroupBasis n = normal_closure(*q, images);
    q->order_ /= n.order();
    q->relator_closure_ = std::make_unique<SubgroupBasis>(std::move(n));
  }

  return q;
}

GroupElement::GroupElement(std::shared_ptr<const FiniteQuotient> ctx,
                           Coords coords)
    : ctx_(std::move(ctx)), coords_(ctx_->reduce(coords)) {
  if (coords_.size() != static_cast<std::size_t>(ctx_->rank()))
    throw InputError("GroupElement: coordinate arity mismatch");
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (ctx_.get() != o.ctx_.get())
    throw ContextMismatchError("GroupElement: elements from different quotients");
  return GroupElement(ctx_, ctx_->multiply(coords_, o.coords_));
}

GroupElement GroupElement::inverse() const {
  return GroupElement(ctx_, ctx_->inverse(coords_));
}

GroupElement GroupElement::pow(const Int& e) const {
  return GroupElement(ctx_, ctx_->power(coords_, e));
}

bool GroupElement::operator==(const GroupElement& o) const {
  return ctx_.get() == o.ctx_.get() && coords_ == o.coords_;
}

}  // namespace pzeta
