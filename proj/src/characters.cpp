#include "pzeta/characters.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pzeta {

LinearCharacter::LinearCharacter(std::shared_ptr<const AbelianStructure> ab,
                                 std::vector<Int> exponents)
    : ab_(std::move(ab)), exponents_(std::move(exponents)) {
  if (exponents_.size() != ab_->orders.size())
    throw InputError("LinearCharacter: exponent arity mismatch");
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    exponents_[i] = mod_positive(exponents_[i], ab_->orders[i]);
}

bool LinearCharacter::is_trivial() const {
  for (const Int& e : exponents_)
    if (e != 0) return false;
  return true;
}

QpModZp LinearCharacter::evaluate(const Coords& h) const {
  const Int& p = ab_->domain.group().prime();
  std::vector<Int> t = ab_->decompose(h);
  QpModZp acc = QpModZp::zero(p);
  for (std::size_t i = 0; i < t.size(); ++i) {
    int m = static_cast<int>(valuation_of(ab_->orders[i], p));
    acc = acc + QpModZp(p, m, exponents_[i] * t[i]);
  }
  return acc;
}

std::shared_ptr<const AbelianStructure> abelianization(
    const std::shared_ptr<const FiniteQuotient>& Q, const SubgroupBasis& H) {
  SubgroupBasis K = commutator_subgroup(*Q, H);
  if (Q->has_relators()) {
    if (!H.contains_subgroup(*Q->relator_closure()))
      throw InternalInvariantError(
          "abelianization: subgroup does not contain the relator closure");
    K = join(*Q, K, *Q->relator_closure());
  }
  return std::make_shared<AbelianStructure>(abelian_quotient(*Q, H, K));
}

std::vector<LinearCharacter> linear_characters(
    const std::shared_ptr<const AbelianStructure>& ab, const Int& budget) {
  Int total = 1;
  for (const Int& d : ab->orders) total *= d;
  if (total > budget)
    throw BudgetExceededError("linear_characters: character group too large");
  std::vector<LinearCharacter> out;
  std::vector<Int> exps(ab->orders.size(), Int(0));
  for (;;) {
    out.emplace_back(ab, exps);
    std::size_t pos = 0;
    while (pos < exps.size()) {
      if (++exps[pos] < ab->orders[pos]) break;
      exps[pos] = 0;
      ++pos;
    }
    if (pos == exps.size()) break;
  }
  return out;
}

namespace {

// chi(x) scaled to an exponent over a factor of order p^m.
Int angle_to_exponent(const QpModZp& v, const Int& p, int m) {
  if (v.level() > m)
    throw InternalInvariantError("character value order exceeds factor order");
  return v.numerator() * pow_int(p, static_cast<unsigned long>(m - v.level()));
}

}  // namespace

LinearCharacter conjugate_character(const std::shared_ptr<const FiniteQuotient>& Q,
                                    const Coords& g, const LinearCharacter& chi) {
  SubgroupBasis conj = chi.domain().conjugated(g);
  auto ab2 = abelianization(Q, conj);
  const Int& p = Q->prime();
  Coords gi = Q->free_inverse(g);
  std::vector<Int> exps;
  exps.reserve(ab2->orders.size());
  for (std::size_t i = 0; i < ab2->orders.size(); ++i) {
    // (g.chi)(b) = chi(g^-1 b g)
    QpModZp v = chi.evaluate(Q->free_conjugate(gi, ab2->basis[i]));
    int m = static_cast<int>(valuation_of(ab2->orders[i], p));
    exps.push_back(angle_to_exponent(v, p, m));
  }
  return LinearCharacter(ab2, std::move(exps));
}

LinearCharacter restrict_character(
    const LinearCharacter& psi,
    const std::shared_ptr<const AbelianStructure>& target_ab) {
  const Int& p = target_ab->domain.group().prime();
  std::vector<Int> exps;
  exps.reserve(target_ab->orders.size());
  for (std::size_t i = 0; i < target_ab->orders.size(); ++i) {
    QpModZp v = psi.evaluate(target_ab->basis[i]);
    int m = static_cast<int>(valuation_of(target_ab->orders[i], p));
    exps.push_back(angle_to_exponent(v, p, m));
  }
  return LinearCharacter(target_ab, std::move(exps));
}

namespace {

std::vector<Coords> subgroup_row_gens(const SubgroupBasis& b) {
  std::vector<Coords> gens;
  for (int i = 0; i < b.rank(); ++i)
    if (b.has_row(i)) gens.push_back(b.rows()[i]);
  return gens;
}

std::vector<Coords> group_generators(const FiniteQuotient& q) {
  std::vector<Coords> gens;
  for (int i = 0; i < q.rank(); ++i) {
    Coords g(q.rank(), 0);
    g[i] = 1;
    gens.push_back(std::move(g));
  }
  return gens;
}

// All canonical representatives of cosets x*A.
std::vector<Coords> all_cosets(const FiniteQuotient& q, const SubgroupBasis& A) {
  std::vector<Coords> pts;
  std::set<Coords> seen;
  pts.push_back(A.coset_rep(q.free_identity()));
  seen.insert(pts[0]);
  auto gens = group_generators(q);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (const auto& g : gens) {
      Coords y = A.coset_rep(q.free_multiply(g, pts[i]));
      if (seen.insert(y).second) pts.push_back(y);
      Coords z = A.coset_rep(q.free_multiply(q.free_inverse(g), pts[i]));
      if (seen.insert(z).second) pts.push_back(z);
    }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Orbit representatives of actors acting on G/A by left multiplication,
// with the Schreier stabilizer generators of each representative's coset
// (the intersection actors ∩ rep·A·rep^{-1}).
struct DoubleCosets {
  std::vector<Coords> reps;
  std::vector<std::vector<Coords>> stabilizer_gens;
};

DoubleCosets double_cosets(const FiniteQuotient& q, const SubgroupBasis& A,
                           const std::vector<Coords>& actor_gens) {
  DoubleCosets out;
  std::set<Coords> visited;
  for (const Coords& start : all_cosets(q, A)) {
    if (visited.count(start)) continue;
    CosetOrbit orbit = coset_orbit(q, A, start, actor_gens, true);
    for (const auto& pt : orbit.points) visited.insert(pt);
    out.reps.push_back(start);
    out.stabilizer_gens.push_back(std::move(orbit.stabilizer_gens));
  }
  return out;
}

// Res_{D}(g.chi1) == Res_{D}(chi2) where D is generated by gens and
// (g.chi1)(x) = chi1(g^-1 x g).
bool restrictions_agree(const FiniteQuotient& q, const Coords& g,
                        const LinearCharacter& chi1, const LinearCharacter& chi2,
                        const std::vector<Coords>& d_gens) {
  Coords gi = q.free_inverse(g);
  for (const auto& x : d_gens) {
    QpModZp lhs = chi1.evaluate(q.free_conjugate(gi, x));
    QpModZp rhs = chi2.evaluate(x);
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace

bool is_induced_irreducible(const InducedPair& pair) {
  const FiniteQuotient& q = *pair.parent;
  const SubgroupBasis& H = pair.subgroup();
  if (H.index() == 1) return true;
  auto h_gens = subgroup_row_gens(H);
  Coords trivial = H.coset_rep(q.free_identity());
  DoubleCosets dc = double_cosets(q, H, h_gens);
  for (std::size_t i = 0; i < dc.reps.size(); ++i) {
    if (dc.reps[i] == trivial) continue;
    if (restrictions_agree(q, dc.reps[i], pair.chi, pair.chi,
                           dc.stabilizer_gens[i]))
      return false;
  }
  return true;
}

bool induced_equal(const InducedPair& a, const InducedPair& b) {
  if (a.parent.get() != b.parent.get())
    throw ContextMismatchError("induced_equal: different quotients");
  if (a.degree() != b.degree())
    throw DegreeMismatchError("induced_equal: degrees differ");
  const FiniteQuotient& q = *a.parent;
  DoubleCosets dc = double_cosets(q, a.subgroup(), subgroup_row_gens(b.subgroup()));
  for (std::size_t i = 0; i < dc.reps.size(); ++i)
    if (restrictions_agree(q, dc.reps[i], a.chi, b.chi, dc.stabilizer_gens[i]))
      return true;
  return false;
}

InducedPair twist(const LinearCharacter& psi, const InducedPair& pair) {
  LinearCharacter res = restrict_character(psi, pair.chi.ab_ptr());
  std::vector<Int> exps(pair.chi.exponents());
  for (std::size_t i = 0; i < exps.size(); ++i)
    exps[i] += res.exponents()[i];
  return InducedPair{pair.parent, LinearCharacter(pair.chi.ab_ptr(), exps)};
}

namespace {

// ker(G -> G^ab of the relator quotient): [G,G] joined with the relator
// closure. The twist test needs its intersection with each Mackey
// intersection subgroup.
SubgroupBasis twist_kernel(const FiniteQuotient& q) {
  SubgroupBasis whole = SubgroupBasis::whole_group(q);
  SubgroupBasis der = commutator_subgroup(q, whole);
  if (q.has_relators()) der = join(q, der, *q.relator_closure());
  return der;
}

bool twist_equivalent_impl(const InducedPair& a, const InducedPair& b,
                           const SubgroupBasis& kernel) {
  const FiniteQuotient& q = *a.parent;
  Coords gi;
  auto kernel_gens = subgroup_row_gens(kernel);
  DoubleCosets dc = double_cosets(q, a.subgroup(), subgroup_row_gens(b.subgroup()));
  for (std::size_t i = 0; i < dc.reps.size(); ++i) {
    const Coords& g = dc.reps[i];
    // D = g H_a g^-1 ∩ H_b; the difference character chi_b * (g.chi_a)^-1
    // extends to a linear character of the whole quotient iff it kills
    // D ∩ kernel.
    SubgroupBasis D = SubgroupBasis::closure(q, dc.stabilizer_gens[i]);
    CosetOrbit orbit = coset_orbit(q, D, q.free_identity(), kernel_gens, true);
    gi = q.free_inverse(g);
    bool ok = true;
    for (const auto& x : orbit.stabilizer_gens) {
      QpModZp delta =
          b.chi.evaluate(x) - a.chi.evaluate(q.free_conjugate(gi, x));
      if (!delta.is_zero()) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool twist_equivalent(const InducedPair& a, const InducedPair& b) {
  if (a.parent.get() != b.parent.get())
    throw ContextMismatchError("twist_equivalent: different quotients");
  if (a.degree() != b.degree())
    throw DegreeMismatchError("twist_equivalent: degrees differ");
  return twist_equivalent_impl(a, b, twist_kernel(*a.parent));
}

namespace {

// Column Hermite form over Z of the lattice spanned by cols inside Z^s with
// s assumed full rank; returns the diagonal (pivot) entries.
std::vector<Int> hermite_diagonal(std::vector<std::vector<Int>> cols, int s) {
  // Processing rows bottom-up keeps the invariant that remaining columns
  // vanish below the current row, so pivot selection only looks at the row.
  std::vector<Int> diag(s, Int(0));
  for (int row = s - 1; row >= 0; --row) {
    for (;;) {
      int best = -1;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c][row] == 0) continue;
        if (best < 0 || abs(cols[c][row]) < abs(cols[best][row]))
          best = static_cast<int>(c);
      }
      if (best < 0)
        throw InternalInvariantError("hermite_diagonal: rank deficient");
      bool reduced = true;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (static_cast<int>(c) == best || cols[c][row] == 0) continue;
        Int quot;
        mpz_fdiv_q(quot.get_mpz_t(), cols[c][row].get_mpz_t(),
                   cols[best][row].get_mpz_t());
        for (int r = 0; r <= row; ++r) cols[c][r] -= quot * cols[best][r];
        if (cols[c][row] != 0) reduced = false;
      }
      if (reduced) {
        if (cols[best][row] < 0)
          for (int r = 0; r <= row; ++r) cols[best][r] = -cols[best][r];
        diag[row] = cols[best][row];
        cols.erase(cols.begin() + best);
        break;
      }
    }
  }
  return diag;
}

}  // namespace

Int count_twist_isoclasses(std::shared_ptr<const FiniteQuotient> Q, int n,
                           const EnumOptions& opts) {
  const FiniteQuotient& q = *Q;
  Int target = pow_int(q.prime(), static_cast<unsigned long>(n));
  if (target > q.order()) return 0;

  SubgroupBasis kernel = twist_kernel(q);
  auto whole_ab = abelianization(Q, SubgroupBasis::whole_group(q));
  const Int& p = q.prime();

  auto handles = enumerate_subgroups(Q, n, opts);
  std::vector<InducedPair> class_reps;
  for (const auto& h : handles) {
    auto ab = abelianization(Q, h.basis());
    const int s = static_cast<int>(ab->orders.size());

    // Lattice of exponent tuples of restrictions of whole-group characters,
    // together with the full character-group relations.
    std::vector<std::vector<Int>> cols;
    for (std::size_t l = 0; l < whole_ab->orders.size(); ++l) {
      std::vector<Int> col(s);
      std::vector<Int> psi_exps(whole_ab->orders.size(), Int(0));
      psi_exps[l] = 1;
      LinearCharacter psi(whole_ab, psi_exps);
      for (int i = 0; i < s; ++i) {
        QpModZp v = psi.evaluate(ab->basis[i]);
        int m = static_cast<int>(valuation_of(ab->orders[i], p));
        col[i] = angle_to_exponent(v, p, m);
      }
      cols.push_back(std::move(col));
    }
    for (int i = 0; i < s; ++i) {
      std::vector<Int> col(s, Int(0));
      col[i] = ab->orders[i];
      cols.push_back(std::move(col));
    }

    std::vector<Int> diag =
        s == 0 ? std::vector<Int>{} : hermite_diagonal(std::move(cols), s);
    Int rep_count = 1;
    for (const Int& d : diag) rep_count *= d;
    if (rep_count > opts.candidate_budget)
      throw BudgetExceededError("count_twist_isoclasses: character cosets over budget");

    // One exponent tuple per coset of the restriction image: twisting by
    // whole-group characters moves chi within its coset, so testing the
    // representative decides the whole coset.
    std::vector<Int> v(s, Int(0));
    for (;;) {
      InducedPair pair{Q, LinearCharacter(ab, v)};
      if (is_induced_irreducible(pair)) {
        bool placed = false;
        for (const auto& rep : class_reps)
          if (rep.degree() == pair.degree() &&
              twist_equivalent_impl(rep, pair, kernel)) {
            placed = true;
            break;
          }
        if (!placed) class_reps.push_back(std::move(pair));
      }
      int pos = 0;
      while (pos < s) {
        if (++v[pos] < diag[pos]) break;
        v[pos] = 0;
        ++pos;
      }
      if (pos == s) break;
    }
  }
  return Int(class_reps.size());
}

OracleContext make_oracle_context(std::shared_ptr<const FiniteQuotient> Q,
                                  const Int& budget) {
  const FiniteQuotient& q = *Q;
  if (q.order() > budget)
    throw BudgetExceededError("oracle: quotient exceeds oracle budget");
  Int raw = pow_int(Int(q.modulus()), static_cast<unsigned long>(q.rank()));
  if (raw > (Int(1) << 22))
    throw BudgetExceededError("oracle: coordinate space too large");

  OracleContext ctx;
  ctx.Q = Q;
  std::set<Coords> elems;
  Coords x(q.rank(), 0);
  for (;;) {
    elems.insert(q.reduce(x));
    int pos = 0;
    while (pos < q.rank()) {
      if (++x[pos] < q.modulus()) break;
      x[pos] = 0;
      ++pos;
    }
    if (pos == q.rank()) break;
  }
  ctx.elements.assign(elems.begin(), elems.end());

  std::map<Coords, std::size_t> elem_index;
  for (std::size_t i = 0; i < ctx.elements.size(); ++i)
    elem_index[ctx.elements[i]] = i;
  ctx.class_of.assign(ctx.elements.size(), SIZE_MAX);
  auto gens = group_generators(q);
  for (std::size_t i = 0; i < ctx.elements.size(); ++i) {
    if (ctx.class_of[i] != SIZE_MAX) continue;
    std::vector<std::size_t> orbit{i};
    ctx.class_of[i] = ctx.class_reps.size();
    for (std::size_t t = 0; t < orbit.size(); ++t)
      for (const auto& g : gens) {
        Coords c = q.reduce(
            q.free_conjugate(g, ctx.elements[orbit[t]]));
        std::size_t j = elem_index.at(c);
        if (ctx.class_of[j] == SIZE_MAX) {
          ctx.class_of[j] = ctx.class_reps.size();
          orbit.push_back(j);
        }
      }
    ctx.class_reps.push_back(ctx.elements[i]);
    ctx.class_sizes.push_back(Int(orbit.size()));
  }
  return ctx;
}

ClassFunction oracle_induced_table(const OracleContext& ctx,
                                   const InducedPair& pair) {
  const FiniteQuotient& q = *ctx.Q;
  const SubgroupBasis& H = pair.subgroup();
  Int h_order = q.order() / pair.degree();
  ClassFunction out;
  for (const auto& rep : ctx.class_reps) {
    CycloSum sum = CycloSum::zero(q.prime());
    for (const auto& x : ctx.elements) {
      Coords conj = q.reduce(q.free_conjugate(x, rep));
      // The relator quotient's subgroup is the preimage containing N, so
      // membership is tested in free coordinates on the reduced rep.
      if (!H.contains(conj)) continue;
      sum = sum + CycloSum::from_angle(pair.chi.evaluate(conj));
    }
    // Linear characters are constant on cosets of the summation variable,
    // so every group-ring coefficient is divisible by |H|.
    std::vector<Int> coeffs = sum.coeffs();
    CycloSum val = CycloSum::zero(q.prime(), sum.order_exponent());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] % h_order != 0)
        throw InternalInvariantError("oracle_induced_table: non-integral value");
      if (coeffs[j] != 0)
        val = val + CycloSum::scaled_root(q.prime(), sum.order_exponent(),
                                          Int(static_cast<unsigned long>(j)),
                                          coeffs[j] / h_order);
    }
    out.values.push_back(std::move(val));
  }
  return out;
}

Rational oracle_inner(const OracleContext& ctx, const ClassFunction& s1,
                      const ClassFunction& s2) {
  const Int& p = ctx.Q->prime();
  CycloSum acc = CycloSum::zero(p);
  for (std::size_t c = 0; c < ctx.class_reps.size(); ++c) {
    CycloSum term = s1.values[c] * s2.values[c].conjugate();
    acc = acc + term * CycloSum::constant(p, ctx.class_sizes[c]);
  }
  auto val = acc.rational_value();
  if (!val)
    throw InternalInvariantError("oracle_inner: inner product not rational");
  return *val / Rational(ctx.Q->order());
}

}  // namespace pzeta
