#include "pzeta/lattice.hpp"

#include <algorithm>
#include <limits>

namespace pzeta {

namespace {

constexpr long kExact = std::numeric_limits<long>::max();

// A p-adic quantity rep + O(p^abs_prec). abs_prec == kExact means exactly
// known. Interval rules are the usual ultrametric ones; a cancelled value
// becomes the marker (0, abs_prec) whose valuation is only bounded below.
struct Approx {
  Rational rep;
  long abs_prec = kExact;
};

struct Ctx {
  Int p;

  Approx normalized(Approx x) const {
    if (x.abs_prec != kExact && x.rep != 0 &&
        valuation_of(x.rep, p) >= x.abs_prec)
      x.rep = 0;
    return x;
  }

  long val_lower_bound(const Approx& x) const {
    if (x.rep == 0) return x.abs_prec;  // kExact for exact zero
    return std::min(valuation_of(x.rep, p), x.abs_prec);
  }

  Approx add(const Approx& a, const Approx& b) const {
    return normalized({a.rep + b.rep, std::min(a.abs_prec, b.abs_prec)});
  }

  Approx sub(const Approx& a, const Approx& b) const {
    return normalized({a.rep - b.rep, std::min(a.abs_prec, b.abs_prec)});
  }

  // Multiplication by an exactly known rational.
  Approx scale(const Approx& a, const Rational& c) const {
    if (c == 0) return {Rational(0), kExact};
    long shift = valuation_of(c, p);
    long A = a.abs_prec == kExact ? kExact : a.abs_prec + shift;
    return normalized({a.rep * c, A});
  }
};

Approx from_scalar(const PadicScalar& x) {
  if (x.is_zero()) return {Rational(0), kExact};
  return {x.representative(), x.valuation() + x.precision()};
}

// Canonical representative of the coset rep + p^e Z_p: the p-adic digits of
// rep strictly below position e.
Rational residue_below(const Rational& rep, const Int& p, long e) {
  if (rep == 0) return Rational(0);
  long v = valuation_of(rep, p);
  if (v >= e) return Rational(0);
  Rational unit = rep * pow_rational(p, -v);
  Int modulus = pow_int(p, static_cast<unsigned long>(e - v));
  Int u = mod_positive(Int(unit.get_num()) * invert_mod(Int(unit.get_den()), modulus),
                       modulus);
  return Rational(u) * pow_rational(p, v);
}

std::vector<std::vector<Rational>> invert_exact(
    const std::vector<std::vector<Rational>>& m) {
  int n = static_cast<int>(m.size());
  std::vector<std::vector<Rational>> a = m;
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw SingularInputError("matrix is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational d = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

TriangularBasis canonicalize_impl(const Int& p,
                                  std::vector<std::vector<Approx>> cols) {
  Ctx ctx{p};
  int n = static_cast<int>(cols.size());
  for (const auto& c : cols)
    if (static_cast<int>(c.size()) != n)
      throw InputError("canonicalize: matrix must be square");

  // Assign pivot rows bottom-up; only column operations are used.
  std::vector<int> position(n, -1);  // position[i] = column index placed at i
  std::vector<bool> used(n, false);
  std::vector<long> exponents(n, 0);
  for (int row = n - 1; row >= 0; --row) {
    int best = -1;
    long best_val = 0;
    long marker_bound = kExact;  // tightest unknown-valuation bound seen
    bool any_nonexact_zero = false;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      const Approx& x = cols[c][row];
      if (x.rep == 0) {
        if (x.abs_prec != kExact) {
          any_nonexact_zero = true;
          marker_bound = std::min(marker_bound, x.abs_prec);
        }
        continue;
      }
      long v = valuation_of(x.rep, p);
      if (best < 0 || v < best_val) {
        best = c;
        best_val = v;
      }
    }
    if (best < 0) {
      if (any_nonexact_zero)
        throw InsufficientPrecisionError(
            "canonicalize: pivot row vanishes to working precision");
      throw SingularInputError("canonicalize: generators do not span");
    }
    if (marker_bound <= best_val)
      throw InsufficientPrecisionError(
          "canonicalize: pivot choice depends on digits beyond precision");
    used[best] = true;
    position[row] = best;
    exponents[row] = best_val;

    // Scale the pivot column so the pivot entry is exactly p^{e}; the
    // leftover unit uncertainty is pushed onto the other entries.
    Approx& piv = cols[best][row];
    Rational s = pow_rational(p, best_val) / piv.rep;
    long piv_prec = piv.abs_prec;
    for (int r = 0; r < n; ++r) cols[best][r] = ctx.scale(cols[best][r], s);
    cols[best][row] = {pow_rational(p, best_val), kExact};
    if (piv_prec != kExact) {
      for (int r = 0; r < n; ++r) {
        if (r == row) continue;
        Approx& y = cols[best][r];
        if (y.rep != 0) {
          long bound = valuation_of(y.rep, p) + (piv_prec - best_val);
          y.abs_prec = std::min(y.abs_prec, bound);
          y = ctx.normalized(y);
        }
      }
    }

    // Clear this row in the remaining columns.
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      const Approx& x = cols[c][row];
      if (x.rep == 0) continue;
      Rational q = x.rep * pow_rational(p, -best_val);
      for (int r = 0; r < n; ++r)
        cols[c][r] = ctx.sub(cols[c][r], ctx.scale(cols[best][r], q));
      cols[c][row].rep = 0;
    }
  }

  // Reorder columns into triangular positions.
  std::vector<std::vector<Approx>> tri(n);
  for (int i = 0; i < n; ++i) tri[i] = cols[position[i]];

  // Reduce each above-diagonal entry (i,j), j > i, to its canonical residue
  // mod p^{e_i} by subtracting a Z_p multiple of column i.
  for (int j = 1; j < n; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      Approx& x = tri[j][i];
      if (x.abs_prec != kExact && x.abs_prec < exponents[i])
        throw InsufficientPrecisionError(
            "canonicalize: residue not determined at working precision");
      Rational r = residue_below(x.rep, p, exponents[i]);
      Rational q = (x.rep - r) * pow_rational(p, -exponents[i]);
      if (q != 0)
        for (int rr = 0; rr < n; ++rr)
          tri[j][rr] = ctx.sub(tri[j][rr], ctx.scale(tri[i][rr], q));
      tri[j][i].rep = r;
    }
  }

  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) {
    out[i][i] = pow_rational(p, exponents[i]);
    for (int j = i + 1; j < n; ++j) out[i][j] = tri[j][i].rep;
  }

  // Certificate: the residual uncertainty E must satisfy T^{-1}E ⊂ p M_n(Z_p)
  // so every true matrix within the tracked precision generates the same
  // lattice as the emitted canonical form.
  bool any_uncertain = false;
  for (int j = 0; j < n && !any_uncertain; ++j)
    for (int i = 0; i < n; ++i)
      if (tri[j][i].abs_prec != kExact) {
        any_uncertain = true;
        break;
      }
  if (any_uncertain) {
    auto inv = invert_exact(out);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        long worst = kExact;
        for (int rr = 0; rr < n; ++rr) {
          long aj = tri[c][rr].abs_prec;
          if (aj == kExact) continue;
          if (inv[r][rr] == 0) continue;
          worst = std::min(worst, valuation_of(inv[r][rr], p) + aj);
        }
        if (worst < 1)
          throw InsufficientPrecisionError(
              "canonicalize: lattice not determined at working precision");
      }
  }

  return TriangularBasis(p, std::move(exponents), std::move(out));
}

}  // namespace

TriangularBasis::TriangularBasis(Int prime, std::vector<long> diag_exponents,
                                 std::vector<std::vector<Rational>> entries)
    : prime_(std::move(prime)),
      exponents_(std::move(diag_exponents)),
      entries_(std::move(entries)) {
  std::size_t n = exponents_.size();
  if (entries_.size() != n)
    throw InputError("TriangularBasis: shape mismatch");
  for (const auto& row : entries_)
    if (row.size() != n) throw InputError("TriangularBasis: shape mismatch");
}

CosetPiece::CosetPiece(Int prime,
                       std::vector<std::vector<PadicScalar>> representative)
    : prime_(std::move(prime)), rep_(std::move(representative)) {
  for (const auto& row : rep_)
    if (row.size() != rep_.size())
      throw InputError("CosetPiece: representative must be square");
}

CosetPiece CosetPiece::from_rational(
    const Int& prime, const std::vector<std::vector<Rational>>& m,
    int precision_k) {
  std::vector<std::vector<PadicScalar>> rep;
  rep.reserve(m.size());
  for (const auto& row : m) {
    std::vector<PadicScalar> r;
    r.reserve(row.size());
    for (const auto& x : row)
      r.push_back(PadicScalar::from_rational(x, prime, precision_k));
    rep.push_back(std::move(r));
  }
  return CosetPiece(prime, std::move(rep));
}

TriangularBasis canonicalize(
    const Int& prime, const std::vector<std::vector<PadicScalar>>& columns) {
  std::vector<std::vector<Approx>> cols;
  cols.reserve(columns.size());
  for (const auto& col : columns) {
    std::vector<Approx> c;
    c.reserve(col.size());
    for (const auto& x : col) {
      if (x.prime() != prime)
        throw ContextMismatchError("canonicalize: mixed primes");
      c.push_back(from_scalar(x));
    }
    cols.push_back(std::move(c));
  }
  return canonicalize_impl(prime, std::move(cols));
}

TriangularBasis canonicalize_exact(
    const Int& prime, const std::vector<std::vector<Rational>>& columns) {
  std::vector<std::vector<Approx>> cols;
  cols.reserve(columns.size());
  for (const auto& col : columns) {
    std::vector<Approx> c;
    c.reserve(col.size());
    for (const auto& x : col) c.push_back({x, kExact});
    cols.push_back(std::move(c));
  }
  return canonicalize_impl(prime, std::move(cols));
}

Int lattice_index(const TriangularBasis& L) {
  Int idx = 1;
  for (long e : L.diag_exponents()) {
    if (e < 0)
      throw NotSublatticeError("lattice_index: not a sublattice of Z_p^N");
    idx *= pow_int(L.prime(), static_cast<unsigned long>(e));
  }
  return idx;
}

namespace {

// Columns of the representative matrix, as Approx values.
std::vector<std::vector<Approx>> piece_columns(const CosetPiece& A) {
  int m = A.dimension();
  std::vector<std::vector<Approx>> cols(m, std::vector<Approx>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cols[j][i] = from_scalar(A.representative()[i][j]);
  return cols;
}

long det_valuation(const CosetPiece& A) {
  TriangularBasis t = canonicalize_impl(A.prime(), piece_columns(A));
  long v = 0;
  for (long e : t.diag_exponents()) v += e;
  return v;
}

}  // namespace

Rational haar_coset_measure(const CosetPiece& A) {
  long v = det_valuation(A);
  return pow_rational(A.prime(), -static_cast<long>(A.dimension()) * v);
}

Rational residue_count_oracle(const CosetPiece& A, int k,
                              const Int& enumeration_budget) {
  const Int& p = A.prime();
  int m = A.dimension();
  TriangularBasis T = canonicalize_impl(p, piece_columns(A));
  long max_e = 0;
  for (long e : T.diag_exponents()) {
    if (e < 0)
      throw InputError("residue_count_oracle: canonical form has negative valuation");
    max_e = std::max(max_e, e);
  }
  if (k <= max_e)
    throw InputError("residue_count_oracle: p^k must exceed all pivot powers");

  Int total = pow_int(p, static_cast<unsigned long>(k) * m * m);
  if (total > enumeration_budget)
    throw BudgetExceededError("residue_count_oracle: enumeration too large");

  Int pk_big = pow_int(p, static_cast<unsigned long>(k));
  if (!pk_big.fits_slong_p() || pk_big > (Int(1) << 31))
    throw BudgetExceededError("residue_count_oracle: modulus too large");
  const std::uint64_t pk = pk_big.get_ui();
  const std::uint64_t pl = Int(p).get_ui();

  // Integer canonical form mod p^k.
  std::vector<std::vector<std::uint64_t>> t(m, std::vector<std::uint64_t>(m, 0));
  std::vector<long> e = T.diag_exponents();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Rational x = T.matrix()[i][j];
      if (x.get_den() != 1)
        throw InternalInvariantError("residue_count_oracle: non-integral form");
      t[i][j] = mod_positive(Int(x.get_num()), pk_big).get_ui();
    }
  // Unit inverses of the diagonal cofactors p^{-e_i}: division by p^{e_i}
  // is done on integers after a divisibility check.
  std::vector<std::uint64_t> pe(m);
  for (int i = 0; i < m; ++i)
    pe[i] = pow_int(p, static_cast<unsigned long>(e[i])).get_ui();

  std::uint64_t count = 0;
  std::vector<std::uint64_t> x(m * m, 0);
  std::vector<std::vector<std::uint64_t>> y(m, std::vector<std::uint64_t>(m));
  std::vector<std::vector<std::uint64_t>> ymodp(m, std::vector<std::uint64_t>(m));

  // Odometer over all residue matrices mod p^k.
  for (;;) {
    // Solve T.Y = X bottom-up; membership iff every division is exact and
    // det(Y) is a unit mod p.
    bool member = true;
    for (int i = m - 1; i >= 0 && member; --i) {
      for (int c = 0; c < m; ++c) {
        std::uint64_t rhs = x[static_cast<std::size_t>(i) * m + c];
        for (int j = i + 1; j < m; ++j) {
          std::uint64_t sub = (t[i][j] * y[j][c]) % pk;
          rhs = (rhs + pk - sub) % pk;
        }
        if (rhs % pe[i] != 0) {
          member = false;
          break;
        }
        y[i][c] = rhs / pe[i];
      }
    }
    if (member) {
      std::uint64_t det;
      if (m == 1) {
        det = y[0][0] % pl;
      } else if (m == 2) {
        std::uint64_t a = (y[0][0] * y[1][1]) % pl;
        std::uint64_t b = (y[0][1] * y[1][0]) % pl;
        det = (a + pl - b) % pl;
      } else {
        for (int i = 0; i < m; ++i)
          for (int c = 0; c < m; ++c) ymodp[i][c] = y[i][c] % pl;
        // det mod p by Gaussian elimination over F_p.
        det = 1;
        for (int col = 0; col < m && det != 0; ++col) {
          int piv = -1;
          for (int r = col; r < m; ++r)
            if (ymodp[r][col] % pl != 0) {
              piv = r;
              break;
            }
          if (piv < 0) {
            det = 0;
            break;
          }
          if (piv != col) std::swap(ymodp[piv], ymodp[col]);
          std::uint64_t d = ymodp[col][col] % pl;
          det = (det * d) % pl;
          std::uint64_t dinv = invert_mod(Int(d), p).get_ui();
          for (int r = col + 1; r < m; ++r) {
            std::uint64_t f = (ymodp[r][col] * dinv) % pl;
            if (f == 0) continue;
            for (int c = col; c < m; ++c) {
              std::uint64_t sub = (f * ymodp[col][c]) % pl;
              ymodp[r][c] = (ymodp[r][c] + pl - sub) % pl;
            }
          }
        }
      }
      if (det != 0) ++count;
    }
    // Advance the odometer.
    int pos = 0;
    while (pos < m * m) {
      if (++x[pos] < pk) break;
      x[pos] = 0;
      ++pos;
    }
    if (pos == m * m) break;
  }

  return Rational(Int(count)) / Rational(total);
}

TriangularBasis encode_torsor(const TriangularBasis& e,
                              const std::vector<Rational>& h) {
  int n = e.dimension();
  if (static_cast<int>(h.size()) != n)
    throw InputError("encode_torsor: vector dimension mismatch");
  const Int& p = e.prime();
  std::vector<std::vector<Rational>> cols;
  // Columns of p*e, padded with a zero last coordinate.
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> col(n + 1, Rational(0));
    for (int i = 0; i < n; ++i) col[i] = Rational(p) * e.matrix()[i][j];
    cols.push_back(std::move(col));
  }
  std::vector<Rational> hc(h);
  hc.push_back(Rational(1));
  cols.push_back(std::move(hc));
  return canonicalize_exact(p, cols);
}

Int count_via_integral(const std::vector<std::vector<CosetPiece>>& pieces) {
  // Disjointness is a caller contract, checked pairwise at the level of
  // canonical forms: identical factor tuples denote the same coset product.
  std::vector<std::vector<TriangularBasis>> forms;
  for (const auto& piece : pieces) {
    std::vector<TriangularBasis> f;
    for (const auto& factor : piece)
      f.push_back(canonicalize_impl(factor.prime(), piece_columns(factor)));
    for (const auto& seen : forms)
      if (seen == f)
        throw InputError("count_via_integral: pieces are not disjoint");
    forms.push_back(std::move(f));
  }

  Rational sum = 0;
  for (const auto& piece : pieces) {
    Rational prod = 1;
    for (const auto& factor : piece) {
      long g = static_cast<long>(factor.dimension()) * det_valuation(factor);
      // mu(B.GL) * p^{-g} with g = log_p |det B|^M evaluated on the piece.
      prod *= haar_coset_measure(factor) * pow_rational(factor.prime(), g);
    }
    sum += prod;
  }
  if (sum.get_den() != 1)
    throw InternalInvariantError("count_via_integral: non-integral total");
  return Int(sum.get_num());
}

}  // namespace pzeta
