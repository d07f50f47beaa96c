#include "pzeta/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace pzeta {

namespace {

std::vector<Int> scaled_word(const std::vector<Int>& w, const Int& c) {
  std::vector<Int> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] * c;
  return out;
}

void add_scaled_word(std::vector<Int>& acc, const std::vector<Int>& w,
                     const Int& c) {
  for (std::size_t i = 0; i < w.size(); ++i) acc[i] += w[i] * c;
}

}  // namespace

struct SubgroupBasis::Builder {
  const FiniteQuotient& q;
  int R;
  int k;
  bool track_words;
  std::size_t n_gens = 0;
  std::vector<int> e;
  std::vector<Coords> rows;
  std::vector<std::vector<Int>> words;

  // Consequence tasks (overflows and commutators of installed rows) are
  // evaluated lazily on pop against the current rows, so closures that abort
  // early never pay for them. Re-installing a row re-enqueues its tasks,
  // which keeps the fixpoint sound.
  struct Task {
    enum Kind { Element, Overflow, Commutator } kind;
    Coords x;
    std::vector<Int> w;
    int a = -1, b = -1;
  };
  std::deque<Task> work;
  std::vector<std::uint64_t> pe;  // p^0..p^k
  long exponent_sum;              // sum of e_i, decreases monotonically
  long min_exponent_sum = -1;     // abort threshold; -1 disables
  bool aborted = false;

  explicit Builder(const FiniteQuotient& quot, bool with_words)
      : q(quot), R(quot.rank()), k(quot.precision()), track_words(with_words) {
    e.assign(R, k);
    rows.assign(R, quot.free_identity());
    words.assign(R, {});
    pe.resize(k + 1);
    pe[0] = 1;
    for (int i = 1; i <= k; ++i) pe[i] = pe[i - 1] * q.p_ui();
    exponent_sum = static_cast<long>(R) * k;
  }

  std::vector<Int> zero_word() const {
    return std::vector<Int>(track_words ? n_gens : 0, Int(0));
  }

  void push_element(Coords x, std::vector<Int> w) {
    work.push_back(Task{Task::Element, std::move(x), std::move(w)});
  }

  void enqueue_consequences(int lvl) {
    work.push_back(Task{Task::Overflow, {}, {}, lvl});
    for (int j = 0; j < R; ++j) {
      if (j == lvl || e[j] >= k) continue;
      work.push_back(Task{Task::Commutator, {}, {}, lvl, j});
      work.push_back(Task{Task::Commutator, {}, {}, j, lvl});
    }
  }

  void install(int lvl, int v, Coords x, std::vector<Int> w) {
    // Normalize so the leading coordinate is exactly p^v; raising to a unit
    // power keeps the generated subgroup unchanged in a p-group.
    std::uint64_t u = x[lvl] / pe[v];
    Int mult = invert_mod(Int(u), pow_int(q.prime(),
                                          static_cast<unsigned long>(k - v)));
    if (mult != 1) {
      x = q.free_power(x, mult);
      if (track_words) w = scaled_word(w, mult);
    }
    exponent_sum -= e[lvl] - v;
    rows[lvl] = std::move(x);
    e[lvl] = v;
    if (track_words) words[lvl] = std::move(w);
    if (min_exponent_sum >= 0 && exponent_sum < min_exponent_sum) {
      aborted = true;
      return;
    }
    enqueue_consequences(lvl);
  }

  void reduce_add(Coords x, std::vector<Int> w) {
    for (;;) {
      int lvl = -1;
      for (int i = 0; i < R; ++i)
        if (x[i] != 0) {
          lvl = i;
          break;
        }
      if (lvl < 0) return;
      int v = q.coord_valuation(x[lvl]);
      if (e[lvl] >= k) {
        install(lvl, v, std::move(x), std::move(w));
        return;
      }
      if (v >= e[lvl]) {
        std::uint64_t quot = x[lvl] / pe[e[lvl]];
        x = q.free_multiply(
            q.free_inverse(q.free_power_u64(rows[lvl], quot)), x);
        if (track_words)
          add_scaled_word(w, words[lvl], -Int(static_cast<unsigned long>(quot)));
        continue;
      }
      Coords old = rows[lvl];
      std::vector<Int> old_w = track_words ? words[lvl] : std::vector<Int>{};
      install(lvl, v, std::move(x), std::move(w));
      push_element(std::move(old), std::move(old_w));
      return;
    }
  }

  void run_task(Task&& t) {
    switch (t.kind) {
      case Task::Element:
        reduce_add(std::move(t.x), std::move(t.w));
        return;
      case Task::Overflow: {
        if (e[t.a] >= k) return;
        std::uint64_t over = pe[k - e[t.a]];
        std::vector<Int> w =
            track_words
                ? scaled_word(words[t.a], Int(static_cast<unsigned long>(over)))
                : std::vector<Int>{};
        reduce_add(q.free_power_u64(rows[t.a], over), std::move(w));
        return;
      }
      case Task::Commutator:
        if (e[t.a] >= k || e[t.b] >= k) return;
        reduce_add(q.free_commutator(rows[t.a], rows[t.b]), zero_word());
        return;
    }
  }

  void run(const std::vector<Coords>& gens) {
    n_gens = gens.size();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      std::vector<Int> w = zero_word();
      if (track_words) w[i] = 1;
      push_element(gens[i], std::move(w));
    }
    while (!work.empty()) {
      if (aborted) return;
      Task t = std::move(work.front());
      work.pop_front();
      run_task(std::move(t));
    }
    if (aborted) return;
    canonical_reduce();
  }

  // Reduce coordinate j of each row into [0, p^{e_j}) against the rows
  // below it; this is the unique canonical representative of the row
  // modulo the higher part of the subgroup.
  void canonical_reduce() {
    for (int i = 0; i < R; ++i) {
      if (e[i] >= k) continue;
      for (int j = i + 1; j < R; ++j) {
        if (e[j] >= k) continue;
        std::uint64_t c = rows[i][j];
        std::uint64_t quot = c / pe[e[j]];
        if (quot == 0) continue;
        Int qn(static_cast<unsigned long>(quot));
        rows[i] = q.free_multiply(rows[i], q.free_power(rows[j], -qn));
        if (track_words) add_scaled_word(words[i], words[j], -qn);
      }
    }
  }
};

SubgroupBasis SubgroupBasis::trivial(const FiniteQuotient& q) {
  SubgroupBasis b;
  b.q_ = &q;
  b.e_.assign(q.rank(), q.precision());
  b.rows_.assign(q.rank(), q.free_identity());
  return b;
}

SubgroupBasis SubgroupBasis::whole_group(const FiniteQuotient& q) {
  SubgroupBasis b;
  b.q_ = &q;
  b.e_.assign(q.rank(), 0);
  b.rows_.resize(q.rank());
  for (int i = 0; i < q.rank(); ++i) {
    Coords g(q.rank(), 0);
    g[i] = 1;
    b.rows_[i] = g;
  }
  return b;
}

SubgroupBasis SubgroupBasis::closure(const FiniteQuotient& q,
                                     const std::vector<Coords>& gens) {
  Builder b(q, false);
  b.run(gens);
  SubgroupBasis out;
  out.q_ = &q;
  out.e_ = std::move(b.e);
  out.rows_ = std::move(b.rows);
  return out;
}

std::optional<SubgroupBasis> SubgroupBasis::closure_bounded(
    const FiniteQuotient& q, const std::vector<Coords>& gens,
    int min_index_exponent) {
  Builder b(q, false);
  b.min_exponent_sum = min_index_exponent;
  b.run(gens);
  if (b.aborted) return std::nullopt;
  SubgroupBasis out;
  out.q_ = &q;
  out.e_ = std::move(b.e);
  out.rows_ = std::move(b.rows);
  return out;
}

SubgroupBasis::WithWords SubgroupBasis::closure_with_words(
    const FiniteQuotient& q, const std::vector<Coords>& gens) {
  Builder b(q, true);
  b.run(gens);
  WithWords out;
  out.basis.q_ = &q;
  out.basis.e_ = std::move(b.e);
  out.basis.rows_ = std::move(b.rows);
  out.row_words = std::move(b.words);
  return out;
}

std::vector<int> SubgroupBasis::row_levels() const {
  std::vector<int> lv;
  for (int i = 0; i < rank(); ++i)
    if (has_row(i)) lv.push_back(i);
  return lv;
}

Int SubgroupBasis::order() const {
  Int o = 1;
  for (int i = 0; i < rank(); ++i)
    o *= pow_int(q_->prime(),
                 static_cast<unsigned long>(q_->precision() - e_[i]));
  return o;
}

Int SubgroupBasis::index() const {
  Int o = 1;
  for (int i = 0; i < rank(); ++i)
    o *= pow_int(q_->prime(), static_cast<unsigned long>(e_[i]));
  return o;
}

std::optional<std::vector<Int>> SubgroupBasis::decompose(const Coords& x) const {
  std::vector<Int> nu(rank(), Int(0));
  Coords cur = x;
  for (int i = 0; i < rank(); ++i) {
    if (cur[i] == 0) continue;
    if (!has_row(i)) return std::nullopt;
    std::uint64_t pei = 1;
    for (int t = 0; t < e_[i]; ++t) pei *= q_->p_ui();
    if (cur[i] % pei != 0) return std::nullopt;
    nu[i] = Int(static_cast<unsigned long>(cur[i] / pei));
    cur = q_->free_multiply(q_->free_power(rows_[i], -nu[i]), cur);
  }
  if (!q_->is_identity(cur)) return std::nullopt;
  return nu;
}

bool SubgroupBasis::contains(const Coords& x) const {
  return decompose(x).has_value();
}

bool SubgroupBasis::contains_subgroup(const SubgroupBasis& other) const {
  for (int i = 0; i < other.rank(); ++i)
    if (other.has_row(i) && !contains(other.rows_[i])) return false;
  return true;
}

Coords SubgroupBasis::coset_rep(const Coords& x) const {
  Coords cur = x;
  for (int i = 0; i < rank(); ++i) {
    if (!has_row(i)) continue;
    std::uint64_t pei = 1;
    for (int t = 0; t < e_[i]; ++t) pei *= q_->p_ui();
    std::uint64_t quot = cur[i] / pei;
    if (quot == 0) continue;
    cur = q_->free_multiply(cur, q_->free_power(rows_[i], -Int(static_cast<unsigned long>(quot))));
  }
  return cur;
}

std::vector<Coords> SubgroupBasis::elements(const Int& budget) const {
  if (order() > budget)
    throw BudgetExceededError("SubgroupBasis::elements: subgroup too large");
  std::vector<Coords> out;
  out.push_back(q_->free_identity());
  for (int i = rank() - 1; i >= 0; --i) {
    if (!has_row(i)) continue;
    Int reps = pow_int(q_->prime(),
                       static_cast<unsigned long>(q_->precision() - e_[i]));
    std::vector<Coords> next;
    next.reserve(out.size() * reps.get_ui());
    Coords power = q_->free_identity();
    for (Int t = 0; t < reps; ++t) {
      for (const auto& tail : out) next.push_back(q_->free_multiply(power, tail));
      power = q_->free_multiply(power, rows_[i]);
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SubgroupBasis SubgroupBasis::conjugated(const Coords& g) const {
  std::vector<Coords> gens;
  for (int i = 0; i < rank(); ++i)
    if (has_row(i)) gens.push_back(q_->free_conjugate(g, rows_[i]));
  return closure(*q_, gens);
}

bool SubgroupBasis::is_normal() const {
  for (int i = 0; i < q_->rank(); ++i) {
    Coords g(q_->rank(), 0);
    g[i] = 1;
    for (int r = 0; r < rank(); ++r)
      if (has_row(r) && !contains(q_->free_conjugate(g, rows_[r]))) return false;
  }
  return true;
}

SubgroupBasis normal_closure(const FiniteQuotient& q,
                             const std::vector<Coords>& gens) {
  SubgroupBasis n = SubgroupBasis::closure(q, gens);
  for (;;) {
    std::vector<Coords> extra;
    for (int i = 0; i < q.rank(); ++i) {
      Coords g(q.rank(), 0);
      g[i] = 1;
      for (int r = 0; r < n.rank(); ++r) {
        if (!n.has_row(r)) continue;
        Coords c = q.free_conjugate(g, n.rows()[r]);
        if (!n.contains(c)) extra.push_back(c);
      }
    }
    if (extra.empty()) return n;
    std::vector<Coords> all;
    for (int r = 0; r < n.rank(); ++r)
      if (n.has_row(r)) all.push_back(n.rows()[r]);
    all.insert(all.end(), extra.begin(), extra.end());
    n = SubgroupBasis::closure(q, all);
  }
}

SubgroupBasis commutator_subgroup(const FiniteQuotient& q,
                                  const SubgroupBasis& H) {
  std::vector<Coords> gens;
  std::vector<int> lv = H.row_levels();
  for (std::size_t a = 0; a < lv.size(); ++a)
    for (std::size_t b = a + 1; b < lv.size(); ++b)
      gens.push_back(q.free_commutator(H.rows()[lv[a]], H.rows()[lv[b]]));
  SubgroupBasis d = SubgroupBasis::closure(q, gens);
  // Close under conjugation by H: [H,H] is the normal closure in H of the
  // generator commutators.
  for (;;) {
    std::vector<Coords> extra;
    for (int hl : lv)
      for (int r = 0; r < d.rank(); ++r) {
        if (!d.has_row(r)) continue;
        Coords c = q.free_conjugate(H.rows()[hl], d.rows()[r]);
        if (!d.contains(c)) extra.push_back(c);
      }
    if (extra.empty()) return d;
    std::vector<Coords> all;
    for (int r = 0; r < d.rank(); ++r)
      if (d.has_row(r)) all.push_back(d.rows()[r]);
    all.insert(all.end(), extra.begin(), extra.end());
    d = SubgroupBasis::closure(q, all);
  }
}

SubgroupBasis join(const FiniteQuotient& q, const SubgroupBasis& a,
                   const SubgroupBasis& b) {
  std::vector<Coords> gens;
  for (int r = 0; r < a.rank(); ++r)
    if (a.has_row(r)) gens.push_back(a.rows()[r]);
  for (int r = 0; r < b.rank(); ++r)
    if (b.has_row(r)) gens.push_back(b.rows()[r]);
  return SubgroupBasis::closure(q, gens);
}

CosetOrbit coset_orbit(const FiniteQuotient& q, const SubgroupBasis& A,
                       const Coords& base, const std::vector<Coords>& actor_gens,
                       bool want_stabilizer) {
  CosetOrbit orbit;
  std::map<Coords, std::size_t> index;
  orbit.points.push_back(A.coset_rep(base));
  orbit.transversal.push_back(q.free_identity());
  index[orbit.points[0]] = 0;
  std::map<Coords, bool> stab_seen;
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    for (const auto& s : actor_gens) {
      Coords y = A.coset_rep(q.free_multiply(s, orbit.points[i]));
      auto it = index.find(y);
      if (it == index.end()) {
        index[y] = orbit.points.size();
        orbit.points.push_back(y);
        orbit.transversal.push_back(q.free_multiply(s, orbit.transversal[i]));
      } else if (want_stabilizer) {
        // Schreier generator t_y^{-1} s t_x of the base-point stabilizer.
        Coords g = q.free_multiply(
            q.free_inverse(orbit.transversal[it->second]),
            q.free_multiply(s, orbit.transversal[i]));
        if (!q.is_identity(g) && !stab_seen.count(g)) {
          stab_seen[g] = true;
          orbit.stabilizer_gens.push_back(std::move(g));
        }
      }
    }
  }
  return orbit;
}

Int AbelianStructure::order() const {
  Int o = 1;
  for (const Int& d : all_orders) o *= d;
  return o;
}

std::vector<Int> AbelianStructure::decompose(const Coords& h) const {
  auto nu_full = domain.decompose(h);
  if (!nu_full)
    throw InternalInvariantError("AbelianStructure: element not in domain");
  std::vector<Int> nu;
  nu.reserve(levels.size());
  for (int lv : levels) nu.push_back((*nu_full)[lv]);
  std::vector<Int> out;
  out.reserve(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    Int t = 0;
    for (std::size_t c = 0; c < nu.size(); ++c)
      t += transform[kept[r]][c] * nu[c];
    out.push_back(mod_positive(t, orders[r]));
  }
  return out;
}

SmithResult smith_normal_form(std::vector<std::vector<Int>> m) {
  const int n = static_cast<int>(m.size());
  SmithResult res;
  res.U.assign(n, std::vector<Int>(n, 0));
  res.U_inv.assign(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) res.U[i][i] = res.U_inv[i][i] = 1;

  auto row_swap = [&](int a, int b) {
    std::swap(m[a], m[b]);
    std::swap(res.U[a], res.U[b]);
    for (int i = 0; i < n; ++i) std::swap(res.U_inv[i][a], res.U_inv[i][b]);
  };
  auto row_sub = [&](int a, int b, const Int& c) {
    // row a -= c * row b; inverse is a column operation on U_inv.
    for (int j = 0; j < n; ++j) {
      m[a][j] -= c * m[b][j];
      res.U[a][j] -= c * res.U[b][j];
    }
    for (int i = 0; i < n; ++i) res.U_inv[i][b] += c * res.U_inv[i][a];
  };
  auto row_neg = [&](int a) {
    for (int j = 0; j < n; ++j) {
      m[a][j] = -m[a][j];
      res.U[a][j] = -res.U[a][j];
    }
    for (int i = 0; i < n; ++i) res.U_inv[i][a] = -res.U_inv[i][a];
  };
  auto col_swap = [&](int a, int b) {
    for (int i = 0; i < n; ++i) std::swap(m[i][a], m[i][b]);
  };
  auto col_sub = [&](int a, int b, const Int& c) {
    for (int i = 0; i < n; ++i) m[i][a] -= c * m[i][b];
  };

  for (int t = 0; t < n; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      Int best;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (m[i][j] != 0 && (pi < 0 || abs(m[i][j]) < best)) {
            best = abs(m[i][j]);
            pi = i;
            pj = j;
          }
      if (pi < 0)
        throw InternalInvariantError("smith_normal_form: rank deficient");
      if (pi != t) row_swap(pi, t);
      if (pj != t) col_swap(pj, t);
      if (m[t][t] < 0) row_neg(t);
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        if (m[i][t] == 0) continue;
        Int quot;
        mpz_fdiv_q(quot.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
        row_sub(i, t, quot);
        if (m[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        if (m[t][j] == 0) continue;
        Int quot;
        mpz_fdiv_q(quot.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
        col_sub(j, t, quot);
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
  }
  res.diagonal.resize(n);
  for (int i = 0; i < n; ++i) res.diagonal[i] = m[i][i];
  return res;
}

AbelianStructure abelian_quotient(const FiniteQuotient& q,
                                  const SubgroupBasis& H,
                                  const SubgroupBasis& K) {
  AbelianStructure a;
  a.domain = H;
  a.levels = H.row_levels();
  const int m = static_cast<int>(a.levels.size());
  if (m == 0) return a;

  const Int p = q.prime();
  std::vector<Coords> k_rows;
  for (int r = 0; r < K.rank(); ++r)
    if (K.has_row(r)) k_rows.push_back(K.rows()[r]);

  // Triangular relation lattice of A = H/K over the polycyclic generators
  // x_j = row at level_j: p^{f_j} x_j = sum_{l>j} c_l x_l in A, where f_j is
  // minimal with x_j^{p^{f_j}} in <K, x_{j+1}, ..., x_m>.
  std::vector<std::vector<Int>> rel(m, std::vector<Int>(m, Int(0)));
  for (int j = 0; j < m; ++j) {
    std::vector<Coords> gens = k_rows;
    for (int l = j + 1; l < m; ++l) gens.push_back(H.rows()[a.levels[l]]);
    auto mj = SubgroupBasis::closure_with_words(q, gens);
    Coords z = H.rows()[a.levels[j]];
    int f = 0;
    while (!mj.basis.contains(z)) {
      z = q.free_power(z, p);
      ++f;
      if (f > 2 * q.precision() + 2)
        throw InternalInvariantError("abelian_quotient: relation search diverged");
    }
    rel[j][j] = pow_int(p, static_cast<unsigned long>(f));
    auto nu = mj.basis.decompose(z);
    if (!nu)
      throw InternalInvariantError("abelian_quotient: witness decomposition failed");
    std::vector<Int> word(gens.size(), Int(0));
    for (int r = 0; r < mj.basis.rank(); ++r)
      if (mj.basis.has_row(r)) add_scaled_word(word, mj.row_words[r], (*nu)[r]);
    for (int l = j + 1; l < m; ++l)
      rel[l][j] = -word[k_rows.size() + static_cast<std::size_t>(l - j - 1)];
  }

  // The triangular relations span the full relation lattice: their index
  // matches |H/K| by the polycyclic orbit-stabilizer chain.
  Int chain_order = 1;
  for (int j = 0; j < m; ++j) chain_order *= rel[j][j];
  if (chain_order * K.order() != H.order())
    throw InternalInvariantError("abelian_quotient: relation lattice mismatch");

  SmithResult snf = smith_normal_form(rel);
  a.transform = snf.U;
  a.all_orders = snf.diagonal;
  for (int i = 0; i < m; ++i) {
    const Int& d = snf.diagonal[i];
    if (d == 1) continue;
    a.kept.push_back(i);
    a.orders.push_back(d);
    Coords b = q.free_identity();
    for (int l = 0; l < m; ++l)
      b = q.free_multiply(
          b, q.free_power(H.rows()[a.levels[l]], snf.U_inv[l][i]));
    a.basis.push_back(std::move(b));
  }
  return a;
}

}  // namespace pzeta
