#include "pzeta/enumerate.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "pzeta/characters.hpp"

namespace pzeta {

CountVariant parse_variant(const std::string& name) {
  if (name == "all") return CountVariant::All;
  if (name == "normal") return CountVariant::Normal;
  if (name == "conjugacy") return CountVariant::ConjugacyClasses;
  if (name == "quotient-iso") return CountVariant::QuotientIso;
  if (name == "twist") return CountVariant::TwistIsoclasses;
  if (name == "pro-p-iso") return CountVariant::ProPIso;
  if (name == "pro-p-equivalence") return CountVariant::ProPEquivalence;
  throw InputError("unknown variant: " + name);
}

std::string variant_name(CountVariant v) {
  switch (v) {
    case CountVariant::All: return "all";
    case CountVariant::Normal: return "normal";
    case CountVariant::ConjugacyClasses: return "conjugacy";
    case CountVariant::QuotientIso: return "quotient-iso";
    case CountVariant::TwistIsoclasses: return "twist";
    case CountVariant::ProPIso: return "pro-p-iso";
    case CountVariant::ProPEquivalence: return "pro-p-equivalence";
  }
  return "?";
}

SubgroupHandle::SubgroupHandle(std::shared_ptr<const FiniteQuotient> parent,
                               SubgroupBasis basis,
                               std::optional<GoodBasis> good_basis,
                               std::optional<std::vector<Coords>> elements)
    : parent_(std::move(parent)),
      basis_(std::move(basis)),
      good_basis_(std::move(good_basis)),
      elements_(std::move(elements)) {
  index_ = basis_.index();
  element_count_ = parent_->order() / index_;
}

std::string SubgroupHandle::fingerprint() const {
  std::ostringstream out;
  if (elements_) {
    for (const auto& e : *elements_) {
      for (std::uint64_t c : e) out << c << ",";
      out << ";";
    }
  } else {
    out << "basis:";
    for (int i = 0; i < basis_.rank(); ++i) {
      out << basis_.exponents()[i] << ":";
      for (std::uint64_t c : basis_.rows()[i]) out << c << ",";
      out << ";";
    }
  }
  return out.str();
}

bool is_normal(const SubgroupHandle& h) { return h.basis().is_normal(); }

namespace {

// Canonical elements of the (relator-aware) quotient Q-bar underlying H.
std::vector<Coords> reduced_elements(const FiniteQuotient& q,
                                     const SubgroupBasis& basis,
                                     const Int& budget) {
  std::vector<Coords> raw = basis.elements(budget);
  if (!q.has_relators()) return raw;
  std::set<Coords> dedup;
  for (const auto& x : raw) dedup.insert(q.reduce(x));
  return std::vector<Coords>(dedup.begin(), dedup.end());
}

struct CandidateChunkResult {
  std::map<SubgroupBasis, GoodBasis> found;
};

std::vector<std::vector<int>> compositions(int n, int parts, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts, 0);
  // Lexicographic enumeration of (e_1..e_R) with sum n, entries <= cap.
  auto rec = [&](auto&& self, int pos, int rest) -> void {
    if (pos == parts) {
      if (rest == 0) out.push_back(cur);
      return;
    }
    for (int v = 0; v <= std::min(rest, cap); ++v) {
      cur[pos] = v;
      self(self, pos + 1, rest - v);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, n);
  return out;
}

Int count_candidates(const std::vector<int>& comp, const Int& p) {
  Int total = 1;
  for (std::size_t j = 0; j < comp.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      total *= pow_int(p, static_cast<unsigned long>(comp[j]));
  return total;
}

CandidateChunkResult enumerate_chunk(const FiniteQuotient& q,
                                     const std::vector<std::vector<int>>& comps,
                                     int n, const Int& index_target,
                                     const std::vector<Coords>& relator_rows) {
  CandidateChunkResult res;
  const int R = q.rank();
  std::vector<std::uint64_t> pe(q.precision() + 1);
  pe[0] = 1;
  for (int i = 1; i <= q.precision(); ++i) pe[i] = pe[i - 1] * q.p_ui();

  // powtab[j][t] = a_j^t for t in [0, p^k].
  std::vector<std::vector<Coords>> powtab(R);
  for (int j = 0; j < R; ++j) {
    Coords a(R, 0);
    a[j] = 1;
    Coords acc = q.free_identity();
    powtab[j].push_back(acc);
    for (std::uint64_t t = 1; t <= pe[q.precision()]; ++t) {
      acc = q.free_multiply(acc, a);
      powtab[j].push_back(acc);
    }
  }

  for (const auto& comp : comps) {
    // Off-diagonal positions (i,j), j > i, each ranging over [0, p^{e_j}).
    std::vector<std::pair<int, int>> slots;
    for (int j = 0; j < R; ++j)
      for (int i = 0; i < j; ++i)
        if (comp[j] > 0) slots.emplace_back(i, j);
    std::vector<std::uint64_t> odo(slots.size(), 0);

    for (;;) {
      GoodBasis gb;
      gb.diag_exponents = comp;
      gb.lambda.assign(R, std::vector<std::uint64_t>(R, 0));
      for (int i = 0; i < R; ++i) gb.lambda[i][i] = pe[comp[i]];
      for (std::size_t s = 0; s < slots.size(); ++s)
        gb.lambda[slots[s].first][slots[s].second] = odo[s];

      std::vector<Coords> gens;
      gens.reserve(R + relator_rows.size());
      for (int i = 0; i < R; ++i) {
        Coords h = powtab[i][gb.lambda[i][i]];
        for (int j = i + 1; j < R; ++j)
          if (gb.lambda[i][j] != 0)
            h = q.free_multiply(h, powtab[j][gb.lambda[i][j]]);
        gens.push_back(std::move(h));
      }
      for (const auto& r : relator_rows) gens.push_back(r);

      auto basis = SubgroupBasis::closure_bounded(q, gens, n);
      if (basis && basis->index() == index_target) {
        auto it = res.found.find(*basis);
        if (it == res.found.end())
          res.found.emplace(std::move(*basis), std::move(gb));
        else if (gb < it->second)
          it->second = gb;
      }

      std::size_t pos = 0;
      while (pos < slots.size()) {
        if (++odo[pos] < pe[comp[slots[pos].second]]) break;
        odo[pos] = 0;
        ++pos;
      }
      if (pos == slots.size()) break;
    }
  }
  return res;
}

}  // namespace

std::vector<SubgroupHandle> enumerate_subgroups(
    std::shared_ptr<const FiniteQuotient> Q, int n, const EnumOptions& opts) {
  if (n < 0) throw InputError("enumerate_subgroups: n must be >= 0");
  const FiniteQuotient& q = *Q;
  Int index_target = pow_int(q.prime(), static_cast<unsigned long>(n));
  std::vector<SubgroupHandle> out;
  if (index_target > q.order()) return out;

  std::vector<Coords> relator_rows;
  if (q.has_relators())
    for (int r = 0; r < q.relator_closure()->rank(); ++r)
      if (q.relator_closure()->has_row(r))
        relator_rows.push_back(q.relator_closure()->rows()[r]);

  int cap = std::min(n, q.precision());
  auto comps = compositions(n, q.rank(), cap);
  Int total_candidates = 0;
  for (const auto& c : comps) total_candidates += count_candidates(c, q.prime());
  if (total_candidates > opts.candidate_budget)
    throw BudgetExceededError("enumerate_subgroups: candidate budget exceeded");

  int workers = std::max(1, opts.workers);
  std::map<SubgroupBasis, GoodBasis> merged;
  if (workers == 1 || comps.size() <= 1) {
    auto res = enumerate_chunk(q, comps, n, index_target, relator_rows);
    merged = std::move(res.found);
  } else {
    std::vector<std::vector<std::vector<int>>> chunks(workers);
    for (std::size_t i = 0; i < comps.size(); ++i)
      chunks[i % workers].push_back(comps[i]);
    std::vector<std::future<CandidateChunkResult>> futs;
    for (int w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&, w] {
        return enumerate_chunk(q, chunks[w], n, index_target, relator_rows);
      }));
    for (auto& f : futs) {
      auto res = f.get();
      for (auto& [basis, gb] : res.found) {
        auto it = merged.find(basis);
        if (it == merged.end())
          merged.emplace(basis, gb);
        else if (gb < it->second)
          it->second = gb;
      }
    }
  }

  bool want_elements = Q->order() <= opts.fingerprint_budget;
  for (auto& [basis, gb] : merged) {
    std::optional<std::vector<Coords>> elems;
    if (want_elements)
      elems = reduced_elements(q, basis, opts.element_iteration_budget);
    out.emplace_back(Q, basis, gb, std::move(elems));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Coords>> brute_force_all_subgroups(
    std::shared_ptr<const FiniteQuotient> Q, const EnumOptions& opts) {
  const FiniteQuotient& q = *Q;
  if (q.order() > opts.brute_budget)
    throw BudgetExceededError("brute_force_all_subgroups: |Q| over budget");
  Int raw_total = pow_int(Int(q.modulus()), static_cast<unsigned long>(q.rank()));
  if (raw_total > opts.element_iteration_budget)
    throw BudgetExceededError("brute_force_all_subgroups: coordinate space over budget");

  // All canonical elements of the quotient.
  std::set<Coords> elem_set;
  Coords x(q.rank(), 0);
  for (;;) {
    elem_set.insert(q.reduce(x));
    int pos = 0;
    while (pos < q.rank()) {
      if (++x[pos] < q.modulus()) break;
      x[pos] = 0;
      ++pos;
    }
    if (pos == q.rank()) break;
  }
  std::vector<Coords> all(elem_set.begin(), elem_set.end());

  struct Node {
    std::vector<Coords> elems;  // sorted
    std::vector<Coords> gens;
    std::set<Coords> set;
  };

  const Int p = q.prime();
  auto make_node = [&](std::vector<Coords> elems, std::vector<Coords> gens) {
    Node n;
    std::sort(elems.begin(), elems.end());
    n.set.insert(elems.begin(), elems.end());
    n.elems = std::move(elems);
    n.gens = std::move(gens);
    return n;
  };

  std::map<std::vector<Coords>, Node> known;
  Node trivial = make_node({q.free_identity()}, {});
  std::vector<std::vector<Coords>> worklist{trivial.elems};
  known.emplace(trivial.elems, std::move(trivial));

  while (!worklist.empty()) {
    std::vector<Coords> key = std::move(worklist.back());
    worklist.pop_back();
    Node h = known.at(key);  // copy; known may rehash as we insert

    // Normalizer of H by element scan.
    std::vector<Coords> normalizer;
    for (const auto& g : all) {
      bool ok = true;
      const std::vector<Coords>& test = h.gens.empty() ? h.elems : h.gens;
      for (const auto& s : test) {
        Coords c = q.multiply(q.multiply(g, s), q.inverse(g));
        if (!h.set.count(c)) {
          ok = false;
          break;
        }
      }
      if (ok) normalizer.push_back(g);
    }

    // Extensions H -> <H, g> of index p, for g in N(H) with g^p in H; each
    // is the union of the p cosets g^i H.
    std::set<Coords> seen_cosets;
    for (const auto& g : normalizer) {
      if (h.set.count(g)) continue;
      Coords coset_key = g;
      for (const auto& s : h.elems) {
        Coords y = q.multiply(g, s);
        if (y < coset_key) coset_key = y;
      }
      if (!seen_cosets.insert(coset_key).second) continue;
      if (!h.set.count(q.power(g, p))) continue;
      std::vector<Coords> elems = h.elems;
      Coords gp = g;
      for (Int i = 1; i < p; ++i) {
        for (const auto& s : h.elems) elems.push_back(q.multiply(gp, s));
        gp = q.multiply(gp, g);
      }
      std::vector<Coords> gens = h.gens;
      gens.push_back(g);
      Node k = make_node(std::move(elems), std::move(gens));
      if (!known.count(k.elems)) {
        worklist.push_back(k.elems);
        known.emplace(k.elems, std::move(k));
      }
    }
  }

  std::vector<std::vector<Coords>> out;
  out.reserve(known.size());
  for (auto& [key, node] : known) out.push_back(key);
  return out;
}

Int conjugacy_class_count(std::shared_ptr<const FiniteQuotient> Q, int n,
                          const EnumOptions& opts) {
  auto handles = enumerate_subgroups(Q, n, opts);
  std::map<SubgroupBasis, std::size_t> index;
  for (std::size_t i = 0; i < handles.size(); ++i)
    index.emplace(handles[i].basis(), i);
  std::vector<bool> visited(handles.size(), false);
  Int classes = 0;
  for (std::size_t i = 0; i < handles.size(); ++i) {
    if (visited[i]) continue;
    ++classes;
    std::vector<std::size_t> stack{i};
    visited[i] = true;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (int gi = 0; gi < Q->rank(); ++gi) {
        Coords g(Q->rank(), 0);
        g[gi] = 1;
        SubgroupBasis conj = handles[cur].basis().conjugated(g);
        auto it = index.find(conj);
        if (it == index.end())
          throw InternalInvariantError(
              "conjugacy_class_count: conjugate escaped the enumeration");
        if (!visited[it->second]) {
          visited[it->second] = true;
          stack.push_back(it->second);
        }
      }
    }
  }
  return classes;
}

namespace {

// Dense multiplication table of the quotient Q/H for normal H.
struct SmallGroup {
  int order = 0;
  std::vector<std::vector<int>> mul;
  std::vector<int> inv;
  std::vector<int> elem_order;

  int identity() const { return 0; }
};

SmallGroup coset_table_group(const FiniteQuotient& q, const SubgroupBasis& H) {
  std::vector<Coords> reps;
  std::map<Coords, int> idx;
  Coords id_rep = H.coset_rep(q.free_identity());
  reps.push_back(id_rep);
  idx[id_rep] = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (int gi = 0; gi < q.rank(); ++gi) {
      Coords g(q.rank(), 0);
      g[gi] = 1;
      Coords y = H.coset_rep(q.free_multiply(g, reps[i]));
      if (!idx.count(y)) {
        idx[y] = static_cast<int>(reps.size());
        reps.push_back(y);
      }
      Coords gin = q.free_inverse(g);
      Coords z = H.coset_rep(q.free_multiply(gin, reps[i]));
      if (!idx.count(z)) {
        idx[z] = static_cast<int>(reps.size());
        reps.push_back(z);
      }
    }
  }
  SmallGroup g;
  g.order = static_cast<int>(reps.size());
  g.mul.assign(g.order, std::vector<int>(g.order, 0));
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      g.mul[a][b] = idx.at(H.coset_rep(q.free_multiply(reps[a], reps[b])));
  g.inv.assign(g.order, 0);
  g.elem_order.assign(g.order, 1);
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b)
      if (g.mul[a][b] == 0) g.inv[a] = b;
    int x = a, ord = 1;
    while (x != 0) {
      x = g.mul[x][a];
      ++ord;
    }
    g.elem_order[a] = ord;
  }
  return g;
}

std::vector<int> small_group_invariants(const SmallGroup& g) {
  std::vector<int> inv;
  inv.push_back(g.order);
  // Order profile.
  std::map<int, int> profile;
  for (int a = 0; a < g.order; ++a) ++profile[g.elem_order[a]];
  for (auto& [o, c] : profile) {
    inv.push_back(o);
    inv.push_back(c);
  }
  // Abelian flag, center size, derived size, conjugacy class count.
  bool abelian = true;
  for (int a = 0; a < g.order && abelian; ++a)
    for (int b = a + 1; b < g.order; ++b)
      if (g.mul[a][b] != g.mul[b][a]) {
        abelian = false;
        break;
      }
  inv.push_back(abelian ? 1 : 0);
  int center = 0;
  for (int a = 0; a < g.order; ++a) {
    bool central = true;
    for (int b = 0; b < g.order; ++b)
      if (g.mul[a][b] != g.mul[b][a]) {
        central = false;
        break;
      }
    if (central) ++center;
  }
  inv.push_back(center);
  std::set<int> derived_gens;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      derived_gens.insert(g.mul[g.mul[g.inv[a]][g.inv[b]]][g.mul[a][b]]);
  std::set<int> derived(derived_gens);
  for (;;) {
    std::set<int> next = derived;
    for (int a : derived)
      for (int b : derived) next.insert(g.mul[a][b]);
    if (next.size() == derived.size()) break;
    derived = std::move(next);
  }
  inv.push_back(static_cast<int>(derived.size()));
  std::vector<bool> seen(g.order, false);
  int classes = 0;
  for (int a = 0; a < g.order; ++a) {
    if (seen[a]) continue;
    ++classes;
    for (int x = 0; x < g.order; ++x)
      seen[g.mul[g.mul[x][a]][g.inv[x]]] = true;
  }
  inv.push_back(classes);
  return inv;
}

bool is_abelian(const SmallGroup& g) {
  for (int a = 0; a < g.order; ++a)
    for (int b = a + 1; b < g.order; ++b)
      if (g.mul[a][b] != g.mul[b][a]) return false;
  return true;
}

std::set<int> frattini_closure(const SmallGroup& g, const Int& p) {
  // <[G,G], p-th powers> — the Frattini subgroup of a finite p-group.
  std::set<int> gens;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      gens.insert(g.mul[g.mul[g.inv[a]][g.inv[b]]][g.mul[a][b]]);
  long pl = p.get_si();
  for (int a = 0; a < g.order; ++a) {
    int x = 0;
    for (long i = 0; i < pl; ++i) x = g.mul[x][a];
    gens.insert(x);
  }
  std::set<int> sub{0};
  std::vector<int> stack(gens.begin(), gens.end());
  for (int s : stack) sub.insert(s);
  for (;;) {
    std::set<int> next = sub;
    for (int a : sub)
      for (int s : gens) next.insert(g.mul[a][s]);
    if (next.size() == sub.size()) break;
    sub = std::move(next);
  }
  return sub;
}

std::set<int> closure_with(const SmallGroup& g, std::set<int> sub, int extra) {
  sub.insert(extra);
  for (;;) {
    std::set<int> next = sub;
    for (int a : sub)
      for (int b : sub) next.insert(g.mul[a][b]);
    if (next.size() == sub.size()) break;
    sub = std::move(next);
  }
  return sub;
}

std::vector<int> minimal_generators(const SmallGroup& g, const Int& p) {
  std::set<int> phi = frattini_closure(g, p);
  std::vector<int> gens;
  std::set<int> span = phi;
  while (static_cast<int>(span.size()) < g.order) {
    int pick = -1;
    for (int a = 0; a < g.order; ++a)
      if (!span.count(a)) {
        pick = a;
        break;
      }
    gens.push_back(pick);
    span = closure_with(g, span, pick);
  }
  return gens;
}

bool extends_to_isomorphism(const SmallGroup& g1, const SmallGroup& g2,
                            const std::vector<int>& gens,
                            const std::vector<int>& images) {
  // Grow the map along a BFS of words in the generators, then verify it is a
  // homomorphism and a bijection.
  std::vector<int> phi(g1.order, -1);
  phi[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (std::size_t s = 0; s < gens.size(); ++s) {
      int y = g1.mul[x][gens[s]];
      int im = g2.mul[phi[x]][images[s]];
      if (phi[y] < 0) {
        phi[y] = im;
        queue.push_back(y);
      } else if (phi[y] != im) {
        return false;
      }
    }
  }
  for (int x = 0; x < g1.order; ++x)
    if (phi[x] < 0) return false;
  std::vector<bool> hit(g2.order, false);
  for (int x = 0; x < g1.order; ++x) {
    if (hit[phi[x]]) return false;
    hit[phi[x]] = true;
  }
  for (int a = 0; a < g1.order; ++a)
    for (int b = 0; b < g1.order; ++b)
      if (phi[g1.mul[a][b]] != g2.mul[phi[a]][phi[b]]) return false;
  return true;
}

bool small_groups_isomorphic(const SmallGroup& g1, const SmallGroup& g2,
                             const Int& p) {
  if (small_group_invariants(g1) != small_group_invariants(g2)) return false;
  // Same order profile decides isomorphism for abelian p-groups.
  if (is_abelian(g1) && is_abelian(g2)) return true;
  std::vector<int> gens = minimal_generators(g1, p);
  std::set<int> phi2 = frattini_closure(g2, p);
  // Backtracking over generator images with order matching and independence
  // modulo the Frattini subgroup.
  std::vector<int> images(gens.size(), -1);
  auto rec = [&](auto&& self, std::size_t pos, std::set<int> span) -> bool {
    if (pos == gens.size())
      return extends_to_isomorphism(g1, g2, gens, images);
    for (int cand = 0; cand < g2.order; ++cand) {
      if (g2.elem_order[cand] != g1.elem_order[gens[pos]]) continue;
      if (span.count(cand)) continue;
      images[pos] = cand;
      if (self(self, pos + 1, closure_with(g2, span, cand))) return true;
    }
    return false;
  };
  return rec(rec, 0, phi2);
}

}  // namespace

Int quotient_iso_count(std::shared_ptr<const FiniteQuotient> Q, int n,
                       const EnumOptions& opts) {
  if (n > opts.iso_index_cap)
    throw BudgetExceededError("quotient_iso_count: index over iso budget");
  auto handles = enumerate_subgroups(Q, n, opts);
  std::vector<SmallGroup> groups;
  for (const auto& h : handles) {
    if (!h.basis().is_normal()) continue;
    groups.push_back(coset_table_group(*Q, h.basis()));
  }
  std::vector<int> cls(groups.size(), -1);
  Int count = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = static_cast<int>(i);
    ++count;
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      if (cls[j] >= 0) continue;
      if (small_groups_isomorphic(groups[i], groups[j], Q->prime()))
        cls[j] = static_cast<int>(i);
    }
  }
  return count;
}

Int count_for_variant(std::shared_ptr<const FiniteQuotient> Q, int n,
                      CountVariant variant, const EnumOptions& opts) {
  switch (variant) {
    case CountVariant::All:
      return Int(enumerate_subgroups(Q, n, opts).size());
    case CountVariant::Normal: {
      auto handles = enumerate_subgroups(Q, n, opts);
      Int c = 0;
      for (const auto& h : handles)
        if (h.basis().is_normal()) ++c;
      return c;
    }
    case CountVariant::ConjugacyClasses:
      return conjugacy_class_count(Q, n, opts);
    case CountVariant::QuotientIso:
      return quotient_iso_count(Q, n, opts);
    case CountVariant::TwistIsoclasses:
      return count_twist_isoclasses(Q, n, opts);
    case CountVariant::ProPIso:
    case CountVariant::ProPEquivalence:
      throw UnsupportedVariantError(
          "pro-p completion isomorphism variants are out of scope");
  }
  throw InputError("count_for_variant: bad variant");
}

StabilizedCount stabilized_count(
    std::shared_ptr<const MalcevPresentation> pres, const Int& p, int n,
    CountVariant variant, const EnumOptions& opts) {
  int buffer = opts.class_buffer >= 0 ? opts.class_buffer
                                      : pres->nilpotency_class();
  int k = std::max(1, n + buffer);
  std::optional<Int> prev;
  for (unsigned attempt = 0; attempt <= opts.stabilization_retries; ++attempt) {
    Int c1 = prev ? *prev
                  : count_for_variant(build_quotient(pres, p, k), n, variant, opts);
    Int c2 = count_for_variant(build_quotient(pres, p, k + 1), n, variant, opts);
    if (c1 == c2) return {c1, k};
    prev = c2;
    ++k;
  }
  throw NoStabilizationError("stabilized_count: no agreement for " +
                             pres->name() + " at n=" + std::to_string(n));
}

}  // namespace pzeta
