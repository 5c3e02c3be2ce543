#pragma once

// Localization over finite rings and the Cech complex built from it, which
// serves as the ground-truth oracle, next to the Koszul-avatar computations
// of local cohomology and derived completion.

#include "kc/adic.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace kc {

template <class D>
void require_finite(const char* what) {
  if constexpr (!std::is_same_v<D, ModularDomain>) throw Error("InfiniteRing", std::string(what) + " needs a finite ring");
}

template <class D>
BigInt finite_order(const D& dom, const Module<D>& m) {
  if constexpr (std::is_same_v<D, ModularDomain>)
    return module_order(dom, m);
  else
    throw Error("InfiniteRing", "cardinality of a module over an infinite ring");
}

// Largest term cardinality allowed on oracle paths; KOSZUL_MAX_TERM_SIZE
// overrides the default.
inline long long max_term_size() {
  if (const char* s = std::getenv("KOSZUL_MAX_TERM_SIZE")) {
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return 4096;
}

// M_x as the stable image T = x^k M on which x acts bijectively.
template <class D>
struct Localization {
  Subquotient<D> image;  // T inside M
  Module<D> module;      // presentation of T
  MatOf<D> iota;         // M -> T
  MatOf<D> xinv;         // inverse of x on T
  MatOf<D> x;            // x on T
  int k = 0;
};

template <class D>
Localization<D> localize_finite(const RingView<D>& R, const Module<D>& m, const typename RingView<D>::Elem& x) {
  require_finite<D>("localization");
  const D& dom = R.dom;
  const MatOf<D> a = module_action(R, m, x);
  MatOf<D> ak = identity(dom, m.gens);
  Subquotient<D> cur = image_subquotient(dom, m, ak);
  int k = 0;
  while (true) {
    MatOf<D> next = mul(dom, ak, a);
    Subquotient<D> nsq = image_subquotient(dom, m, next);
    if (finite_order(dom, nsq.presentation()) == finite_order(dom, cur.presentation())) break;
    ak = next;
    cur = nsq;
    ++k;
  }
  Localization<D> l;
  l.k = k;
  l.image = cur;
  l.module = cur.presentation();
  l.x = cur.induced(a);
  // x is onto T: each generator is x times some element
  Subquotient<D> onto = image_subquotient(dom, l.module, l.x);
  l.xinv = onto.coords_rows(identity(dom, l.module.gens));
  l.iota = mul(dom, cur.coords_rows(ak), power(dom, l.xinv, k));
  return l;
}

// Gamma = ker(M -> sum_i M_{x_i}).
template <class D>
Subquotient<D> torsion_submodule(const RingView<D>& R, const Module<D>& m, const Seq<D>& x) {
  require_finite<D>("torsion");
  const D& dom = R.dom;
  Module<D> tgt;
  tgt.rel = zeros(dom, 0, 0);
  MatOf<D> f = zeros(dom, m.gens, 0);
  for (const auto& xi : x) {
    auto l = localize_finite(R, m, xi);
    tgt = direct_sum(dom, tgt, l.module);
    f = hstack(dom, f, l.iota);
  }
  if (tgt.rel.cols() != tgt.gens) tgt.rel = zeros(dom, 0, tgt.gens);
  return kernel_subquotient(dom, m, tgt, f);
}

// Hom_R(R_x, M) is the inverse limit of ... -> M -x-> M, realized as T with
// eval the inclusion T -> M.
template <class D>
struct HomFromLocalization {
  Module<D> module;
  MatOf<D> eval;
};

template <class D>
HomFromLocalization<D> hom_from_localization(const RingView<D>& R, const Module<D>& m, const typename RingView<D>::Elem& x) {
  auto l = localize_finite(R, m, x);
  return {l.module, l.image.generators()};
}

// Cech complex in cohomological degrees 0..r, stored at homological -r..0.
template <class D>
ChainComplex<D> cech_complex_finite(const RingView<D>& R, const Seq<D>& x, const Module<D>& m) {
  require_finite<D>("the Cech complex");
  const D& dom = R.dom;
  const int r = int(x.size());
  if (r > 3) throw Error("TooLarge", "Cech oracle limited to r <= 3");
  const long long cap = max_term_size();
  std::vector<Localization<D>> loc(std::size_t(1) << r);
  for (unsigned s = 0; s < loc.size(); ++s) {
    auto xs = R.one();
    for (int i : subset_members(s)) xs = R.mul(xs, x[i]);
    loc[s] = localize_finite(R, m, xs);
  }
  std::vector<Module<D>> terms;
  std::vector<std::vector<Block>> blocks;
  std::vector<std::vector<Index>> offsets;
  for (int p = r; p >= 0; --p) {
    Module<D> t;
    t.rel = zeros(dom, 0, 0);
    t.free_rank = 0;
    std::vector<Block> bl;
    std::vector<Index> off;
    for (unsigned s : subsets_of_size(r, p)) {
      bl.push_back({s, 1, t.gens, loc[s].module.gens});
      off.push_back(t.gens);
      t = direct_sum(dom, t, loc[s].module);
    }
    if (t.rel.cols() != t.gens) t.rel = zeros(dom, 0, t.gens);
    if (t.gens > 0 && finite_order(dom, t) > BigInt(cap))
      throw Error("TooLarge", "Cech term in degree " + std::to_string(p) + " exceeds " + std::to_string(cap) + " elements");
    terms.push_back(t);
    blocks.push_back(bl);
    offsets.push_back(off);
  }
  // terms[j] holds cohomological degree r - j
  std::vector<MatOf<D>> diffs;
  for (int j = 1; j <= r; ++j) {
    const int p = r - j;
    auto src = subsets_of_size(r, p), tgt = subsets_of_size(r, p + 1);
    MatOf<D> d = zeros(dom, terms[j].gens, terms[j - 1].gens);
    for (std::size_t a = 0; a < src.size(); ++a)
      for (int u = 0; u < r; ++u) {
        if (src[a] & (1u << u)) continue;
        const unsigned s2 = src[a] | (1u << u);
        const int pos = subset_size(s2 & ((1u << u) - 1));
        const Index b = Index(std::find(tgt.begin(), tgt.end(), s2) - tgt.begin());
        const auto& ls = loc[src[a]];
        MatOf<D> blk = mul(dom, ls.image.generators(), loc[s2].iota);
        if (blk.size() == 0) continue;
        d.block(offsets[j][a], offsets[j - 1][b], blk.rows(), blk.cols()) = pos % 2 == 0 ? blk : neg(dom, blk);
      }
    diffs.push_back(std::move(d));
  }
  ChainComplex<D> c = make_complex(dom, -r, terms, diffs);
  c.blocks = std::move(blocks);
  c.label_width = r;
  return c;
}

// H^p of the Cech complex, p = 0..r.
template <class D>
std::vector<Classification> cech_cohomology_oracle(const RingView<D>& R, const Seq<D>& x, const Module<D>& m) {
  auto c = cech_complex_finite(R, x, m);
  std::vector<Classification> out;
  for (int p = 0; p <= int(x.size()); ++p) out.push_back(homology_classification(c, -p));
  return out;
}

template <class D>
LimitsResult local_cohomology_koszul(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max, int window = 2) {
  return limits(xu_system(R, x, m, n_max, true), window);
}

// Pro-zero search: for i > 0 and each n, the least m <= m_max with
// H_i(x^(m); M) -> H_i(x^(n); M) zero.
struct ProZeroIndex {
  int i = 0;
  bool verified = false;
  std::vector<int> witness;  // m(n) for n = 1 .. n_max when verified
  int first_failure = 0;     // n without a witness otherwise
};

struct ProZeroVerdict {
  int n_max = 0, m_max = 0;
  std::vector<ProZeroIndex> indices;

  bool verified() const {
    for (const auto& p : indices)
      if (!p.verified) return false;
    return true;
  }
  std::string label() const { return verified() ? "VerifiedUpTo" : "Inconclusive"; }
};

template <class D>
ProZeroVerdict proregular_check(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max, int m_max) {
  if (n_max < 1 || m_max < n_max) throw Error("BadExponents", "need 1 <= n_max <= m_max");
  const D& dom = R.dom;
  const int r = int(x.size());
  std::vector<ChainComplex<D>> ks;
  for (int n = 1; n <= m_max; ++n) ks.push_back(koszul_chain(R, x, m, uniform(r, n)));
  ProZeroVerdict v;
  v.n_max = n_max;
  v.m_max = m_max;
  for (int i = 1; i <= r; ++i) {
    std::vector<Subquotient<D>> H;
    for (const auto& k : ks) H.push_back(homology(k, i));
    ProZeroIndex idx;
    idx.i = i;
    idx.verified = true;
    for (int n = 1; n <= n_max && idx.verified; ++n) {
      std::optional<int> found;
      for (int mm = n; mm <= m_max && !found; ++mm) {
        auto t = koszul_transition(R, x, m, mm, n, false);
        MatOf<D> f = H[mm - 1].induced_to(H[n - 1], t.at(i));
        if (rowspan_contains(dom, H[n - 1].presentation().rel, f)) found = mm;
      }
      if (found)
        idx.witness.push_back(*found);
      else {
        idx.verified = false;
        idx.first_failure = n;
        idx.witness.clear();
      }
    }
    v.indices.push_back(idx);
  }
  return v;
}

// Lim/lim^1 of the chain (x - U) system, identified with derived completion
// only when the pro-regularity search succeeds.
struct DerivedCompletion {
  LimitsResult limits;
  ProZeroVerdict proregular;
  bool identified = false;
  std::string label;
};

template <class D>
DerivedCompletion derived_completion_koszul(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max, int m_max,
                                            int window = 2) {
  DerivedCompletion d;
  d.limits = limits(xu_system(R, x, m, n_max, false), window);
  d.proregular = proregular_check(R, x, m, n_max, std::max(m_max, n_max));
  d.identified = d.proregular.verified();
  d.label = d.identified ? "derived completion" : "H of avatar, unidentified";
  return d;
}

// ---------------------------------------------------------------------------
// Truncated resolution models for one element, in cohomological degrees 0
// and 1 (stored at 0 and -1). The polynomial parts keep U^0 .. U^(n-1) in
// degree 0 and U^0 .. U^n in degree 1, so multiplying by 1 - xU needs no
// truncation:
//   E:      M            --id-->  M
//   Lcheck: M U^-1 + M[U] --phi-> M[U],   phi(a, f) = a - (1 - xU) f
//   Lcal:   M[U]          --psi-> U M[U], psi(f) = f(0) - (1 - xU) f
template <class D>
struct ResolutionDiagram {
  ChainComplex<D> e, lcheck, lcal;
  ChainMap<D> i, p;  // E -> Lcheck -> Lcal, exact in each degree
  ChainMap<D> s;     // Lcal -> Lcheck with p o s = id
};

namespace detail {

template <class D>
void put(MatOf<D>& f, Index br, Index bc, Index g, const MatOf<D>& blk) {
  f.block(br * g, bc * g, g, g) = blk;
}

}  // namespace detail

template <class D>
ResolutionDiagram<D> resolution_diagram(const RingView<D>& R, const typename RingView<D>::Elem& x, const Module<D>& m, int n) {
  if (n < 1) throw Error("BadExponents", "window must be positive");
  const D& dom = R.dom;
  const Index g = m.gens;
  const MatOf<D> id = identity(dom, g), ax = module_action(R, m, x), mid = neg(dom, id);
  auto pw = [&](Index c) { return direct_power(dom, m, c); };
  ResolutionDiagram<D> out;
  out.e = make_complex(dom, -1, {m, m}, {id});

  MatOf<D> phi = zeros(dom, (n + 1) * g, (n + 1) * g);
  detail::put<D>(phi, 0, 0, g, id);
  for (int j = 0; j < n; ++j) {
    detail::put<D>(phi, 1 + j, j, g, mid);
    detail::put<D>(phi, 1 + j, j + 1, g, ax);
  }
  out.lcheck = make_complex(dom, -1, {pw(n + 1), pw(n + 1)}, {phi});

  // Lcal degree 1 holds U^1 .. U^n at blocks 0 .. n-1
  MatOf<D> psi = zeros(dom, n * g, n * g);
  for (int j = 0; j < n; ++j) {
    if (j > 0) detail::put<D>(psi, j, j - 1, g, mid);
    detail::put<D>(psi, j, j, g, ax);
  }
  out.lcal = make_complex(dom, -1, {pw(n), pw(n)}, {psi});

  MatOf<D> i1 = zeros(dom, g, (n + 1) * g), i0 = zeros(dom, g, (n + 1) * g);
  detail::put<D>(i1, 0, 0, g, id);
  detail::put<D>(i0, 0, 0, g, id);
  out.i = make_map(out.e, out.lcheck, {i1, i0});

  MatOf<D> p1 = zeros(dom, (n + 1) * g, n * g), p0 = zeros(dom, (n + 1) * g, n * g);
  MatOf<D> s1 = zeros(dom, n * g, (n + 1) * g), s0 = zeros(dom, n * g, (n + 1) * g);
  for (int j = 0; j < n; ++j) {
    detail::put<D>(p1, 1 + j, j, g, id);
    detail::put<D>(p0, 1 + j, j, g, id);
    detail::put<D>(s1, j, 1 + j, g, id);
    detail::put<D>(s0, j, 1 + j, g, id);
  }
  detail::put<D>(s0, 0, 0, g, id);  // f -> (f(0) U^-1, f)
  out.p = make_map(out.lcheck, out.lcal, {p1, p0});
  out.s = make_map(out.lcal, out.lcheck, {s1, s0});
  return out;
}

// Adds relation rows to one term of a complex. The quotient is taken over R
// only, so the named operators are dropped.
template <class D>
ChainComplex<D> quotient_term(const ChainComplex<D>& c, int degree, const MatOf<D>& rows) {
  ChainComplex<D> q = c;
  Module<D>& t = q.terms.at(degree - c.lo);
  t.rel = howell_form(c.dom, vstack(c.dom, t.rel, rows));
  t.free_rank = -1;
  t.ops.clear();
  return q;
}

// Rows of Gamma_x(M) placed in block `block` of a term made of copies of M.
template <class D>
MatOf<D> torsion_rows(const RingView<D>& R, const typename RingView<D>::Elem& x, const Module<D>& m, Index blocks, Index block) {
  const MatOf<D> gam = torsion_submodule(R, m, Seq<D>{x}).generators();
  MatOf<D> rows = zeros(R.dom, gam.rows(), blocks * m.gens);
  if (gam.rows() > 0) rows.block(0, block * m.gens, gam.rows(), m.gens) = gam;
  return rows;
}

// Lcal (window n) -> Cech complex of one element: f -> f(0) and
// U^j -> x^-j. The Cech complex must come from cech_complex_finite.
template <class D>
ChainMap<D> lcal_to_cech(const ChainComplex<D>& lcal, const ChainComplex<D>& cech, const Localization<D>& loc, int n) {
  const D& dom = lcal.dom;
  const Index g = cech.gens(0);
  MatOf<D> f0 = zeros(dom, n * g, g);
  f0.topRows(g) = identity(dom, g);
  MatOf<D> f1 = zeros(dom, n * g, cech.gens(-1));
  for (int j = 1; j <= n; ++j) f1.middleRows((j - 1) * g, g) = mul(dom, loc.iota, power(dom, loc.xinv, j));
  return make_map(lcal, cech, {f1, f0});
}

// K^.(x - U; W_n(M)) -> Cech complex: f(U^-1) -> f(x^-1) / x, i.e. the
// U^0 coefficient in degree 0 and U^-e -> x^-(e+1) in degree 1.
template <class D>
ChainMap<D> window_to_cech(const ChainComplex<D>& k, const ChainComplex<D>& cech, const Localization<D>& loc, int n) {
  const D& dom = k.dom;
  const Index g = cech.gens(0);
  const Block* b0 = find_block(k, 0, 0u);
  const Block* b1 = find_block(k, -1, 1u);
  MatOf<D> f0 = zeros(dom, k.gens(0), g);
  f0.block(b0->offset + (n - 1) * g, 0, g, g) = b0->sign > 0 ? identity(dom, g) : neg(dom, identity(dom, g));
  MatOf<D> f1 = zeros(dom, k.gens(-1), cech.gens(-1));
  for (int b = 0; b < n; ++b) {
    MatOf<D> blk = mul(dom, loc.iota, power(dom, loc.xinv, n - b));
    f1.middleRows(b1->offset + b * g, g) = b1->sign > 0 ? blk : neg(dom, blk);
  }
  return make_map(k, cech, {f1, f0});
}

// The isomorphism Lcal (window n) -> K^.(x - U; W_n(M)) that inverts the
// variable: U^j -> U^-j in degree 0 and U^(j+1) -> U^-j in degree 1.
template <class D>
ChainMap<D> lcal_to_window(const ChainComplex<D>& lcal, const ChainComplex<D>& k, int n) {
  const D& dom = lcal.dom;
  const Index g = lcal.gens(0) / n;
  const Block* b0 = find_block(k, 0, 0u);
  const Block* b1 = find_block(k, -1, 1u);
  MatOf<D> a0 = zeros(dom, n * g, k.gens(0)), a1 = zeros(dom, n * g, k.gens(-1));
  const MatOf<D> id = identity(dom, g), mid = neg(dom, id);
  for (int j = 0; j < n; ++j) {
    a0.block(j * g, b0->offset + (n - 1 - j) * g, g, g) = b0->sign > 0 ? id : mid;
    a1.block(j * g, b1->offset + (n - 1 - j) * g, g, g) = b1->sign > 0 ? id : mid;
  }
  return make_map(lcal, k, {a1, a0});
}

}  // namespace kc
