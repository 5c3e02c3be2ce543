#pragma once

#include "kc/module.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kc {

// Labelled block inside a complex term: a subset of the sequence indices
// (bit mask) with a sign relative to the exterior-algebra basis e_S.
struct Block {
  unsigned subset = 0;
  int sign = 1;
  Index offset = 0;
  Index size = 0;
};

// Bounded complex with homological indexing; cohomological complexes live
// at negated degrees. diffs[n - lo] maps term n to term n - 1.
template <class D>
struct ChainComplex {
  D dom;
  int lo = 0, hi = -1;
  std::vector<Module<D>> terms;
  std::vector<MatOf<D>> diffs;
  std::vector<std::vector<Block>> blocks;  // optional, per degree
  int label_width = 0;

  bool in_range(int n) const { return n >= lo && n <= hi; }
  Index gens(int n) const { return in_range(n) ? terms[n - lo].gens : 0; }
  Module<D> term(int n) const {
    if (in_range(n)) return terms[n - lo];
    Module<D> z;
    z.rel = zeros(dom, 0, 0);
    z.free_rank = 0;
    return z;
  }
  MatOf<D> d(int n) const {
    if (in_range(n) && in_range(n - 1)) return diffs[n - lo];
    return zeros(dom, gens(n), gens(n - 1));
  }
  const std::vector<Block>& blocks_at(int n) const { return blocks.at(n - lo); }
  bool labelled() const { return !blocks.empty(); }
};

template <class D>
std::optional<std::string> validate_complex(const ChainComplex<D>& x);

// Validated complex from terms at degrees lo, lo+1, ... and the differentials
// out of every term above lo. Throws NotAComplex when d^2 != 0.
template <class D>
ChainComplex<D> make_complex(const D& dom, int lo, std::vector<Module<D>> terms, std::vector<MatOf<D>> diffs_above_lo) {
  ChainComplex<D> x;
  x.dom = dom;
  x.lo = lo;
  x.hi = lo + int(terms.size()) - 1;
  x.terms = std::move(terms);
  x.diffs.push_back(zeros(dom, x.terms.empty() ? 0 : x.terms[0].gens, 0));
  for (auto& m : diffs_above_lo) x.diffs.push_back(std::move(m));
  if (x.diffs.size() != x.terms.size() && !x.terms.empty()) throw Error("ShapeMismatch", "one differential per degree above lo");
  if (auto v = validate_complex(x)) throw Error(v->rfind("d^2", 0) == 0 ? "NotAComplex" : "ShapeMismatch", *v);
  return x;
}

template <class D>
struct ChainMap {
  ChainComplex<D> src, tgt;
  std::vector<MatOf<D>> comp;  // indexed by src degree

  MatOf<D> at(int n) const {
    if (src.in_range(n)) return comp[n - src.lo];
    return zeros(src.dom, src.gens(n), tgt.gens(n));
  }
};

template <class D>
ChainMap<D> make_map(const ChainComplex<D>& src, const ChainComplex<D>& tgt, std::vector<MatOf<D>> comp) {
  ChainMap<D> f{src, tgt, std::move(comp)};
  if (int(f.comp.size()) != src.hi - src.lo + 1) throw Error("ShapeMismatch", "one component per source degree");
  for (int n = src.lo; n <= src.hi; ++n) {
    const auto& m = f.comp[n - src.lo];
    if (m.rows() != src.gens(n) || m.cols() != tgt.gens(n)) throw Error("ShapeMismatch", "component at degree " + std::to_string(n));
  }
  return f;
}

template <class D>
ChainMap<D> identity_map(const ChainComplex<D>& x) {
  std::vector<MatOf<D>> c;
  for (int n = x.lo; n <= x.hi; ++n) c.push_back(identity(x.dom, x.gens(n)));
  return make_map(x, x, std::move(c));
}

template <class D>
ChainMap<D> compose(const ChainMap<D>& f, const ChainMap<D>& g) {
  std::vector<MatOf<D>> c;
  for (int n = f.src.lo; n <= f.src.hi; ++n) c.push_back(mul(f.src.dom, f.at(n), g.at(n)));
  return make_map(f.src, g.tgt, std::move(c));
}

// Checks d^2 = 0 modulo relations, differentials respecting relations and
// the ring action. Returns a description of the first violation.
template <class D>
std::optional<std::string> validate_complex(const ChainComplex<D>& x) {
  const D& dom = x.dom;
  for (int n = x.lo; n <= x.hi; ++n) {
    const auto& t = x.terms[n - x.lo];
    if (t.rel.cols() != t.gens && t.rel.rows() > 0) return "relation width at degree " + std::to_string(n);
    if (!x.in_range(n - 1)) continue;
    const auto& s = x.terms[n - 1 - x.lo];
    MatOf<D> d = x.d(n);
    if (d.rows() != t.gens || d.cols() != s.gens) return "differential shape at degree " + std::to_string(n);
    if (!is_module_map(dom, t, s, d)) return "differential does not respect relations at degree " + std::to_string(n);
    for (std::size_t j = 0; j < t.act.size(); ++j)
      if (!rowspan_contains(dom, s.rel, sub(dom, mul(dom, t.act[j], d), mul(dom, d, s.act[j]))))
        return "differential is not linear at degree " + std::to_string(n);
    if (x.in_range(n - 2) && !rowspan_contains(dom, x.term(n - 2).rel, mul(dom, d, x.d(n - 1))))
      return "d^2 != 0 at degree " + std::to_string(n);
  }
  return std::nullopt;
}

template <class D>
std::optional<std::string> chain_map_violation(const ChainMap<D>& f, bool check_linearity = true) {
  const D& dom = f.src.dom;
  const int lo = std::min(f.src.lo, f.tgt.lo), hi = std::max(f.src.hi, f.tgt.hi);
  for (int n = lo; n <= hi; ++n) {
    if (f.src.gens(n) == 0) continue;
    Module<D> s = f.src.term(n), t = f.tgt.term(n);
    MatOf<D> fn = f.at(n);
    if (!is_module_map(dom, s, t, fn)) return "component at degree " + std::to_string(n) + " does not respect relations";
    if (check_linearity)
      for (std::size_t j = 0; j < s.act.size() && j < t.act.size(); ++j)
        if (!rowspan_contains(dom, t.rel, sub(dom, mul(dom, s.act[j], fn), mul(dom, fn, t.act[j]))))
          return "component at degree " + std::to_string(n) + " is not linear";
    MatOf<D> lhs = mul(dom, f.src.d(n), f.at(n - 1));
    MatOf<D> rhs = mul(dom, fn, f.tgt.d(n));
    if (lhs.size() == 0) continue;
    if (!rowspan_contains(dom, f.tgt.term(n - 1).rel, sub(dom, lhs, rhs)))
      return "d f != f d at degree " + std::to_string(n);
  }
  return std::nullopt;
}

template <class D>
bool is_chain_map(const ChainMap<D>& f) {
  return !chain_map_violation(f).has_value();
}

// X[k]_n = X_{n-k} with differential (-1)^k d.
template <class D>
ChainComplex<D> shift(const ChainComplex<D>& x, int k) {
  ChainComplex<D> y = x;
  y.lo = x.lo + k;
  y.hi = x.hi + k;
  if (k % 2 != 0)
    for (std::size_t i = 1; i < y.diffs.size(); ++i) y.diffs[i] = neg(x.dom, y.diffs[i]);
  return y;
}

template <class D>
ChainMap<D> shift_map(const ChainMap<D>& f, int k) {
  return make_map(shift(f.src, k), shift(f.tgt, k), f.comp);
}

// Cone(f)_n = X_{n-1} + Y_n with d(a, b) = (-a dX, a f + b dY).
template <class D>
ChainComplex<D> cone(const ChainMap<D>& f) {
  const auto& X = f.src;
  const auto& Y = f.tgt;
  const D& dom = X.dom;
  ChainComplex<D> c;
  c.dom = dom;
  c.lo = std::min(X.lo + 1, Y.lo);
  c.hi = std::max(X.hi + 1, Y.hi);
  for (int n = c.lo; n <= c.hi; ++n) {
    c.terms.push_back(direct_sum(dom, X.term(n - 1), Y.term(n)));
    const Index a = X.gens(n - 1), b = Y.gens(n), a2 = X.gens(n - 2), b2 = Y.gens(n - 1);
    MatOf<D> d = zeros(dom, a + b, a2 + b2);
    if (n > c.lo) {
      if (a > 0 && a2 > 0) d.topLeftCorner(a, a2) = neg(dom, X.d(n - 1));
      if (a > 0 && b2 > 0) d.topRightCorner(a, b2) = f.at(n - 1);
      if (b > 0 && b2 > 0) d.bottomRightCorner(b, b2) = Y.d(n);
    } else {
      d = zeros(dom, a + b, 0);
    }
    c.diffs.push_back(std::move(d));
  }
  return c;
}

// Fib(f) = Cone(f)[-1]: Fib_n = X_n + Y_{n+1}, d(a, b) = (a dX, -a f - b dY).
template <class D>
ChainComplex<D> fibre(const ChainMap<D>& f) {
  return shift(cone(f), -1);
}

template <class D>
bool has_free_terms(const ChainComplex<D>& x) {
  for (const auto& t : x.terms)
    if (!t.is_free()) return false;
  return true;
}

// R-entry (p, q) of a differential between free terms.
template <class D>
typename RingView<D>::Elem free_entry(const RingView<D>& R, const MatOf<D>& d, Index p, Index q) {
  return R.entry_of_block(d.block(p * R.k, q * R.k, R.k, R.k));
}

// Tensor product over R; at least one factor must have free terms.
// d(a (x) b) = da (x) b + (-1)^|a| a (x) db.
template <class D>
ChainComplex<D> tensor(const RingView<D>& R, const ChainComplex<D>& X, const ChainComplex<D>& Y) {
  const D& dom = R.dom;
  const bool xfree = has_free_terms(X), yfree = has_free_terms(Y);
  if (!xfree && !yfree) throw Error("TwoNonFreeFactors", "tensor needs a factor with free terms");
  ChainComplex<D> t;
  t.dom = dom;
  t.lo = X.lo + Y.lo;
  t.hi = X.hi + Y.hi;
  // layout: for each degree n, blocks (i, n - i) with i ascending
  auto term_of = [&](int i, int j) -> Module<D> {
    if (xfree) return direct_power(dom, Y.term(j), X.term(i).free_rank);
    return direct_power(dom, X.term(i), Y.term(j).free_rank);
  };
  std::vector<std::vector<std::pair<int, Index>>> layout;  // (i, offset)
  for (int n = t.lo; n <= t.hi; ++n) {
    Module<D> m;
    m.rel = zeros(dom, 0, 0);
    bool first = true;
    std::vector<std::pair<int, Index>> lay;
    for (int i = X.lo; i <= X.hi; ++i) {
      const int j = n - i;
      if (!Y.in_range(j)) continue;
      lay.emplace_back(i, m.gens);
      Module<D> part = term_of(i, j);
      m = first ? part : direct_sum(dom, m, part);
      first = false;
    }
    t.terms.push_back(m);
    layout.push_back(lay);
  }
  auto offset = [&](int n, int i) -> Index {
    for (auto& [ii, off] : layout[n - t.lo])
      if (ii == i) return off;
    return -1;
  };
  for (int n = t.lo; n <= t.hi; ++n) {
    MatOf<D> d = zeros(dom, t.gens(n), t.gens(n - 1));
    if (n == t.lo) {
      t.diffs.push_back(zeros(dom, t.gens(n), 0));
      continue;
    }
    for (auto& [i, off] : layout[n - t.lo]) {
      const int j = n - i;
      const int sign = (i % 2 == 0) ? 1 : -1;
      // dx (x) y
      if (X.in_range(i - 1)) {
        const Index o2 = offset(n - 1, i - 1);
        if (xfree) {
          const Index a = X.term(i).free_rank, a2 = X.term(i - 1).free_rank;
          const Module<D> yj = Y.term(j);
          const Index g = yj.gens;
          MatOf<D> dx = X.d(i);
          for (Index p = 0; p < a; ++p)
            for (Index q = 0; q < a2; ++q) {
              auto e = free_entry(R, dx, p, q);
              if (R.is_zero(e)) continue;
              d.block(off + p * g, o2 + q * g, g, g) = module_action(R, yj, e);
            }
        } else {
          const Index b = Y.term(j).free_rank;
          const Index g = X.gens(i), g2 = X.gens(i - 1);
          for (Index q = 0; q < b; ++q) d.block(off + q * g, o2 + q * g2, g, g2) = X.d(i);
        }
      }
      // (-1)^i x (x) dy
      if (Y.in_range(j - 1)) {
        const Index o2 = offset(n - 1, i);
        if (xfree) {
          const Index a = X.term(i).free_rank;
          const Index g = Y.gens(j), g2 = Y.gens(j - 1);
          MatOf<D> dy = sign > 0 ? Y.d(j) : neg(dom, Y.d(j));
          for (Index p = 0; p < a; ++p) d.block(off + p * g, o2 + p * g2, g, g2) = dy;
        } else {
          const Index b = Y.term(j).free_rank, b2 = Y.term(j - 1).free_rank;
          const Module<D> xi = X.term(i);
          const Index g = xi.gens;
          MatOf<D> dy = Y.d(j);
          for (Index q = 0; q < b; ++q)
            for (Index q2 = 0; q2 < b2; ++q2) {
              auto e = free_entry(R, dy, q, q2);
              if (R.is_zero(e)) continue;
              if (sign < 0) e = R.neg(e);
              d.block(off + q * g, o2 + q2 * g, g, g) = module_action(R, xi, e);
            }
        }
      }
    }
    t.diffs.push_back(std::move(d));
  }
  // labels: only when both factors carry them and the first has free terms
  if (X.labelled() && Y.labelled() && xfree) {
    t.label_width = X.label_width + Y.label_width;
    for (int n = t.lo; n <= t.hi; ++n) {
      std::vector<Block> bl;
      for (auto& [i, off] : layout[n - t.lo]) {
        const int j = n - i;
        const Module<D> yj = Y.term(j);
        const Index a = X.term(i).free_rank;
        // generator p of X_i lies in the X-block containing p*k
        for (Index p = 0; p < a; ++p) {
          Block xb;
          for (const auto& b : X.blocks_at(i))
            if (p * R.k >= b.offset && p * R.k < b.offset + b.size) xb = b;
          for (const auto& yb : Y.blocks_at(j)) {
            Block nb;
            nb.subset = xb.subset | (yb.subset << X.label_width);
            nb.sign = xb.sign * yb.sign;
            nb.offset = off + p * yj.gens + yb.offset;
            nb.size = yb.size;
            bl.push_back(nb);
          }
        }
      }
      t.blocks.push_back(bl);
    }
  }
  return t;
}

// Hom_R(X, Y) with X of free terms: Hom(X,Y)_n = prod_i Hom(X_i, Y_{i+n}),
// (Df) = dY f - (-1)^n f dX. Hom(R^a, N) is stored as N^a.
template <class D>
ChainComplex<D> hom_complex(const RingView<D>& R, const ChainComplex<D>& X, const ChainComplex<D>& Y) {
  const D& dom = R.dom;
  if (!has_free_terms(X)) throw Error("NonFreeSource", "hom_complex needs free source terms");
  ChainComplex<D> h;
  h.dom = dom;
  h.lo = Y.lo - X.hi;
  h.hi = Y.hi - X.lo;
  std::vector<std::vector<std::pair<int, Index>>> layout;
  for (int n = h.lo; n <= h.hi; ++n) {
    Module<D> m;
    m.rel = zeros(dom, 0, 0);
    bool first = true;
    std::vector<std::pair<int, Index>> lay;
    for (int i = X.lo; i <= X.hi; ++i) {
      if (!Y.in_range(i + n)) continue;
      lay.emplace_back(i, m.gens);
      Module<D> part = direct_power(dom, Y.term(i + n), X.term(i).free_rank);
      m = first ? part : direct_sum(dom, m, part);
      first = false;
    }
    h.terms.push_back(m);
    layout.push_back(lay);
  }
  auto offset = [&](int n, int i) -> Index {
    for (auto& [ii, off] : layout[n - h.lo])
      if (ii == i) return off;
    return -1;
  };
  for (int n = h.lo; n <= h.hi; ++n) {
    MatOf<D> d = zeros(dom, h.gens(n), h.gens(n - 1));
    if (n == h.lo) {
      h.diffs.push_back(zeros(dom, h.gens(n), 0));
      continue;
    }
    const bool minus = (n % 2 == 0);  // coefficient of f dX is -(-1)^n
    for (auto& [i, off] : layout[n - h.lo]) {
      const Index a = X.term(i).free_rank;
      // dY o f into Hom(X_i, Y_{i+n-1})
      if (Y.in_range(i + n - 1)) {
        const Index o2 = offset(n - 1, i);
        const Index g = Y.gens(i + n), g2 = Y.gens(i + n - 1);
        MatOf<D> dy = Y.d(i + n);
        for (Index p = 0; p < a; ++p) d.block(off + p * g, o2 + p * g2, g, g2) = dy;
      }
      // f o dX into Hom(X_{i+1}, Y_{i+n})
      if (X.in_range(i + 1)) {
        const Index o2 = offset(n - 1, i + 1);
        const Index a1 = X.term(i + 1).free_rank;
        const Module<D> yt = Y.term(i + n);
        const Index g = yt.gens;
        MatOf<D> dx = X.d(i + 1);
        for (Index p = 0; p < a1; ++p)
          for (Index q = 0; q < a; ++q) {
            auto e = free_entry(R, dx, p, q);
            if (R.is_zero(e)) continue;
            if (minus) e = R.neg(e);
            d.block(off + q * g, o2 + p * g, g, g) = module_action(R, yt, e);
          }
      }
    }
    h.diffs.push_back(std::move(d));
  }
  return h;
}

// H_n as a sub-quotient of the degree-n term.
template <class D>
Subquotient<D> homology(const ChainComplex<D>& x, int n) {
  const D& dom = x.dom;
  const Module<D> t = x.term(n);
  MatOf<D> z;
  if (x.gens(n - 1) == 0 || x.gens(n) == 0) {
    z = identity(dom, t.gens);
  } else {
    MatOf<D> k = left_kernel(dom, vstack(dom, x.d(n), x.term(n - 1).rel));
    z = k.rows() > 0 ? MatOf<D>(k.leftCols(t.gens)) : zeros(dom, 0, t.gens);
  }
  MatOf<D> zero = vstack(dom, x.gens(n + 1) > 0 ? x.d(n + 1) : zeros(dom, 0, t.gens), t.rel);
  return Subquotient<D>(dom, z, zero, t.act, t.ops);
}

template <class D>
Classification homology_classification(const ChainComplex<D>& x, int n) {
  return classify_module(x.dom, homology(x, n).presentation());
}

// |H_n| over Z/N without building the sub-quotient.
inline BigInt homology_order(const ChainComplex<ModularDomain>& x, int n) {
  const auto& dom = x.dom;
  const Module<ModularDomain> t = x.term(n);
  if (t.gens == 0) return 1;
  BigInt num = 1;
  for (Index i = 0; i < t.gens; ++i) num *= BigInt(dom.N);
  const Module<ModularDomain> below = x.term(n - 1);
  BigInt rel_below = rowspan_order(dom, below.rel);
  BigInt im_out = x.gens(n - 1) > 0 ? rowspan_order(dom, vstack(dom, x.d(n), below.rel)) : BigInt(1);
  BigInt im_in = rowspan_order(dom, vstack(dom, x.gens(n + 1) > 0 ? x.d(n + 1) : zeros(dom, 0, t.gens), t.rel));
  BigInt q, r;
  divmod_floor(num * rel_below, im_out * im_in, q, r);
  return q;
}

template <class D>
bool is_exact_at(const ChainComplex<D>& x, int n) {
  if constexpr (std::is_same_v<D, ModularDomain>) {
    return homology_order(x, n) == BigInt(1);
  } else {
    return homology_classification(x, n).is_zero();
  }
}

template <class D>
bool is_exact(const ChainComplex<D>& x) {
  for (int n = x.lo; n <= x.hi; ++n)
    if (!is_exact_at(x, n)) return false;
  return true;
}

// Verdict on f being a quasi-isomorphism, certified by exactness of its cone.
struct QuasiIsoResult {
  bool chain_map = false;
  bool quasi_iso = false;
  std::optional<int> failing_degree;
  std::string witness;
};

template <class D>
QuasiIsoResult quasi_iso_check(const ChainMap<D>& f) {
  QuasiIsoResult r;
  if (auto v = chain_map_violation(f)) {
    r.witness = *v;
    return r;
  }
  r.chain_map = true;
  ChainComplex<D> c = cone(f);
  for (int n = c.lo; n <= c.hi; ++n)
    if (!is_exact_at(c, n)) {
      r.failing_degree = n - 1;
      r.witness = "cone homology nonzero in degree " + std::to_string(n);
      return r;
    }
  r.quasi_iso = true;
  return r;
}

// Matrix of H_n(f) between the given homology sub-quotients.
template <class D>
MatOf<D> homology_map(const ChainMap<D>& f, int n, const Subquotient<D>& hs, const Subquotient<D>& ht) {
  return hs.induced_to(ht, f.at(n));
}

// Termwise isomorphism of complexes with identical term presentations up to
// the given map (used to certify explicit isomorphisms).
template <class D>
bool is_termwise_iso(const ChainMap<D>& f) {
  for (int n = f.src.lo; n <= f.src.hi; ++n)
    if (!is_isomorphism(f.src.dom, f.src.term(n), f.tgt.term(n), f.at(n))) return false;
  for (int n = f.tgt.lo; n <= f.tgt.hi; ++n)
    if (!f.src.in_range(n) && !module_is_zero(f.tgt.dom, f.tgt.term(n))) return false;
  return true;
}

// Hom_R(C, Y) for a module Y placed in degree 0 and arbitrary terms of C:
// Hom_n = Hom(C_{-n}, Y) with (Df) = -(-1)^n f dC, as in hom_complex.
// Each term keeps its HomModule so elements can be read as matrices.
template <class D>
struct HomComplex {
  ChainComplex<D> cx;
  std::vector<HomModule<D>> parts;

  const HomModule<D>& part(int n) const { return parts.at(n - cx.lo); }
};

template <class D>
HomComplex<D> hom_into_module(const ChainComplex<D>& C, const Module<D>& Y, const std::vector<std::string>& op_names = {}) {
  const D& dom = C.dom;
  HomComplex<D> h;
  const int lo = -C.hi, hi = -C.lo;
  std::vector<Module<D>> terms;
  for (int n = lo; n <= hi; ++n) {
    h.parts.push_back(hom_modules(dom, C.term(-n), Y, op_names));
    terms.push_back(h.parts.back().module());
  }
  std::vector<MatOf<D>> diffs;
  for (int n = lo + 1; n <= hi; ++n) {
    MatOf<D> amb = precompose_ambient(dom, C.d(-n + 1), Y.gens);
    if (n % 2 == 0) amb = neg(dom, amb);
    diffs.push_back(h.parts[n - lo].sq.induced_to(h.parts[n - 1 - lo].sq, amb));
  }
  h.cx = make_complex(dom, lo, terms, diffs);
  return h;
}

// Hom_R(X, C) for a module X in degree 0: Hom_n = Hom(X, C_n), D = dC o f.
template <class D>
HomComplex<D> hom_from_module(const Module<D>& X, const ChainComplex<D>& C, const std::vector<std::string>& op_names = {}) {
  const D& dom = C.dom;
  HomComplex<D> h;
  std::vector<Module<D>> terms;
  for (int n = C.lo; n <= C.hi; ++n) {
    h.parts.push_back(hom_modules(dom, X, C.term(n), op_names));
    terms.push_back(h.parts.back().module());
  }
  std::vector<MatOf<D>> diffs;
  for (int n = C.lo + 1; n <= C.hi; ++n)
    diffs.push_back(h.parts[n - C.lo].sq.induced_to(h.parts[n - 1 - C.lo].sq, postcompose_ambient(dom, C.d(n), X.gens)));
  h.cx = make_complex(dom, C.lo, terms, diffs);
  return h;
}

// Termwise direct sum of complexes over the union of their degree ranges.
template <class D>
ChainComplex<D> complex_sum(const D& dom, const std::vector<ChainComplex<D>>& xs, int lo, int hi) {
  ChainComplex<D> s;
  s.dom = dom;
  s.lo = lo;
  s.hi = hi;
  for (int n = lo; n <= hi; ++n) {
    Module<D> m;
    m.rel = zeros(dom, 0, 0);
    m.free_rank = 0;
    std::vector<MatOf<D>> ds;
    for (const auto& x : xs) {
      m = direct_sum(dom, m, x.term(n));
      ds.push_back(x.d(n));
    }
    if (m.rel.cols() != m.gens) m.rel = zeros(dom, 0, m.gens);
    s.terms.push_back(m);
    MatOf<D> d = zeros(dom, m.gens, n > lo ? s.terms[n - 1 - lo].gens : 0);
    if (n > lo) {
      Index r = 0, c = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ds[i].size() > 0) d.block(r, c, ds[i].rows(), ds[i].cols()) = ds[i];
        r += xs[i].gens(n);
        c += xs[i].gens(n - 1);
      }
    }
    s.diffs.push_back(std::move(d));
  }
  return s;
}

}  // namespace kc
