#pragma once

// Koszul complexes on commuting operators: the iterated cone (chain) and
// iterated fibre (cochain) constructions, the exterior-algebra model,
// power transitions and change of sequence.
//
// Every Koszul complex carries block labels: block S of sign s stands for
// s * e_S in the exterior model, which makes comparison maps diagonal.

#include "kc/complexes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kc {

inline int subset_size(unsigned s) { return __builtin_popcount(s); }

// Index subsets of {0..r-1} of size p, lexicographic on sorted tuples.
inline std::vector<unsigned> subsets_of_size(int r, int p) {
  std::vector<unsigned> out;
  std::vector<int> idx;
  std::function<void(int)> rec = [&](int start) {
    if (int(idx.size()) == p) {
      unsigned s = 0;
      for (int i : idx) s |= 1u << i;
      out.push_back(s);
      return;
    }
    for (int i = start; i < r; ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<int> subset_members(unsigned s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

template <class D>
ChainComplex<D> module_complex(const D& dom, const Module<D>& m) {
  ChainComplex<D> x = make_complex(dom, 0, {m}, {});
  x.blocks = {{Block{0, 1, 0, m.gens}}};
  return x;
}

template <class D>
const Block* find_block(const ChainComplex<D>& x, int n, unsigned subset) {
  if (!x.in_range(n) || !x.labelled()) return nullptr;
  for (const auto& b : x.blocks_at(n))
    if (b.subset == subset) return &b;
  return nullptr;
}

namespace detail {

// Lift a map on the base complex to every block of a Koszul-type complex.
// A block of subset S in degree n sits over base degree n - |S| (chain) or
// n + |S| (cochain).
template <class D>
ChainMap<D> lift_blockwise(const ChainComplex<D>& c, const ChainMap<D>& f, bool cochain) {
  std::vector<MatOf<D>> comp;
  for (int n = c.lo; n <= c.hi; ++n) {
    std::vector<MatOf<D>> parts;
    for (const auto& b : c.blocks_at(n)) {
      const int base = cochain ? n + subset_size(b.subset) : n - subset_size(b.subset);
      parts.push_back(f.at(base));
    }
    comp.push_back(parts.empty() ? zeros(c.dom, 0, 0) : blockdiag(c.dom, parts));
  }
  return make_map(c, c, std::move(comp));
}

}  // namespace detail

// Koszul complex of a base complex X on commuting chain endomorphisms fs,
// built as iterated cones (chain) or iterated fibres (cochain).
template <class D>
ChainComplex<D> koszul_on_complex(const ChainComplex<D>& X, const std::vector<ChainMap<D>>& fs, bool cochain) {
  ChainComplex<D> c = X;
  c.blocks.clear();
  for (int n = X.lo; n <= X.hi; ++n) c.blocks.push_back({Block{0, 1, 0, X.gens(n)}});
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const unsigned bit = 1u << i;
    ChainMap<D> lift = detail::lift_blockwise(c, fs[i], cochain);
    ChainComplex<D> next = cochain ? fibre(lift) : cone(lift);
    next.blocks.clear();
    for (int n = next.lo; n <= next.hi; ++n) {
      std::vector<Block> bl;
      if (!cochain) {
        // cone: C_{n-1} (gains the new index) then C_n
        for (const auto& b : c.in_range(n - 1) ? c.blocks_at(n - 1) : std::vector<Block>{})
          bl.push_back({b.subset | bit, subset_size(b.subset) % 2 ? -b.sign : b.sign, b.offset, b.size});
        const Index off = c.gens(n - 1);
        for (const auto& b : c.in_range(n) ? c.blocks_at(n) : std::vector<Block>{})
          bl.push_back({b.subset, b.sign, b.offset + off, b.size});
      } else {
        // fibre: C_n then C_{n+1} (gains the new index)
        for (const auto& b : c.in_range(n) ? c.blocks_at(n) : std::vector<Block>{}) bl.push_back(b);
        const Index off = c.gens(n);
        for (const auto& b : c.in_range(n + 1) ? c.blocks_at(n + 1) : std::vector<Block>{})
          bl.push_back({b.subset | bit, subset_size(b.subset) % 2 ? b.sign : -b.sign, b.offset + off, b.size});
      }
      next.blocks.push_back(std::move(bl));
    }
    c = std::move(next);
  }
  c.label_width = int(fs.size());
  return c;
}

// Koszul complex of a module on commuting operators (g x g matrices).
template <class D>
ChainComplex<D> koszul_ops(const D& dom, const Module<D>& m, const std::vector<MatOf<D>>& ops, bool cochain) {
  ChainComplex<D> base = module_complex(dom, m);
  std::vector<ChainMap<D>> fs;
  for (const auto& op : ops) fs.push_back(make_map(base, base, {op}));
  return koszul_on_complex(base, fs, cochain);
}

template <class D>
std::vector<MatOf<D>> power_operators(const RingView<D>& R, const Module<D>& m, const std::vector<typename RingView<D>::Elem>& x,
                                      const std::vector<int>& powers) {
  if (powers.size() != x.size()) throw Error("ShapeMismatch", "one exponent per element");
  std::vector<MatOf<D>> ops;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (powers[i] < 1) throw Error("BadExponents", "exponents must be positive");
    ops.push_back(module_action(R, m, R.pow(x[i], powers[i])));
  }
  return ops;
}

inline std::vector<int> uniform(std::size_t r, int n) { return std::vector<int>(r, n); }

// K_.(x^(n); M) in degrees [0, r].
template <class D>
ChainComplex<D> koszul_chain(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x, const Module<D>& m,
                             const std::vector<int>& powers) {
  return koszul_ops(R.dom, m, power_operators(R, m, x, powers), false);
}

// K^.(x^(n); M), stored at homological degrees [-r, 0].
template <class D>
ChainComplex<D> koszul_cochain(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x, const Module<D>& m,
                               const std::vector<int>& powers) {
  return koszul_ops(R.dom, m, power_operators(R, m, x, powers), true);
}

// The exterior-algebra model: blocks e_S in lexicographic order with
// d e_S = sum_j (-1)^j T_{s_j} e_{S - s_j} (chain) and
// d e*_S = sum_{t not in S} (-1)^pos(t) T_t e*_{S + t} (cochain),
// with zero-based positions.
template <class D>
ChainComplex<D> koszul_exterior_ops(const D& dom, const Module<D>& m, const std::vector<MatOf<D>>& ops, bool cochain) {
  const int r = int(ops.size());
  const Index g = m.gens;
  std::vector<Module<D>> terms;
  std::vector<std::vector<Block>> blocks;
  std::vector<MatOf<D>> diffs;
  auto index_of = [&](const std::vector<unsigned>& subs, unsigned s) {
    return Index(std::find(subs.begin(), subs.end(), s) - subs.begin());
  };
  // degree p for chain, -p for cochain; terms stored by ascending homological degree
  std::vector<int> ps;
  for (int p = 0; p <= r; ++p) ps.push_back(cochain ? r - p : p);
  for (int p : ps) {
    auto subs = subsets_of_size(r, p);
    terms.push_back(direct_power(dom, m, Index(subs.size())));
    std::vector<Block> bl;
    for (std::size_t i = 0; i < subs.size(); ++i) bl.push_back({subs[i], 1, Index(i) * g, g});
    blocks.push_back(bl);
  }
  for (std::size_t t = 1; t < ps.size(); ++t) {
    const int p = ps[t], q = ps[t - 1];  // map from degree with p to degree with q
    auto src = subsets_of_size(r, p), tgt = subsets_of_size(r, q);
    MatOf<D> d = zeros(dom, Index(src.size()) * g, Index(tgt.size()) * g);
    for (std::size_t a = 0; a < src.size(); ++a) {
      auto mem = subset_members(src[a]);
      if (!cochain) {
        for (std::size_t j = 0; j < mem.size(); ++j) {
          const Index b = index_of(tgt, src[a] & ~(1u << mem[j]));
          MatOf<D> blk = ops[mem[j]];
          d.block(Index(a) * g, b * g, g, g) = j % 2 == 0 ? blk : neg(dom, blk);
        }
      } else {
        for (int u = 0; u < r; ++u) {
          if (src[a] & (1u << u)) continue;
          const unsigned s2 = src[a] | (1u << u);
          const int pos = subset_size(s2 & ((1u << u) - 1));  // zero-based position of u
          const Index b = index_of(tgt, s2);
          MatOf<D> blk = ops[u];
          d.block(Index(a) * g, b * g, g, g) = pos % 2 == 0 ? blk : neg(dom, blk);
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  ChainComplex<D> c = make_complex(dom, cochain ? -r : 0, terms, diffs);
  c.blocks = std::move(blocks);
  c.label_width = r;
  return c;
}

// Map sending block S of src to block S of tgt, scaled by coef(S, n) and by
// the product of the two block signs. Missing target blocks map to zero.
template <class D>
ChainMap<D> diagonal_block_map(const ChainComplex<D>& src, const ChainComplex<D>& tgt,
                               const std::function<MatOf<D>(unsigned, int)>& coef) {
  std::vector<MatOf<D>> comp;
  for (int n = src.lo; n <= src.hi; ++n) {
    MatOf<D> f = zeros(src.dom, src.gens(n), tgt.gens(n));
    for (const auto& b : src.blocks_at(n)) {
      const Block* t = find_block(tgt, n, b.subset);
      if (!t) continue;
      MatOf<D> c = coef(b.subset, n);
      f.block(b.offset, t->offset, b.size, t->size) = b.sign * t->sign > 0 ? c : neg(src.dom, c);
    }
    comp.push_back(std::move(f));
  }
  return make_map(src, tgt, std::move(comp));
}

template <class D>
ChainMap<D> relabel_map(const ChainComplex<D>& src, const ChainComplex<D>& tgt) {
  return diagonal_block_map<D>(src, tgt, [&](unsigned s, int n) {
    const Block* b = find_block(src, n, s);
    return identity(src.dom, b->size);
  });
}

// Exterior model together with its isomorphism onto the iterated-cone complex.
template <class D>
std::pair<ChainComplex<D>, ChainMap<D>> koszul_exterior(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x,
                                                        const Module<D>& m, const std::vector<int>& powers, bool cochain = false) {
  auto ops = power_operators(R, m, x, powers);
  ChainComplex<D> ext = koszul_exterior_ops(R.dom, m, ops, cochain);
  ChainComplex<D> it = koszul_ops(R.dom, m, ops, cochain);
  ChainMap<D> iso = relabel_map(ext, it);
  return {ext, iso};
}

// Power transition: chain K_.(x^(m)) -> K_.(x^(n)) multiplies e_S by
// prod_{j in S} x_j^(m_j - n_j); cochain K^.(x^(n)) -> K^.(x^(m)) likewise.
template <class D>
ChainMap<D> koszul_transition(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x, const Module<D>& mod,
                              const std::vector<int>& m, const std::vector<int>& n, bool cochain) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (m.at(i) < n.at(i)) throw Error("BadExponents", "transition needs m >= n");
  ChainComplex<D> km = koszul_ops(R.dom, mod, power_operators(R, mod, x, m), cochain);
  ChainComplex<D> kn = koszul_ops(R.dom, mod, power_operators(R, mod, x, n), cochain);
  auto coef = [&](unsigned s, int) {
    auto c = R.one();
    for (int j : subset_members(s)) c = R.mul(c, R.pow(x[j], m[j] - n[j]));
    return module_action(R, mod, c);
  };
  return cochain ? diagonal_block_map<D>(kn, km, coef) : diagonal_block_map<D>(km, kn, coef);
}

template <class D>
ChainMap<D> koszul_transition(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x, const Module<D>& mod, int m,
                              int n, bool cochain) {
  if (m < n) throw Error("BadExponents", "transition needs m >= n");
  return koszul_transition(R, x, mod, uniform(x.size(), m), uniform(x.size(), n), cochain);
}

template <class D>
using ElemMatrix = std::vector<std::vector<typename RingView<D>::Elem>>;

// Determinant of the minor of a on the given rows and columns (Leibniz).
template <class D>
typename RingView<D>::Elem minor_det(const RingView<D>& R, const ElemMatrix<D>& a, const std::vector<int>& rows,
                                     const std::vector<int>& cols) {
  const std::size_t k = rows.size();
  if (k == 0) return R.one();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  auto total = R.zero();
  do {
    int inv = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) inv += perm[i] > perm[j];
    auto t = R.one();
    for (std::size_t i = 0; i < k; ++i) t = R.mul(t, a[rows[i]][cols[perm[i]]]);
    total = inv % 2 ? R.sub(total, t) : R.add(total, t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// For y = x A (y_j = sum_i x_i A_ij) with A invertible: the isomorphism
// K_.(y; M) -> K_.(x; M) given by the exterior powers of A.
template <class D>
ChainMap<D> change_of_sequence(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x,
                               const std::vector<typename RingView<D>::Elem>& y, const ElemMatrix<D>& A, const Module<D>& m) {
  const int r = int(x.size());
  if (int(y.size()) != r || int(A.size()) != r) throw Error("SequenceMismatch", "sequence lengths differ");
  for (int j = 0; j < r; ++j) {
    auto s = R.zero();
    for (int i = 0; i < r; ++i) s = R.add(s, R.mul(x[i], A[i][j]));
    if (s != y[j]) throw Error("SequenceMismatch", "y is not x*A at position " + std::to_string(j));
  }
  std::vector<int> all(r);
  std::iota(all.begin(), all.end(), 0);
  if (!R.is_unit(minor_det(R, A, all, all))) throw Error("NotInvertible", "change-of-sequence matrix is not invertible");
  ChainComplex<D> ky = koszul_chain(R, y, m, uniform(r, 1));
  ChainComplex<D> kx = koszul_chain(R, x, m, uniform(r, 1));
  std::vector<MatOf<D>> comp;
  for (int p = 0; p <= r; ++p) {
    MatOf<D> f = zeros(R.dom, ky.gens(p), kx.gens(p));
    for (const auto& bt : ky.blocks_at(p))
      for (const auto& bs : kx.blocks_at(p)) {
        auto det = minor_det(R, A, subset_members(bs.subset), subset_members(bt.subset));
        if (bt.sign * bs.sign < 0) det = R.neg(det);
        f.block(bt.offset, bs.offset, bt.size, bs.size) = module_action(R, m, det);
      }
    comp.push_back(std::move(f));
  }
  return make_map(ky, kx, std::move(comp));
}

// Explicit isomorphism Hom_R(K_.(x^(n); R), M) -> K^.(x^(n); M).
template <class D>
ChainMap<D> hom_dual_iso(const RingView<D>& R, const std::vector<typename RingView<D>::Elem>& x, const Module<D>& m,
                         const std::vector<int>& powers) {
  Module<D> free1 = free_module(R, 1);
  ChainComplex<D> k = koszul_chain(R, x, free1, powers);
  ChainComplex<D> h = hom_complex(R, k, module_complex(R.dom, m));
  ChainComplex<D> kc = koszul_cochain(R, x, m, powers);
  const int r = int(x.size());
  std::vector<MatOf<D>> comp;
  int c = 1;  // c_{p+1} = (-1)^(p+1) c_p
  std::vector<int> cs;
  for (int p = 0; p <= r; ++p) {
    cs.push_back(c);
    c = (p + 1) % 2 ? -c : c;
  }
  for (int n = h.lo; n <= h.hi; ++n) {
    const int p = -n;
    MatOf<D> f = zeros(R.dom, h.gens(n), kc.gens(n));
    // Hom(K_p, M) = M^a, one copy per R-generator of K_p, i.e. per block
    for (const auto& b : k.blocks_at(p)) {
      const Index idx = b.offset / R.k;
      const Block* t = find_block(kc, n, b.subset);
      const int sign = cs[p] * b.sign * t->sign;
      MatOf<D> id = identity(R.dom, m.gens);
      f.block(idx * m.gens, t->offset, m.gens, m.gens) = sign > 0 ? id : neg(R.dom, id);
    }
    comp.push_back(std::move(f));
  }
  return make_map(h, kc, std::move(comp));
}

// K_.(x; X) with the inclusion of (0 :_X x)[1] and the surjection onto X/xX.
template <class D>
struct TorsionQuotient {
  ChainComplex<D> koszul;
  ChainComplex<D> annihilator;  // (0 :_X x), unshifted
  ChainComplex<D> quotient;     // X / xX
  ChainMap<D> incl;             // annihilator[1] -> koszul
  ChainMap<D> surj;             // koszul -> quotient
};

template <class D>
TorsionQuotient<D> torsion_and_quotient_maps(const RingView<D>& R, const typename RingView<D>::Elem& x, const ChainComplex<D>& X) {
  const D& dom = R.dom;
  std::vector<MatOf<D>> xs;
  for (int n = X.lo; n <= X.hi; ++n) xs.push_back(module_action(R, X.term(n), x));
  ChainMap<D> mx = make_map(X, X, xs);
  TorsionQuotient<D> out;
  out.koszul = cone(mx);
  std::vector<Subquotient<D>> ann;
  std::vector<Module<D>> aterms, qterms;
  for (int n = X.lo; n <= X.hi; ++n) {
    const Module<D> t = X.term(n);
    ann.push_back(kernel_subquotient(dom, t, t, mx.at(n)));
    aterms.push_back(ann.back().presentation());
    qterms.push_back(cokernel_module(dom, t, mx.at(n)));
  }
  std::vector<MatOf<D>> ad, qd;
  for (int n = X.lo + 1; n <= X.hi; ++n) {
    ad.push_back(ann[n - X.lo].induced_to(ann[n - 1 - X.lo], X.d(n)));
    qd.push_back(X.d(n));
  }
  out.annihilator = make_complex(dom, X.lo, aterms, ad);
  out.quotient = make_complex(dom, X.lo, qterms, qd);
  ChainComplex<D> sa = shift(out.annihilator, 1);
  std::vector<MatOf<D>> inc;
  for (int n = sa.lo; n <= sa.hi; ++n) {
    const MatOf<D>& g = ann[n - 1 - X.lo].generators();
    inc.push_back(hstack(dom, g, zeros(dom, g.rows(), X.gens(n))));
  }
  out.incl = make_map(sa, out.koszul, inc);
  std::vector<MatOf<D>> sur;
  for (int n = out.koszul.lo; n <= out.koszul.hi; ++n)
    sur.push_back(vstack(dom, zeros(dom, X.gens(n - 1), X.gens(n)), identity(dom, X.gens(n))));
  out.surj = make_map(out.koszul, out.quotient, sur);
  return out;
}

}  // namespace kc
