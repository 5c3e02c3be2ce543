#pragma once

// Truncated coefficient modules M[U]/U^(n) and windows of M[U^-1], the
// (x - U) Koszul complexes on them, their comparison maps with K(x^(n)),
// directed systems in n with limit detection, and finite telescopes and
// microscopes.

#include "kc/koszul.hpp"

#include <map>
#include <string>
#include <vector>

namespace kc {

template <class D>
using Seq = std::vector<typename RingView<D>::Elem>;

inline Index mono_count(int r, int n) {
  Index c = 1;
  for (int i = 0; i < r; ++i) c *= n;
  return c;
}

// Exponent vector of a monomial index; a[0] is the most significant digit.
inline std::vector<int> mono_digits(Index idx, int r, int n) {
  std::vector<int> a(r);
  for (int i = r - 1; i >= 0; --i) {
    a[i] = int(idx % n);
    idx /= n;
  }
  return a;
}

inline Index mono_index(const std::vector<int>& a, int n) {
  Index idx = 0;
  for (int v : a) idx = idx * n + v;
  return idx;
}

inline Index mono_reverse(Index idx, int r, int n) {
  auto a = mono_digits(idx, r, n);
  for (auto& v : a) v = n - 1 - v;
  return mono_index(a, n);
}

inline std::string u_name(int i) { return "U" + std::to_string(i + 1); }

// Window index b of M[U^-1] stands for U^window_exponent(b).
inline int window_exponent(int b, int n) { return -(n - 1 - b); }

// Multiplication by U_i on monomials of R[U]/U^(n), rows acting on the left.
template <class D>
MatOf<D> shift_matrix(const D& dom, int r, int n, int i) {
  const Index c = mono_count(r, n);
  MatOf<D> s = zeros(dom, c, c);
  for (Index idx = 0; idx < c; ++idx) {
    auto a = mono_digits(idx, r, n);
    if (a[i] + 1 >= n) continue;
    ++a[i];
    s(idx, mono_index(a, n)) = dom.one();
  }
  return s;
}

namespace detail {

template <class D>
Module<D> poly_module(const D& dom, const Module<D>& m, int r, int n) {
  if (n < 1) throw Error("BadExponents", "truncation needs n >= 1");
  const Index c = mono_count(r, n);
  const MatOf<D> I = identity(dom, c);
  Module<D> t;
  t.gens = c * m.gens;
  t.rel = m.rel.rows() > 0 ? kron(dom, I, m.rel) : zeros(dom, 0, t.gens);
  for (const auto& a : m.act) t.act.push_back(kron(dom, I, a));
  for (const auto& [name, op] : m.ops) t.ops.emplace_back(name, kron(dom, I, op));
  for (int i = 0; i < r; ++i) t.ops.emplace_back(u_name(i), kron(dom, shift_matrix(dom, r, n, i), identity(dom, m.gens)));
  t.free_rank = m.is_free() ? c * m.free_rank : -1;
  return t;
}

}  // namespace detail

// M[U]/U^(n) with basis U^a (x) m at index mono(a) * g + q.
template <class D>
Module<D> trunc_poly_module(const D& dom, const Module<D>& m, int r, int n) {
  return detail::poly_module(dom, m, r, n);
}

// The window of M[U^-1] with exponents 0 .. -(n-1). U_i moves toward exponent
// 0 and kills it. Sending U^-(n-1) to 1 makes it isomorphic to M[U]/U^(n) as
// an R[U]-module, so both share the same matrices.
template <class D>
Module<D> inverse_poly_module(const D& dom, const Module<D>& m, int r, int n) {
  return detail::poly_module(dom, m, r, n);
}

// Quotient M[U]/U^(m) -> M[U]/U^(n) for m >= n.
template <class D>
MatOf<D> trunc_quotient_matrix(const D& dom, int r, int m, int n, Index g) {
  const Index cm = mono_count(r, m);
  MatOf<D> q = zeros(dom, cm * g, mono_count(r, n) * g);
  for (Index idx = 0; idx < cm; ++idx) {
    auto a = mono_digits(idx, r, m);
    bool keep = true;
    for (int v : a) keep = keep && v < n;
    if (!keep) continue;
    const Index to = mono_index(a, n);
    for (Index j = 0; j < g; ++j) q(idx * g + j, to * g + j) = dom.one();
  }
  return q;
}

// Inclusion of the n-window into the m-window (exponents are kept).
template <class D>
MatOf<D> window_inclusion_matrix(const D& dom, int r, int n, int m, Index g) {
  const Index cn = mono_count(r, n);
  MatOf<D> q = zeros(dom, cn * g, mono_count(r, m) * g);
  for (Index idx = 0; idx < cn; ++idx) {
    auto a = mono_digits(idx, r, n);
    for (auto& v : a) v += m - n;
    const Index to = mono_index(a, m);
    for (Index j = 0; j < g; ++j) q(idx * g + j, to * g + j) = dom.one();
  }
  return q;
}

// The operators x_i - U_i on a module carrying U-operators.
template <class D>
std::vector<MatOf<D>> xu_operators(const RingView<D>& R, const Module<D>& t, const Seq<D>& x) {
  std::vector<MatOf<D>> ops;
  for (std::size_t i = 0; i < x.size(); ++i)
    ops.push_back(sub(R.dom, module_action(R, t, x[i]), module_op(t, u_name(int(i)))));
  return ops;
}

// K_.(x - U; M[U]/U^(n)).
template <class D>
ChainComplex<D> koszul_xu_chain(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n) {
  Module<D> t = trunc_poly_module(R.dom, m, int(x.size()), n);
  return koszul_ops(R.dom, t, xu_operators(R, t, x), false);
}

// K^.(x - U; n-window of M[U^-1]).
template <class D>
ChainComplex<D> koszul_xu_cochain(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n) {
  Module<D> w = inverse_poly_module(R.dom, m, int(x.size()), n);
  return koszul_ops(R.dom, w, xu_operators(R, w, x), true);
}

// Chain: quotient K(x-U; M[U]/U^(m)) -> K(x-U; M[U]/U^(n)).
// Cochain: window inclusion K^(x-U; W_n) -> K^(x-U; W_m), i.e. U^(m-n).
template <class D>
ChainMap<D> xu_transition(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int hi, int lo, bool cochain) {
  if (hi < lo) throw Error("BadExponents", "transition needs m >= n");
  const int r = int(x.size());
  auto big = cochain ? koszul_xu_cochain(R, x, m, hi) : koszul_xu_chain(R, x, m, hi);
  auto small = cochain ? koszul_xu_cochain(R, x, m, lo) : koszul_xu_chain(R, x, m, lo);
  if (cochain) {
    MatOf<D> inc = window_inclusion_matrix(R.dom, r, lo, hi, m.gens);
    return diagonal_block_map<D>(small, big, [&](unsigned, int) { return inc; });
  }
  MatOf<D> q = trunc_quotient_matrix(R.dom, r, hi, lo, m.gens);
  return diagonal_block_map<D>(big, small, [&](unsigned, int) { return q; });
}

// f_n(x_i, U_i) = sum_j x_i^(n-1-j) U_i^j on a truncated module.
template <class D>
MatOf<D> fn_operator(const RingView<D>& R, const Module<D>& t, const typename RingView<D>::Elem& xi, int i, int n) {
  const MatOf<D>& u = module_op(t, u_name(i));
  MatOf<D> out = zeros(R.dom, t.gens, t.gens);
  MatOf<D> up = identity(R.dom, t.gens);
  for (int j = 0; j < n; ++j) {
    out = add(R.dom, out, mul(R.dom, module_action(R, t, R.pow(xi, n - 1 - j)), up));
    up = mul(R.dom, up, u);
  }
  return out;
}

// Comparison maps between K(x^(n); M) and the (x - U) complex on the
// truncation (chain) or window (cochain). psi multiplies block S by the
// product of f_n over S (chain) or over the complement (cochain); phi takes
// the top U-coefficient on those indices and evaluates U = x on the rest.
// phi o psi is the identity.
template <class D>
struct Weak5Maps {
  ChainMap<D> psi;  // K(x^(n); M) -> K(x - U; ...)
  ChainMap<D> phi;  // K(x - U; ...) -> K(x^(n); M)
};

template <class D>
Weak5Maps<D> weak5_maps(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n, bool cochain) {
  const D& dom = R.dom;
  const int r = int(x.size());
  const Index g = m.gens, c = mono_count(r, n);
  auto kx = cochain ? koszul_cochain(R, x, m, uniform(r, n)) : koszul_chain(R, x, m, uniform(r, n));
  auto ku = cochain ? koszul_xu_cochain(R, x, m, n) : koszul_xu_chain(R, x, m, n);
  const Module<D> t = trunc_poly_module(dom, m, r, n);
  std::vector<MatOf<D>> fs;
  for (int i = 0; i < r; ++i) fs.push_back(fn_operator(R, t, x[i], i, n));
  MatOf<D> iota = zeros(dom, g, c * g);
  iota.leftCols(g) = identity(dom, g);
  auto chosen = [&](unsigned s, int i) { return bool(s & (1u << i)) != cochain; };
  Weak5Maps<D> out;
  out.psi = diagonal_block_map<D>(kx, ku, [&](unsigned s, int) {
    MatOf<D> f = iota;
    for (int i = 0; i < r; ++i)
      if (chosen(s, i)) f = mul(dom, f, fs[i]);
    return f;
  });
  out.phi = diagonal_block_map<D>(ku, kx, [&](unsigned s, int) {
    MatOf<D> f = zeros(dom, c * g, g);
    for (Index idx = 0; idx < c; ++idx) {
      auto a = mono_digits(idx, r, n);
      auto coef = R.one();
      bool live = true;
      for (int i = 0; i < r && live; ++i) {
        if (chosen(s, i))
          live = a[i] == n - 1;
        else
          coef = R.mul(coef, R.pow(x[i], a[i]));
      }
      if (live) f.block(idx * g, 0, g, g) = module_action(R, m, coef);
    }
    return f;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Duality maps at truncation n.

// Ambient reindexing Hom_R(W_n(R), M) -> M[U]/U^(n): the value on the R-basis
// vector U^-e lands on U^e.
template <class D>
MatOf<D> window_dual_ambient(const RingView<D>& R, int r, int n, Index gm) {
  const Index c = mono_count(r, n);
  MatOf<D> a = zeros(R.dom, c * R.k * gm, c * gm);
  for (Index b = 0; b < c; ++b) {
    const Index e = mono_reverse(b, r, n);
    for (Index q = 0; q < gm; ++q) a((b * R.k + R.unit) * gm + q, e * gm + q) = R.dom.one();
  }
  return a;
}

template <class D>
struct Dual0 {
  Module<D> window;             // W_n(R)
  HomModule<D> hom;             // Hom_R(W_n(R), M)
  Module<D> trunc;              // M[U]/U^(n)
  MatOf<D> phi;                 // hom presentation -> trunc
  std::vector<MatOf<D>> hom_u;  // U_i on the hom presentation, by precomposition
};

template <class D>
Dual0<D> dual0_pairing(const RingView<D>& R, const Module<D>& m, int r, int n) {
  const D& dom = R.dom;
  Dual0<D> d;
  d.window = inverse_poly_module(dom, free_module(R, 1), r, n);
  d.hom = hom_modules(dom, d.window, m);
  d.trunc = trunc_poly_module(dom, m, r, n);
  d.phi = mul(dom, d.hom.sq.generators(), window_dual_ambient(R, r, n, m.gens));
  for (int i = 0; i < r; ++i)
    d.hom_u.push_back(d.hom.sq.induced(precompose_ambient(dom, module_op(d.window, u_name(i)), m.gens)));
  return d;
}

namespace detail {

// c_0 = 1, c_{p+1} = (-1)^p c_p: the sign relating Hom(K^., M) to K_.
inline std::vector<int> hom_cochain_signs(int r) {
  std::vector<int> cs{1};
  for (int p = 0; p < r; ++p) cs.push_back(p % 2 ? -cs.back() : cs.back());
  return cs;
}

}  // namespace detail

// Hom_R(K^.(x - U; W_n(R)), M) -> K_.(x - U; M[U]/U^(n)).
template <class D>
ChainMap<D> dual1_map(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n) {
  const D& dom = R.dom;
  const int r = int(x.size());
  const Index c = mono_count(r, n), gm = m.gens;
  Module<D> w = inverse_poly_module(dom, free_module(R, 1), r, n);
  auto kc = koszul_ops(dom, w, xu_operators(R, w, x), true);
  auto h = hom_complex(R, kc, module_complex(dom, m));
  auto kt = koszul_xu_chain(R, x, m, n);
  auto cs = detail::hom_cochain_signs(r);
  std::vector<MatOf<D>> comp;
  for (int p = h.lo; p <= h.hi; ++p) {
    MatOf<D> f = zeros(dom, h.gens(p), kt.gens(p));
    for (const auto& b : kc.blocks_at(-p)) {
      const Block* t = find_block(kt, p, b.subset);
      const int sign = cs[p] * b.sign * t->sign;
      for (Index bb = 0; bb < c; ++bb) {
        const Index gen = b.offset / R.k + bb;
        MatOf<D> id = identity(dom, gm);
        f.block(gen * gm, t->offset + mono_reverse(bb, r, n) * gm, gm, gm) = sign > 0 ? id : neg(dom, id);
      }
    }
    comp.push_back(std::move(f));
  }
  return make_map(h, kt, std::move(comp));
}

// Hom_R(K^.(x - U; W_n(X)), Y) -> K_.(x - U; Hom_R(X, Y)[U]/U^(n)).
template <class D>
struct Dual2 {
  HomModule<D> hxy;
  HomComplex<D> source;
  ChainComplex<D> target;
  ChainMap<D> map;
};

template <class D>
Dual2<D> dual2_map(const RingView<D>& R, const Seq<D>& x, const Module<D>& X, const Module<D>& Y, int n) {
  const D& dom = R.dom;
  const int r = int(x.size());
  const Index c = mono_count(r, n), gx = X.gens, gy = Y.gens;
  Dual2<D> d;
  d.hxy = hom_modules(dom, X, Y);
  const Index gh = d.hxy.module().gens;
  Module<D> w = inverse_poly_module(dom, X, r, n);
  auto kc = koszul_ops(dom, w, xu_operators(R, w, x), true);
  d.source = hom_into_module(kc, Y);
  d.target = koszul_xu_chain(R, x, d.hxy.module(), n);
  auto cs = detail::hom_cochain_signs(r);
  std::vector<MatOf<D>> comp;
  for (int p = d.source.cx.lo; p <= d.source.cx.hi; ++p) {
    const auto& part = d.source.part(p);
    const Index s = part.module().gens;
    MatOf<D> f = zeros(dom, s, d.target.gens(p));
    for (Index gi = 0; gi < s; ++gi) {
      MatOf<D> F = part.generator_matrix(gi);
      for (const auto& b : kc.blocks_at(-p)) {
        const Block* t = find_block(d.target, p, b.subset);
        const int sign = cs[p] * b.sign * t->sign;
        for (Index bb = 0; bb < c; ++bb) {
          MatOf<D> fb = F.block(b.offset + bb * gx, 0, gx, gy);
          RowOf<D> h = d.hxy.sq.coords(vectorize<D>(fb));
          if (sign < 0) h = neg(dom, MatOf<D>(h));
          f.block(gi, t->offset + mono_reverse(bb, r, n) * gh, 1, gh) = h;
        }
      }
    }
    comp.push_back(std::move(f));
  }
  d.map = make_map(d.source.cx, d.target, std::move(comp));
  return d;
}

// K_.(x - U; Hom_R(X, Y)[U]/U^(n)) -> Hom_R(X, K_.(x - U; Y[U]/U^(n))).
template <class D>
struct Dual3 {
  HomModule<D> hxy;
  ChainComplex<D> source;
  HomComplex<D> target;
  ChainMap<D> map;
};

template <class D>
Dual3<D> dual3_map(const RingView<D>& R, const Seq<D>& x, const Module<D>& X, const Module<D>& Y, int n) {
  const D& dom = R.dom;
  const int r = int(x.size());
  const Index c = mono_count(r, n), gx = X.gens, gy = Y.gens;
  Dual3<D> d;
  d.hxy = hom_modules(dom, X, Y);
  const Index gh = d.hxy.module().gens;
  d.source = koszul_xu_chain(R, x, d.hxy.module(), n);
  auto ky = koszul_xu_chain(R, x, Y, n);
  d.target = hom_from_module(X, ky);
  std::vector<MatOf<D>> comp;
  for (int p = d.source.lo; p <= d.source.hi; ++p) {
    const auto& part = d.target.part(p);
    MatOf<D> f = zeros(dom, d.source.gens(p), part.module().gens);
    for (const auto& b : d.source.blocks_at(p)) {
      const Block* t = find_block(ky, p, b.subset);
      const int sign = b.sign * t->sign;
      for (Index a = 0; a < c; ++a)
        for (Index j = 0; j < gh; ++j) {
          MatOf<D> F = zeros(dom, gx, ky.gens(p));
          MatOf<D> hj = d.hxy.generator_matrix(j);
          F.block(0, t->offset + a * gy, gx, gy) = sign > 0 ? hj : neg(dom, hj);
          f.row(b.offset + a * gh + j) = part.sq.coords(vectorize<D>(F));
        }
    }
    comp.push_back(std::move(f));
  }
  d.map = make_map(d.source, d.target.cx, std::move(comp));
  return d;
}

// Hom_R(K^.(x - U; W_n(X)), Y) -> Hom_{R[U]}(K^.(x - U; X[U]/U^(n)), Y[U]/U^(n))
// -> K_.(x - U; Hom_R(X, Y)[U]/U^(n)).
template <class D>
struct Dual6 {
  HomModule<D> hxy;
  HomComplex<D> source, middle;
  ChainComplex<D> target;
  ChainMap<D> first, second;
};

template <class D>
Dual6<D> dual6_maps(const RingView<D>& R, const Seq<D>& x, const Module<D>& X, const Module<D>& Y, int n) {
  const D& dom = R.dom;
  const int r = int(x.size());
  const Index c = mono_count(r, n), gx = X.gens, gy = Y.gens;
  Dual6<D> d;
  d.hxy = hom_modules(dom, X, Y);
  const Index gh = d.hxy.module().gens;
  Module<D> w = inverse_poly_module(dom, X, r, n);
  Module<D> tx = trunc_poly_module(dom, X, r, n);
  Module<D> ty = trunc_poly_module(dom, Y, r, n);
  auto kw = koszul_ops(dom, w, xu_operators(R, w, x), true);
  auto kt = koszul_ops(dom, tx, xu_operators(R, tx, x), true);
  std::vector<std::string> us;
  for (int i = 0; i < r; ++i) us.push_back(u_name(i));
  d.source = hom_into_module(kw, Y);
  d.middle = hom_into_module(kt, ty, us);
  d.target = koszul_xu_chain(R, x, d.hxy.module(), n);
  auto cs = detail::hom_cochain_signs(r);
  std::vector<MatOf<D>> c1, c2;
  for (int p = d.source.cx.lo; p <= d.source.cx.hi; ++p) {
    const auto& sp = d.source.part(p);
    const auto& mp = d.middle.part(p);
    MatOf<D> f = zeros(dom, sp.module().gens, mp.module().gens);
    for (Index gi = 0; gi < sp.module().gens; ++gi) {
      MatOf<D> F = sp.generator_matrix(gi);
      MatOf<D> G = zeros(dom, F.rows(), c * gy);
      for (const auto& b : kw.blocks_at(-p))
        for (Index ia = 0; ia < c; ++ia)
          for (Index ic = 0; ic < c; ++ic) {
            auto a = mono_digits(ia, r, n), cc = mono_digits(ic, r, n);
            std::vector<int> bb(r);
            bool ok = true;
            for (int i = 0; i < r && ok; ++i) {
              ok = cc[i] >= a[i];
              bb[i] = n - 1 - (cc[i] - a[i]);
            }
            if (!ok) continue;
            G.block(b.offset + ia * gx, ic * gy, gx, gy) = F.block(b.offset + mono_index(bb, n) * gx, 0, gx, gy);
          }
      f.row(gi) = mp.sq.coords(vectorize<D>(G));
    }
    c1.push_back(std::move(f));
    MatOf<D> g = zeros(dom, mp.module().gens, d.target.gens(p));
    for (Index gi = 0; gi < mp.module().gens; ++gi) {
      MatOf<D> G = mp.generator_matrix(gi);
      for (const auto& b : kt.blocks_at(-p)) {
        const Block* t = find_block(d.target, p, b.subset);
        const int sign = cs[p] * b.sign * t->sign;
        for (Index ic = 0; ic < c; ++ic) {
          RowOf<D> h = d.hxy.sq.coords(vectorize<D>(MatOf<D>(G.block(b.offset, ic * gy, gx, gy))));
          if (sign < 0) h = neg(dom, MatOf<D>(h));
          g.block(gi, t->offset + ic * gh, 1, gh) = h;
        }
      }
    }
    c2.push_back(std::move(g));
  }
  d.first = make_map(d.source.cx, d.middle.cx, std::move(c1));
  d.second = make_map(d.middle.cx, d.target, std::move(c2));
  return d;
}

// W_n(R) (x) M -> W_n(M) on the cochain (x - U) complexes.
template <class D>
ChainMap<D> window_tensor_map(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n) {
  const D& dom = R.dom;
  const int r = int(x.size());
  Module<D> w = inverse_poly_module(dom, free_module(R, 1), r, n);
  auto kc = koszul_ops(dom, w, xu_operators(R, w, x), true);
  auto t = tensor(R, kc, module_complex(dom, m));
  auto km = koszul_xu_cochain(R, x, m, n);
  const Index gm = m.gens;
  std::vector<MatOf<D>> comp;
  for (int p = t.lo; p <= t.hi; ++p) {
    MatOf<D> f = zeros(dom, t.gens(p), km.gens(p));
    const Index a = kc.term(p).free_rank;
    for (Index g = 0; g < a; ++g) {
      const Block* xb = nullptr;
      for (const auto& b : kc.blocks_at(p))
        if (g * R.k >= b.offset && g * R.k < b.offset + b.size) xb = &b;
      const Block* tb = find_block(km, p, xb->subset);
      const Index bb = g - xb->offset / R.k;
      MatOf<D> id = identity(dom, gm);
      f.block(g * gm, tb->offset + bb * gm, gm, gm) = xb->sign * tb->sign > 0 ? id : neg(dom, id);
    }
    comp.push_back(std::move(f));
  }
  return make_map(t, km, std::move(comp));
}

// ---------------------------------------------------------------------------
// Directed systems indexed by n = 1 .. n_max.

enum class Orientation { Direct, Inverse };

// transitions[i] joins stages i and i + 1 (0-based): stage i -> i + 1 for a
// direct system, stage i + 1 -> i for an inverse one.
template <class D>
struct DirectedSystem {
  Orientation orientation = Orientation::Inverse;
  std::vector<ChainComplex<D>> stages;
  std::vector<ChainMap<D>> transitions;
};

// {K_.(x - U; M[U]/U^(n))} (inverse) or {K^.(x - U; W_n(M))} (direct).
template <class D>
DirectedSystem<D> xu_system(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max, bool cochain) {
  if (n_max < 1) throw Error("BadExponents", "n_max must be positive");
  DirectedSystem<D> s;
  s.orientation = cochain ? Orientation::Direct : Orientation::Inverse;
  for (int n = 1; n <= n_max; ++n) s.stages.push_back(cochain ? koszul_xu_cochain(R, x, m, n) : koszul_xu_chain(R, x, m, n));
  for (int n = 1; n < n_max; ++n) s.transitions.push_back(xu_transition(R, x, m, n + 1, n, cochain));
  return s;
}

// {K_.(x^(n); M)} (inverse) or {K^.(x^(n); M)} (direct).
template <class D>
DirectedSystem<D> power_system(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max, bool cochain) {
  if (n_max < 1) throw Error("BadExponents", "n_max must be positive");
  const std::size_t r = x.size();
  DirectedSystem<D> s;
  s.orientation = cochain ? Orientation::Direct : Orientation::Inverse;
  for (int n = 1; n <= n_max; ++n)
    s.stages.push_back(cochain ? koszul_cochain(R, x, m, uniform(r, n)) : koszul_chain(R, x, m, uniform(r, n)));
  for (int n = 1; n < n_max; ++n) s.transitions.push_back(koszul_transition(R, x, m, n + 1, n, cochain));
  return s;
}

// Inverse system {M / x^(n) M} with the quotient maps, as one-term complexes.
template <class D>
DirectedSystem<D> completion_system(const RingView<D>& R, const Seq<D>& x, const Module<D>& m, int n_max) {
  DirectedSystem<D> s;
  s.orientation = Orientation::Inverse;
  for (int n = 1; n <= n_max; ++n) {
    MatOf<D> im = zeros(R.dom, 0, m.gens);
    for (const auto& xi : x) im = vstack(R.dom, im, module_action(R, m, R.pow(xi, n)));
    s.stages.push_back(module_complex(R.dom, cokernel_module(R.dom, m, im)));
  }
  for (int n = 1; n < n_max; ++n)
    s.transitions.push_back(make_map(s.stages[n], s.stages[n - 1], {identity(R.dom, m.gens)}));
  return s;
}

// Homology of every stage in one degree, with the induced transitions.
template <class D>
struct DegreeSystem {
  Orientation orientation = Orientation::Inverse;
  std::vector<Subquotient<D>> H;
  std::vector<MatOf<D>> t;  // on presentations, oriented like the system
};

template <class D>
DegreeSystem<D> degree_system(const DirectedSystem<D>& s, int degree) {
  DegreeSystem<D> ds;
  ds.orientation = s.orientation;
  for (const auto& st : s.stages) ds.H.push_back(homology(st, degree));
  for (std::size_t i = 0; i + 1 < s.stages.size(); ++i) {
    const auto& f = s.transitions[i];
    if (s.orientation == Orientation::Direct)
      ds.t.push_back(ds.H[i].induced_to(ds.H[i + 1], f.at(degree)));
    else
      ds.t.push_back(ds.H[i + 1].induced_to(ds.H[i], f.at(degree)));
  }
  return ds;
}

// Summary of a map between presented modules.
template <class D>
std::string map_kind(const D& dom, const Module<D>& src, const Module<D>& tgt, const MatOf<D>& f) {
  if (rowspan_contains(dom, tgt.rel, f)) return "zero";
  const bool sur = is_surjective(dom, tgt, f);
  const bool inj = is_injective(dom, src, tgt, f);
  if (sur && inj) return "iso";
  if (sur) return "surjective";
  if (inj) return "injective";
  return "other";
}

struct LimitEntry {
  enum class Kind { Stabilized, ProObject };
  Kind kind = Kind::ProObject;
  Classification value;                // when stabilized
  int stage = 0;                       // 1-based stage witness
  int lag = 0;                         // images taken over this many steps
  std::vector<Classification> stages;  // stage values, n = 1 .. n_max
  std::vector<std::string> transitions;
  std::string certificate;

  bool stabilized() const { return kind == Kind::Stabilized; }
};

template <class D>
struct StableImage {
  LimitEntry entry;
  Subquotient<D> image;  // inside the presentation of the witness stage
  int at = -1;           // 0-based stage holding `image`
};

namespace detail {

// Map on presentations from stage a to stage b along the system.
template <class D>
MatOf<D> stage_composite(const D& dom, const DegreeSystem<D>& s, int a, int b) {
  MatOf<D> m = identity(dom, s.H[a].presentation().gens);
  if (s.orientation == Orientation::Direct)
    for (int i = a; i < b; ++i) m = mul(dom, m, s.t[i]);
  else
    for (int i = a - 1; i >= b; --i) m = mul(dom, m, s.t[i]);
  return m;
}

}  // namespace detail

// Stabilization test on lagged images. For lag e, J_n is the image of
// H_{n+e} -> H_n (inverse) or H_n -> H_{n+e} (direct); the lagged systems
// have the same limit. The first (e, s) such that every J transition from
// stage s on is an isomorphism, with at least `window` of them checked,
// certifies the limit J_s; in the inverse case stable images give lim^1 = 0.
template <class D>
StableImage<D> stabilize(const D& dom, const DegreeSystem<D>& s, int window = 2) {
  StableImage<D> out;
  const int N = int(s.H.size());
  for (int i = 0; i < N; ++i) out.entry.stages.push_back(classify_module(dom, s.H[i].presentation()));
  for (int i = 0; i + 1 < N; ++i) {
    const bool dir = s.orientation == Orientation::Direct;
    const auto& src = s.H[dir ? i : i + 1].presentation();
    const auto& tgt = s.H[dir ? i + 1 : i].presentation();
    out.entry.transitions.push_back(map_kind(dom, src, tgt, s.t[i]));
  }
  for (int e = 0; e < N; ++e) {
    const int last = N - 1 - e;  // J_n defined for n <= last
    if (last < window) break;
    std::vector<Subquotient<D>> J;
    for (int n = 0; n <= last; ++n) {
      if (s.orientation == Orientation::Inverse)
        J.push_back(image_subquotient(dom, s.H[n].presentation(), detail::stage_composite(dom, s, n + e, n)));
      else
        J.push_back(image_subquotient(dom, s.H[n + e].presentation(), detail::stage_composite(dom, s, n, n + e)));
    }
    // iso[n]: J transition between n and n + 1
    std::vector<bool> iso(last, false);
    for (int n = 0; n < last; ++n) {
      if (s.orientation == Orientation::Inverse) {
        MatOf<D> f = J[n + 1].induced_to(J[n], s.t[n]);
        iso[n] = is_isomorphism(dom, J[n + 1].presentation(), J[n].presentation(), f);
      } else {
        MatOf<D> f = J[n].induced_to(J[n + 1], s.t[n + e]);
        iso[n] = is_isomorphism(dom, J[n].presentation(), J[n + 1].presentation(), f);
      }
    }
    int start = last;
    while (start > 0 && iso[start - 1]) --start;
    if (last - start < window) continue;
    out.entry.kind = LimitEntry::Kind::Stabilized;
    out.entry.value = classify_module(dom, J[start].presentation());
    out.entry.stage = start + 1;
    out.entry.lag = e;
    out.entry.certificate = "lag " + std::to_string(e) + ": image transitions are isomorphisms from stage " + std::to_string(start + 1) +
                            " to stage " + std::to_string(last + 1) + " (" + std::to_string(last - start) + " checked, window " +
                            std::to_string(window) + ")";
    out.image = J[start];
    out.at = s.orientation == Orientation::Inverse ? start : start + e;
    return out;
  }
  out.entry.kind = LimitEntry::Kind::ProObject;
  out.entry.certificate = "no lag up to " + std::to_string(N - 1) + " gives " + std::to_string(window) + " isomorphic image transitions";
  return out;
}

struct LimitsResult {
  Orientation orientation = Orientation::Inverse;
  std::map<int, LimitEntry> lim;   // lim (inverse) or colim (direct), by degree
  std::map<int, LimitEntry> lim1;  // inverse only: lim^1 of the same degree
  int window = 2;
};

inline LimitEntry zero_entry(const Classification& like, const std::string& why) {
  LimitEntry e;
  e.kind = LimitEntry::Kind::Stabilized;
  e.value = like;
  e.value.free_rank = 0;
  e.value.invariants.clear();
  e.value.cardinality = BigInt(1);
  e.certificate = why;
  return e;
}

template <class D>
LimitsResult limits(const DirectedSystem<D>& s, int window = 2) {
  LimitsResult out;
  out.orientation = s.orientation;
  out.window = window;
  if (s.stages.empty()) return out;
  const D& dom = s.stages[0].dom;
  int lo = s.stages[0].lo, hi = s.stages[0].hi;
  for (const auto& st : s.stages) {
    lo = std::min(lo, st.lo);
    hi = std::max(hi, st.hi);
  }
  for (int d = lo; d <= hi; ++d) {
    auto st = stabilize(dom, degree_system(s, d), window);
    out.lim[d] = st.entry;
    if (s.orientation != Orientation::Inverse) continue;
    bool finite = true;
    for (const auto& c : st.entry.stages) finite = finite && c.cardinality.has_value();
    Classification like = st.entry.stages.empty() ? Classification{} : st.entry.stages.front();
    if (st.entry.stabilized())
      out.lim1[d] = zero_entry(like, "images stable (Mittag-Leffler)");
    else if (finite)
      out.lim1[d] = zero_entry(like, "finite stages satisfy Mittag-Leffler");
    else {
      LimitEntry u = st.entry;
      u.certificate = "undetermined: " + st.entry.certificate;
      out.lim1[d] = u;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite telescope and microscope over the first N stages.

template <class D>
struct TelMic {
  ChainComplex<D> complex;
  ChainMap<D> comparison;  // telescope -> stage N, or stage N -> microscope
};

namespace detail {

template <class D>
ChainComplex<D> empty_like(const ChainComplex<D>& x) {
  ChainComplex<D> z;
  z.dom = x.dom;
  z.lo = x.lo;
  z.hi = x.hi;
  for (int n = x.lo; n <= x.hi; ++n) {
    Module<D> m;
    m.rel = zeros(x.dom, 0, 0);
    m.free_rank = 0;
    z.terms.push_back(m);
    z.diffs.push_back(zeros(x.dom, 0, 0));
  }
  return z;
}

template <class D>
std::pair<int, int> degree_span(const std::vector<ChainComplex<D>>& xs) {
  int lo = xs[0].lo, hi = xs[0].hi;
  for (const auto& x : xs) {
    lo = std::min(lo, x.lo);
    hi = std::max(hi, x.hi);
  }
  return {lo, hi};
}

}  // namespace detail

template <class D>
TelMic<D> tel_mic_trunc(const DirectedSystem<D>& s, int N, bool telescope) {
  if (N < 1 || N > int(s.stages.size())) throw Error("BadExponents", "need 1 <= N <= n_max");
  if (telescope != (s.orientation == Orientation::Direct)) throw Error("WrongOrientation", "telescope needs a direct system");
  const D& dom = s.stages[0].dom;
  std::vector<ChainComplex<D>> all(s.stages.begin(), s.stages.begin() + N);
  std::vector<ChainComplex<D>> part(s.stages.begin(), s.stages.begin() + (N - 1));
  auto [lo, hi] = detail::degree_span(all);
  ChainComplex<D> big = complex_sum(dom, all, lo, hi);
  ChainComplex<D> small = part.empty() ? detail::empty_like(big) : complex_sum(dom, part, lo, hi);
  // offsets of each stage inside the sums
  auto offsets = [&](int n) {
    std::vector<Index> o{0};
    for (int i = 0; i < N; ++i) o.push_back(o.back() + s.stages[i].gens(n));
    return o;
  };
  // composite of transitions between stage a and the last stage at degree n
  auto to_last = [&](int a, int n) {
    MatOf<D> m = identity(dom, s.stages[a].gens(n));
    if (telescope)
      for (int i = a; i < N - 1; ++i) m = mul(dom, m, s.transitions[i].at(n));
    return m;
  };
  auto from_last = [&](int a, int n) {
    MatOf<D> m = identity(dom, s.stages[N - 1].gens(n));
    for (int i = N - 2; i >= a; --i) m = mul(dom, m, s.transitions[i].at(n));
    return m;
  };
  TelMic<D> out;
  if (telescope) {
    // Phi: sum_{n<N} X_n -> sum_{n<=N} X_n, x_n -> x_n - t(x_n)
    std::vector<MatOf<D>> phi;
    for (int n = lo; n <= hi; ++n) {
      auto o = offsets(n);
      MatOf<D> f = zeros(dom, small.gens(n), big.gens(n));
      for (int i = 0; i + 1 < N; ++i) {
        const Index g = s.stages[i].gens(n);
        if (g == 0) continue;
        f.block(o[i], o[i], g, g) = identity(dom, g);
        if (s.stages[i + 1].gens(n) > 0) f.block(o[i], o[i + 1], g, s.stages[i + 1].gens(n)) = neg(dom, s.transitions[i].at(n));
      }
      phi.push_back(std::move(f));
    }
    ChainMap<D> Phi = make_map(small, big, std::move(phi));
    out.complex = cone(Phi);
    const auto& last = s.stages[N - 1];
    std::vector<MatOf<D>> cmp;
    for (int n = out.complex.lo; n <= out.complex.hi; ++n) {
      MatOf<D> f = zeros(dom, out.complex.gens(n), last.gens(n));
      const Index skip = small.gens(n - 1);
      auto o = offsets(n);
      for (int i = 0; i < N; ++i)
        if (s.stages[i].gens(n) > 0 && last.gens(n) > 0) f.block(skip + o[i], 0, s.stages[i].gens(n), last.gens(n)) = to_last(i, n);
      cmp.push_back(std::move(f));
    }
    ChainComplex<D> tgt = last;
    out.comparison = make_map(out.complex, tgt, std::move(cmp));
  } else {
    // Psi: prod_{n<=N} X_n -> prod_{n<N} X_n, (x_n) -> (x_n - t(x_{n+1}))
    std::vector<MatOf<D>> psi;
    for (int n = lo; n <= hi; ++n) {
      auto o = offsets(n);
      MatOf<D> f = zeros(dom, big.gens(n), small.gens(n));
      for (int i = 0; i + 1 < N; ++i) {
        const Index g = s.stages[i].gens(n);
        if (g == 0) continue;
        f.block(o[i], o[i], g, g) = identity(dom, g);
        if (s.stages[i + 1].gens(n) > 0) f.block(o[i + 1], o[i], s.stages[i + 1].gens(n), g) = neg(dom, s.transitions[i].at(n));
      }
      psi.push_back(std::move(f));
    }
    ChainMap<D> Psi = make_map(big, small, std::move(psi));
    out.complex = fibre(Psi);
    const auto& last = s.stages[N - 1];
    std::vector<MatOf<D>> cmp;
    for (int n = last.lo; n <= last.hi; ++n) {
      MatOf<D> f = zeros(dom, last.gens(n), out.complex.gens(n));
      auto o = offsets(n);
      for (int i = 0; i < N; ++i)
        if (s.stages[i].gens(n) > 0 && last.gens(n) > 0) f.block(0, o[i], last.gens(n), s.stages[i].gens(n)) = from_last(i, n);
      cmp.push_back(std::move(f));
    }
    out.comparison = make_map(last, out.complex, std::move(cmp));
  }
  return out;
}

}  // namespace kc
