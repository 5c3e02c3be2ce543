#pragma once

#include "kc/ring_view.hpp"
#include "kc/smith.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kc {

// A finitely presented module over the flattened base: B^gens modulo the row
// span of `rel`. `act[j]` is the right action of the j-th ring basis element
// (empty when the ring has rank one); `ops` are extra commuting operators.
template <class D>
struct Module {
  Index gens = 0;
  MatOf<D> rel;
  std::vector<MatOf<D>> act;
  std::vector<std::pair<std::string, MatOf<D>>> ops;
  Index free_rank = -1;  // R-rank when this is the standard free module R^a

  bool is_free() const { return free_rank >= 0; }
};

template <class D>
Module<D> free_module(const RingView<D>& R, Index a) {
  Module<D> m;
  m.gens = a * R.k;
  m.rel = zeros(R.dom, 0, m.gens);
  if (R.k > 1)
    for (const auto& b : R.basis_action) m.act.push_back(kron(R.dom, identity(R.dom, a), b));
  m.free_rank = a;
  return m;
}

// R^g modulo the R-submodule generated by the rows of `rows` (R-entries).
template <class D>
Module<D> quotient_of_free(const RingView<D>& R, Index g, const std::vector<std::vector<typename RingView<D>::Elem>>& rows) {
  Module<D> m = free_module(R, g);
  m.free_rank = rows.empty() ? g : -1;
  MatOf<D> rel = zeros(R.dom, Index(rows.size()) * R.k, m.gens);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < R.k; ++j) {
      auto ej = R.zero();
      ej[j] = R.dom.one();
      for (Index p = 0; p < g; ++p) {
        auto c = R.mul(rows[i][p], ej);
        for (int l = 0; l < R.k; ++l) rel(Index(i) * R.k + j, p * R.k + l) = c[l];
      }
    }
  m.rel = rows.empty() ? rel : howell_form(R.dom, rel);
  return m;
}

template <class D>
MatOf<D> module_action(const RingView<D>& R, const Module<D>& m, const typename RingView<D>::Elem& a) {
  if (R.k == 1) return scale(R.dom, a[0], identity(R.dom, m.gens));
  MatOf<D> out = zeros(R.dom, m.gens, m.gens);
  for (int j = 0; j < R.k; ++j)
    if (!R.dom.is_zero(a[j])) out = add(R.dom, out, scale(R.dom, a[j], m.act.at(j)));
  return out;
}

template <class D>
const MatOf<D>& module_op(const Module<D>& m, const std::string& name) {
  for (const auto& [n, mat] : m.ops)
    if (n == name) return mat;
  // every operator on a module without generators is the empty matrix
  static const MatOf<D> none(0, 0);
  if (m.gens == 0) return none;
  throw Error("MissingOperator", name);
}

template <class D>
Module<D> direct_sum(const D& dom, const Module<D>& a, const Module<D>& b) {
  if (a.gens == 0) return b;
  if (b.gens == 0) return a;
  Module<D> m;
  m.gens = a.gens + b.gens;
  m.rel = vstack(dom, hstack(dom, a.rel, zeros(dom, a.rel.rows(), b.gens)), hstack(dom, zeros(dom, b.rel.rows(), a.gens), b.rel));
  for (std::size_t j = 0; j < a.act.size(); ++j) m.act.push_back(blockdiag(dom, {a.act[j], b.act.at(j)}));
  for (const auto& [name, op] : a.ops)
    for (const auto& [name2, op2] : b.ops)
      if (name == name2) m.ops.emplace_back(name, blockdiag(dom, {op, op2}));
  m.free_rank = (a.is_free() && b.is_free()) ? a.free_rank + b.free_rank : -1;
  return m;
}

template <class D>
Module<D> direct_power(const D& dom, const Module<D>& a, Index copies) {
  Module<D> m;
  m.gens = a.gens * copies;
  m.rel = kron(dom, identity(dom, copies), a.rel);
  for (const auto& x : a.act) m.act.push_back(kron(dom, identity(dom, copies), x));
  for (const auto& [name, op] : a.ops) m.ops.emplace_back(name, kron(dom, identity(dom, copies), op));
  m.free_rank = a.is_free() ? a.free_rank * copies : -1;
  if (copies == 0) m.rel = zeros(dom, 0, 0);
  return m;
}

template <class D>
Classification classify_module(const D& dom, const Module<D>& m) {
  return classify_presentation(dom, m.gens, m.rel);
}

// |B^g / rowspan(rel)| over Z/N.
inline BigInt module_order(const ModularDomain& dom, const Module<ModularDomain>& m) {
  BigInt total = 1;
  for (Index i = 0; i < m.gens; ++i) total *= BigInt(dom.N);
  BigInt r = rowspan_order(dom, m.rel);
  BigInt q, rem;
  divmod_floor(total, r, q, rem);
  return q;
}

// A matrix F on generators defines a module map when relations land in relations.
template <class D>
bool is_module_map(const D& dom, const Module<D>& src, const Module<D>& tgt, const MatOf<D>& f) {
  if (f.rows() != src.gens || f.cols() != tgt.gens) return false;
  if (src.rel.rows() == 0) return true;
  return rowspan_contains(dom, tgt.rel, mul(dom, src.rel, f));
}

// Sub-quotient of an ambient B^n: span(gens) modulo span(zero), with a
// presentation on the given generators and coordinates for ambient vectors.
template <class D>
class Subquotient {
 public:
  Subquotient() = default;
  Subquotient(const D& dom, MatOf<D> gens, MatOf<D> zero, const std::vector<MatOf<D>>& ambient_act = {},
              const std::vector<std::pair<std::string, MatOf<D>>>& ambient_ops = {})
      : dom_(dom), gens_(std::move(gens)), zero_(std::move(zero)) {
    const Index n = gens_.cols() > 0 || gens_.rows() > 0 ? gens_.cols() : zero_.cols();
    if (zero_.rows() == 0) zero_ = zeros(dom, 0, n);
    if (gens_.rows() == 0) gens_ = zeros(dom, 0, n);
    solver_ = RowSolver<D>(dom, vstack(dom, gens_, zero_));
    const Index s = gens_.rows();
    pres_.gens = s;
    MatOf<D> k = solver_.kernel();
    MatOf<D> rel = k.rows() > 0 ? MatOf<D>(k.leftCols(s)) : zeros(dom, 0, s);
    pres_.rel = rel.rows() > 0 ? howell_form(dom, rel) : rel;
    for (const auto& a : ambient_act) pres_.act.push_back(induced(a));
    for (const auto& [name, a] : ambient_ops) pres_.ops.emplace_back(name, induced(a));
  }

  const Module<D>& presentation() const { return pres_; }
  const MatOf<D>& generators() const { return gens_; }
  const MatOf<D>& zero_span() const { return zero_; }
  Index ambient_dim() const { return gens_.cols(); }

  bool contains(const RowOf<D>& v) const { return solver_.contains(v); }

  std::optional<RowOf<D>> try_coords(const RowOf<D>& v) const {
    auto x = solver_.solve(v);
    if (!x) return std::nullopt;
    return RowOf<D>(x->leftCols(gens_.rows()));
  }

  RowOf<D> coords(const RowOf<D>& v) const {
    auto x = try_coords(v);
    if (!x) throw Error("NotInSubmodule", "vector outside the sub-quotient");
    return *x;
  }

  MatOf<D> coords_rows(const MatOf<D>& v) const {
    MatOf<D> out = zeros(dom_, v.rows(), gens_.rows());
    for (Index i = 0; i < v.rows(); ++i) out.row(i) = coords(v.row(i));
    return out;
  }

  // Matrix of the map induced on generators by an ambient endomorphism.
  MatOf<D> induced(const MatOf<D>& ambient) const { return coords_rows(mul(dom_, gens_, ambient)); }

  // Matrix of the map into another sub-quotient induced by ambient F.
  MatOf<D> induced_to(const Subquotient& target, const MatOf<D>& ambient) const {
    return target.coords_rows(mul(dom_, gens_, ambient));
  }

 private:
  D dom_;
  MatOf<D> gens_, zero_;
  RowSolver<D> solver_;
  Module<D> pres_;
};

template <class D>
bool module_is_zero(const D& dom, const Module<D>& m) {
  if (m.gens == 0) return true;
  if constexpr (std::is_same_v<D, ModularDomain>) {
    return module_order(dom, m) == BigInt(1);
  } else {
    return rowspan_contains(dom, m.rel, identity(dom, m.gens));
  }
}

template <class D>
Module<D> cokernel_module(const D& dom, const Module<D>& tgt, const MatOf<D>& f) {
  Module<D> m = tgt;
  m.rel = howell_form(dom, vstack(dom, tgt.rel, f));
  m.free_rank = -1;
  return m;
}

template <class D>
Subquotient<D> kernel_subquotient(const D& dom, const Module<D>& src, const Module<D>& tgt, const MatOf<D>& f) {
  MatOf<D> k = left_kernel(dom, vstack(dom, f, tgt.rel));
  MatOf<D> g = k.rows() > 0 ? MatOf<D>(k.leftCols(src.gens)) : zeros(dom, 0, src.gens);
  return Subquotient<D>(dom, g, src.rel, src.act, src.ops);
}

template <class D>
Subquotient<D> image_subquotient(const D& dom, const Module<D>& tgt, const MatOf<D>& f) {
  return Subquotient<D>(dom, f, tgt.rel, tgt.act, tgt.ops);
}

template <class D>
bool is_surjective(const D& dom, const Module<D>& tgt, const MatOf<D>& f) {
  return rowspan_contains(dom, vstack(dom, f, tgt.rel), identity(dom, tgt.gens));
}

template <class D>
bool is_injective(const D& dom, const Module<D>& src, const Module<D>& tgt, const MatOf<D>& f) {
  return module_is_zero(dom, kernel_subquotient(dom, src, tgt, f).presentation());
}

template <class D>
bool is_isomorphism(const D& dom, const Module<D>& src, const Module<D>& tgt, const MatOf<D>& f) {
  if (!is_surjective(dom, tgt, f)) return false;
  if constexpr (std::is_same_v<D, ModularDomain>) {
    return module_order(dom, src) == module_order(dom, tgt);
  } else {
    return is_injective(dom, src, tgt, f);
  }
}

// Hom between presented modules, commuting with the ring action and with
// the named operators listed in `op_names`. Elements are gens(P) x gens(M)
// matrices F (row-major vectorized) modulo maps landing in rel(M).
template <class D>
struct HomModule {
  Index src_gens = 0, tgt_gens = 0;
  Subquotient<D> sq;

  const Module<D>& module() const { return sq.presentation(); }
  // vectorized ambient coordinates of a generator
  MatOf<D> generator_matrix(Index i) const {
    MatOf<D> f(src_gens, tgt_gens);
    for (Index p = 0; p < src_gens; ++p)
      for (Index q = 0; q < tgt_gens; ++q) f(p, q) = sq.generators()(i, p * tgt_gens + q);
    return f;
  }
};

template <class D>
MatOf<D> vectorize(const MatOf<D>& f) {
  MatOf<D> v(1, f.size());
  for (Index p = 0; p < f.rows(); ++p)
    for (Index q = 0; q < f.cols(); ++q) v(0, p * f.cols() + q) = f(p, q);
  return v;
}

template <class D>
HomModule<D> hom_modules(const D& dom, const Module<D>& P, const Module<D>& M, const std::vector<std::string>& op_names = {}) {
  const Index gp = P.gens, gm = M.gens, nv = gp * gm;
  // constraints: each is a pair (C, E) meaning F -> C*F - F*E must land in rel(M) row-wise
  struct Constraint {
    MatOf<D> C;
    MatOf<D> E;  // empty: no right term
  };
  std::vector<Constraint> cs;
  if (P.rel.rows() > 0) cs.push_back({P.rel, MatOf<D>()});
  for (std::size_t j = 0; j < P.act.size(); ++j) cs.push_back({P.act[j], M.act.at(j)});
  for (const auto& name : op_names) cs.push_back({module_op(P, name), module_op(M, name)});
  Index total_rows = 0;
  for (const auto& c : cs) total_rows += c.C.rows();
  MatOf<D> L = zeros(dom, nv, total_rows * gm);
  Index off = 0;
  for (const auto& c : cs) {
    for (Index p = 0; p < gp; ++p)
      for (Index q = 0; q < gm; ++q) {
        const Index var = p * gm + q;
        for (Index i = 0; i < c.C.rows(); ++i)
          if (!dom.is_zero(c.C(i, p))) L(var, (off + i) * gm + q) = dom.add(L(var, (off + i) * gm + q), c.C(i, p));
        if (c.E.size() > 0)
          for (Index q2 = 0; q2 < gm; ++q2)
            if (!dom.is_zero(c.E(q, q2))) L(var, (off + p) * gm + q2) = dom.sub(L(var, (off + p) * gm + q2), c.E(q, q2));
      }
    off += c.C.rows();
  }
  MatOf<D> gens;
  if (total_rows == 0 || M.rel.rows() == 0) {
    gens = total_rows == 0 ? identity(dom, nv) : left_kernel(dom, L);
  } else {
    MatOf<D> W = kron(dom, identity(dom, total_rows), M.rel);
    MatOf<D> k = left_kernel(dom, vstack(dom, L, W));
    gens = k.rows() > 0 ? MatOf<D>(k.leftCols(nv)) : zeros(dom, 0, nv);
  }
  if (gens.rows() == 0) gens = zeros(dom, 0, nv);
  MatOf<D> zero = kron(dom, identity(dom, gp), M.rel);
  std::vector<MatOf<D>> act;
  for (const auto& a : M.act) act.push_back(kron(dom, identity(dom, gp), a));
  std::vector<std::pair<std::string, MatOf<D>>> ops;
  for (const auto& name : op_names) ops.emplace_back(name, kron(dom, identity(dom, gp), module_op(M, name)));
  HomModule<D> h;
  h.src_gens = gp;
  h.tgt_gens = gm;
  h.sq = Subquotient<D>(dom, gens.rows() > 0 ? howell_form(dom, gens) : gens, zero, act, ops);
  return h;
}

// Ambient matrix of F -> A*F (precomposition with a map whose matrix is A).
template <class D>
MatOf<D> precompose_ambient(const D& dom, const MatOf<D>& a, Index tgt_gens) {
  return kron(dom, MatOf<D>(a.transpose()), identity(dom, tgt_gens));
}

// Ambient matrix of F -> F*G (postcomposition).
template <class D>
MatOf<D> postcompose_ambient(const D& dom, const MatOf<D>& g, Index src_gens) {
  return kron(dom, identity(dom, src_gens), g);
}

}  // namespace kc
