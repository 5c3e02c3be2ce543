#pragma once

#include "kc/matrix.hpp"

#include <optional>
#include <vector>

namespace kc {

// Row echelon form over the scalar domain: Howell form over Z/N (annihilator
// rows included), Hermite form over Z, reduced row echelon form over Q.
// Only columns [0, width) are echelonized; the rest ride along.
template <class D>
struct Echelon {
  MatOf<D> rows;               // active rows; the first `rank` carry pivots
  std::vector<Index> pivots;   // pivot column of each pivot row
  Index rank = 0;
};

namespace detail {

template <class D>
void combine_rows(const D& dom, MatOf<D>& a, Index r, Index i, Index from, const Gcdex<typename D::Scalar>& g) {
  const Index n = a.cols();
  if (dom.is_one(g.s) && dom.is_zero(g.t) && dom.is_one(g.v)) {
    // row_i += u*row_r
    for (Index j = from; j < n; ++j)
      if (!dom.is_zero(a(r, j))) a(i, j) = dom.lin(dom.one(), a(i, j), g.u, a(r, j));
    return;
  }
  for (Index j = from; j < n; ++j) {
    auto x = a(r, j);
    auto y = a(i, j);
    if (dom.is_zero(x) && dom.is_zero(y)) continue;
    a(r, j) = dom.lin(g.s, x, g.t, y);
    a(i, j) = dom.lin(g.u, x, g.v, y);
  }
}

template <class D>
void axpy_row(const D& dom, MatOf<D>& a, Index dst, const typename D::Scalar& q, Index src, Index from) {
  // row_dst -= q*row_src
  const auto nq = dom.neg(q);
  for (Index j = from; j < a.cols(); ++j)
    if (!dom.is_zero(a(src, j))) a(dst, j) = dom.lin(dom.one(), a(dst, j), nq, a(src, j));
}

}  // namespace detail

template <class D>
Echelon<D> echelon(const D& dom, MatOf<D> a, Index width = -1, bool reduce_above = true) {
  if (width < 0) width = a.cols();
  Index m = a.rows();
  if constexpr (std::is_same_v<D, ModularDomain>) {
    if (!dom.prime && width > 0) {
      const Index extra = std::min<Index>(width, m + width);
      a.conservativeResize(m + extra, Eigen::NoChange);
      a.bottomRows(extra).setZero();
    }
  }
  Echelon<D> out;
  Index r = 0;
  for (Index c = 0; c < width && r < m; ++c) {
    Index piv = -1;
    if constexpr (std::is_same_v<D, IntegerDomain>) {
      for (Index i = r; i < m; ++i)
        if (!dom.is_zero(a(i, c)) && (piv < 0 || kc::abs(a(i, c)) < kc::abs(a(piv, c)))) piv = i;
    } else {
      for (Index i = r; i < m; ++i)
        if (!dom.is_zero(a(i, c))) {
          piv = i;
          break;
        }
    }
    if (piv < 0) continue;
    if (piv != r) a.row(piv).swap(a.row(r));
    if constexpr (std::is_same_v<D, IntegerDomain>) {
      // Euclid on the column: small multipliers keep the entries from blowing up
      while (true) {
        Index next = -1;
        for (Index i = r + 1; i < m; ++i) {
          if (dom.is_zero(a(i, c))) continue;
          detail::axpy_row(dom, a, i, dom.quo(a(i, c), a(r, c)), r, c);
          if (!dom.is_zero(a(i, c)) && (next < 0 || kc::abs(a(i, c)) < kc::abs(a(next, c)))) next = i;
        }
        if (next < 0) break;
        a.row(next).swap(a.row(r));
      }
    } else {
      for (Index i = r + 1; i < m; ++i) {
        if (dom.is_zero(a(i, c))) continue;
        detail::combine_rows(dom, a, r, i, c, dom.gcdex(a(r, c), a(i, c)));
      }
    }
    auto u = dom.unit_normalizer(a(r, c));
    if (!dom.is_one(u))
      for (Index j = c; j < a.cols(); ++j) a(r, j) = dom.mul(u, a(r, j));
    if (reduce_above) {
      for (Index i = 0; i < r; ++i) {
        if (dom.is_zero(a(i, c))) continue;
        auto q = dom.quo(a(i, c), a(r, c));
        if (!dom.is_zero(q)) detail::axpy_row(dom, a, i, q, r, c);
      }
    }
    if constexpr (std::is_same_v<D, ModularDomain>) {
      auto ann = dom.annihilator(a(r, c));
      if (!dom.is_zero(ann)) {
        bool nonzero = false;
        for (Index j = c + 1; j < a.cols(); ++j) {
          a(m, j) = dom.mul(ann, a(r, j));
          nonzero = nonzero || a(m, j) != 0;
        }
        if (nonzero) {
          if (m + 1 >= a.rows()) {
            const Index old = a.rows();
            a.conservativeResize(old + width + 1, Eigen::NoChange);
            a.bottomRows(width + 1).setZero();
          }
          ++m;
        } else {
          a.row(m).setZero();
        }
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  a.conservativeResize(m, Eigen::NoChange);
  out.rows = std::move(a);
  return out;
}

// Canonical Howell / Hermite / RREF basis of the row span: nonzero rows only.
template <class D>
MatOf<D> howell_form(const D& dom, const MatOf<D>& a) {
  auto e = echelon(dom, a);
  return e.rows.topRows(e.rank);
}

// Membership and coordinates for a fixed row span. With a transform the
// solver also yields x with x*A = b and a generating set of the left kernel.
template <class D>
class RowSolver {
 public:
  using S = typename D::Scalar;

  RowSolver() = default;
  RowSolver(const D& dom, const MatOf<D>& a, bool with_transform = true)
      : dom_(dom), n_(a.cols()), m_(a.rows()), transform_(with_transform) {
    if (with_transform) {
      ech_ = echelon(dom, hstack(dom, a, identity(dom, a.rows())), n_);
    } else {
      ech_ = echelon(dom, a, n_);
    }
  }

  Index rank() const { return ech_.rank; }
  Index cols() const { return n_; }
  const MatOf<D>& echelon_rows() const { return ech_.rows; }
  MatOf<D> basis() const { return ech_.rows.topLeftCorner(ech_.rank, n_); }

  // Reduce b against the pivots. Returns false when b is outside the span.
  bool reduce(RowOf<D>& b, RowOf<D>* x) const {
    for (Index i = 0; i < ech_.rank; ++i) {
      const Index c = ech_.pivots[i];
      const Index prev = i == 0 ? 0 : ech_.pivots[i - 1] + 1;
      for (Index j = prev; j < c; ++j)
        if (!dom_.is_zero(b(j))) return false;
      if (dom_.is_zero(b(c))) continue;
      const S& p = ech_.rows(i, c);
      if (!dom_.divides(p, b(c))) return false;
      S q = dom_.exact_div(b(c), p);
      const S nq = dom_.neg(q);
      for (Index j = c; j < n_; ++j)
        if (!dom_.is_zero(ech_.rows(i, j))) b(j) = dom_.lin(dom_.one(), b(j), nq, ech_.rows(i, j));
      if (x)
        for (Index j = 0; j < m_; ++j)
          if (!dom_.is_zero(ech_.rows(i, n_ + j))) (*x)(j) = dom_.lin(dom_.one(), (*x)(j), q, ech_.rows(i, n_ + j));
    }
    for (Index j = 0; j < n_; ++j)
      if (!dom_.is_zero(b(j))) return false;
    return true;
  }

  bool contains(RowOf<D> b) const { return reduce(b, nullptr); }

  bool contains_rows(const MatOf<D>& b) const {
    for (Index i = 0; i < b.rows(); ++i)
      if (!contains(b.row(i))) return false;
    return true;
  }

  std::optional<RowOf<D>> solve(RowOf<D> b) const {
    RowOf<D> x = RowOf<D>::Constant(1, m_, dom_.zero());
    if (!reduce(b, &x)) return std::nullopt;
    return x;
  }

  // Left kernel generators {x : x*A = 0}.
  MatOf<D> kernel() const {
    const Index k = ech_.rows.rows() - ech_.rank;
    MatOf<D> out = zeros(dom_, 0, m_);
    if (k <= 0) return out;
    return ech_.rows.bottomRightCorner(k, m_);
  }

 private:
  D dom_;
  Index n_ = 0, m_ = 0;
  bool transform_ = false;
  Echelon<D> ech_;
};

template <class D>
MatOf<D> left_kernel(const D& dom, const MatOf<D>& a) {
  if (a.rows() == 0) return zeros(dom, 0, 0);
  MatOf<D> k = RowSolver<D>(dom, a).kernel();
  if (k.rows() == 0) return zeros(dom, 0, a.rows());
  return howell_form(dom, k);
}

// Row span of A contains every row of B.
template <class D>
bool rowspan_contains(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  if (b.rows() == 0) return true;
  if (a.rows() == 0) return is_zero(dom, b);
  return RowSolver<D>(dom, a, false).contains_rows(b);
}

// Order of the row span of a matrix over Z/N.
inline BigInt rowspan_order(const ModularDomain& dom, const Mat<std::int64_t>& a) {
  if (a.rows() == 0) return 1;
  auto e = echelon(dom, a);
  BigInt total = 1;
  for (Index i = 0; i < e.rank; ++i) total *= BigInt(dom.N / e.rows(i, e.pivots[i]));
  return total;
}

}  // namespace kc
