#pragma once

#include "kc/domain.hpp"

#include <Eigen/Core>

#include <initializer_list>
#include <vector>

namespace kc {

using Index = Eigen::Index;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class D>
using MatOf = Mat<typename D::Scalar>;

template <class D>
using RowOf = Eigen::Matrix<typename D::Scalar, 1, Eigen::Dynamic, Eigen::RowMajor>;

template <class D>
MatOf<D> zeros(const D& dom, Index r, Index c) {
  return MatOf<D>::Constant(r, c, dom.zero());
}

template <class D>
MatOf<D> identity(const D& dom, Index n) {
  MatOf<D> m = zeros(dom, n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = dom.one();
  return m;
}

template <class D>
bool is_zero(const D& dom, const MatOf<D>& a) {
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (!dom.is_zero(a(i, j))) return false;
  return true;
}

template <class D>
MatOf<D> mul(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  MatOf<D> c = zeros(dom, a.rows(), b.cols());
  if (a.cols() == 0) return c;
  if constexpr (std::is_same_v<D, ModularDomain>) {
    const double bound = double(a.cols()) * double(dom.N - 1) * double(dom.N - 1);
    if (bound < 9.0e18) {
      c = a * b;
      for (Index i = 0; i < c.size(); ++i) c.data()[i] %= dom.N;
      return c;
    }
  }
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (dom.is_zero(aik)) continue;
      for (Index j = 0; j < b.cols(); ++j)
        if (!dom.is_zero(b(k, j))) c(i, j) = dom.add(c(i, j), dom.mul(aik, b(k, j)));
    }
  return c;
}

template <class D>
MatOf<D> add(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  MatOf<D> c(a.rows(), a.cols());
  for (Index i = 0; i < a.size(); ++i) c.data()[i] = dom.add(a.data()[i], b.data()[i]);
  return c;
}

template <class D>
MatOf<D> sub(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  MatOf<D> c(a.rows(), a.cols());
  for (Index i = 0; i < a.size(); ++i) c.data()[i] = dom.sub(a.data()[i], b.data()[i]);
  return c;
}

template <class D>
MatOf<D> scale(const D& dom, const typename D::Scalar& s, const MatOf<D>& a) {
  MatOf<D> c(a.rows(), a.cols());
  for (Index i = 0; i < a.size(); ++i) c.data()[i] = dom.mul(s, a.data()[i]);
  return c;
}

template <class D>
MatOf<D> neg(const D& dom, const MatOf<D>& a) {
  MatOf<D> c(a.rows(), a.cols());
  for (Index i = 0; i < a.size(); ++i) c.data()[i] = dom.neg(a.data()[i]);
  return c;
}

template <class D>
bool equal(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (!dom.is_zero(dom.sub(a.data()[i], b.data()[i]))) return false;
  return true;
}

template <class D>
MatOf<D> kron(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  MatOf<D> c = zeros(dom, a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      if (dom.is_zero(a(i, j))) continue;
      for (Index p = 0; p < b.rows(); ++p)
        for (Index q = 0; q < b.cols(); ++q) c(i * b.rows() + p, j * b.cols() + q) = dom.mul(a(i, j), b(p, q));
    }
  return c;
}

template <class D>
MatOf<D> vstack(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  const Index cols = a.rows() > 0 ? a.cols() : b.cols();
  MatOf<D> c = zeros(dom, a.rows() + b.rows(), cols);
  if (a.rows() > 0) c.topRows(a.rows()) = a;
  if (b.rows() > 0) c.bottomRows(b.rows()) = b;
  return c;
}

template <class D>
MatOf<D> hstack(const D& dom, const MatOf<D>& a, const MatOf<D>& b) {
  MatOf<D> c = zeros(dom, a.rows(), a.cols() + b.cols());
  if (a.cols() > 0) c.leftCols(a.cols()) = a;
  if (b.cols() > 0) c.rightCols(b.cols()) = b;
  return c;
}

template <class D>
MatOf<D> blockdiag(const D& dom, const std::vector<MatOf<D>>& blocks) {
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  MatOf<D> m = zeros(dom, r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    if (b.size() > 0) m.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return m;
}

// Raise a square matrix to a nonnegative power.
template <class D>
MatOf<D> power(const D& dom, const MatOf<D>& a, long long e) {
  MatOf<D> result = identity(dom, a.rows());
  MatOf<D> base = a;
  while (e > 0) {
    if (e & 1) result = mul(dom, result, base);
    e >>= 1;
    if (e > 0) base = mul(dom, base, base);
  }
  return result;
}

}  // namespace kc
