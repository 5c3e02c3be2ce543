#pragma once

#include "kc/echelon.hpp"
#include "kc/rings.hpp"

#include <utility>
#include <vector>

namespace kc {

// A ring seen through its scalar domain. Elements become coefficient
// vectors of length k; multiplication by a is a k x k matrix acting on rows.
template <class D>
struct RingView {
  using S = typename D::Scalar;
  using Elem = std::vector<S>;

  D dom;
  int k = 1;
  int unit = 0;
  std::vector<MatOf<D>> basis_action;  // right action of each basis element

  Elem coeffs(const RingElem& a) const {
    Elem out;
    for (const auto& q : a.c) {
      if constexpr (std::is_same_v<D, RationalDomain>) {
        out.push_back(q);
      } else {
        out.push_back(dom.from_big(q.numerator()));
      }
    }
    return out;
  }

  RingElem elem(const Elem& a) const {
    RingElem out;
    for (const auto& s : a) {
      if constexpr (std::is_same_v<D, RationalDomain>) {
        out.c.push_back(s);
      } else {
        out.c.push_back(BigRational(dom.to_bigint(s), BigInt(1)));
      }
    }
    return out;
  }

  Elem zero() const { return Elem(k, dom.zero()); }
  Elem one() const { return from_int(1); }
  Elem from_int(long long v) const {
    Elem e = zero();
    e[unit] = dom.from_int(v);
    return e;
  }
  bool is_zero(const Elem& a) const {
    for (const auto& s : a)
      if (!dom.is_zero(s)) return false;
    return true;
  }
  bool is_one(const Elem& a) const {
    for (int i = 0; i < k; ++i)
      if (!(i == unit ? dom.is_one(a[i]) : dom.is_zero(a[i]))) return false;
    return true;
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem c(k);
    for (int i = 0; i < k; ++i) c[i] = dom.add(a[i], b[i]);
    return c;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem c(k);
    for (int i = 0; i < k; ++i) c[i] = dom.sub(a[i], b[i]);
    return c;
  }
  Elem neg(const Elem& a) const {
    Elem c(k);
    for (int i = 0; i < k; ++i) c[i] = dom.neg(a[i]);
    return c;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    if (k == 1) return {dom.mul(a[0], b[0])};
    Elem c = zero();
    MatOf<D> m = action(b);
    for (int i = 0; i < k; ++i)
      if (!dom.is_zero(a[i]))
        for (int l = 0; l < k; ++l) c[l] = dom.add(c[l], dom.mul(a[i], m(i, l)));
    return c;
  }
  Elem pow(const Elem& a, long long e) const {
    Elem r = one(), b = a;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e > 0) b = mul(b, b);
    }
    return r;
  }
  Elem scale(long long s, const Elem& a) const { return mul(from_int(s), a); }

  // k x k matrix of v -> v*a on coordinate rows
  MatOf<D> action(const Elem& a) const {
    if (k == 1) {
      MatOf<D> m(1, 1);
      m(0, 0) = a[0];
      return m;
    }
    MatOf<D> m = zeros(dom, k, k);
    for (int j = 0; j < k; ++j)
      if (!dom.is_zero(a[j])) m = kc::add(dom, m, kc::scale(dom, a[j], basis_action[j]));
    return m;
  }

  // Flattened entry block of an R-matrix entry and its inverse.
  Elem entry_of_block(const MatOf<D>& block) const {
    Elem e(k);
    for (int j = 0; j < k; ++j) e[j] = block(unit, j);
    return e;
  }

  bool is_unit(const Elem& a) const {
    if (k == 1) return dom.is_unit(a[0]);
    auto h = howell_form(dom, action(a));
    return h.rows() == k && equal(dom, h, identity(dom, k));
  }
};

template <class D>
RingView<D> make_view(const Ring& ring, const D& dom) {
  RingView<D> v;
  v.dom = dom;
  v.k = ring.rank();
  v.unit = ring.kind() == RingKind::FiniteAlgebra ? ring.spec().unit_index : 0;
  if (ring.kind() == RingKind::FiniteAlgebra) {
    const auto& tab = ring.spec().mul_table;
    for (int j = 0; j < v.k; ++j) {
      MatOf<D> m = zeros(dom, v.k, v.k);
      for (int i = 0; i < v.k; ++i)
        for (int l = 0; l < v.k; ++l) m(i, l) = dom.from_int(tab[i][j][l]);
      v.basis_action.push_back(std::move(m));
    }
  }
  return v;
}

// Run f with the view for the ring's scalar domain.
template <class F>
decltype(auto) with_domain(const Ring& ring, F&& f) {
  switch (ring.kind()) {
    case RingKind::Integers:
      return f(make_view(ring, IntegerDomain{}));
    case RingKind::Rationals:
      return f(make_view(ring, RationalDomain{}));
    case RingKind::PrimeField:
      return f(make_view(ring, ModularDomain(ring.modulus(), true)));
    default:
      return f(make_view(ring, ModularDomain(ring.modulus(), false)));
  }
}

}  // namespace kc
