#pragma once

#include "kc/echelon.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace kc {

// U*A*V = S with S diagonal and each diagonal entry dividing the next.
template <class D>
struct Smith {
  MatOf<D> U, V, S;
  std::vector<typename D::Scalar> diagonal;
};

template <class D>
Smith<D> smith(const D& dom, MatOf<D> a, bool transforms = true) {
  using S = typename D::Scalar;
  const Index m = a.rows(), n = a.cols();
  MatOf<D> U = transforms ? identity(dom, m) : MatOf<D>();
  MatOf<D> V = transforms ? identity(dom, n) : MatOf<D>();

  auto row_op = [&](Index r, Index i, const Gcdex<S>& g) {
    detail::combine_rows(dom, a, r, i, 0, g);
    if (transforms) detail::combine_rows(dom, U, r, i, 0, g);
  };
  auto col_op = [&](MatOf<D>& x, Index c, Index j, const Gcdex<S>& g) {
    for (Index i = 0; i < x.rows(); ++i) {
      auto p = x(i, c), q = x(i, j);
      if (dom.is_zero(p) && dom.is_zero(q)) continue;
      x(i, c) = dom.lin(g.s, p, g.t, q);
      x(i, j) = dom.lin(g.u, p, g.v, q);
    }
  };

  Index t = 0;
  while (t < std::min(m, n)) {
    Index pi = -1, pj = -1;
    for (Index i = t; i < m; ++i)
      for (Index j = t; j < n; ++j)
        if (!dom.is_zero(a(i, j)) && (pi < 0 || dom.pivot_measure(a(i, j)) < dom.pivot_measure(a(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    if (pi != t) {
      a.row(pi).swap(a.row(t));
      if (transforms) U.row(pi).swap(U.row(t));
    }
    if (pj != t) {
      a.col(pj).swap(a.col(t));
      if (transforms) V.col(pj).swap(V.col(t));
    }
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (Index i = t + 1; i < m; ++i)
        if (!dom.is_zero(a(i, t))) row_op(t, i, dom.gcdex(a(t, t), a(i, t)));
      for (Index j = t + 1; j < n; ++j)
        if (!dom.is_zero(a(t, j))) {
          auto g = dom.gcdex(a(t, t), a(t, j));
          col_op(a, t, j, g);
          if (transforms) col_op(V, t, j, g);
          dirty = true;
        }
      if (dirty) {
        dirty = false;
        for (Index i = t + 1; i < m; ++i)
          if (!dom.is_zero(a(i, t))) dirty = true;
      }
    }
    auto u = dom.unit_normalizer(a(t, t));
    if (!dom.is_one(u)) {
      for (Index j = 0; j < n; ++j) a(t, j) = dom.mul(u, a(t, j));
      if (transforms)
        for (Index j = 0; j < m; ++j) U(t, j) = dom.mul(u, U(t, j));
    }
    Index bad = -1;
    for (Index i = t + 1; i < m && bad < 0; ++i)
      for (Index j = t + 1; j < n; ++j)
        if (!dom.divides(a(t, t), a(i, j))) {
          bad = i;
          break;
        }
    if (bad >= 0) {
      // fold the offending row into the pivot row and redo this step
      row_op(t, bad, Gcdex<S>{dom.one(), dom.one(), dom.one(), dom.zero(), dom.one()});
      continue;
    }
    ++t;
  }
  Smith<D> out;
  for (Index i = 0; i < std::min(m, n); ++i) out.diagonal.push_back(a(i, i));
  out.S = std::move(a);
  out.U = std::move(U);
  out.V = std::move(V);
  return out;
}

// Isomorphism type of a finitely presented module B^g / rowspan(rel).
struct Classification {
  enum class Kind { Integers, Rationals, PrimeField, Cyclic };
  Kind kind = Kind::Cyclic;
  long long modulus = 0;          // p for prime fields, N for Z/N bases
  long long free_rank = 0;        // Z: free rank; Q and F_p: dimension
  std::vector<BigInt> invariants; // torsion chain (Z) or cyclic orders (Z/N)
  std::optional<BigInt> cardinality;

  bool is_zero() const { return free_rank == 0 && invariants.empty(); }
  bool operator==(const Classification& o) const {
    return kind == o.kind && modulus == o.modulus && free_rank == o.free_rank && invariants == o.invariants;
  }
  bool operator!=(const Classification& o) const { return !(*this == o); }

  std::string render() const {
    if (is_zero()) return "0";
    std::string s;
    auto join = [&](const std::string& part) { s += (s.empty() ? "" : " + ") + part; };
    switch (kind) {
      case Kind::Rationals:
        join(free_rank == 1 ? "Q" : "Q^" + std::to_string(free_rank));
        break;
      case Kind::PrimeField: {
        std::string f = "F" + std::to_string(modulus);
        join(free_rank == 1 ? f : f + "^" + std::to_string(free_rank));
        break;
      }
      case Kind::Integers:
        if (free_rank > 0) join(free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank));
        for (const auto& d : invariants) join("Z/" + d.str());
        break;
      case Kind::Cyclic:
        for (const auto& d : invariants) join("Z/" + d.str());
        break;
    }
    return s;
  }
};

template <class D>
Classification classify_presentation(const D& dom, Index gens, const MatOf<D>& rel) {
  Classification c;
  std::vector<typename D::Scalar> diag;
  if (rel.rows() > 0 && gens > 0) diag = smith(dom, rel, false).diagonal;
  if constexpr (std::is_same_v<D, ModularDomain>) {
    c.modulus = dom.N;
    std::vector<BigInt> orders;
    for (Index i = 0; i < gens; ++i) {
      long long d = i < Index(diag.size()) ? std::gcd<long long>(diag[i], dom.N) : dom.N;
      if (i < Index(diag.size()) && diag[i] == 0) d = dom.N;
      if (d != 1) orders.push_back(BigInt(d));
    }
    std::sort(orders.begin(), orders.end());
    BigInt card = 1;
    for (auto& o : orders) card *= o;
    c.cardinality = card;
    if (dom.prime) {
      c.kind = Classification::Kind::PrimeField;
      c.free_rank = static_cast<long long>(orders.size());
    } else {
      c.kind = Classification::Kind::Cyclic;
      c.invariants = std::move(orders);
    }
  } else if constexpr (std::is_same_v<D, IntegerDomain>) {
    c.kind = Classification::Kind::Integers;
    long long nonzero = 0;
    for (auto& d : diag) {
      if (d.is_zero()) continue;
      ++nonzero;
      BigInt a = kc::abs(d);
      if (a != BigInt(1)) c.invariants.push_back(a);
    }
    std::sort(c.invariants.begin(), c.invariants.end());
    c.free_rank = gens - nonzero;
    if (c.free_rank == 0) {
      BigInt card = 1;
      for (auto& o : c.invariants) card *= o;
      c.cardinality = card;
    }
  } else {
    c.kind = Classification::Kind::Rationals;
    long long rank = 0;
    for (auto& d : diag)
      if (!d.is_zero()) ++rank;
    c.free_rank = gens - rank;
    if (c.free_rank == 0) c.cardinality = BigInt(1);
  }
  return c;
}

}  // namespace kc
