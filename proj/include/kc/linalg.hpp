#pragma once

// Public entry points for exact linear algebra; the machinery lives in
// echelon.hpp, smith.hpp and module.hpp.

#include "kc/module.hpp"

#include <optional>
#include <utility>

namespace kc {

template <class D>
Smith<D> smith_normal_form(const D& dom, const MatOf<D>& a) {
  if constexpr (std::is_same_v<D, ModularDomain>) {
    if (!dom.prime) throw Error("UnsupportedRing", "Smith form with transforms needs Z, Q or a prime field");
  }
  return smith(dom, a, true);
}

// Kernel and image of the map v -> A v on columns, as generating rows.
template <class D>
std::pair<MatOf<D>, MatOf<D>> kernel_image(const D& dom, const MatOf<D>& a) {
  MatOf<D> at = a.transpose();
  MatOf<D> ker = at.rows() == 0 ? zeros(dom, 0, a.cols()) : left_kernel(dom, at);
  if (ker.rows() == 0) ker = zeros(dom, 0, a.cols());
  MatOf<D> im = at.rows() == 0 ? zeros(dom, 0, a.rows()) : howell_form(dom, at);
  return {ker, im};
}

// x with x*A = b, when one exists.
template <class D>
std::optional<RowOf<D>> solve_linear(const D& dom, const MatOf<D>& a, const RowOf<D>& b) {
  if (a.rows() == 0) {
    for (Index j = 0; j < b.cols(); ++j)
      if (!dom.is_zero(b(j))) return std::nullopt;
    return RowOf<D>(1, 0);
  }
  return RowSolver<D>(dom, a).solve(b);
}

// Invariant factors over Z/N by lifting to Z and stacking N*I under the
// relations, then reducing every factor mod N.
inline Classification classify_via_integer_lift(const ModularDomain& dom, Index gens, const Mat<std::int64_t>& rel) {
  IntegerDomain z;
  Mat<BigInt> lift = zeros(z, rel.rows() + gens, gens);
  for (Index i = 0; i < rel.rows(); ++i)
    for (Index j = 0; j < gens; ++j) lift(i, j) = BigInt(static_cast<long long>(rel(i, j)));
  for (Index j = 0; j < gens; ++j) lift(rel.rows() + j, j) = BigInt(static_cast<long long>(dom.N));
  Classification c = classify_presentation(z, gens, lift);
  Classification out;
  out.modulus = dom.N;
  out.kind = dom.prime ? Classification::Kind::PrimeField : Classification::Kind::Cyclic;
  out.invariants = c.invariants;
  out.cardinality = c.cardinality;
  if (dom.prime) {
    out.free_rank = static_cast<long long>(c.invariants.size());
    out.invariants.clear();
  }
  return out;
}

}  // namespace kc
