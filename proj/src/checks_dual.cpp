// Duality checks: explicit truncated isomorphisms with their U-actions.

#include "verify_impl.hpp"

namespace kc {

namespace {

template <class D>
Module<D> second_module(const Ctx<D>& c) {
  return c.opt_str("Y") == "M" ? c.M : ring_module(c.R);
}

// R-entries of an operator on a free module, as the action on copies of M.
// Precomposing f: C -> M with U sends the value row g to sum_g' U(g, g') f(g').
template <class D>
MatOf<D> free_precompose(const RingView<D>& R, const Module<D>& m, const MatOf<D>& op) {
  const Index a = op.rows() / R.k, g = m.gens;
  MatOf<D> out = zeros(R.dom, a * g, a * g);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < a; ++j) {
      typename RingView<D>::Elem e(R.k);
      bool nz = false;
      for (int l = 0; l < R.k; ++l) {
        e[l] = op(i * R.k + R.unit, j * R.k + l);
        nz = nz || !R.dom.is_zero(e[l]);
      }
      if (nz) out.block(j * g, i * g, g, g) = module_action(R, m, e);
    }
  return out;
}

}  // namespace

template <class D>
void check_dual0(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int r = std::max(c.r(), 1), n = c.inst.n;
  auto d = dual0_pairing(c.R, c.M, r, n);
  a.note("hom", classification_json(classify_module(dom, d.hom.module())));
  a.note("trunc", classification_json(classify_module(dom, d.trunc)));
  a.require(is_isomorphism(dom, d.hom.module(), d.trunc, d.phi), "Hom(W_n(R), M) -> M[U]/U^(n) is an isomorphism", std::nullopt,
            {{"phi", d.phi}});
  for (int i = 0; i < r; ++i)
    assert_equal_maps(a, u_name(i) + " is intertwined", d.trunc, mul(dom, d.hom_u[i], d.phi),
                      mul(dom, d.phi, module_op(d.trunc, u_name(i))));
  if (c.x.empty()) return;
  // naturality along M -> M / x_1 M
  Module<D> q = cokernel_module(dom, c.M, module_action(c.R, c.M, c.x[0]));
  auto d2 = dual0_pairing(c.R, q, r, n);
  MatOf<D> hm = d.hom.sq.induced_to(d2.hom.sq, postcompose_ambient(dom, identity(dom, c.M.gens), d.window.gens));
  assert_equal_maps(a, "natural in M along M -> M / x_1 M", d2.trunc, mul(dom, hm, d2.phi), d.phi);
}

template <class D>
void check_dual1(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int n = c.inst.n;
  auto f = dual1_map(c.R, c.x, c.M, n);
  assert_termwise_iso(a, "Hom(K^.(x - U; W_n(R)), M) -> K_.(x - U; M[U]/U^(n))", f);
  Module<D> w = inverse_poly_module(dom, free_module(c.R, 1), c.r(), n);
  auto kc = koszul_ops(dom, w, xu_operators(c.R, w, c.x), true);
  for (int p = f.src.lo; p <= f.src.hi; ++p)
    for (int i = 0; i < c.r(); ++i) {
      MatOf<D> us = free_precompose(c.R, c.M, module_op(kc.term(-p), u_name(i)));
      assert_equal_maps(a, u_name(i) + " is intertwined in degree " + std::to_string(p), f.tgt.term(p), mul(dom, us, f.at(p)),
                        mul(dom, f.at(p), module_op(f.tgt.term(p), u_name(i))), p);
    }
}

template <class D>
void check_dual2(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int n = c.inst.n;
  const Module<D> Y = second_module(c);
  auto d = dual2_map(c.R, c.x, c.M, Y, n);
  a.note("HomXY", classification_json(classify_module(dom, d.hxy.module())));
  assert_termwise_iso(a, "Hom(K^.(x - U; W_n(X)), Y) -> K_.(x - U; Hom(X, Y)[U]/U^(n))", d.map);
  Module<D> w = inverse_poly_module(dom, c.M, c.r(), n);
  auto kc = koszul_ops(dom, w, xu_operators(c.R, w, c.x), true);
  for (int p = d.source.cx.lo; p <= d.source.cx.hi; ++p)
    for (int i = 0; i < c.r(); ++i) {
      MatOf<D> us = d.source.part(p).sq.induced(precompose_ambient(dom, module_op(kc.term(-p), u_name(i)), Y.gens));
      assert_equal_maps(a, u_name(i) + " is intertwined in degree " + std::to_string(p), d.target.term(p), mul(dom, us, d.map.at(p)),
                        mul(dom, d.map.at(p), module_op(d.target.term(p), u_name(i))), p);
    }
}

template <class D>
void check_dual3(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int n = c.inst.n;
  const Module<D> Y = second_module(c);
  auto d = dual3_map(c.R, c.x, c.M, Y, n);
  assert_termwise_iso(a, "K_.(x - U; Hom(X, Y)[U]/U^(n)) -> Hom(X, K_.(x - U; Y[U]/U^(n)))", d.map);
  auto ky = koszul_xu_chain(c.R, c.x, Y, n);
  for (int p = d.source.lo; p <= d.source.hi; ++p)
    for (int i = 0; i < c.r(); ++i) {
      MatOf<D> ut = d.target.part(p).sq.induced(postcompose_ambient(dom, module_op(ky.term(p), u_name(i)), c.M.gens));
      assert_equal_maps(a, u_name(i) + " is intertwined in degree " + std::to_string(p), d.target.cx.term(p),
                        mul(dom, module_op(d.source.term(p), u_name(i)), d.map.at(p)), mul(dom, d.map.at(p), ut), p);
    }
}

template <class D>
void check_dual6(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int n = c.inst.n;
  const Module<D> Y = second_module(c);
  auto d = dual6_maps(c.R, c.x, c.M, Y, n);
  assert_termwise_iso(a, "Hom_R(K^.(x - U; W_n(X)), Y) -> Hom_R[U](K^.(x - U; X[U]/U^(n)), Y[U]/U^(n))", d.first);
  assert_termwise_iso(a, "Hom_R[U](K^.(x - U; X[U]/U^(n)), Y[U]/U^(n)) -> K_.(x - U; Hom(X, Y)[U]/U^(n))", d.second);
  auto d2 = dual2_map(c.R, c.x, c.M, Y, n);
  auto both = compose(d.first, d.second);
  for (int p = both.src.lo; p <= both.src.hi; ++p)
    assert_equal_maps(a, "the composite agrees with the direct isomorphism in degree " + std::to_string(p), d.target.term(p), both.at(p),
                      d2.map.at(p), p);
  Module<D> tx = trunc_poly_module(dom, c.M, c.r(), n);
  const Index ty = trunc_poly_module(dom, Y, c.r(), n).gens;
  auto kt = koszul_ops(dom, tx, xu_operators(c.R, tx, c.x), true);
  for (int p = d.middle.cx.lo; p <= d.middle.cx.hi; ++p)
    for (int i = 0; i < c.r(); ++i) {
      MatOf<D> um = d.middle.part(p).sq.induced(precompose_ambient(dom, module_op(kt.term(-p), u_name(i)), ty));
      assert_equal_maps(a, u_name(i) + " is intertwined by the second map in degree " + std::to_string(p), d.target.term(p),
                        mul(dom, um, d.second.at(p)), mul(dom, d.second.at(p), module_op(d.target.term(p), u_name(i))), p);
    }
}

template <class D>
void check_dual7(const Ctx<D>& c, Audit<D>& a) {
  if constexpr (!std::is_same_v<D, ModularDomain>) {
    a.inconclusive("UnsupportedInstance: needs Z/N with I = R");
  } else {
    const auto kind = c.ring.kind();
    if (kind != RingKind::IntegersModN && kind != RingKind::PrimeField) a.inconclusive("UnsupportedInstance: needs Z/N with I = R");
    const D& dom = c.R.dom;
    const int N = c.inst.n_max, r = c.r();
    const Module<D> I = ring_module(c.R);
    std::vector<HomComplex<D>> hs;
    for (int n = 1; n <= N; ++n) hs.push_back(hom_into_module(koszul_xu_cochain(c.R, c.x, c.M, n), I));
    DirectedSystem<D> sys;
    sys.orientation = Orientation::Inverse;
    for (const auto& h : hs) sys.stages.push_back(h.cx);
    for (int n = 1; n < N; ++n) {
      auto inc = xu_transition(c.R, c.x, c.M, n + 1, n, true);
      std::vector<MatOf<D>> comp;
      for (int p = hs[n].cx.lo; p <= hs[n].cx.hi; ++p)
        comp.push_back(hs[n].part(p).sq.induced_to(hs[n - 1].part(p).sq, precompose_ambient(dom, inc.at(-p), I.gens)));
      sys.transitions.push_back(make_map(hs[n].cx, hs[n - 1].cx, std::move(comp)));
    }
    auto lim = limits(sys, c.inst.window);
    auto cech = cech_complex_finite(c.R, c.x, c.M);
    Json rows = Json::object();
    for (int p = 0; p <= r; ++p) {
      auto hp = homology(cech, -p).presentation();
      const Classification want = classify_module(dom, hom_modules(dom, hp, I).module());
      const LimitEntry& e = lim.lim.at(p);
      rows[std::to_string(p)] = {{"homOfCech", classification_json(want)},
                                 {"ext", e.stabilized() ? classification_json(e.value) : Json("proObject")}};
      if (!e.stabilized()) a.inconclusive("Hom system did not stabilize in degree " + std::to_string(p));
      assert_same_class(a, "Hom(H^" + std::to_string(p) + ", R) equals the dualized Koszul side", e.value, want, p);
    }
    a.note("degrees", rows);
  }
}

template <class D>
void check_hoc1(const Ctx<D>& c, Audit<D>& a) {
  const int n = c.inst.n;
  assert_termwise_iso(a, "Hom(K^.(x - U; W_n(R)), M) = K_.(x - U; M[U]/U^(n))", dual1_map(c.R, c.x, c.M, n));
  assert_termwise_iso(a, "K^.(x - U; W_n(R)) (x) M = K^.(x - U; W_n(M))", window_tensor_map(c.R, c.x, c.M, n));
  if (c.r() != 1) {
    a.note("lcal", "skipped: the resolution model is built for one element");
    return;
  }
  auto d = resolution_diagram(c.R, c.x[0], c.M, n);
  auto k = koszul_xu_cochain(c.R, c.x, c.M, n);
  assert_termwise_iso(a, "truncated Lcal = K^.(x - U; W_n(M)) by inverting the variable", lcal_to_window(d.lcal, k, n));
}

KC_INSTANTIATE(dual0)
KC_INSTANTIATE(dual1)
KC_INSTANTIATE(dual2)
KC_INSTANTIATE(dual3)
KC_INSTANTIATE(dual6)
KC_INSTANTIATE(dual7)
KC_INSTANTIATE(hoc1)

}  // namespace kc
