// Checks on the (x - U) avatars against the power Koszul systems.

#include "verify_impl.hpp"

namespace kc {

namespace {

template <class D>
Json classes_by_degree(const ChainComplex<D>& c, bool cohomological) {
  Json j = Json::object();
  for (int n = c.lo; n <= c.hi; ++n) j[std::to_string(cohomological ? -n : n)] = classification_json(homology_classification(c, n));
  return j;
}

template <class D>
void flip_last(ChainMap<D>& f) {
  f.comp.back() = neg(f.src.dom, f.comp.back());
}

// Least m in [n, m_max] with the transition m -> n zero on H, per n.
template <class D>
std::optional<std::vector<int>> pro_zero_search(const D& dom, const DegreeSystem<D>& s, int n_max, int m_max) {
  std::vector<int> w;
  for (int n = 1; n <= n_max; ++n) {
    std::optional<int> found;
    for (int mm = n; mm <= m_max && !found; ++mm) {
      MatOf<D> f = detail::stage_composite(dom, s, mm - 1, n - 1);
      if (rowspan_contains(dom, s.H[n - 1].presentation().rel, f)) found = mm;
    }
    if (!found) return std::nullopt;
    w.push_back(*found);
  }
  return w;
}

// H_0(x - U; M[U]/U^(n)) -> M / x^(n) M through the weak5 comparison.
template <class D>
MatOf<D> h0_to_quotient(const Ctx<D>& c, int n, const Subquotient<D>& h0) {
  auto w = weak5_maps(c.R, c.x, c.M, n, false);
  return mul(c.R.dom, h0.generators(), w.phi.at(0));
}

template <class D>
Module<D> adic_quotient(const Ctx<D>& c, int n) {
  MatOf<D> im = zeros(c.R.dom, 0, c.M.gens);
  for (const auto& xi : c.x) im = vstack(c.R.dom, im, module_action(c.R, c.M, c.R.pow(xi, n)));
  return cokernel_module(c.R.dom, c.M, im);
}

// Least k <= k_max with (0 :_M x^k) = (0 :_M x^(k+1)).
template <class D>
std::optional<int> torsion_bound(const Ctx<D>& c, const typename RingView<D>::Elem& x, int k_max) {
  const D& dom = c.R.dom;
  const MatOf<D> a = module_action(c.R, c.M, x);
  MatOf<D> ak = identity(dom, c.M.gens);
  for (int k = 0; k <= k_max; ++k) {
    MatOf<D> ak1 = mul(dom, ak, a);
    auto next = kernel_subquotient(dom, c.M, c.M, ak1);
    if (rowspan_contains(dom, c.M.rel, mul(dom, next.generators(), ak))) return k;
    ak = ak1;
  }
  return std::nullopt;
}

template <class D>
void weak5_family(const Ctx<D>& c, Audit<D>& a, bool cochain) {
  const int n = c.inst.n, m = c.inst.m;
  if (n < 1 || m < n) a.inconclusive("needs 1 <= n <= m");
  auto wn = weak5_maps(c.R, c.x, c.M, n, cochain);
  auto wm = weak5_maps(c.R, c.x, c.M, m, cochain);
  if (c.opt_str("mutant") == "flipSign") flip_last(wn.psi);
  a.note("H_power", classes_by_degree(wn.psi.src, cochain));
  a.note("H_avatar", classes_by_degree(wn.psi.tgt, cochain));
  assert_quasi_iso(a, "psi_n", wn.psi);
  assert_quasi_iso(a, "phi_n", wn.phi);
  assert_quasi_iso(a, "psi_m", wm.psi);
  assert_quasi_iso(a, "phi_m", wm.phi);
  auto back = compose(wn.psi, wn.phi);
  for (int d = back.src.lo; d <= back.src.hi; ++d)
    assert_equal_maps(a, "phi_n o psi_n = id in degree " + std::to_string(d), back.tgt.term(d), back.at(d),
                      identity(c.R.dom, back.src.gens(d)), d);
  auto tk = koszul_transition(c.R, c.x, c.M, m, n, cochain);
  auto tu = xu_transition(c.R, c.x, c.M, m, n, cochain);
  assert_chain_map(a, "power transition", tk);
  assert_chain_map(a, "avatar transition", tu);
  if (!cochain) {
    assert_homology_commutes(a, "psi square", compose(wm.psi, tu), compose(tk, wn.psi));
    assert_homology_commutes(a, "phi square", compose(tu, wn.phi), compose(wm.phi, tk));
  } else {
    assert_homology_commutes(a, "psi square", compose(wn.psi, tu), compose(tk, wm.psi));
    assert_homology_commutes(a, "phi square", compose(tu, wm.phi), compose(wn.phi, tk));
  }
}

}  // namespace

template <class D>
void check_weak5(const Ctx<D>& c, Audit<D>& a) {
  weak5_family(c, a, false);
}

template <class D>
void check_coh2(const Ctx<D>& c, Audit<D>& a) {
  weak5_family(c, a, true);
}

template <class D>
void check_coh3_oracle(const Ctx<D>& c, Audit<D>& a) {
  if (!c.finite()) a.inconclusive("UnsupportedInstance: the Cech oracle needs a finite ring");
  auto lim = local_cohomology_koszul(c.R, c.x, c.M, c.inst.n_max, c.inst.window);
  auto oracle = cech_cohomology_oracle(c.R, c.x, c.M);
  Json h = Json::object();
  for (int p = 0; p <= c.r(); ++p) {
    const LimitEntry& e = lim.lim.at(-p);
    h[std::to_string(p)] = {{"avatar", limit_entry_json(e)}, {"oracle", classification_json(oracle[p])}};
  }
  a.note("H", h);
  for (int p = 0; p <= c.r(); ++p) {
    const LimitEntry& e = lim.lim.at(-p);
    if (!e.stabilized()) a.inconclusive("H^" + std::to_string(p) + " did not stabilize by n_max");
    assert_same_class(a, "H^" + std::to_string(p) + " avatar equals Cech oracle", e.value, oracle[p], -p);
  }
}

template <class D>
void check_weak6(const Ctx<D>& c, Audit<D>& a) {
  const int N = c.inst.n_max, w = c.inst.window;
  auto xs = xu_system(c.R, c.x, c.M, N, false);
  auto ps = power_system(c.R, c.x, c.M, N, false);
  auto lx = limits(xs, w), lp = limits(ps, w);
  Json rows = Json::object();
  bool cardinality_mode = c.finite();
  for (int i = 0; i <= c.r(); ++i) {
    const LimitEntry &ex = lx.lim.at(i), &ep = lp.lim.at(i);
    for (std::size_t s = 0; s < ex.stages.size(); ++s)
      assert_same_class(a, "stage " + std::to_string(s + 1) + " of H_" + std::to_string(i) + " matches the power system", ex.stages[s],
                        ep.stages[s], i);
    Json row = {{"avatar", limit_entry_json(ex)}, {"lim", limit_entry_json(ep)}};
    const bool top = i + 1 > c.r();
    if (!top) row["lim1_next"] = limit_entry_json(lp.lim1.at(i + 1));
    rows[std::to_string(i)] = row;
    const bool known = ex.stabilized() && ep.stabilized() && (top || lp.lim1.at(i + 1).stabilized());
    if (!c.finite() || !known) {
      cardinality_mode = false;
      continue;
    }
    const BigInt h = *ex.value.cardinality, l = *ep.value.cardinality;
    const BigInt l1 = top ? BigInt(1) : *lp.lim1.at(i + 1).value.cardinality;
    a.require(h == l1 * l, "|H_" + std::to_string(i) + "| = |lim^1 H_" + std::to_string(i + 1) + "| * |lim H_" + std::to_string(i) + "| (" +
                               h.str() + " vs " + l1.str() + " * " + l.str() + ")",
              i);
  }
  a.note("degrees", rows);
  a.note("mode", cardinality_mode ? "cardinality" : "stagewise");
}

template <class D>
void check_weak7(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int N = c.inst.n_max, Mx = std::max(c.inst.m_max, N);
  auto pr = proregular_check(c.R, c.x, c.M, N, Mx);
  auto xs = xu_system(c.R, c.x, c.M, Mx, false);
  Json idx = Json::array();
  for (int i = 1; i <= c.r(); ++i) {
    auto w = pro_zero_search(dom, degree_system(xs, i), N, Mx);
    const auto& p = pr.indices[i - 1];
    idx.push_back({{"i", i}, {"verified", p.verified}, {"witness", p.witness}});
    a.require(w.has_value() == p.verified, "pro-zero of the avatar system matches the power system for i = " + std::to_string(i), i);
    if (w && p.verified) a.require(*w == p.witness, "pro-zero witnesses agree for i = " + std::to_string(i), i);
  }
  a.note("proregular", {{"label", pr.label()}, {"indices", idx}});

  // (b) stagewise comparison with M / x^(n) M and the limit criterion
  auto ds0 = degree_system(xs, 0);
  for (int n = 1; n <= N; ++n) {
    const auto& h0 = ds0.H[n - 1];
    Module<D> q = adic_quotient(c, n);
    a.require(is_isomorphism(dom, h0.presentation(), q, h0_to_quotient(c, n, h0)),
              "H_0 of stage " + std::to_string(n) + " maps isomorphically onto M / x^(n) M", 0);
  }
  auto lx = limits(xu_system(c.R, c.x, c.M, N, false), c.inst.window);
  auto lc = limits(completion_system(c.R, c.x, c.M, N), c.inst.window);
  auto lp = limits(power_system(c.R, c.x, c.M, N, false), c.inst.window);
  const LimitEntry &h0 = lx.lim.at(0), &comp = lc.lim.at(0);
  a.note("H0", limit_entry_json(h0));
  a.note("completion", limit_entry_json(comp));
  if (c.r() >= 1 && h0.stabilized() && comp.stabilized() && lp.lim1.at(1).stabilized()) {
    const bool iso = h0.value == comp.value;
    const bool lim1_zero = lp.lim1.at(1).value.is_zero();
    a.require(iso == lim1_zero, "H_0 -> completion is an isomorphism exactly when lim^1 H_1 vanishes", 0);
  }
  // (c) weakly pro-regular: left resolution of the completion
  if (pr.verified()) {
    if (h0.stabilized() && comp.stabilized()) assert_same_class(a, "H_0 equals the completion", h0.value, comp.value, 0);
    for (int i = 1; i <= c.r(); ++i)
      if (lx.lim.at(i).stabilized()) a.require(lx.lim.at(i).value.is_zero(), "H_" + std::to_string(i) + " vanishes", i);
    // Cech cohomology of Hom(M, R) over a self-injective Z/N
    if constexpr (std::is_same_v<D, ModularDomain>) {
      const auto kind = c.ring.kind();
      if ((kind == RingKind::IntegersModN || kind == RingKind::PrimeField) && c.r() <= 3) {
        auto hm = hom_modules(dom, c.M, ring_module(c.R));
        auto h = cech_cohomology_oracle(c.R, c.x, hm.module());
        Json hj = Json::array();
        for (const auto& cl : h) hj.push_back(classification_json(cl));
        a.note("cech_of_hom_into_R", hj);
        for (int i = 1; i <= c.r(); ++i)
          a.require(h[i].is_zero(), "H^" + std::to_string(i) + " of the Cech complex on Hom(M, R) vanishes", -i);
      }
    }
  }
}

template <class D>
void check_hoc2(const Ctx<D>& c, Audit<D>& a) {
  if (c.r() != 1) a.inconclusive("UnsupportedInstance: needs a single element");
  const D& dom = c.R.dom;
  const int N = c.inst.n_max, Mx = std::max(c.inst.m_max, N);
  auto xs = xu_system(c.R, c.x, c.M, N, false);
  auto ds0 = degree_system(xs, 0);
  for (int n = 1; n <= N; ++n)
    a.require(is_surjective(dom, adic_quotient(c, n), h0_to_quotient(c, n, ds0.H[n - 1])),
              "H_0 of stage " + std::to_string(n) + " maps onto M / x^n M", 0);
  auto lx = limits(xs, c.inst.window);
  auto lc = limits(completion_system(c.R, c.x, c.M, N), c.inst.window);
  a.note("H0", limit_entry_json(lx.lim.at(0)));
  a.note("H1", limit_entry_json(lx.lim.at(1)));
  a.note("completion", limit_entry_json(lc.lim.at(0)));

  // (b) kernel of evaluation Hom(R_x, M) -> M
  if constexpr (std::is_same_v<D, ModularDomain>) {
    auto hom = hom_from_localization(c.R, c.M, c.x[0]);
    auto ker = kernel_subquotient(dom, hom.module, c.M, hom.eval);
    const Classification kc = classify_module(dom, ker.presentation());
    a.note("kernel_of_evaluation", classification_json(kc));
    const LimitEntry& h1 = lx.lim.at(1);
    if (!h1.stabilized()) a.inconclusive("H_1 did not stabilize by n_max");
    assert_same_class(a, "H_1 equals the kernel of Hom(R_x, M) -> M", h1.value, kc, 1);
  } else {
    a.note("kernel_of_evaluation", "skipped: Hom(R_x, M) is materialized over finite rings only");
  }

  // (c) bounded torsion
  auto k = torsion_bound(c, c.x[0], Mx);
  a.note("torsion_bound", k ? Json(*k) : Json(nullptr));
  if (k) {
    // x^k kills the torsion, so the witness for stage n is at most n + k
    const int reach = std::max(Mx, N + *k);
    auto w = pro_zero_search(dom, degree_system(xu_system(c.R, c.x, c.M, reach, false), 1), N, reach);
    a.require(w.has_value(), "bounded torsion gives a pro-zero H_1 system", 1);
    const LimitEntry &h0 = lx.lim.at(0), &comp = lc.lim.at(0);
    if (h0.stabilized() && comp.stabilized())
      assert_same_class(a, "H_0 equals the completion", h0.value, comp.value, 0);
    else
      for (std::size_t s = 0; s < h0.stages.size(); ++s)
        assert_same_class(a, "stage " + std::to_string(s + 1) + " of H_0 matches M / x^n M", h0.stages[s], comp.stages[s], 0);
  }
}

template <class D>
void check_hoc3(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  const int n = c.inst.n, r = c.r();
  auto kt = koszul_xu_chain(c.R, c.x, c.M, n);
  auto kr = koszul_xu_chain(c.R, c.x, ring_module(c.R), n);
  std::vector<std::string> us;
  for (int i = 0; i < r; ++i) us.push_back(u_name(i));
  auto h = hom_into_module(kr, trunc_poly_module(dom, c.M, r, n), us);
  Json rows = Json::object();
  for (int i = 0; i <= r; ++i) {
    const Classification tor = homology_classification(kt, i), ext = homology_classification(h.cx, -(r - i));
    rows[std::to_string(i)] = {{"tor", classification_json(tor)}, {"ext", classification_json(ext)}};
    assert_same_class(a, "H_" + std::to_string(i) + " equals H^" + std::to_string(r - i) + " of the dual", tor, ext, i);
  }
  a.note("degrees", rows);
}

template <class D>
void check_weak9(const Ctx<D>& c, Audit<D>& a) {
  if (!c.finite()) a.inconclusive("UnsupportedInstance: needs a finite ring");
  const D& dom = c.R.dom;
  const int N = c.inst.n_max;
  auto xs = xu_system(c.R, c.x, c.M, N, false);
  auto ds0 = degree_system(xs, 0);
  for (int n = 1; n <= N; ++n) {
    Module<D> t = trunc_poly_module(dom, c.M, c.r(), n);
    MatOf<D> im = zeros(dom, 0, t.gens);
    for (const auto& op : xu_operators(c.R, t, c.x)) im = vstack(dom, im, op);
    const Classification coker = classify_module(dom, cokernel_module(dom, t, im));
    assert_same_class(a, "stage " + std::to_string(n) + ": coker(x - U) equals H_0", coker,
                      classify_module(dom, ds0.H[n - 1].presentation()), 0);
    a.require(is_isomorphism(dom, ds0.H[n - 1].presentation(), adic_quotient(c, n), h0_to_quotient(c, n, ds0.H[n - 1])),
              "stage " + std::to_string(n) + ": H_0 maps isomorphically onto M / x^(n) M", 0);
  }
  auto lx = limits(xs, c.inst.window);
  auto lc = limits(completion_system(c.R, c.x, c.M, N), c.inst.window);
  auto dc = derived_completion_koszul(c.R, c.x, c.M, N, c.inst.m_max, c.inst.window);
  const LimitEntry &h0 = lx.lim.at(0), &comp = lc.lim.at(0), &lam = dc.limits.lim.at(0);
  a.note("H0", limit_entry_json(h0));
  a.note("completion", limit_entry_json(comp));
  a.note("derivedCompletion", {{"label", dc.label}, {"Lambda0", limit_entry_json(lam)}});
  if (!h0.stabilized() || !comp.stabilized() || !lam.stabilized()) a.inconclusive("limits did not stabilize by n_max");
  assert_same_class(a, "H_0 equals the completion", h0.value, comp.value, 0);
  assert_same_class(a, "H_0 equals Lambda_0 from derived_completion_koszul", h0.value, lam.value, 0);
  if (dc.identified)
    for (int i = 1; i <= c.r(); ++i)
      if (dc.limits.lim.at(i).stabilized())
        a.require(dc.limits.lim.at(i).value.is_zero(), "Lambda_" + std::to_string(i) + " vanishes", i);
}

template <class D>
void check_prel7(const Ctx<D>& c, Audit<D>& a) {
  const D& dom = c.R.dom;
  Json rows = Json::array();
  for (std::size_t j = 0; j < c.x.size(); ++j) {
    auto tq = torsion_and_quotient_maps(c.R, c.x[j], module_complex(dom, c.M));
    const std::string tag = " for x_" + std::to_string(j + 1);
    assert_chain_map(a, "inclusion of the annihilator" + tag, tq.incl);
    assert_chain_map(a, "surjection onto the quotient" + tag, tq.surj);
    auto hs = homology(tq.incl.src, 1), ht = homology(tq.incl.tgt, 1);
    MatOf<D> h1 = hs.induced_to(ht, tq.incl.at(1));
    a.require(is_isomorphism(dom, hs.presentation(), ht.presentation(), h1), "(0 :_M x) -> H_1(x; M) is an isomorphism" + tag, 1, {{"map", h1}});
    auto ks = homology(tq.surj.src, 0), qs = homology(tq.surj.tgt, 0);
    MatOf<D> h0 = ks.induced_to(qs, tq.surj.at(0));
    a.require(is_isomorphism(dom, ks.presentation(), qs.presentation(), h0), "H_0(x; M) -> M / xM is an isomorphism" + tag, 0, {{"map", h0}});
    auto comp = compose(tq.incl, tq.surj);
    bool zero = true;
    for (int d = comp.src.lo; d <= comp.src.hi; ++d) zero = zero && rowspan_contains(dom, comp.tgt.term(d).rel, comp.at(d));
    a.require(zero, "the composite annihilator -> quotient is zero" + tag);
    rows.push_back({{"H1", classification_json(classify_module(dom, ht.presentation()))},
                    {"H0", classification_json(classify_module(dom, ks.presentation()))}});
  }
  a.note("pairs", rows);
}

template <class D>
void check_telescope(const Ctx<D>& c, Audit<D>& a) {
  const int N = c.inst.n_max;
  auto t1 = tel_mic_trunc(xu_system(c.R, c.x, c.M, N, true), N, true);
  assert_quasi_iso(a, "telescope of the window system -> stage N", t1.comparison);
  auto t2 = tel_mic_trunc(power_system(c.R, c.x, c.M, N, true), N, true);
  assert_quasi_iso(a, "telescope of the power cochain system -> stage N", t2.comparison);
  a.note("stages", N);
}

template <class D>
void check_microscope(const Ctx<D>& c, Audit<D>& a) {
  const int N = c.inst.n_max;
  auto t1 = tel_mic_trunc(xu_system(c.R, c.x, c.M, N, false), N, false);
  assert_quasi_iso(a, "stage N -> microscope of the truncation system", t1.comparison);
  auto t2 = tel_mic_trunc(power_system(c.R, c.x, c.M, N, false), N, false);
  assert_quasi_iso(a, "stage N -> microscope of the power chain system", t2.comparison);
  a.note("stages", N);
}

KC_INSTANTIATE(weak5)
KC_INSTANTIATE(coh2)
KC_INSTANTIATE(coh3_oracle)
KC_INSTANTIATE(weak6)
KC_INSTANTIATE(weak7)
KC_INSTANTIATE(hoc2)
KC_INSTANTIATE(hoc3)
KC_INSTANTIATE(weak9)
KC_INSTANTIATE(prel7)
KC_INSTANTIATE(telescope)
KC_INSTANTIATE(microscope)

}  // namespace kc
