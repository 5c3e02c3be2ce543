// Truncated resolution diagram and its comparison with the Cech complex.

#include "verify_impl.hpp"

namespace kc {

namespace {

template <class D>
void require_one_element(const Ctx<D>& c, Audit<D>& a) {
  if (c.r() != 1) a.inconclusive("UnsupportedInstance: the resolution model is built for one element");
}

// Naive window: chain map, iso on H^0, onto H^1. The truncated H^1 is
// M / x^n M, which the Cech H^1 only sees modulo Gamma, so a quasi-iso is
// certified on the window with U^(n) Gamma (or U^-(n-1) Gamma) killed.
template <class D>
void compare_with_cech(Audit<D>& a, const std::string& name, const ChainMap<D>& f, const ChainComplex<D>& corrected) {
  const D& dom = f.src.dom;
  assert_chain_map(a, name, f);
  auto hs0 = homology(f.src, 0), ht0 = homology(f.tgt, 0);
  MatOf<D> h0 = hs0.induced_to(ht0, f.at(0));
  a.require(is_isomorphism(dom, hs0.presentation(), ht0.presentation(), h0), name + " is an isomorphism on H^0", 0, {{"H0", h0}});
  auto hs1 = homology(f.src, -1), ht1 = homology(f.tgt, -1);
  MatOf<D> h1 = hs1.induced_to(ht1, f.at(-1));
  a.require(is_surjective(dom, ht1.presentation(), h1), name + " is onto H^1", -1, {{"H1", h1}});
  a.note("naive", {{"H0", classification_json(classify_module(dom, hs0.presentation()))},
                   {"H1", classification_json(classify_module(dom, hs1.presentation()))}});
  a.note("cech", {{"H0", classification_json(classify_module(dom, ht0.presentation()))},
                  {"H1", classification_json(classify_module(dom, ht1.presentation()))}});
  assert_quasi_iso(a, name + " on the corrected window", make_map(corrected, f.tgt, f.comp));
}

template <class D>
int effective_window(const Ctx<D>& c, Audit<D>& a, int k) {
  const int n = std::max(c.inst.n, k + 1);
  a.note("stabilizationExponent", k);
  a.note("window", n);
  return n;
}

}  // namespace

template <class D>
void check_comp6(const Ctx<D>& c, Audit<D>& a) {
  require_one_element(c, a);
  const D& dom = c.R.dom;
  const int n = c.inst.n;
  auto d = resolution_diagram(c.R, c.x[0], c.M, n);
  assert_chain_map(a, "E -> Lcheck", d.i);
  assert_chain_map(a, "Lcheck -> Lcal", d.p);
  assert_chain_map(a, "section Lcal -> Lcheck", d.s);
  for (int deg = 0; deg >= -1; --deg) {
    auto col = make_complex(dom, 0, {d.lcal.term(deg), d.lcheck.term(deg), d.e.term(deg)}, {d.p.at(deg), d.i.at(deg)});
    a.require(is_exact(col), "column in degree " + std::to_string(-deg) + " is short exact", deg, {{"i", d.i.at(deg)}, {"p", d.p.at(deg)}});
  }
  a.require(is_exact(d.e), "E is exact");
  assert_quasi_iso(a, "Lcheck -> Lcal", d.p);
  auto ps = compose(d.s, d.p);
  for (int deg = ps.src.lo; deg <= ps.src.hi; ++deg)
    assert_equal_maps(a, "p o s = id in degree " + std::to_string(-deg), d.lcal.term(deg), ps.at(deg), identity(dom, d.lcal.gens(deg)),
                      deg);
  Json h = Json::object();
  for (int deg = 0; deg >= -1; --deg) h[std::to_string(-deg)] = classification_json(homology_classification(d.lcal, deg));
  a.note("Lcal", h);
}

template <class D>
void check_comp5(const Ctx<D>& c, Audit<D>& a) {
  require_one_element(c, a);
  if (!c.finite()) a.inconclusive("UnsupportedInstance: the Cech complex is materialized over finite rings only");
  auto loc = localize_finite(c.R, c.M, c.x[0]);
  const int n = effective_window(c, a, loc.k);
  auto cech = cech_complex_finite(c.R, c.x, c.M);
  auto d = resolution_diagram(c.R, c.x[0], c.M, n);
  auto f = lcal_to_cech(d.lcal, cech, loc, n);
  auto fixed = quotient_term(d.lcal, -1, torsion_rows(c.R, c.x[0], c.M, n, n - 1));
  compare_with_cech(a, "Lcal -> Cech", f, fixed);
}

template <class D>
void check_coh8(const Ctx<D>& c, Audit<D>& a) {
  require_one_element(c, a);
  if (!c.finite()) a.inconclusive("UnsupportedInstance: the Cech complex is materialized over finite rings only");
  const D& dom = c.R.dom;
  auto loc = localize_finite(c.R, c.M, c.x[0]);
  const int n = effective_window(c, a, loc.k);
  auto cech = cech_complex_finite(c.R, c.x, c.M);
  auto k = koszul_xu_cochain(c.R, c.x, c.M, n);
  auto g = window_to_cech(k, cech, loc, n);
  const Block* top = find_block(k, -1, 1u);
  auto fixed = quotient_term(k, -1, torsion_rows(c.R, c.x[0], c.M, n, top->offset / c.M.gens));
  compare_with_cech(a, "K^.(x - U; W_n(M)) -> Cech", g, fixed);
  // the window map matches the Lcal map through the variable inversion
  auto d = resolution_diagram(c.R, c.x[0], c.M, n);
  auto both = compose(lcal_to_window(d.lcal, k, n), g);
  auto f = lcal_to_cech(d.lcal, cech, loc, n);
  for (int deg = 0; deg >= -1; --deg)
    assert_equal_maps(a, "f(U^-1) -> f(1/x)/x agrees with the Lcal map in degree " + std::to_string(-deg), cech.term(deg), both.at(deg),
                      f.at(deg), deg);
  (void)dom;
}

KC_INSTANTIATE(comp6)
KC_INSTANTIATE(comp5)
KC_INSTANTIATE(coh8)

}  // namespace kc
