// Adding one element y to the sequence: the long exact sequences of the
// (x - U) complexes, iterated completion and the five-term sequence of
// Hom(R_y, -).

#include "verify_impl.hpp"

namespace kc {

namespace {

template <class D>
Seq<D> with_y(const Ctx<D>& c, const typename RingView<D>::Elem& y) {
  Seq<D> x = c.x;
  x.push_back(y);
  return x;
}

// f: A -> B and g: B -> C on presentations; asserts f g = 0 and ker g in im f.
template <class D>
bool assert_exact(Audit<D>& a, const std::string& name, const Module<D>& B, const Module<D>& C, const MatOf<D>& f, const MatOf<D>& g,
                  int degree) {
  const D& dom = a.dom();
  if (B.gens == 0) return a.require(true, name);
  if (f.rows() > 0 && C.gens > 0 && !rowspan_contains(dom, C.rel, mul(dom, f, g)))
    return a.require(false, name + ": composite is not zero", degree, {{"f", f}, {"g", g}});
  MatOf<D> ker = C.gens > 0 ? kernel_subquotient(dom, B, C, g).generators() : identity(dom, B.gens);
  const bool ok = ker.rows() == 0 || rowspan_contains(dom, vstack(dom, f.rows() > 0 ? f : zeros(dom, 0, B.gens), B.rel), ker);
  return a.require(ok, name, degree, {{"f", f}, {"g", g}, {"kernel", ker}});
}

// Sign e with d_src f = e f d_tgt in every degree, for f of degree shift.
template <class D, class F>
std::optional<int> anticommute_sign(const ChainComplex<D>& s, const ChainComplex<D>& t, const F& f, int shift) {
  const D& dom = s.dom;
  for (int e : {1, -1}) {
    bool ok = true;
    for (int n = s.lo; n <= s.hi && ok; ++n) {
      if (s.gens(n) == 0 || t.gens(n + shift - 1) == 0) continue;
      MatOf<D> lhs = mul(dom, s.d(n), f(n - 1));
      MatOf<D> rhs = mul(dom, f(n), t.d(n + shift));
      MatOf<D> diff = e == 1 ? sub(dom, lhs, rhs) : add(dom, lhs, rhs);
      ok = rowspan_contains(dom, t.term(n + shift - 1).rel, diff);
    }
    if (ok) return e;
  }
  return std::nullopt;
}

template <class D>
StableImage<D> stable_or_abandon(Audit<D>& a, const DirectedSystem<D>& s, int degree, int window, const std::string& what) {
  auto st = stabilize(s.stages[0].dom, degree_system(s, degree), window);
  if (!st.entry.stabilized()) a.inconclusive(what + " did not stabilize: " + st.entry.certificate);
  return st;
}

template <class D>
Module<D> bare(Module<D> m) {
  m.ops.clear();
  return m;
}

template <class D>
void enl1_sequence(const Ctx<D>& c, Audit<D>& a, bool cochain) {
  const D& dom = c.R.dom;
  const int r = c.r(), n = c.inst.n;
  const auto y = c.need_y();
  const Seq<D> xy = with_y(c, y);
  const unsigned bit = 1u << r;
  Module<D> t = trunc_poly_module(dom, c.M, r + 1, n);
  auto ops = xu_operators(c.R, t, xy);
  const MatOf<D> s_op = ops.back();
  ops.pop_back();
  auto tot = cochain ? koszul_xu_cochain(c.R, xy, c.M, n) : koszul_xu_chain(c.R, xy, c.M, n);
  auto cp = koszul_ops(dom, t, ops, cochain);
  auto s = detail::lift_blockwise(cp, make_map(module_complex(dom, t), module_complex(dom, t), {s_op}), cochain);
  const std::string tag = cochain ? "cochain" : "chain";

  // iota: C' in degree n + shift_i -> Tot_n; pi: Tot_n -> C' in degree n - 1 + shift_i.
  const int shift_i = cochain ? 1 : 0;
  auto iota = [&](int cd) {
    const int td = cd - shift_i;
    MatOf<D> f = zeros(dom, cp.gens(cd), tot.gens(td));
    if (!cp.in_range(cd) || !tot.in_range(td)) return f;
    for (const auto& b : cp.blocks_at(cd)) {
      const Block* bt = find_block(tot, td, cochain ? b.subset | bit : b.subset);
      f.block(b.offset, bt->offset, b.size, b.size) = b.sign * bt->sign == 1 ? identity(dom, b.size) : neg(dom, identity(dom, b.size));
    }
    return f;
  };
  auto pi = [&](int td) {
    const int cd = td - 1 + shift_i;
    MatOf<D> f = zeros(dom, tot.gens(td), cp.gens(cd));
    if (!tot.in_range(td) || !cp.in_range(cd)) return f;
    for (const auto& bt : tot.blocks_at(td)) {
      if (bool(bt.subset & bit) == cochain) continue;
      const Block* b = find_block(cp, cd, bt.subset & ~bit);
      f.block(bt.offset, b->offset, bt.size, bt.size) = b->sign * bt.sign == 1 ? identity(dom, bt.size) : neg(dom, identity(dom, bt.size));
    }
    return f;
  };
  auto si = anticommute_sign(cp, tot, iota, -shift_i);
  a.require(si.has_value(), tag + ": inclusion commutes with the differentials up to sign");
  auto sp = anticommute_sign(tot, cp, pi, shift_i - 1);
  a.require(sp.has_value(), tag + ": projection commutes with the differentials up to sign");
  assert_chain_map(a, tag + ": y - V on K(x - U)", s);
  if (a.failed()) return;

  Json orders = Json::array();
  for (int td = tot.lo; td <= tot.hi; ++td) {
    const int cin = td + shift_i, cout = td - 1 + shift_i;
    auto hin = homology(cp, cin), ht = homology(tot, td), hout = homology(cp, cout);
    const MatOf<D> s_in = hin.induced(s.at(cin)), s_out = hout.induced(s.at(cout));
    const MatOf<D> hi = hin.induced_to(ht, iota(cin)), hp = ht.induced_to(hout, pi(td));
    const auto& Pin = hin.presentation();
    const auto& Pt = ht.presentation();
    const auto& Pout = hout.presentation();
    const std::string deg = std::to_string(cochain ? -td : td);
    assert_exact(a, tag + ": exact at H(C') before H" + deg + "(Tot)", Pin, Pt, s_in, hi, cin);
    assert_exact(a, tag + ": exact at H" + deg + "(Tot)", Pt, Pout, hi, hp, td);
    assert_exact(a, tag + ": exact at H(C') after H" + deg + "(Tot)", Pout, Pout, hp, s_out, cout);
    if constexpr (std::is_same_v<D, ModularDomain>) {
      const BigInt coker = finite_order(dom, cokernel_module(dom, Pin, s_in));
      const BigInt ker = finite_order(dom, kernel_subquotient(dom, Pout, Pout, s_out).presentation());
      const BigInt h = finite_order(dom, Pt);
      a.require(h == coker * ker, tag + ": |H" + deg + "(Tot)| = |coker y| |ker y|", td);
      orders.push_back({{"degree", cochain ? -td : td}, {"H", h.str()}, {"coker", coker.str()}, {"ker", ker.str()}});
    }
  }
  a.note(tag, orders);
}

}  // namespace

template <class D>
void check_enl1(const Ctx<D>& c, Audit<D>& a) {
  enl1_sequence(c, a, false);
  enl1_sequence(c, a, true);
}

template <class D>
void check_enl2(const Ctx<D>& c, Audit<D>& a) {
  if constexpr (!std::is_same_v<D, ModularDomain>) {
    a.inconclusive("UnsupportedInstance: cardinality comparison needs a finite ring");
  } else {
    const D& dom = c.R.dom;
    const int r = c.r(), w = c.inst.window;
    const auto y = c.need_y();
    const Seq<D> xy = with_y(c, y), ys{y};
    // r + 1 variables grow as N^(r+1); shrink the depth to a term-size budget
    const int N = c.inst.n_max;
    int Nxy = N;
    const long long budget = std::max<long long>(64, max_term_size() / 64);
    while (Nxy > w + 1 && mono_count(r + 1, Nxy) * c.M.gens * c.R.k > budget) --Nxy;
    a.note("depth", Nxy);
    auto order_of = [&](const Module<D>& m) { return m.gens == 0 ? BigInt(1) : finite_order(dom, m); };

    // completion side: Lambda^(a+y)_i against Lambda^y_0(A_i), Lambda^y_1(A_(i-1))
    auto sx = xu_system(c.R, c.x, c.M, N, false);
    auto sxy = xu_system(c.R, xy, c.M, Nxy, false);
    std::vector<Module<D>> A;
    for (int i = 0; i <= r; ++i) A.push_back(bare(stable_or_abandon(a, sx, i, w, "Lambda_" + std::to_string(i)).image.presentation()));
    auto lam_y = [&](int i, int j) {
      if (i < 0 || i > r || A[i].gens == 0) return BigInt(1);
      auto s = xu_system(c.R, ys, A[i], N, false);
      return order_of(stable_or_abandon(a, s, j, w, "Lambda^y").image.presentation());
    };
    Json lam = Json::array();
    for (int i = 0; i <= r + 1; ++i) {
      const BigInt big = order_of(stable_or_abandon(a, sxy, i, w, "Lambda^(a+y)").image.presentation());
      const BigInt p0 = lam_y(i, 0), p1 = lam_y(i - 1, 1);
      a.require(big == p0 * p1, "|Lambda^(a+y)_" + std::to_string(i) + "| = |Lambda^y_0(Lambda_i)| |Lambda^y_1(Lambda_(i-1))|", i);
      lam.push_back({{"i", i}, {"total", big.str()}, {"lambda0", p0.str()}, {"lambda1", p1.str()}});
    }
    a.note("completion", lam);
    auto comp = limits(completion_system(c.R, xy, c.M, Nxy), w).lim.at(0);
    auto l0 = stable_or_abandon(a, sxy, 0, w, "Lambda^(a+y)_0").entry.value;
    if (comp.stabilized()) assert_same_class(a, "Lambda^(a+y)_0 equals the (a+y)-adic completion", l0, comp.value, 0);

    // torsion side: H^i_(a+y) against H^0_y(H^i_a), H^1_y(H^(i-1)_a)
    auto cx = xu_system(c.R, c.x, c.M, N, true);
    auto cxy = xu_system(c.R, xy, c.M, Nxy, true);
    std::vector<Module<D>> B;
    for (int i = 0; i <= r; ++i) B.push_back(bare(stable_or_abandon(a, cx, -i, w, "H^" + std::to_string(i)).image.presentation()));
    auto h_y = [&](int i, int j) {
      if (i < 0 || i > r || B[i].gens == 0) return BigInt(1);
      auto s = xu_system(c.R, ys, B[i], N, true);
      return order_of(stable_or_abandon(a, s, -j, w, "H_y").image.presentation());
    };
    std::vector<Classification> cech;
    if (r + 1 <= 3) cech = cech_cohomology_oracle(c.R, xy, c.M);
    Json hs = Json::array();
    for (int i = 0; i <= r + 1; ++i) {
      auto st = stable_or_abandon(a, cxy, -i, w, "H^(a+y)");
      const BigInt big = order_of(st.image.presentation());
      const BigInt p0 = h_y(i, 0), p1 = h_y(i - 1, 1);
      a.require(big == p0 * p1, "|H^" + std::to_string(i) + "_(a+y)| = |H^0_y(H^i_a)| |H^1_y(H^(i-1)_a)|", -i);
      if (!cech.empty()) assert_same_class(a, "H^" + std::to_string(i) + "_(a+y) matches the Cech oracle", st.entry.value, cech[i], -i);
      hs.push_back({{"i", i}, {"total", big.str()}, {"h0", p0.str()}, {"h1", p1.str()}});
    }
    a.note("torsion", hs);
  }
}

template <class D>
void check_enl4(const Ctx<D>& c, Audit<D>& a) {
  if constexpr (!std::is_same_v<D, ModularDomain>) {
    a.inconclusive("UnsupportedInstance: Hom(R_y, M) is materialized over finite rings only");
  } else {
    const D& dom = c.R.dom;
    const int N = c.inst.n_max, w = c.inst.window;
    if (!c.y && c.x.empty()) a.inconclusive("UnsupportedInstance: needs an element y");
    const auto y = c.y ? *c.y : c.x[0];
    const Seq<D> ys{y};
    const Module<D>& M = c.M;

    auto hom = hom_from_localization(c.R, M, y);
    auto sys = xu_system(c.R, ys, M, N, false);
    auto l1 = stable_or_abandon(a, sys, 1, w, "Lambda_1");
    auto ds0 = degree_system(sys, 0);
    auto l0 = stabilize(dom, ds0, w);
    if (!l0.entry.stabilized()) a.inconclusive("Lambda_0 did not stabilize: " + l0.entry.certificate);

    // 0 -> Lambda_1 -> Hom(R_y, M) -> M -> Lambda_0 -> Ext^1(R_y, M) -> 0
    const BigInt o_l1 = finite_order(dom, l1.image.presentation());
    const BigInt o_hom = hom.module.gens ? finite_order(dom, hom.module) : BigInt(1);
    const BigInt o_ker = hom.module.gens ? finite_order(dom, kernel_subquotient(dom, hom.module, M, hom.eval).presentation()) : BigInt(1);
    a.require(o_ker == o_l1, "|ker(Hom(R_y, M) -> M)| = |Lambda_1|");

    const auto& stage = sys.stages[l0.at];
    MatOf<D> incl = zeros(dom, M.gens, stage.gens(0));
    incl.leftCols(M.gens) = identity(dom, M.gens);
    const Module<D> J = l0.image.presentation();
    MatOf<D> q;
    try {
      q = l0.image.coords_rows(ds0.H[l0.at].coords_rows(incl));
    } catch (const Error&) {
      a.require(false, "M -> Lambda_0 lands in the stable image", 0, {{"inclusion", incl}});
      return;
    }
    if (hom.module.gens) assert_exact(a, "exact at M", M, J, hom.eval, q, 0);

    DirectedSystem<D> tower;
    tower.orientation = Orientation::Inverse;
    const MatOf<D> ya = module_action(c.R, M, y);
    for (int i = 0; i < N; ++i) tower.stages.push_back(module_complex(dom, M));
    for (int i = 0; i + 1 < N; ++i) tower.transitions.push_back(make_map(tower.stages[i + 1], tower.stages[i], {ya}));
    auto tl = limits(tower, w);
    const LimitEntry& t0 = tl.lim.at(0);
    if (!t0.stabilized()) a.inconclusive("the tower M <-y- M did not stabilize");
    assert_same_class(a, "lim(M <-y- M) equals Hom(R_y, M)", t0.value, classify_module(dom, hom.module), 0);
    const LimitEntry& ext = tl.lim1.at(0);
    a.require(ext.stabilized(), "lim^1 of the tower is determined");
    const BigInt o_ext = ext.value.cardinality ? *ext.value.cardinality : BigInt(0);
    const BigInt o_coker = finite_order(dom, cokernel_module(dom, J, q));
    a.require(o_coker == o_ext, "|coker(M -> Lambda_0)| = |Ext^1(R_y, M)|");
    auto mic = tel_mic_trunc(tower, N, false);
    a.note("microscopeH1", classification_json(homology_classification(mic.complex, -1)));

    const BigInt o_m = finite_order(dom, M), o_l0 = finite_order(dom, J);
    a.require(o_l1 * o_m * o_ext == o_hom * o_l0, "|Lambda_1| |M| |Ext^1| = |Hom(R_y, M)| |Lambda_0|");
    a.note("orders", {{"Lambda1", o_l1.str()}, {"Hom", o_hom.str()}, {"M", o_m.str()}, {"Lambda0", o_l0.str()}, {"Ext1", o_ext.str()}});
  }
}

KC_INSTANTIATE(enl1)
KC_INSTANTIATE(enl2)
KC_INSTANTIATE(enl4)

}  // namespace kc
