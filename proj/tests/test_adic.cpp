#include <doctest.h>

#include "kc/adic.hpp"

#include <set>

using namespace kc;
using MM = Mat<std::int64_t>;
using ZV = RingView<ModularDomain>;
using Mod = Module<ModularDomain>;

namespace {

struct Fixture {
  Ring ring;
  ZV R;
  explicit Fixture(const RingSpec& spec) : ring(Ring::make(spec)), R(make_view(ring, make_dom())) {}
  ModularDomain make_dom() const { return ModularDomain(ring.modulus(), ring.kind() == RingKind::PrimeField); }
  ZV::Elem el(const std::string& s) const { return R.coeffs(ring.parse(s)); }
};

std::vector<std::int64_t> nth_vector(long long idx, Index g, std::int64_t N) {
  std::vector<std::int64_t> v(g);
  for (Index i = 0; i < g; ++i) {
    v[i] = idx % N;
    idx /= N;
  }
  return v;
}

long long ipow(long long b, long long e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<std::int64_t> apply(const ModularDomain& dom, const std::vector<std::int64_t>& v, const MM& d) {
  std::vector<std::int64_t> out(d.cols(), 0);
  for (Index j = 0; j < d.cols(); ++j)
    for (Index i = 0; i < d.rows(); ++i) out[j] = dom.add(out[j], dom.mul(v[i], d(i, j)));
  return out;
}

// |H_n| of a complex of free Z/N-modules by enumerating every vector.
long long brute_homology_order(const ChainComplex<ModularDomain>& c, int n) {
  const auto& dom = c.dom;
  const std::int64_t N = dom.N;
  long long kernel = 0;
  const Index g = c.gens(n);
  MM d = c.d(n);
  for (long long i = 0; i < ipow(N, g); ++i) {
    auto v = nth_vector(i, g, N);
    auto w = apply(dom, v, d);
    bool z = true;
    for (auto s : w) z = z && s == 0;
    kernel += z;
  }
  std::set<std::vector<std::int64_t>> image;
  const Index g1 = c.gens(n + 1);
  MM d1 = c.d(n + 1);
  for (long long i = 0; i < ipow(N, g1); ++i) image.insert(apply(dom, nth_vector(i, g1, N), d1));
  return kernel / std::max<long long>(1, image.size());
}

bool contained(const ModularDomain& dom, const Mod& tgt, const MM& diff) { return rowspan_contains(dom, tgt.rel, diff); }

std::vector<BigInt> invariants_of(const Subquotient<IntegerDomain>& h) { return classify_module(IntegerDomain{}, h.presentation()).invariants; }

}  // namespace

TEST_CASE("truncated polynomial modules") {
  Fixture z4(RingSpec::integers_mod(4));
  const auto& dom = z4.R.dom;
  Mod t = trunc_poly_module(dom, free_module(z4.R, 1), 2, 2);
  CHECK(t.gens == 4);
  CHECK(module_order(dom, t) == BigInt(256));
  for (int i = 0; i < 2; ++i) CHECK(is_zero(dom, power(dom, module_op(t, u_name(i)), 2)));
  CHECK(equal(dom, mul(dom, module_op(t, "U1"), module_op(t, "U2")), mul(dom, module_op(t, "U2"), module_op(t, "U1"))));

  Mod t3 = trunc_poly_module(dom, free_module(z4.R, 1), 1, 3);
  MM s = module_op(t3, "U1");
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(s(i, j) == (j == i + 1 ? 1 : 0));
  CHECK_THROWS_AS(trunc_poly_module(dom, free_module(z4.R, 1), 1, 0), Error);
}

TEST_CASE("inverse polynomial window") {
  Fixture z5(RingSpec::integers_mod(5));
  const auto& dom = z5.R.dom;
  Mod w = inverse_poly_module(dom, free_module(z5.R, 1), 1, 2);
  // index 0 is U^-1, index 1 is 1
  CHECK(window_exponent(0, 2) == -1);
  CHECK(window_exponent(1, 2) == 0);
  MM u = module_op(w, "U1");
  MM e0(1, 2), e1(1, 2);
  e0 << 1, 0;
  e1 << 0, 1;
  CHECK(equal(dom, mul(dom, e0, u), e1));
  CHECK(is_zero(dom, mul(dom, e1, u)));

  for (int n = 1; n <= 4; ++n) {
    Mod wn = inverse_poly_module(dom, free_module(z5.R, 1), 2, n);
    for (int i = 0; i < 2; ++i) {
      MM ui = module_op(wn, u_name(i));
      CHECK(is_zero(dom, power(dom, ui, n)));
      if (n > 1) CHECK_FALSE(is_zero(dom, power(dom, ui, n - 1)));
    }
    CHECK(equal(dom, mul(dom, module_op(wn, "U1"), module_op(wn, "U2")), mul(dom, module_op(wn, "U2"), module_op(wn, "U1"))));
  }
}

TEST_CASE("x - U chain complexes") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  auto m = free_module(z12.R, 1);
  auto k1 = koszul_xu_chain(z12.R, {z12.el("2")}, m, 1);
  auto k = koszul_chain(z12.R, {z12.el("2")}, m, {1});
  CHECK(equal(dom, k1.d(1), k.d(1)));

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  for (int n = 1; n <= 4; ++n) {
    auto c = koszul_xu_chain(Z, {Z.from_int(3)}, free_module(Z, 1), n);
    CHECK(invariants_of(homology(c, 0)) == std::vector<BigInt>{BigInt(ipow(3, n))});
    CHECK(homology_classification(c, 1).is_zero());
  }

  // homology is annihilated by every x_i - U_i
  Seq<ModularDomain> x{z12.el("2"), z12.el("3")};
  Mod q = quotient_of_free(z12.R, 1, {{z12.el("4")}});
  for (int n = 1; n <= 2; ++n) {
    auto c = koszul_xu_chain(z12.R, x, q, n);
    Mod t = trunc_poly_module(dom, q, 2, n);
    auto ops = xu_operators(z12.R, t, x);
    for (int p = c.lo; p <= c.hi; ++p) {
      auto h = homology(c, p);
      for (const auto& op : ops) {
        MM blk = kron(dom, identity(dom, c.gens(p) / t.gens), op);
        CHECK(contained(dom, h.presentation(), h.induced(blk)));
      }
    }
  }
}

TEST_CASE("x - U cochain complexes against enumeration") {
  Fixture z4(RingSpec::integers_mod(4));
  auto m = free_module(z4.R, 1);
  auto c = koszul_xu_cochain(z4.R, {z4.el("2")}, m, 2);
  CHECK(brute_homology_order(c, 0) == 4);
  CHECK(brute_homology_order(c, -1) == 4);
  CHECK(homology_order(c, 0) == BigInt(4));
  CHECK(homology_order(c, -1) == BigInt(4));

  auto c1 = koszul_xu_cochain(z4.R, {z4.el("2")}, m, 1);
  auto k = koszul_cochain(z4.R, {z4.el("2")}, m, {1});
  CHECK(equal(z4.R.dom, c1.d(0), k.d(0)));

  Fixture z6(RingSpec::integers_mod(6));
  for (int n = 1; n <= 3; ++n) {
    auto cc = koszul_xu_cochain(z6.R, {z6.el("2")}, free_module(z6.R, 1), n);
    for (int p = cc.lo; p <= cc.hi; ++p) CHECK(homology_order(cc, p) == BigInt(brute_homology_order(cc, p)));
  }
}

TEST_CASE("comparison with K(x^(n)) is a quasi-isomorphism") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  Seq<ModularDomain> x{z12.el("2"), z12.el("3")};
  Mod q = quotient_of_free(z12.R, 1, {{z12.el("6")}});
  for (bool cochain : {false, true})
    for (int n = 1; n <= 3; ++n) {
      auto w = weak5_maps(z12.R, x, q, n, cochain);
      CHECK(quasi_iso_check(w.psi).quasi_iso);
      CHECK(quasi_iso_check(w.phi).quasi_iso);
      auto id = compose(w.psi, w.phi);
      for (int p = id.src.lo; p <= id.src.hi; ++p) CHECK(contained(dom, id.src.term(p), sub(dom, id.at(p), identity(dom, id.src.gens(p)))));
    }

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  auto wz = weak5_maps(Z, {Z.from_int(2)}, free_module(Z, 1), 3, false);
  CHECK(quasi_iso_check(wz.psi).quasi_iso);
}

TEST_CASE("chain comparison commutes with transitions") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  Seq<ModularDomain> x{z12.el("2")};
  auto m = free_module(z12.R, 1);
  auto big = weak5_maps(z12.R, x, m, 3, false);
  auto small = weak5_maps(z12.R, x, m, 2, false);
  auto tu = xu_transition(z12.R, x, m, 3, 2, false);
  auto tk = koszul_transition(z12.R, x, m, 3, 2, false);
  auto left = compose(big.psi, tu);
  auto right = compose(tk, small.psi);
  for (int p = left.src.lo; p <= left.src.hi; ++p) CHECK(equal(dom, left.at(p), right.at(p)));
}

TEST_CASE("x - U systems") {
  Fixture z12(RingSpec::integers_mod(12));
  Seq<ModularDomain> x{z12.el("2"), z12.el("3")};
  auto s = xu_system(z12.R, x, free_module(z12.R, 1), 3, false);
  CHECK(s.transitions.size() == 2);
  for (const auto& t : s.transitions)
    for (int p = t.src.lo; p <= t.src.hi; ++p) CHECK(is_surjective(z12.R.dom, t.tgt.term(p), t.at(p)));

  Fixture z4(RingSpec::integers_mod(4));
  auto c = xu_transition(z4.R, {z4.el("2")}, free_module(z4.R, 1), 3, 1, true);
  MM expect(1, 3);
  expect << 0, 0, 1;
  CHECK(equal(z4.R.dom, c.at(0), expect));

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  auto zs = xu_system(Z, {Z.from_int(5)}, free_module(Z, 1), 3, false);
  auto ds = degree_system(zs, 0);
  for (int i = 0; i < 2; ++i) {
    CHECK(invariants_of(ds.H[i]) == std::vector<BigInt>{BigInt(ipow(5, i + 1))});
    CHECK(map_kind(Z.dom, ds.H[i + 1].presentation(), ds.H[i].presentation(), ds.t[i]) == "surjective");
  }
}

TEST_CASE("limits") {
  Fixture z12(RingSpec::integers_mod(12));
  SUBCASE("constant system") {
    DirectedSystem<ModularDomain> s;
    s.orientation = Orientation::Inverse;
    auto k = koszul_chain(z12.R, {z12.el("2")}, free_module(z12.R, 1), {1});
    for (int i = 0; i < 4; ++i) s.stages.push_back(k);
    for (int i = 0; i < 3; ++i) s.transitions.push_back(identity_map(k));
    auto l = limits(s);
    CHECK(l.lim.at(0).stabilized());
    CHECK(l.lim.at(0).stage == 1);
    CHECK(l.lim.at(0).value.render() == "Z/2");
    CHECK(l.lim1.at(0).value.is_zero());
    CHECK(l.lim1.at(1).value.is_zero());
  }
  SUBCASE("p-adic integers stay a pro-object") {
    Ring zr = Ring::make(RingSpec::integers());
    auto Z = make_view(zr, IntegerDomain{});
    auto l = limits(xu_system(Z, {Z.from_int(3)}, free_module(Z, 1), 4, false));
    const auto& e = l.lim.at(0);
    CHECK_FALSE(e.stabilized());
    REQUIRE(e.stages.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(e.stages[i].invariants == std::vector<BigInt>{BigInt(ipow(3, i + 1))});
    for (const auto& t : e.transitions) CHECK(t == "surjective");
    CHECK(l.lim.at(1).stabilized());
    CHECK(l.lim.at(1).value.is_zero());
  }
  SUBCASE("direct system of cochain cohomology") {
    // multiplication by 2 on Z/4 needs lag 2 and two confirmations: five stages
    auto l = limits(power_system(z12.R, {z12.el("2")}, free_module(z12.R, 1), 5, true));
    CHECK(l.lim.at(-1).stabilized());
    CHECK(l.lim.at(-1).value.is_zero());
    CHECK(l.lim.at(0).stabilized());
    CHECK(l.lim.at(0).value.render() == "Z/4");
    CHECK(l.lim.at(-1).lag == 2);
    auto lu = limits(xu_system(z12.R, {z12.el("2")}, free_module(z12.R, 1), 5, true));
    CHECK(lu.lim.at(-1).stabilized());
    CHECK(lu.lim.at(-1).value.is_zero());
    CHECK(lu.lim.at(0).stabilized());
    CHECK(lu.lim.at(0).value == l.lim.at(0).value);
  }
  SUBCASE("completion of Z/12 at 2") {
    auto l = limits(completion_system(z12.R, {z12.el("2")}, free_module(z12.R, 1), 4));
    CHECK(l.lim.at(0).stabilized());
    CHECK(l.lim.at(0).value.render() == "Z/4");
  }
}

TEST_CASE("window pairing with power series") {
  Fixture z4(RingSpec::integers_mod(4));
  const auto& dom = z4.R.dom;
  auto m = free_module(z4.R, 1);
  auto d1 = dual0_pairing(z4.R, m, 1, 1);
  CHECK(is_isomorphism(dom, d1.hom.module(), d1.trunc, d1.phi));

  auto d = dual0_pairing(z4.R, m, 1, 2);
  REQUIRE(d.hom.module().gens == 2);
  CHECK(is_isomorphism(dom, d.hom.module(), d.trunc, d.phi));
  // every element: Phi(f o U) = U Phi(f)
  for (long long i = 0; i < 16; ++i) {
    auto v = nth_vector(i, 2, 4);
    MM row(1, 2);
    row << v[0], v[1];
    MM lhs = mul(dom, mul(dom, row, d.hom_u[0]), d.phi);
    MM rhs = mul(dom, mul(dom, row, d.phi), module_op(d.trunc, "U1"));
    CHECK(contained(dom, d.trunc, sub(dom, lhs, rhs)));
  }

  // naturality along M -> M' given by 2 : Z/4 -> Z/4
  Mod q = quotient_of_free(z4.R, 1, {{z4.el("2")}});
  auto dq = dual0_pairing(z4.R, q, 2, 2);
  auto dm = dual0_pairing(z4.R, m, 2, 2);
  MM h(1, 1);
  h << 2;
  REQUIRE(is_module_map(dom, q, m, h));
  MM along = dq.hom.sq.induced_to(dm.hom.sq, postcompose_ambient(dom, h, dq.window.gens));
  MM lhs = mul(dom, along, dm.phi);
  MM rhs = mul(dom, dq.phi, kron(dom, identity(dom, mono_count(2, 2)), h));
  CHECK(contained(dom, dm.trunc, sub(dom, lhs, rhs)));
}

TEST_CASE("duality maps are termwise isomorphisms of complexes") {
  Fixture z12(RingSpec::integers_mod(12));
  Seq<ModularDomain> x1{z12.el("2")};
  Seq<ModularDomain> x2{z12.el("2"), z12.el("3")};
  Mod X = quotient_of_free(z12.R, 1, {{z12.el("6")}});
  Mod Y = quotient_of_free(z12.R, 1, {{z12.el("4")}});
  for (const auto& x : {x1, x2})
    for (int n = 1; n <= 2; ++n) {
      auto f1 = dual1_map(z12.R, x, X, n);
      CHECK(is_chain_map(f1));
      CHECK(is_termwise_iso(f1));
      auto f2 = dual2_map(z12.R, x, X, Y, n);
      CHECK(is_chain_map(f2.map));
      CHECK(is_termwise_iso(f2.map));
      auto f3 = dual3_map(z12.R, x, X, Y, n);
      CHECK(is_chain_map(f3.map));
      CHECK(is_termwise_iso(f3.map));
      auto f6 = dual6_maps(z12.R, x, X, Y, n);
      CHECK(is_chain_map(f6.first));
      CHECK(is_termwise_iso(f6.first));
      CHECK(is_chain_map(f6.second));
      CHECK(is_termwise_iso(f6.second));
      auto both = compose(f6.first, f6.second);
      for (int p = both.src.lo; p <= both.src.hi; ++p)
        CHECK(contained(z12.R.dom, f2.target.term(p), sub(z12.R.dom, both.at(p), f2.map.at(p))));
      auto t = window_tensor_map(z12.R, x, X, n);
      CHECK(is_chain_map(t));
      CHECK(is_termwise_iso(t));
    }
}

TEST_CASE("finite telescope and microscope") {
  Fixture z8(RingSpec::integers_mod(8));
  auto m = free_module(z8.R, 1);
  Seq<ModularDomain> x{z8.el("2")};
  auto dir = power_system(z8.R, x, m, 3, true);
  auto one = tel_mic_trunc(dir, 1, true);
  CHECK(quasi_iso_check(one.comparison).quasi_iso);
  auto tel = tel_mic_trunc(dir, 3, true);
  CHECK(quasi_iso_check(tel.comparison).quasi_iso);
  for (int p = -1; p <= 0; ++p)
    CHECK(homology_order(tel.complex, p) == homology_order(koszul_cochain(z8.R, x, m, {3}), p));

  auto inv = power_system(z8.R, x, m, 3, false);
  auto mic = tel_mic_trunc(inv, 3, false);
  CHECK(quasi_iso_check(mic.comparison).quasi_iso);
  CHECK_THROWS_AS(tel_mic_trunc(inv, 3, true), Error);
  CHECK_THROWS_AS(tel_mic_trunc(dir, 4, true), Error);
}
