#include <doctest.h>

#include "kc/cech.hpp"

#include <numeric>

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

// Distinct elements of a presented module, one representative row each.
std::vector<MM> elements(const ModularDomain& dom, const Mod& m) {
  std::vector<MM> reps;
  long long total = 1;
  for (Index i = 0; i < m.gens; ++i) total *= dom.N;
  for (long long idx = 0; idx < total; ++idx) {
    MM v(1, m.gens);
    long long t = idx;
    for (Index i = 0; i < m.gens; ++i) {
      v(0, i) = t % dom.N;
      t /= dom.N;
    }
    bool seen = false;
    for (const auto& w : reps) seen = seen || rowspan_contains(dom, m.rel, sub(dom, v, w));
    if (!seen) reps.push_back(v);
  }
  return reps;
}

std::size_t find_rep(const ModularDomain& dom, const Mod& m, const std::vector<MM>& reps, const MM& v) {
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (rowspan_contains(dom, m.rel, sub(dom, v, reps[i]))) return i;
  return reps.size();
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t a) { return p[a] == a ? a : p[a] = find(p[a]); }
  void join(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

// Classes of pairs m / x^j (0 <= j <= J) in colim(M -x-> M -x-> ...):
// m / x^j ~ m' / x^j' when x^(t + j') m = x^(t + j) m' for t = |M|.
std::size_t colimit_classes(const ModularDomain& dom, const Mod& m, const MM& a, int J) {
  auto reps = elements(dom, m);
  const std::size_t n = reps.size();
  std::vector<std::vector<std::size_t>> pw(J + 1 + n + J);
  MM ap = identity(dom, m.gens);
  for (auto& row : pw) {
    for (const auto& v : reps) row.push_back(find_rep(dom, m, reps, mul(dom, v, ap)));
    ap = mul(dom, ap, a);
  }
  UnionFind uf(n * (J + 1));
  for (int j = 0; j <= J; ++j)
    for (int j2 = 0; j2 <= J; ++j2)
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w)
          if (pw[n + j2][u] == pw[n + j][w]) uf.join(j * n + u, j2 * n + w);
  std::size_t classes = 0;
  for (std::size_t i = 0; i < n * (J + 1); ++i) classes += uf.find(i) == i;
  return classes;
}

MM row(std::initializer_list<std::int64_t> v) {
  MM r(1, Index(v.size()));
  Index i = 0;
  for (auto s : v) r(0, i++) = s;
  return r;
}

}  // namespace

TEST_CASE("localization of Z/12 at 2") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  auto m = free_module(z12.R, 1);
  auto l = localize_finite(z12.R, m, z12.el("2"));
  CHECK(l.k == 2);
  CHECK(module_order(dom, l.module) == BigInt(3));
  MM one = row({1});
  MM image = mul(dom, mul(dom, one, l.iota), l.image.generators());
  CHECK(rowspan_contains(dom, m.rel, sub(dom, image, row({4}))));
  CHECK(rowspan_contains(dom, l.module.rel, sub(dom, mul(dom, l.x, l.xinv), identity(dom, l.module.gens))));
}

TEST_CASE("localization agrees with the colimit of multiplication") {
  for (long long N : {6, 8, 12, 18}) {
    Fixture f(RingSpec::integers_mod(N));
    const auto& dom = f.R.dom;
    std::vector<Mod> mods{free_module(f.R, 1), quotient_of_free(f.R, 1, {{f.el("4")}}), free_module(f.R, 2)};
    for (const auto& m : mods)
      for (long long xv = 0; xv < N; ++xv) {
        if (module_order(dom, m) > BigInt(400)) continue;
        auto x = f.R.from_int(xv);
        auto l = localize_finite(f.R, m, x);
        MM a = module_action(f.R, m, x);
        CHECK(module_order(dom, l.module) == BigInt(colimit_classes(dom, m, a, 2)));
        // iota commutes with x and lands in T
        CHECK(rowspan_contains(dom, l.module.rel, sub(dom, mul(dom, a, l.iota), mul(dom, l.iota, l.x))));
        CHECK(is_module_map(dom, m, l.module, l.iota));
        CHECK(is_surjective(dom, l.module, l.iota));
      }
  }
}

TEST_CASE("localization at units and nilpotents") {
  Fixture z8(RingSpec::integers_mod(8));
  const auto& dom = z8.R.dom;
  auto m = free_module(z8.R, 1);
  auto u = localize_finite(z8.R, m, z8.el("3"));
  CHECK(u.k == 0);
  CHECK(is_isomorphism(dom, m, u.module, u.iota));
  auto z = localize_finite(z8.R, m, z8.el("2"));
  CHECK(module_is_zero(dom, z.module));

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  CHECK_THROWS_AS(localize_finite(Z, free_module(Z, 1), Z.from_int(2)), Error);
}

TEST_CASE("torsion submodule") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  auto m = free_module(z12.R, 1);
  auto g = torsion_submodule(z12.R, m, {z12.el("2")});
  CHECK(module_order(dom, g.presentation()) == BigInt(4));
  for (std::int64_t v = 0; v < 12; ++v) CHECK(g.contains(row({v})) == (v % 3 == 0));
  CHECK(module_is_zero(dom, torsion_submodule(z12.R, m, {z12.el("5")}).presentation()));
  Fixture z9(RingSpec::integers_mod(9));
  CHECK(module_order(z9.R.dom, torsion_submodule(z9.R, free_module(z9.R, 1), {z9.el("3")}).presentation()) == BigInt(9));

  // against {m : x_i^k m = 0 for every i}
  Seq<ModularDomain> x{z12.el("2"), z12.el("3")};
  Mod q = free_module(z12.R, 2);
  auto t = torsion_submodule(z12.R, q, x);
  for (std::int64_t a = 0; a < 12; ++a)
    for (std::int64_t b = 0; b < 12; ++b) {
      MM v = row({a, b});
      bool killed = true;
      for (const auto& xi : x) killed = killed && is_zero(dom, mul(dom, v, module_action(z12.R, q, z12.R.pow(xi, 4))));
      CHECK(t.contains(v) == killed);
    }
}

TEST_CASE("Cech complex and its cohomology") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  auto m = free_module(z12.R, 1);
  auto c = cech_complex_finite(z12.R, {z12.el("2")}, m);
  CHECK(c.lo == -1);
  CHECK(module_order(dom, c.term(0)) == BigInt(12));
  CHECK(module_order(dom, c.term(-1)) == BigInt(3));
  auto h = cech_cohomology_oracle(z12.R, {z12.el("2")}, m);
  CHECK(h[0].render() == "Z/4");
  CHECK(h[1].is_zero());

  auto h2 = cech_cohomology_oracle(z12.R, {z12.el("2"), z12.el("3")}, m);
  for (const auto& hp : h2) CHECK(hp.is_zero());

  auto hu = cech_cohomology_oracle(z12.R, {z12.el("5"), z12.el("7")}, m);
  for (const auto& hp : hu) CHECK(hp.is_zero());

  Fixture z27(RingSpec::integers_mod(27));
  auto hp = cech_cohomology_oracle(z27.R, {z27.el("3")}, free_module(z27.R, 1));
  CHECK(hp[0].render() == "Z/27");
  CHECK(hp[1].is_zero());

  // Gamma is H^0
  for (long long N : {8, 12, 18, 20}) {
    Fixture f(RingSpec::integers_mod(N));
    for (long long a = 1; a < N; a += 3)
      for (long long b = 2; b < N; b += 5) {
        Seq<ModularDomain> x{f.R.from_int(a), f.R.from_int(b)};
        auto mm = free_module(f.R, 1);
        auto cx = cech_complex_finite(f.R, x, mm);
        CHECK(cech_cohomology_oracle(f.R, x, mm)[0] == classify_module(f.R.dom, torsion_submodule(f.R, mm, x).presentation()));
        CHECK(validate_complex(cx) == std::nullopt);
      }
  }
}

TEST_CASE("size guard") {
  Fixture z12(RingSpec::integers_mod(12));
  auto x = z12.el("5");
  CHECK_THROWS_AS(cech_complex_finite(z12.R, {x, x, x, x}, free_module(z12.R, 1)), Error);
  CHECK_THROWS_AS(cech_complex_finite(z12.R, {x}, free_module(z12.R, 4)), Error);
  setenv("KOSZUL_MAX_TERM_SIZE", "100000", 1);
  CHECK_NOTHROW(cech_complex_finite(z12.R, {x}, free_module(z12.R, 4)));
  unsetenv("KOSZUL_MAX_TERM_SIZE");
}

TEST_CASE("local cohomology through the cochain avatar") {
  Fixture z12(RingSpec::integers_mod(12));
  auto m = free_module(z12.R, 1);
  auto l = local_cohomology_koszul(z12.R, {z12.el("2")}, m, 6);
  REQUIRE(l.lim.at(0).stabilized());
  REQUIRE(l.lim.at(-1).stabilized());
  CHECK(l.lim.at(0).value.render() == "Z/4");
  CHECK(l.lim.at(-1).value.is_zero());

  Seq<ModularDomain> x2{z12.el("2"), z12.el("3")};
  auto l2 = local_cohomology_koszul(z12.R, x2, m, 5);
  auto o2 = cech_cohomology_oracle(z12.R, x2, m);
  for (int p = 0; p <= 2; ++p) {
    REQUIRE(l2.lim.at(-p).stabilized());
    CHECK(l2.lim.at(-p).value == o2[p]);
  }

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  auto lz = local_cohomology_koszul(Z, {Z.from_int(2)}, free_module(Z, 1), 4);
  CHECK(lz.lim.at(0).stabilized());
  CHECK(lz.lim.at(0).value.is_zero());
  CHECK_FALSE(lz.lim.at(-1).stabilized());
}

TEST_CASE("derived completion and pro-regularity") {
  Fixture z12(RingSpec::integers_mod(12));
  auto m = free_module(z12.R, 1);
  auto v = proregular_check(z12.R, {z12.el("2")}, m, 3, 6);
  REQUIRE(v.verified());
  CHECK(v.indices[0].witness == std::vector<int>{3, 4, 5});
  auto tight = proregular_check(z12.R, {z12.el("2")}, m, 3, 4);
  CHECK_FALSE(tight.verified());
  CHECK(tight.label() == "Inconclusive");

  auto d = derived_completion_koszul(z12.R, {z12.el("2")}, m, 6, 8);
  CHECK(d.identified);
  REQUIRE(d.limits.lim.at(0).stabilized());
  CHECK(d.limits.lim.at(0).value.render() == "Z/4");
  CHECK(d.limits.lim.at(1).value.is_zero());

  auto v2 = proregular_check(z12.R, {z12.el("2"), z12.el("6")}, m, 3, 8);
  CHECK(v2.indices.size() == 2);

  Fixture z3(RingSpec::integers_mod(3));
  auto d3 = derived_completion_koszul(z3.R, {z3.el("2")}, free_module(z3.R, 1), 4, 4);
  // the unit ideal: M / 2^n M = 0, so the completion vanishes
  REQUIRE(d3.limits.lim.at(0).stabilized());
  CHECK(d3.limits.lim.at(0).value.is_zero());

  Ring zr = Ring::make(RingSpec::integers());
  auto Z = make_view(zr, IntegerDomain{});
  auto dz = derived_completion_koszul(Z, {Z.from_int(3)}, free_module(Z, 1), 4, 4);
  CHECK(dz.identified);
  CHECK_FALSE(dz.limits.lim.at(0).stabilized());
  CHECK(proregular_check(Z, {Z.from_int(3)}, free_module(Z, 1), 3, 3).indices[0].witness == std::vector<int>{1, 2, 3});
}

TEST_CASE("Hom from a localization") {
  Fixture z12(RingSpec::integers_mod(12));
  const auto& dom = z12.R.dom;
  auto m = free_module(z12.R, 1);
  auto h = hom_from_localization(z12.R, m, z12.el("2"));
  CHECK(module_order(dom, h.module) == BigInt(3));
  CHECK(is_injective(dom, h.module, m, h.eval));
  auto u = hom_from_localization(z12.R, m, z12.el("5"));
  CHECK(is_isomorphism(dom, u.module, m, u.eval));
  Fixture z8(RingSpec::integers_mod(8));
  CHECK(module_is_zero(z8.R.dom, hom_from_localization(z8.R, free_module(z8.R, 1), z8.el("2")).module));
}
