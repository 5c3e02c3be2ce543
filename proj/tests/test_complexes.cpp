#include <doctest.h>

#include "kc/complexes.hpp"

#include <random>
#include <set>

using namespace kc;
using MM = Mat<std::int64_t>;

namespace {

ModularDomain zmod(std::int64_t n) { return ModularDomain(n, is_prime(n)); }

MM m1(std::int64_t v) {
  MM a(1, 1);
  a << v;
  return a;
}

template <class D>
Module<D> freeB(const D& dom, Index g) {
  Module<D> m;
  m.gens = g;
  m.rel = zeros(dom, 0, g);
  m.free_rank = g;
  return m;
}

// Enumerate all vectors of (Z/N)^n.
template <class F>
void each_vector(std::int64_t N, Index n, F f) {
  std::vector<std::int64_t> v(n, 0);
  while (true) {
    f(v);
    Index i = 0;
    while (i < n && ++v[i] == N) v[i++] = 0;
    if (i == n) break;
  }
}

// |H_n| of a complex of free Z/N-modules by counting cycles and boundaries.
std::size_t brute_homology(const ChainComplex<ModularDomain>& x, int n) {
  const auto N = x.dom.N;
  const Index g = x.gens(n), g1 = x.gens(n - 1), g2 = x.gens(n + 1);
  std::size_t cycles = 0;
  MM d = x.d(n), e = x.d(n + 1);
  each_vector(N, g, [&](const std::vector<std::int64_t>& v) {
    bool zero = true;
    for (Index j = 0; j < g1 && zero; ++j) {
      std::int64_t s = 0;
      for (Index i = 0; i < g; ++i) s = (s + v[i] * d(i, j)) % N;
      zero = s == 0;
    }
    cycles += zero;
  });
  std::set<std::vector<std::int64_t>> bounds;
  each_vector(N, g2, [&](const std::vector<std::int64_t>& v) {
    std::vector<std::int64_t> w(g, 0);
    for (Index j = 0; j < g; ++j)
      for (Index i = 0; i < g2; ++i) w[j] = (w[j] + v[i] * e(i, j)) % N;
    bounds.insert(w);
  });
  return cycles / bounds.size();
}

MM random_mod(std::mt19937& rng, Index r, Index c, std::int64_t n) {
  std::uniform_int_distribution<std::int64_t> d(0, n - 1);
  MM m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

// Random complex of free modules: each differential is a random combination
// of the left kernel of the one below it, so d^2 = 0 by construction.
ChainComplex<ModularDomain> random_complex(std::mt19937& rng, const ModularDomain& dom, int len, Index max_rank) {
  std::vector<Module<ModularDomain>> terms;
  std::vector<MM> diffs;
  Index prev = 1 + rng() % max_rank;
  terms.push_back(freeB(dom, prev));
  MM below;
  for (int i = 1; i < len; ++i) {
    Index g = 1 + rng() % max_rank;
    MM d;
    if (i == 1) {
      d = random_mod(rng, g, prev, dom.N);
    } else {
      MM k = left_kernel(dom, below);
      d = k.rows() > 0 ? mul(dom, random_mod(rng, g, k.rows(), dom.N), k) : zeros(dom, g, prev);
    }
    terms.push_back(freeB(dom, g));
    diffs.push_back(d);
    below = d;
    prev = g;
  }
  return make_complex(dom, 0, terms, diffs);
}

std::size_t to_size(const BigInt& b) { return std::stoull(b.str()); }

// |image| of a map between presented modules.
BigInt image_order(const ModularDomain& dom, const Module<ModularDomain>& tgt, const MM& f) {
  return module_order(dom, image_subquotient(dom, tgt, f).presentation());
}
BigInt kernel_order(const ModularDomain& dom, const Module<ModularDomain>& src, const Module<ModularDomain>& tgt, const MM& f) {
  return module_order(dom, kernel_subquotient(dom, src, tgt, f).presentation());
}

}  // namespace

TEST_CASE("make_complex validates d^2 = 0") {
  IntegerDomain z;
  Mat<BigInt> two(1, 1);
  two << BigInt(2);
  CHECK_NOTHROW(make_complex(z, 0, {freeB(z, 1), freeB(z, 1)}, {two}));
  try {
    make_complex(z, 0, {freeB(z, 1), freeB(z, 1), freeB(z, 1)}, {two, two});
    FAIL("expected NotAComplex");
  } catch (const Error& e) {
    CHECK(e.code() == "NotAComplex");
  }
  auto z4 = zmod(4);
  CHECK_NOTHROW(make_complex(z4, 0, {freeB(z4, 1), freeB(z4, 1), freeB(z4, 1)}, {m1(2), m1(2)}));
}

TEST_CASE("shift translates degrees and homology") {
  std::mt19937 rng(3);
  auto dom = zmod(6);
  auto x = random_complex(rng, dom, 3, 2);
  auto y = shift(shift(x, 1), -1);
  CHECK(y.lo == x.lo);
  for (int n = x.lo; n <= x.hi; ++n) CHECK(y.d(n) == x.d(n));
  auto s = shift(x, 3);
  for (int n = x.lo; n <= x.hi; ++n) CHECK(homology_order(s, n + 3) == homology_order(x, n));
  auto zero = make_complex(dom, 0, {freeB(dom, 0)}, {});
  CHECK(is_exact(shift(zero, 5)));
}

TEST_CASE("cone and fibre examples") {
  IntegerDomain z;
  Mat<BigInt> two(1, 1);
  two << BigInt(2);
  auto r0 = make_complex(z, 0, {freeB(z, 1)}, {});
  auto f = make_map(r0, r0, {two});
  auto c = cone(f);
  CHECK(homology_classification(c, 0).render() == "Z/2");
  CHECK(homology_classification(c, 1).is_zero());
  auto fb = fibre(f);
  CHECK(fb.lo == c.lo - 1);
  CHECK(homology_classification(fb, 0).is_zero());
  CHECK(homology_classification(fb, -1).render() == "Z/2");

  std::mt19937 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto dom = zmod(2 + rng() % 10);
    auto x = random_complex(rng, dom, 3, 2);
    CHECK(is_exact(cone(identity_map(x))));
    CHECK(is_exact(fibre(identity_map(x))));
    // cone of the zero map splits as Y + X[1]
    auto y = random_complex(rng, dom, 3, 2);
    std::vector<MM> comp;
    for (int n = x.lo; n <= x.hi; ++n) comp.push_back(zeros(dom, x.gens(n), y.gens(n)));
    auto c0 = cone(make_map(x, y, comp));
    for (int n = c0.lo; n <= c0.hi; ++n)
      CHECK(homology_order(c0, n) == homology_order(y, n) * homology_order(x, n - 1));
  }
}

TEST_CASE("cone long exact sequence is exact") {
  std::mt19937 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto dom = zmod(2 + rng() % 11);
    auto x = random_complex(rng, dom, 3, 2);
    // a chain map X -> X given by multiplication by a scalar
    const std::int64_t s = rng() % dom.N;
    std::vector<MM> comp;
    for (int n = x.lo; n <= x.hi; ++n) comp.push_back(scale(dom, s, identity(dom, x.gens(n))));
    auto f = make_map(x, x, comp);
    REQUIRE(is_chain_map(f));
    auto c = cone(f);
    REQUIRE(!validate_complex(c));
    // ... -> H_n(Y) -> H_n(C) -> H_{n-1}(X) -> H_{n-1}(Y) -> ...
    for (int n = c.lo; n <= c.hi; ++n) {
      auto hy = homology(x, n), hc = homology(c, n), hx = homology(x, n - 1), hy1 = homology(x, n - 1);
      const Index a = x.gens(n - 1), b = x.gens(n);
      MM inj = hstack(dom, zeros(dom, b, a), identity(dom, b));
      MM proj = vstack(dom, identity(dom, a), zeros(dom, b, a));
      MM i_n = hy.induced_to(hc, inj);
      MM p_n = hc.induced_to(hx, proj);
      MM f_n = hx.induced_to(hy1, f.at(n - 1));
      const auto& Py = hy.presentation();
      const auto& Pc = hc.presentation();
      const auto& Px = hx.presentation();
      const auto& Py1 = hy1.presentation();
      CHECK(image_order(dom, Pc, i_n) == kernel_order(dom, Pc, Px, p_n));
      CHECK(image_order(dom, Px, p_n) == kernel_order(dom, Px, Py1, f_n));
      (void)Py;
    }
  }
}

TEST_CASE("homology order agrees with brute force") {
  std::mt19937 rng(23);
  for (int t = 0; t < 150; ++t) {
    auto dom = zmod(2 + rng() % 15);
    auto x = random_complex(rng, dom, 4, 3);
    for (int n = x.lo; n <= x.hi; ++n) {
      const std::size_t brute = brute_homology(x, n);
      REQUIRE(to_size(homology_order(x, n)) == brute);
      auto cls = homology_classification(x, n);
      REQUIRE(to_size(*cls.cardinality) == brute);
    }
  }
}

TEST_CASE("Euler characteristic over fields") {
  std::mt19937 rng(29);
  for (int t = 0; t < 40; ++t) {
    auto dom = zmod(t % 2 ? 5 : 7);
    auto x = random_complex(rng, dom, 4, 3);
    long long chi_h = 0, chi_t = 0;
    for (int n = x.lo; n <= x.hi; ++n) {
      const int sgn = n % 2 ? -1 : 1;
      chi_h += sgn * homology_classification(x, n).free_rank;
      chi_t += sgn * x.gens(n);
    }
    CHECK(chi_h == chi_t);
  }
  RationalDomain q;
  Mat<BigRational> d1(2, 1), d2(1, 2);
  d1 << BigRational(1), BigRational(2);
  d2 << BigRational(2), BigRational(-1);
  auto x = make_complex(q, 0, {freeB(q, 1), freeB(q, 2), freeB(q, 1)}, {d1, d2});
  long long chi = 0;
  for (int n = 0; n <= 2; ++n) chi += (n % 2 ? -1 : 1) * homology_classification(x, n).free_rank;
  CHECK(chi == 0);
}

TEST_CASE("tensor and hom with the unit complex") {
  Ring ring = Ring::make(RingSpec::integers_mod(12));
  auto R = make_view(ring, zmod(12));
  std::mt19937 rng(31);
  auto x = random_complex(rng, R.dom, 3, 2);
  auto unit = make_complex(R.dom, 0, {free_module(R, 1)}, {});
  auto t = tensor(R, x, unit);
  auto h = hom_complex(R, unit, x);
  for (int n = x.lo; n <= x.hi; ++n) {
    CHECK(t.d(n) == x.d(n));
    CHECK(h.d(n) == x.d(n));
  }
  auto y = random_complex(rng, R.dom, 2, 2);
  auto xy = tensor(R, x, y);
  CHECK(!validate_complex(xy));
  for (int n = xy.lo; n <= xy.hi; ++n) {
    Index expect = 0;
    for (int i = x.lo; i <= x.hi; ++i) expect += x.gens(i) * y.gens(n - i);
    CHECK(xy.gens(n) == expect);
  }
  auto hxy = hom_complex(R, x, y);
  CHECK(!validate_complex(hxy));
  Index expect0 = 0;
  for (int i = x.lo; i <= x.hi; ++i) expect0 += x.gens(i) * y.gens(i);
  CHECK(hxy.gens(0) == expect0);
}

TEST_CASE("tensor over a finite algebra with a quotient factor") {
  Ring ring = Ring::make(RingSpec::truncated_polynomial(4, 2));
  ModularDomain dom(4);
  auto R = make_view(ring, dom);
  auto t = R.coeffs(ring.parse("[0,1]"));
  auto two = R.from_int(2);
  auto M = quotient_of_free(R, 1, {{t}});
  auto kx = make_complex(dom, 0, {free_module(R, 1), free_module(R, 1)}, {MM(R.action(two))});
  auto mx = make_complex(dom, 0, {M}, {});
  auto tx = tensor(R, kx, mx);
  CHECK(!validate_complex(tx));
  // K(2) (x) R/(t) has H_1 = H_0 = (Z/4)/2 twisted: both of order 2
  CHECK(homology_order(tx, 0) == BigInt(2));
  CHECK(homology_order(tx, 1) == BigInt(2));
  CHECK_THROWS(tensor(R, mx, mx));
}

TEST_CASE("quasi-isomorphism checks") {
  std::mt19937 rng(37);
  auto dom = zmod(8);
  auto x = random_complex(rng, dom, 3, 2);
  CHECK(quasi_iso_check(identity_map(x)).quasi_iso);
  // the zero map on a complex with homology is not a quasi-isomorphism
  auto k = make_complex(dom, 0, {freeB(dom, 1), freeB(dom, 1)}, {m1(2)});
  auto z = make_map(k, k, {zeros(dom, 1, 1), zeros(dom, 1, 1)});
  auto q = quasi_iso_check(z);
  CHECK(q.chain_map);
  CHECK(!q.quasi_iso);
  CHECK(q.failing_degree.has_value());
  // a non chain map is reported as such
  auto bad = make_map(k, k, {identity(dom, 1), zeros(dom, 1, 1)});
  CHECK(!quasi_iso_check(bad).chain_map);
}
