#include <doctest.h>

#include "kc/linalg.hpp"
#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <set>

using namespace kc;
using namespace kc::oracle;

TEST_CASE("smith normal form over Z: worked example") {
  IntegerDomain z;
  Mat<BigInt> a(2, 2);
  a << BigInt(2), BigInt(4), BigInt(6), BigInt(8);
  auto s = smith_normal_form(z, a);
  CHECK(s.diagonal[0] == BigInt(2));
  CHECK(s.diagonal[1] == BigInt(4));
  CHECK(equal(z, mul(z, mul(z, s.U, a), s.V), s.S));
}

TEST_CASE("smith normal form: identity and zero") {
  IntegerDomain z;
  auto id = identity(z, 3);
  CHECK(equal(z, smith_normal_form(z, id).S, id));
  auto zero = zeros(z, 2, 3);
  CHECK(is_zero(z, smith_normal_form(z, zero).S));
  ModularDomain six(6);
  CHECK_THROWS_AS(smith_normal_form(six, MM::Identity(2, 2)), Error);
}

TEST_CASE("smith normal form over Z agrees with gcd of minors") {
  IntegerDomain z;
  std::mt19937 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const Index r = 1 + rng() % 3, c = 1 + rng() % 3;
    auto a = random_int(rng, r, c, -4, 4);
    auto s = smith_normal_form(z, a);
    REQUIRE(equal(z, mul(z, mul(z, s.U, a), s.V), s.S));
    for (Index i = 0; i < s.S.rows(); ++i)
      for (Index j = 0; j < s.S.cols(); ++j)
        if (i != j) REQUIRE(s.S(i, j).is_zero());
    BigInt prod = 1;
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
      if (i + 1 < s.diagonal.size()) REQUIRE(z.divides(s.diagonal[i], s.diagonal[i + 1]));
      prod *= abs(s.diagonal[i]);
      REQUIRE(prod == minor_gcd(a, Index(i) + 1));
    }
    REQUIRE(abs(det(s.U)) == BigInt(1));
    REQUIRE(abs(det(s.V)) == BigInt(1));
  }
}

TEST_CASE("smith normal form over a prime field has 0/1 pivots") {
  ModularDomain f5(5, true);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_mod(rng, 3, 4, 5);
    auto s = smith_normal_form(f5, a);
    REQUIRE(equal(f5, mul(f5, mul(f5, s.U, a), s.V), s.S));
    for (auto d : s.diagonal) REQUIRE((d == 0 || d == 1));
  }
}

TEST_CASE("howell form: worked examples") {
  ModularDomain z4(4), z6(6);
  MM a(1, 2);
  a << 2, 1;
  MM h = howell_form(z4, a);
  MM expect(2, 2);
  expect << 2, 1, 0, 2;
  CHECK(h == expect);
  MM b(1, 1);
  b << 2;
  CHECK(howell_form(z4, b) == b);
  CHECK(howell_form(z6, MM(MM::Identity(3, 3))) == MM::Identity(3, 3));
}

TEST_CASE("howell form matches brute-force spans and is canonical") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 600; ++trial) {
    const std::int64_t n = 2 + rng() % 15;
    ModularDomain dom(n);
    const Index r = 1 + rng() % 3, c = 1 + rng() % 3;
    MM a = random_mod(rng, r, c, n);
    MM h = howell_form(dom, a);
    auto span = brute_span(dom, a);
    REQUIRE(brute_span(dom, h) == span);
    REQUIRE(rowspan_order(dom, a) == BigInt(static_cast<long long>(span.size())));
    // closure: vectors of the span with leading zeros are spanned by the lower rows
    for (Index k = 0; k <= c; ++k) {
      std::set<std::vector<std::int64_t>> tail;
      for (const auto& v : span) {
        bool lead_zero = true;
        for (Index j = 0; j < k; ++j) lead_zero = lead_zero && v[j] == 0;
        if (lead_zero) tail.insert(v);
      }
      std::vector<Index> rows;
      for (Index i = 0; i < h.rows(); ++i) {
        Index p = 0;
        while (p < c && h(i, p) == 0) ++p;
        if (p >= k) rows.push_back(i);
      }
      MM sub(rows.size(), c);
      for (std::size_t i = 0; i < rows.size(); ++i) sub.row(i) = h.row(rows[i]);
      REQUIRE(brute_span(dom, sub) == tail);
    }
    // same span, different generators -> same form
    MM mix = random_mod(rng, 2, r, n);
    MM b = vstack(dom, mul(dom, mix, a), a);
    REQUIRE(howell_form(dom, b) == h);
  }
}

TEST_CASE("left kernel and solve over Z/N agree with enumeration") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t n = 2 + rng() % 15;
    ModularDomain dom(n);
    const Index r = 1 + rng() % 3, c = 1 + rng() % 3;
    MM a = random_mod(rng, r, c, n);
    MM k = left_kernel(dom, a);
    REQUIRE(is_zero(dom, mul(dom, k, a)));
    // count kernel by enumeration
    std::size_t count = 0;
    std::vector<std::int64_t> x(r, 0);
    while (true) {
      bool zero = true;
      for (Index j = 0; j < c; ++j) {
        std::int64_t s = 0;
        for (Index i = 0; i < r; ++i) s = (s + x[i] * a(i, j)) % n;
        zero = zero && s == 0;
      }
      count += zero;
      Index i = 0;
      while (i < r && ++x[i] == n) x[i++] = 0;
      if (i == r) break;
    }
    REQUIRE(rowspan_order(dom, k) == BigInt(static_cast<long long>(count)));
    // |ker| * |im| = |domain|
    REQUIRE(rowspan_order(dom, k) * rowspan_order(dom, a) == BigInt(static_cast<long long>(std::pow(n, r))));
    auto span = brute_span(dom, a);
    MM b = random_mod(rng, 1, c, n);
    auto sol = solve_linear(dom, a, RowOf<ModularDomain>(b));
    std::vector<std::int64_t> bv(b.data(), b.data() + c);
    REQUIRE(sol.has_value() == (span.count(bv) == 1));
    if (sol) REQUIRE(mul(dom, MM(*sol), a) == b);
  }
}

TEST_CASE("kernel_image worked examples") {
  ModularDomain z4(4);
  MM a(1, 1);
  a << 2;
  auto [k, im] = kernel_image(z4, a);
  CHECK(brute_span(z4, k) == brute_span(z4, a));
  CHECK(brute_span(z4, im) == brute_span(z4, a));
  IntegerDomain z;
  Mat<BigInt> b(1, 2);
  b << BigInt(2), BigInt(4);
  auto [kz, imz] = kernel_image(z, b);
  REQUIRE(kz.rows() == 1);
  CHECK((kz(0, 0) * BigInt(2) + kz(0, 1) * BigInt(4)).is_zero());
  CHECK(abs(kz(0, 0)) == BigInt(2));
  CHECK(abs(kz(0, 1)) == BigInt(1));
  auto [ki, imi] = kernel_image(z4, MM(MM::Identity(2, 2)));
  CHECK(ki.rows() == 0);
  CHECK(imi == MM::Identity(2, 2));
}

TEST_CASE("solve_linear worked examples") {
  ModularDomain z4(4);
  MM a(1, 1);
  a << 2;
  RowOf<ModularDomain> b(1);
  b << 2;
  auto x = solve_linear(z4, a, b);
  REQUIRE(x);
  CHECK((*x)(0) * 2 % 4 == 2);
  b << 1;
  CHECK(!solve_linear(z4, a, b));
}

TEST_CASE("classify_module worked examples") {
  ModularDomain z4(4);
  MM r(1, 1);
  r << 2;
  auto c = classify_presentation(z4, 1, r);
  CHECK(c.render() == "Z/2");
  CHECK(*c.cardinality == BigInt(2));
  RationalDomain q;
  CHECK(classify_presentation(q, 2, zeros(q, 0, 2)).free_rank == 2);
  IntegerDomain z;
  Mat<BigInt> rz(2, 1);
  rz << BigInt(6), BigInt(4);
  CHECK(classify_presentation(z, 1, rz).render() == "Z/2");
}

TEST_CASE("classification over Z/N matches the integer lift and enumeration") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t n = 2 + rng() % 15;
    ModularDomain dom(n);
    const Index g = 1 + rng() % 3, r = rng() % 4;
    MM rel = random_mod(rng, r, g, n);
    auto c = classify_presentation(dom, g, rel);
    auto lifted = classify_via_integer_lift(dom, g, rel);
    REQUIRE(c == lifted);
    BigInt total = 1;
    for (Index i = 0; i < g; ++i) total *= BigInt(n);
    auto span = brute_span(dom, rel.rows() ? rel : MM::Zero(1, g));
    REQUIRE(*c.cardinality * BigInt(static_cast<long long>(span.size())) == total);
    for (std::size_t i = 0; i + 1 < c.invariants.size(); ++i) REQUIRE(IntegerDomain{}.divides(c.invariants[i], c.invariants[i + 1]));
  }
}
