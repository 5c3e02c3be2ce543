#include <doctest.h>

#include "kc/ring_view.hpp"

#include <random>

using namespace kc;

namespace {

std::vector<Ring> sample_rings() {
  return {Ring::make(RingSpec::integers_mod(12)), Ring::make(RingSpec::integers_mod(8)),
          Ring::make(RingSpec::prime_field(7)), Ring::make(RingSpec::truncated_polynomial(4, 2)),
          Ring::make(RingSpec::truncated_polynomial(3, 3)), Ring::make(RingSpec::integers()),
          Ring::make(RingSpec::rationals())};
}

RingElem random_elem(const Ring& r, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-50, 50);
  if (r.kind() == RingKind::FiniteAlgebra) {
    std::string s = "[";
    for (int i = 0; i < r.rank(); ++i) s += (i ? "," : "") + std::to_string(d(rng));
    return r.parse(s + "]");
  }
  if (r.kind() == RingKind::Rationals) {
    int den = d(rng);
    if (den == 0) den = 1;
    return r.parse(std::to_string(d(rng)) + "/" + std::to_string(den));
  }
  return r.from_int(d(rng));
}

}  // namespace

TEST_CASE("ring construction") {
  CHECK(*Ring::make(RingSpec::integers_mod(12)).cardinality() == BigInt(12));
  CHECK_THROWS_WITH_AS(Ring::make(RingSpec::prime_field(4)), doctest::Contains("NonPrime"), Error);
  CHECK_THROWS_AS(Ring::make(RingSpec::integers_mod(1)), Error);
  auto a = Ring::make(RingSpec::truncated_polynomial(4, 2));
  CHECK(*a.cardinality() == BigInt(16));
}

TEST_CASE("finite algebra axioms are enforced") {
  // e1*e1 = e0 but e0 is not a unit for e1
  auto bad_unit = RingSpec::finite_algebra(4, 2, {{{0, 0}, {0, 1}}, {{0, 1}, {1, 0}}}, 0);
  CHECK_THROWS_WITH_AS(Ring::make(bad_unit), doctest::Contains("NoUnit"), Error);
  auto noncomm = RingSpec::finite_algebra(4, 2, {{{1, 0}, {0, 1}}, {{0, 1}, {1, 1}}}, 0);
  noncomm.mul_table[1][0] = {0, 1};
  noncomm.mul_table[0][1] = {0, 1};
  noncomm.mul_table[1][1] = {1, 1};
  CHECK_NOTHROW(Ring::make(noncomm));
  auto asym = noncomm;
  asym.mul_table[0][1] = {1, 1};
  CHECK_THROWS_WITH_AS(Ring::make(asym), doctest::Contains("NonCommutative"), Error);
  // commutative, unital, not associative: e1*e1 = e2, e1*e2 = 0, e2*e2 = e1 over basis {1, e1, e2}
  std::vector<std::vector<std::vector<long long>>> t(3, std::vector<std::vector<long long>>(3, std::vector<long long>(3, 0)));
  for (int i = 0; i < 3; ++i) t[0][i][i] = t[i][0][i] = 1;
  t[1][1] = {0, 0, 1};
  t[2][2] = {0, 1, 0};
  CHECK_THROWS_WITH_AS(Ring::make(RingSpec::finite_algebra(5, 3, t, 0)), doctest::Contains("NonAssociative"), Error);
}

TEST_CASE("parse_element examples") {
  auto z12 = Ring::make(RingSpec::integers_mod(12));
  CHECK(z12.render(z12.parse("14")) == "2");
  CHECK(z12.render(z12.parse("-1")) == "11");
  CHECK(z12.render(z12.parse("1/5")) == "5");
  CHECK_THROWS_WITH_AS(z12.parse("1/2"), doctest::Contains("NotInvertibleDenominator"), Error);
  CHECK_THROWS_WITH_AS(z12.parse("x"), doctest::Contains("ParseError"), Error);
  auto q = Ring::make(RingSpec::rationals());
  CHECK(q.render(q.parse("4/6")) == "2/3");
  auto a = Ring::make(RingSpec::truncated_polynomial(4, 2));
  CHECK(a.render(a.parse("[1,2]")) == "[1,2]");
  CHECK(a.render(a.parse("5")) == "[1,0]");
  CHECK_THROWS_AS(a.parse("[1,2,3]"), Error);
  auto z = Ring::make(RingSpec::integers());
  CHECK(z.render(z.parse("6/3")) == "2");
  CHECK_THROWS_AS(z.parse("1/2"), Error);
}

TEST_CASE("is_unit examples") {
  auto z12 = Ring::make(RingSpec::integers_mod(12));
  CHECK(z12.is_unit(z12.from_int(5)));
  CHECK(!z12.is_unit(z12.from_int(4)));
  auto z = Ring::make(RingSpec::integers());
  CHECK(!z.is_unit(z.from_int(2)));
  CHECK(z.is_unit(z.from_int(-1)));
  auto a = Ring::make(RingSpec::truncated_polynomial(4, 2));
  CHECK(a.is_unit(a.parse("[1,2]")));
  CHECK(!a.is_unit(a.parse("[2,1]")));
}

TEST_CASE("flatten_action examples") {
  auto a = Ring::make(RingSpec::truncated_polynomial(4, 2));
  using V = std::vector<std::vector<long long>>;
  CHECK(a.flatten_action(a.parse("[0,1]")) == V{{0, 0}, {1, 0}});
  CHECK(a.flatten_action(a.one()) == V{{1, 0}, {0, 1}});
  CHECK(a.flatten_action(a.zero()) == V{{0, 0}, {0, 0}});
  auto z12 = Ring::make(RingSpec::integers_mod(12));
  CHECK_THROWS_WITH_AS(z12.flatten_action(z12.one()), doctest::Contains("WrongRingKind"), Error);
}

TEST_CASE("flatten_action is multiplicative") {
  auto a = Ring::make(RingSpec::truncated_polynomial(3, 3));
  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    auto x = random_elem(a, rng), y = random_elem(a, rng);
    auto fx = a.flatten_action(x), fy = a.flatten_action(y), fxy = a.flatten_action(a.mul(x, y));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        long long s = 0;
        for (int l = 0; l < 3; ++l) s += fx[i][l] * fy[l][j];
        REQUIRE(s % 3 == fxy[i][j]);
      }
  }
}

TEST_CASE("ring axioms on 1000 sampled triples") {
  std::mt19937 rng(42);
  for (const auto& r : sample_rings()) {
    for (int t = 0; t < 1000; ++t) {
      auto a = random_elem(r, rng), b = random_elem(r, rng), c = random_elem(r, rng);
      REQUIRE(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)));
      REQUIRE(r.mul(a, b) == r.mul(b, a));
      REQUIRE(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)));
      REQUIRE(r.add(a, r.neg(a)) == r.zero());
      REQUIRE(r.mul(a, r.one()) == a);
    }
  }
}

TEST_CASE("parse is inverse to render") {
  std::mt19937 rng(9);
  for (const auto& r : sample_rings())
    for (int t = 0; t < 200; ++t) {
      auto a = random_elem(r, rng);
      REQUIRE(r.parse(r.render(a)) == a);
    }
}

TEST_CASE("is_unit agrees with exhaustive inverse search") {
  std::vector<Ring> rings;
  for (long long n : {2, 4, 6, 8, 9, 12, 16, 30, 64, 97, 128, 210, 256}) rings.push_back(Ring::make(RingSpec::integers_mod(n)));
  rings.push_back(Ring::make(RingSpec::prime_field(13)));
  rings.push_back(Ring::make(RingSpec::truncated_polynomial(4, 2)));
  rings.push_back(Ring::make(RingSpec::truncated_polynomial(2, 3)));
  rings.push_back(Ring::make(RingSpec::truncated_polynomial(6, 2)));
  rings.push_back(Ring::make(RingSpec::truncated_polynomial(4, 4)));
  for (const auto& r : rings) {
    auto elems = r.elements();
    REQUIRE(elems.size() <= 256);
    for (const auto& a : elems) {
      bool found = false;
      for (const auto& b : elems)
        if (r.mul(a, b) == r.one()) {
          found = true;
          break;
        }
      REQUIRE(r.is_unit(a) == found);
    }
  }
}

TEST_CASE("ring views agree with runtime arithmetic") {
  std::mt19937 rng(2);
  for (const auto& r : sample_rings()) {
    with_domain(r, [&](const auto& R) {
      for (int t = 0; t < 100; ++t) {
        auto a = random_elem(r, rng), b = random_elem(r, rng);
        REQUIRE(R.elem(R.mul(R.coeffs(a), R.coeffs(b))) == r.mul(a, b));
        REQUIRE(R.is_unit(R.coeffs(a)) == r.is_unit(a));
      }
      return 0;
    });
  }
}
