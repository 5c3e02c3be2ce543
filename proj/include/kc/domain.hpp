#pragma once

#include "kc/scalar.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace kc {

// Bezout data for a pair (a, b): s*a + t*b = g and u*a + v*b = 0 with
// s*v - t*u a unit, so the 2x2 row operation is invertible.
template <class S>
struct Gcdex {
  S g, s, t, u, v;
};

inline std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

// Z/N with residues kept in [0, N). Covers prime fields and the base of a
// finite algebra. N < 2^31 so products fit in 63 bits.
struct ModularDomain {
  using Scalar = std::int64_t;
  static constexpr bool is_finite = true;
  static constexpr bool is_field_type = false;

  std::int64_t N = 2;
  bool prime = false;

  explicit ModularDomain(std::int64_t n = 2, bool is_prime = false) : N(n), prime(is_prime) {
    if (n < 2 || n >= (std::int64_t(1) << 31)) throw std::invalid_argument("modulus out of range");
  }

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(long long v) const {
    v %= N;
    return v < 0 ? v + N : v;
  }
  Scalar from_big(const BigInt& v) const {
    BigInt q, r;
    divmod_floor(v, BigInt(N), q, r);
    return static_cast<Scalar>(r.raw());
  }
  bool is_zero(Scalar a) const { return a == 0; }
  bool is_one(Scalar a) const { return a == 1; }
  Scalar add(Scalar a, Scalar b) const {
    Scalar c = a + b;
    return c >= N ? c - N : c;
  }
  Scalar sub(Scalar a, Scalar b) const {
    Scalar c = a - b;
    return c < 0 ? c + N : c;
  }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : N - a; }
  Scalar mul(Scalar a, Scalar b) const { return (a * b) % N; }
  // s*x + t*y
  Scalar lin(Scalar s, Scalar x, Scalar t, Scalar y) const { return (s * x + t * y) % N; }

  Gcdex<Scalar> gcdex(Scalar a, Scalar b) const {
    if (a == 0) return {b, 0, 1, 1, 0};
    if (divides(a, b)) return {a, 1, 0, neg(exact_div(b, a)), 1};
    std::int64_t s, t;
    std::int64_t g = egcd(a, b, s, t);
    return {from_int(g), from_int(s), from_int(t), from_int(-(b / g)), from_int(a / g)};
  }

  std::int64_t gcd_n(Scalar a) const { return std::gcd(a, N); }

  bool is_unit(Scalar a) const { return std::gcd(a, N) == 1; }

  Scalar inverse(Scalar a) const {
    std::int64_t s, t;
    if (egcd(a, N, s, t) != 1) throw std::domain_error("not a unit");
    return from_int(s);
  }

  // Unit u with u*a equal to gcd(a, N), the canonical associate.
  Scalar unit_normalizer(Scalar a) const {
    if (a == 0) return 1;
    std::int64_t d = std::gcd(a, N);
    std::int64_t n1 = N / d, a1 = a / d;
    std::int64_t u0 = 0;
    if (n1 > 1) {
      std::int64_t s, t;
      egcd(a1 % n1, n1, s, t);
      u0 = ((s % n1) + n1) % n1;
    }
    for (std::int64_t u = u0; u < N + n1; u += n1) {
      if (u > 0 && std::gcd(u, N) == 1) return u % N;
    }
    throw std::logic_error("unit_normalizer failed");
  }

  // Pivots are normalized to divisors of N; remainders land in [0, p).
  Scalar quo(Scalar a, Scalar p) const { return a / p; }
  Scalar annihilator(Scalar p) const { return p <= 1 ? 0 : (N / p) % N; }
  bool divides(Scalar p, Scalar a) const { return a % std::gcd(p, N) == 0; }
  // p divides a, returns some q with q*p = a
  Scalar exact_div(Scalar a, Scalar p) const {
    std::int64_t d = std::gcd(p, N);
    Scalar u = unit_normalizer(p);  // u*p = d
    return mul(a / d, u);
  }
  std::int64_t pivot_measure(Scalar a) const { return std::gcd(a, N); }

  std::string render(Scalar a) const { return std::to_string(a); }
  BigInt to_bigint(Scalar a) const { return BigInt(static_cast<long long>(a)); }
};

struct IntegerDomain {
  using Scalar = BigInt;
  static constexpr bool is_finite = false;
  static constexpr bool is_field_type = false;

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(long long v) const { return v; }
  Scalar from_big(const BigInt& v) const { return v; }
  bool is_zero(const Scalar& a) const { return a.is_zero(); }
  bool is_one(const Scalar& a) const { return a == BigInt(1); }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar lin(const Scalar& s, const Scalar& x, const Scalar& t, const Scalar& y) const { return s * x + t * y; }

  Gcdex<Scalar> gcdex(const Scalar& a, const Scalar& b) const {
    if (a.is_zero()) return {b, 0, 1, 1, 0};
    if (divides(a, b)) return {a, 1, 0, -quo(b, a), 1};
    BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (!r1.is_zero()) {
      BigInt q, r;
      divmod_floor(r0, r1, q, r);
      BigInt tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
      tmp = s0 - q * s1;
      s0 = s1;
      s1 = tmp;
      tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
    }
    if (r0.sign() < 0) {
      r0 = -r0;
      s0 = -s0;
      t0 = -t0;
    }
    BigInt qa, qb, rem;
    divmod_floor(a, r0, qa, rem);
    divmod_floor(b, r0, qb, rem);
    return {r0, s0, t0, -qb, qa};
  }

  bool is_unit(const Scalar& a) const { return a == BigInt(1) || a == BigInt(-1); }
  Scalar inverse(const Scalar& a) const {
    if (!is_unit(a)) throw std::domain_error("not a unit");
    return a;
  }
  Scalar unit_normalizer(const Scalar& a) const { return a.sign() < 0 ? BigInt(-1) : BigInt(1); }
  Scalar quo(const Scalar& a, const Scalar& p) const {
    BigInt q, r;
    divmod_floor(a, p, q, r);
    return q;
  }
  Scalar annihilator(const Scalar&) const { return 0; }
  bool divides(const Scalar& p, const Scalar& a) const {
    if (p.is_zero()) return a.is_zero();
    BigInt q, r;
    divmod_floor(a, p, q, r);
    return r.is_zero();
  }
  Scalar exact_div(const Scalar& a, const Scalar& p) const { return quo(a, p); }
  BigInt pivot_measure(const Scalar& a) const { return kc::abs(a); }

  std::string render(const Scalar& a) const { return a.str(); }
  BigInt to_bigint(const Scalar& a) const { return a; }
};

struct RationalDomain {
  using Scalar = BigRational;
  static constexpr bool is_finite = false;
  static constexpr bool is_field_type = true;

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar from_int(long long v) const { return v; }
  Scalar from_big(const BigInt& v) const { return BigRational(v, BigInt(1)); }
  bool is_zero(const Scalar& a) const { return a.is_zero(); }
  bool is_one(const Scalar& a) const { return a == BigRational(1); }
  Scalar add(const Scalar& a, const Scalar& b) const { return a + b; }
  Scalar sub(const Scalar& a, const Scalar& b) const { return a - b; }
  Scalar neg(const Scalar& a) const { return -a; }
  Scalar mul(const Scalar& a, const Scalar& b) const { return a * b; }
  Scalar lin(const Scalar& s, const Scalar& x, const Scalar& t, const Scalar& y) const { return s * x + t * y; }

  Gcdex<Scalar> gcdex(const Scalar& a, const Scalar& b) const {
    if (a.is_zero()) return {b, 0, 1, 1, 0};
    return {a, 1, 0, -(b / a), 1};
  }
  bool is_unit(const Scalar& a) const { return !a.is_zero(); }
  Scalar inverse(const Scalar& a) const {
    if (a.is_zero()) throw std::domain_error("not a unit");
    return BigRational(1) / a;
  }
  Scalar unit_normalizer(const Scalar& a) const { return a.is_zero() ? BigRational(1) : BigRational(1) / a; }
  Scalar quo(const Scalar& a, const Scalar& p) const { return a / p; }
  Scalar annihilator(const Scalar&) const { return 0; }
  bool divides(const Scalar& p, const Scalar& a) const { return !p.is_zero() || a.is_zero(); }
  Scalar exact_div(const Scalar& a, const Scalar& p) const { return a / p; }
  int pivot_measure(const Scalar& a) const { return a.is_zero() ? 1 : 0; }

  std::string render(const Scalar& a) const {
    if (a.denominator() == BigInt(1)) return a.numerator().str();
    return a.numerator().str() + "/" + a.denominator().str();
  }
  BigInt to_bigint(const Scalar& a) const { return a.numerator(); }
};

}  // namespace kc
