#pragma once

#include "kc/error.hpp"
#include "kc/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kc {

enum class RingKind { Rationals, PrimeField, Integers, IntegersModN, FiniteAlgebra };

struct RingSpec {
  RingKind kind = RingKind::Integers;
  long long modulus = 0;  // p, N or baseN
  int rank = 1;           // basis size of a finite algebra
  // mul_table[i][j] holds the coordinates of e_i * e_j
  std::vector<std::vector<std::vector<long long>>> mul_table;
  int unit_index = 0;

  static RingSpec integers() { return {RingKind::Integers}; }
  static RingSpec rationals() { return {RingKind::Rationals}; }
  static RingSpec prime_field(long long p) { return {RingKind::PrimeField, p}; }
  static RingSpec integers_mod(long long n) { return {RingKind::IntegersModN, n}; }
  static RingSpec finite_algebra(long long base, int rank, std::vector<std::vector<std::vector<long long>>> table, int unit) {
    return {RingKind::FiniteAlgebra, base, rank, std::move(table), unit};
  }
  // Z/N[t]/(t^k) with basis 1, t, ..., t^{k-1}
  static RingSpec truncated_polynomial(long long base, int k);
};

// Canonical coordinates: one entry for Z, Q, F_p and Z/N, k entries for a
// finite algebra. Modular entries are integers in [0, N).
struct RingElem {
  std::vector<BigRational> c;
  bool operator==(const RingElem& o) const { return c == o.c; }
  bool operator!=(const RingElem& o) const { return !(c == o.c); }
};

bool is_prime(long long p);

class Ring {
 public:
  static Ring make(const RingSpec& spec);

  const RingSpec& spec() const { return spec_; }
  RingKind kind() const { return spec_.kind; }
  int rank() const { return spec_.kind == RingKind::FiniteAlgebra ? spec_.rank : 1; }
  long long modulus() const { return spec_.modulus; }
  bool is_finite() const { return spec_.kind != RingKind::Integers && spec_.kind != RingKind::Rationals; }
  bool is_field() const { return spec_.kind == RingKind::Rationals || spec_.kind == RingKind::PrimeField; }
  std::optional<BigInt> cardinality() const;
  std::string name() const;

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(long long v) const;
  RingElem basis(int i) const;

  RingElem parse(const std::string& literal) const;
  std::string render(const RingElem& a) const;

  RingElem add(const RingElem& a, const RingElem& b) const;
  RingElem sub(const RingElem& a, const RingElem& b) const;
  RingElem neg(const RingElem& a) const;
  RingElem mul(const RingElem& a, const RingElem& b) const;
  RingElem pow(const RingElem& a, long long e) const;
  bool is_zero(const RingElem& a) const;
  bool is_unit(const RingElem& a) const;
  bool is_nilpotent(const RingElem& a) const;

  // Multiplication by a on the basis, acting on coordinate columns:
  // entry (j, i) is the e_j coordinate of a * e_i.
  std::vector<std::vector<long long>> flatten_action(const RingElem& a) const;

  // All elements in canonical order; finite rings only.
  std::vector<RingElem> elements() const;

 private:
  RingElem reduce(std::vector<BigRational> c) const;
  RingSpec spec_;
};

}  // namespace kc
