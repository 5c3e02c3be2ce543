#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <string>

namespace kc {

namespace mp = boost::multiprecision;

// Thin value wrappers. The raw Boost types carry a templated converting
// constructor that Eigen's trait machinery trips over, so they stay hidden.
class BigInt {
 public:
  using Raw = mp::number<mp::cpp_int_backend<>, mp::et_off>;

  BigInt() = default;
  BigInt(long long v) : v_(v) {}
  explicit BigInt(Raw v) : v_(std::move(v)) {}
  explicit BigInt(const std::string& s) : v_(s) {}

  const Raw& raw() const { return v_; }
  std::string str() const { return v_.str(); }
  int sign() const { return v_.sign(); }
  bool is_zero() const { return v_.is_zero(); }

  BigInt operator-() const { return BigInt(Raw(-v_)); }
  BigInt& operator+=(const BigInt& o) { v_ += o.v_; return *this; }
  BigInt& operator-=(const BigInt& o) { v_ -= o.v_; return *this; }
  BigInt& operator*=(const BigInt& o) { v_ *= o.v_; return *this; }

  friend BigInt operator+(const BigInt& a, const BigInt& b) { return BigInt(Raw(a.v_ + b.v_)); }
  friend BigInt operator-(const BigInt& a, const BigInt& b) { return BigInt(Raw(a.v_ - b.v_)); }
  friend BigInt operator*(const BigInt& a, const BigInt& b) { return BigInt(Raw(a.v_ * b.v_)); }
  friend bool operator==(const BigInt& a, const BigInt& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return a.v_ != b.v_; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return a.v_ < b.v_; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return a.v_ <= b.v_; }
  friend bool operator>(const BigInt& a, const BigInt& b) { return a.v_ > b.v_; }
  friend std::ostream& operator<<(std::ostream& o, const BigInt& a) { return o << a.v_; }

 private:
  Raw v_;
};

// Quotient and remainder with the remainder in [0, |b|).
inline void divmod_floor(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  BigInt::Raw qq, rr;
  mp::divide_qr(a.raw(), b.raw(), qq, rr);
  if (rr.sign() < 0) {
    if (b.raw().sign() > 0) {
      qq -= 1;
      rr += b.raw();
    } else {
      qq += 1;
      rr -= b.raw();
    }
  }
  q = BigInt(qq);
  r = BigInt(rr);
}

inline BigInt abs(const BigInt& a) { return a.sign() < 0 ? -a : a; }

inline BigInt gcd(const BigInt& a, const BigInt& b) { return BigInt(BigInt::Raw(mp::gcd(a.raw(), b.raw()))); }

class BigRational {
 public:
  using Raw = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

  BigRational() = default;
  BigRational(long long v) : v_(v) {}
  BigRational(const BigInt& n, const BigInt& d)
      : v_(d.sign() < 0 ? Raw(BigInt::Raw(-n.raw()), BigInt::Raw(-d.raw())) : Raw(n.raw(), d.raw())) {}
  explicit BigRational(Raw v) : v_(std::move(v)) {}

  const Raw& raw() const { return v_; }
  BigInt numerator() const { return BigInt(BigInt::Raw(mp::numerator(v_))); }
  BigInt denominator() const { return BigInt(BigInt::Raw(mp::denominator(v_))); }
  bool is_zero() const { return v_.is_zero(); }

  BigRational operator-() const { return BigRational(Raw(-v_)); }
  friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(Raw(a.v_ + b.v_)); }
  friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(Raw(a.v_ - b.v_)); }
  friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(Raw(a.v_ * b.v_)); }
  friend BigRational operator/(const BigRational& a, const BigRational& b) { return BigRational(Raw(a.v_ / b.v_)); }
  friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
  friend std::ostream& operator<<(std::ostream& o, const BigRational& a) { return o << a.v_; }

 private:
  Raw v_;
};

}  // namespace kc

namespace Eigen {

template <>
struct NumTraits<kc::BigInt> : GenericNumTraits<kc::BigInt> {
  enum { IsInteger = 1, IsSigned = 1, IsComplex = 0, RequireInitialization = 1, ReadCost = 4, AddCost = 8, MulCost = 16 };
  using Real = kc::BigInt;
  using NonInteger = kc::BigInt;
  using Literal = kc::BigInt;
  using Nested = kc::BigInt;
};

template <>
struct NumTraits<kc::BigRational> : GenericNumTraits<kc::BigRational> {
  enum { IsInteger = 0, IsSigned = 1, IsComplex = 0, RequireInitialization = 1, ReadCost = 4, AddCost = 8, MulCost = 16 };
  using Real = kc::BigRational;
  using NonInteger = kc::BigRational;
  using Literal = kc::BigRational;
  using Nested = kc::BigRational;
};

}  // namespace Eigen
