#include "kc/rings.hpp"

#include "kc/domain.hpp"
#include "kc/echelon.hpp"

#include <cctype>
#include <regex>

namespace kc {

namespace {

BigInt::Raw to_raw(const BigRational& q) { return mp::numerator(q.raw()); }

long long mod_ll(const BigRational& q, long long n) {
  BigInt r, quot;
  divmod_floor(BigInt(to_raw(q)), BigInt(n), quot, r);
  return static_cast<long long>(r.raw());
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

BigInt parse_integer(const std::string& s) {
  static const std::regex re("[+-]?[0-9]+");
  if (!std::regex_match(s, re)) throw Error("ParseError", "not an integer literal: '" + s + "'");
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

RingSpec RingSpec::truncated_polynomial(long long base, int k) {
  std::vector<std::vector<std::vector<long long>>> table(k, std::vector<std::vector<long long>>(k, std::vector<long long>(k, 0)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i + j < k) table[i][j][i + j] = 1;
  return finite_algebra(base, k, std::move(table), 0);
}

Ring Ring::make(const RingSpec& spec) {
  Ring r;
  r.spec_ = spec;
  switch (spec.kind) {
    case RingKind::Integers:
    case RingKind::Rationals:
      break;
    case RingKind::PrimeField:
      if (!is_prime(spec.modulus)) throw Error("NonPrime", std::to_string(spec.modulus) + " is not prime");
      if (spec.modulus >= (1LL << 31)) throw Error("InvalidModulus", "modulus too large");
      break;
    case RingKind::IntegersModN:
      if (spec.modulus < 2) throw Error("InvalidModulus", "N must be at least 2");
      if (spec.modulus >= (1LL << 31)) throw Error("InvalidModulus", "modulus too large");
      break;
    case RingKind::FiniteAlgebra: {
      const long long n = spec.modulus;
      const int k = spec.rank;
      if (n < 2) throw Error("InvalidModulus", "baseN must be at least 2");
      if (n >= (1LL << 31)) throw Error("InvalidModulus", "modulus too large");
      if (k < 1) throw Error("InvalidAlgebra", "rank must be positive");
      if (static_cast<int>(spec.mul_table.size()) != k) throw Error("InvalidAlgebra", "table must be rank x rank");
      for (const auto& row : spec.mul_table) {
        if (static_cast<int>(row.size()) != k) throw Error("InvalidAlgebra", "table must be rank x rank");
        for (const auto& t : row)
          if (static_cast<int>(t.size()) != k) throw Error("InvalidAlgebra", "table entries must have rank coefficients");
      }
      if (spec.unit_index < 0 || spec.unit_index >= k) throw Error("NoUnit", "unit index out of range");
      auto& tab = r.spec_.mul_table;
      for (auto& row : tab)
        for (auto& t : row)
          for (auto& v : t) v = ((v % n) + n) % n;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (tab[i][j] != tab[j][i]) throw Error("NonCommutative", "e" + std::to_string(i) + "*e" + std::to_string(j));
      for (int i = 0; i < k; ++i) {
        std::vector<long long> ei(k, 0);
        ei[i] = 1;
        if (tab[spec.unit_index][i] != ei) throw Error("NoUnit", "basis element " + std::to_string(spec.unit_index) + " is not a unit");
      }
      // (e_i e_j) e_l == e_i (e_j e_l) on all basis triples
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          for (int l = 0; l < k; ++l) {
            std::vector<long long> lhs(k, 0), rhs(k, 0);
            for (int a = 0; a < k; ++a) {
              for (int b = 0; b < k; ++b) {
                lhs[b] = (lhs[b] + tab[i][j][a] * tab[a][l][b]) % n;
                rhs[b] = (rhs[b] + tab[j][l][a] * tab[i][a][b]) % n;
              }
            }
            if (lhs != rhs)
              throw Error("NonAssociative", "(e" + std::to_string(i) + "e" + std::to_string(j) + ")e" + std::to_string(l));
          }
      break;
    }
  }
  return r;
}

std::optional<BigInt> Ring::cardinality() const {
  if (!is_finite()) return std::nullopt;
  BigInt c = 1;
  for (int i = 0; i < rank(); ++i) c *= BigInt(spec_.modulus);
  return c;
}

std::string Ring::name() const {
  switch (spec_.kind) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "F" + std::to_string(spec_.modulus);
    case RingKind::IntegersModN: return "Z/" + std::to_string(spec_.modulus);
    case RingKind::FiniteAlgebra: return "A(Z/" + std::to_string(spec_.modulus) + ", rank " + std::to_string(spec_.rank) + ")";
  }
  return "?";
}

RingElem Ring::reduce(std::vector<BigRational> c) const {
  if (is_finite()) {
    for (auto& v : c) v = BigRational(mod_ll(v, spec_.modulus));
  }
  return RingElem{std::move(c)};
}

RingElem Ring::zero() const { return RingElem{std::vector<BigRational>(rank(), BigRational(0))}; }

RingElem Ring::one() const { return from_int(1); }

RingElem Ring::from_int(long long v) const {
  std::vector<BigRational> c(rank(), BigRational(0));
  c[spec_.kind == RingKind::FiniteAlgebra ? spec_.unit_index : 0] = BigRational(v);
  return reduce(std::move(c));
}

RingElem Ring::basis(int i) const {
  std::vector<BigRational> c(rank(), BigRational(0));
  c.at(i) = BigRational(1);
  return RingElem{std::move(c)};
}

RingElem Ring::parse(const std::string& literal) const {
  const std::string s = trim(literal);
  if (s.empty()) throw Error("ParseError", "empty literal");
  if (s.front() == '[') {
    if (spec_.kind != RingKind::FiniteAlgebra) throw Error("ParseError", "tuple literal outside a finite algebra");
    if (s.back() != ']') throw Error("ParseError", "unterminated tuple: '" + s + "'");
    std::vector<BigRational> c;
    std::string body = s.substr(1, s.size() - 2);
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = body.find(',', pos);
      std::string part = trim(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      c.push_back(BigRational(parse_integer(part), BigInt(1)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (static_cast<int>(c.size()) != spec_.rank) throw Error("ParseError", "tuple must have " + std::to_string(spec_.rank) + " entries");
    return reduce(std::move(c));
  }
  BigInt num, den(1);
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    num = parse_integer(s);
  } else {
    num = parse_integer(trim(s.substr(0, slash)));
    den = parse_integer(trim(s.substr(slash + 1)));
    if (den.is_zero()) throw Error("ParseError", "zero denominator");
    if (den.sign() < 0) {
      num = -num;
      den = -den;
    }
  }
  switch (spec_.kind) {
    case RingKind::Rationals:
      return RingElem{{BigRational(num, den)}};
    case RingKind::Integers: {
      BigInt q, r;
      divmod_floor(num, den, q, r);
      if (!r.is_zero()) throw Error("ParseError", "'" + s + "' is not an integer");
      return RingElem{{BigRational(q, BigInt(1))}};
    }
    default: {
      ModularDomain dom(spec_.modulus);
      auto d = dom.from_big(den);
      if (!dom.is_unit(d)) throw Error("NotInvertibleDenominator", "'" + s + "'");
      auto v = dom.mul(dom.from_big(num), dom.inverse(d));
      return from_int(v);
    }
  }
}

std::string Ring::render(const RingElem& a) const {
  if (spec_.kind == RingKind::FiniteAlgebra) {
    std::string s = "[";
    for (std::size_t i = 0; i < a.c.size(); ++i) s += (i ? "," : "") + a.c[i].numerator().str();
    return s + "]";
  }
  const auto& q = a.c.at(0);
  if (q.denominator() == BigInt(1)) return q.numerator().str();
  return q.numerator().str() + "/" + q.denominator().str();
}

RingElem Ring::add(const RingElem& a, const RingElem& b) const {
  std::vector<BigRational> c(a.c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] + b.c[i];
  return reduce(std::move(c));
}

RingElem Ring::sub(const RingElem& a, const RingElem& b) const {
  std::vector<BigRational> c(a.c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] - b.c[i];
  return reduce(std::move(c));
}

RingElem Ring::neg(const RingElem& a) const { return sub(zero(), a); }

RingElem Ring::mul(const RingElem& a, const RingElem& b) const {
  if (spec_.kind != RingKind::FiniteAlgebra) return reduce({a.c[0] * b.c[0]});
  const int k = spec_.rank;
  std::vector<BigRational> c(k, BigRational(0));
  for (int i = 0; i < k; ++i) {
    if (a.c[i].is_zero()) continue;
    for (int j = 0; j < k; ++j) {
      if (b.c[j].is_zero()) continue;
      const auto ab = a.c[i] * b.c[j];
      for (int l = 0; l < k; ++l)
        if (spec_.mul_table[i][j][l] != 0) c[l] = c[l] + ab * BigRational(spec_.mul_table[i][j][l]);
    }
  }
  return reduce(std::move(c));
}

RingElem Ring::pow(const RingElem& a, long long e) const {
  RingElem result = one(), base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

bool Ring::is_zero(const RingElem& a) const { return a == zero(); }

bool Ring::is_unit(const RingElem& a) const {
  switch (spec_.kind) {
    case RingKind::Rationals: return !a.c[0].is_zero();
    case RingKind::Integers: return a.c[0] == BigRational(1) || a.c[0] == BigRational(-1);
    case RingKind::PrimeField:
    case RingKind::IntegersModN: return std::gcd(mod_ll(a.c[0], spec_.modulus), spec_.modulus) == 1;
    case RingKind::FiniteAlgebra: {
      // a is a unit iff multiplication by a is invertible over Z/baseN
      ModularDomain dom(spec_.modulus);
      auto f = flatten_action(a);
      Mat<std::int64_t> m(spec_.rank, spec_.rank);
      for (int i = 0; i < spec_.rank; ++i)
        for (int j = 0; j < spec_.rank; ++j) m(i, j) = f[i][j];
      auto h = howell_form(dom, m);
      return h.rows() == spec_.rank && h == Mat<std::int64_t>::Identity(spec_.rank, spec_.rank);
    }
  }
  return false;
}

bool Ring::is_nilpotent(const RingElem& a) const {
  if (!is_finite()) return is_zero(a);
  RingElem p = a;
  for (int i = 0; i < 64; ++i) {
    if (is_zero(p)) return true;
    p = mul(p, a);
  }
  return false;
}

std::vector<std::vector<long long>> Ring::flatten_action(const RingElem& a) const {
  if (spec_.kind != RingKind::FiniteAlgebra) throw Error("WrongRingKind", "flatten_action needs a finite algebra");
  const int k = spec_.rank;
  std::vector<std::vector<long long>> f(k, std::vector<long long>(k, 0));
  for (int i = 0; i < k; ++i) {
    auto col = mul(a, basis(i));
    for (int j = 0; j < k; ++j) f[j][i] = mod_ll(col.c[j], spec_.modulus);
  }
  return f;
}

std::vector<RingElem> Ring::elements() const {
  if (!is_finite()) throw Error("Unsupported", "elements() needs a finite ring");
  const int k = rank();
  const long long n = spec_.modulus;
  std::vector<RingElem> out;
  std::vector<long long> digits(k, 0);
  while (true) {
    std::vector<BigRational> c;
    for (auto d : digits) c.push_back(BigRational(d));
    out.push_back(RingElem{std::move(c)});
    int i = k - 1;
    while (i >= 0 && ++digits[i] == n) digits[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace kc
