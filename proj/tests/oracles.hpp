#pragma once

// Brute-force oracles shared by the linear algebra tests and the acceptance run.

#include "kc/linalg.hpp"

#include <functional>
#include <random>
#include <set>
#include <vector>

namespace kc::oracle {

using MM = Mat<std::int64_t>;


// Brute-force row span over Z/N by enumerating all coefficient vectors.
inline std::set<std::vector<std::int64_t>> brute_span(const ModularDomain& dom, const MM& a) {
  std::set<std::vector<std::int64_t>> out;
  const Index m = a.rows(), n = a.cols();
  std::vector<std::int64_t> c(m, 0);
  while (true) {
    std::vector<std::int64_t> v(n, 0);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) v[j] = (v[j] + c[i] * a(i, j)) % dom.N;
    out.insert(v);
    Index i = 0;
    while (i < m && ++c[i] == dom.N) c[i++] = 0;
    if (i == m) break;
  }
  if (m == 0) out.insert(std::vector<std::int64_t>(n, 0));
  return out;
}

inline MM random_mod(std::mt19937& rng, Index r, Index c, std::int64_t n) {
  std::uniform_int_distribution<std::int64_t> d(0, n - 1);
  MM m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

inline Mat<BigInt> random_int(std::mt19937& rng, Index r, Index c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  Mat<BigInt> m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = BigInt(d(rng));
  return m;
}

inline BigInt det(const Mat<BigInt>& a) {
  const Index n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  BigInt total = 0;
  for (Index j = 0; j < n; ++j) {
    Mat<BigInt> minor(n - 1, n - 1);
    for (Index i = 1; i < n; ++i)
      for (Index k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    BigInt t = a(0, j) * det(minor);
    total = (j % 2 == 0) ? total + t : total - t;
  }
  return total;
}

// gcd of all i x i minors
inline BigInt minor_gcd(const Mat<BigInt>& a, Index size) {
  BigInt g = 0;
  const Index m = a.rows(), n = a.cols();
  std::vector<Index> rows, cols;
  std::function<void(Index, Index)> pick_cols;
  std::function<void(Index)> pick_rows = [&](Index start) {
    if (Index(rows.size()) == size) {
      pick_cols(0, 0);
      return;
    }
    for (Index i = start; i < m; ++i) {
      rows.push_back(i);
      pick_rows(i + 1);
      rows.pop_back();
    }
  };
  pick_cols = [&](Index start, Index) {
    if (Index(cols.size()) == size) {
      Mat<BigInt> s(size, size);
      for (Index i = 0; i < size; ++i)
        for (Index j = 0; j < size; ++j) s(i, j) = a(rows[i], cols[j]);
      g = gcd(g, det(s));
      return;
    }
    for (Index j = start; j < n; ++j) {
      cols.push_back(j);
      pick_cols(j + 1, 0);
      cols.pop_back();
    }
  };
  pick_rows(0);
  return abs(g);
}


}  // namespace kc::oracle
