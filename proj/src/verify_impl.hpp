#pragma once

#include "kc/cech.hpp"
#include "kc/verify.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kc {

template <class D>
struct Ctx {
  const Ring& ring;
  RingView<D> R;
  Module<D> M;
  Seq<D> x;
  std::optional<typename RingView<D>::Elem> y;
  const Instance& inst;

  int r() const { return int(x.size()); }
  bool finite() const { return std::is_same_v<D, ModularDomain>; }
  bool opt(const std::string& key) const { return inst.options.value(key, false); }
  std::string opt_str(const std::string& key) const { return inst.options.value(key, std::string()); }
  const typename RingView<D>::Elem& need_y() const {
    if (!y) throw Error("Unsupported", "instance has no element y");
    return *y;
  }
};

// Thrown by Audit::inconclusive to abandon a check early.
struct Abandon {};

template <class D>
Json matrix_json(const D& dom, const MatOf<D>& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(dom.render(a(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class D>
class Audit {
 public:
  explicit Audit(const D& dom) : dom_(dom) {}

  Json artifacts = Json::object();
  std::vector<std::string> passed;

  const D& dom() const { return dom_; }
  bool failed() const { return fail_.has_value(); }
  const std::optional<std::pair<std::string, Json>>& failure() const { return fail_; }
  const std::optional<std::string>& inconclusive_reason() const { return inc_; }

  // Records the first failing assertion with its witness matrices.
  bool require(bool ok, const std::string& what, std::optional<int> degree = std::nullopt,
               const std::vector<std::pair<std::string, MatOf<D>>>& mats = {}) {
    if (ok) {
      passed.push_back(what);
      return true;
    }
    if (!fail_) {
      Json w;
      w["description"] = what;
      w["degree"] = degree ? Json(*degree) : Json(nullptr);
      Json ms = Json::object();
      for (const auto& [name, m] : mats) ms[name] = matrix_json(dom_, m);
      w["matrices"] = ms;
      fail_ = std::make_pair(what, w);
    }
    return false;
  }

  [[noreturn]] void inconclusive(const std::string& why) {
    inc_ = why;
    throw Abandon{};
  }

  void note(const std::string& key, Json value) { artifacts[key] = std::move(value); }

 private:
  D dom_;
  std::optional<std::pair<std::string, Json>> fail_;
  std::optional<std::string> inc_;
};

// ---------------------------------------------------------------------------
// Shared assertions. Each returns whether it held.

template <class D>
std::optional<int> chain_map_defect(const ChainMap<D>& f) {
  const D& dom = f.src.dom;
  for (int n = f.src.lo; n <= f.src.hi; ++n) {
    if (f.src.gens(n) == 0) continue;
    if (!is_module_map(dom, f.src.term(n), f.tgt.term(n), f.at(n))) return n;
    MatOf<D> lhs = mul(dom, f.src.d(n), f.at(n - 1));
    if (lhs.size() == 0) continue;
    if (!rowspan_contains(dom, f.tgt.term(n - 1).rel, sub(dom, lhs, mul(dom, f.at(n), f.tgt.d(n))))) return n;
  }
  return std::nullopt;
}

template <class D>
bool assert_chain_map(Audit<D>& a, const std::string& name, const ChainMap<D>& f) {
  auto bad = chain_map_defect(f);
  if (!bad) return a.require(true, name + " is a chain map");
  const int n = *bad;
  return a.require(false, name + " is not a chain map", n,
                   {{"f_n", f.at(n)}, {"f_n-1", f.at(n - 1)}, {"d_src", f.src.d(n)}, {"d_tgt", f.tgt.d(n)}});
}

template <class D>
bool assert_quasi_iso(Audit<D>& a, const std::string& name, const ChainMap<D>& f) {
  if (!assert_chain_map(a, name, f)) return false;
  ChainComplex<D> c = cone(f);
  for (int n = c.lo; n <= c.hi; ++n)
    if (!is_exact_at(c, n))
      return a.require(false, name + ": cone not exact in degree " + std::to_string(n), n,
                       {{"cone_d_in", c.gens(n + 1) ? c.d(n + 1) : zeros(c.dom, 0, c.gens(n))},
                        {"cone_d_out", c.gens(n - 1) ? c.d(n) : zeros(c.dom, c.gens(n), 0)}});
  return a.require(true, name + " is a quasi-isomorphism (cone exact)");
}

template <class D>
bool assert_termwise_iso(Audit<D>& a, const std::string& name, const ChainMap<D>& f) {
  if (!assert_chain_map(a, name, f)) return false;
  for (int n = f.src.lo; n <= f.src.hi; ++n)
    if (!is_isomorphism(f.src.dom, f.src.term(n), f.tgt.term(n), f.at(n)))
      return a.require(false, name + " is not bijective in degree " + std::to_string(n), n, {{"f_n", f.at(n)}});
  for (int n = f.tgt.lo; n <= f.tgt.hi; ++n)
    if (!f.src.in_range(n) && !module_is_zero(f.tgt.dom, f.tgt.term(n)))
      return a.require(false, name + " misses target degree " + std::to_string(n), n);
  return a.require(true, name + " is a termwise isomorphism");
}

// f and g agree as maps into `tgt` (modulo its relations).
template <class D>
bool assert_equal_maps(Audit<D>& a, const std::string& name, const Module<D>& tgt, const MatOf<D>& f, const MatOf<D>& g,
                       std::optional<int> degree = std::nullopt) {
  const D& dom = a.dom();
  const bool ok = f.rows() == g.rows() && f.cols() == g.cols() && rowspan_contains(dom, tgt.rel, sub(dom, f, g));
  return a.require(ok, name, degree, {{"lhs", f}, {"rhs", g}});
}

// Two chain maps with common source and target induce the same map on
// homology in every degree.
template <class D>
bool assert_homology_commutes(Audit<D>& a, const std::string& name, const ChainMap<D>& f, const ChainMap<D>& g) {
  const D& dom = f.src.dom;
  for (int n = f.src.lo; n <= f.src.hi; ++n) {
    if (f.src.gens(n) == 0 || f.tgt.gens(n) == 0) continue;
    Subquotient<D> hs = homology(f.src, n), ht = homology(f.tgt, n);
    MatOf<D> diff = mul(dom, hs.generators(), sub(dom, f.at(n), g.at(n)));
    if (!rowspan_contains(dom, ht.zero_span(), diff))
      return a.require(false, name + ": homology square fails in degree " + std::to_string(n), n,
                       {{"f_n", f.at(n)}, {"g_n", g.at(n)}, {"cycles", hs.generators()}});
  }
  return a.require(true, name + " commutes on homology");
}

template <class D>
bool assert_same_class(Audit<D>& a, const std::string& name, const Classification& lhs, const Classification& rhs,
                       std::optional<int> degree = std::nullopt) {
  return a.require(lhs == rhs, name + " (" + lhs.render() + " vs " + rhs.render() + ")", degree);
}

template <class D>
Module<D> ring_module(const RingView<D>& R) {
  return free_module(R, 1);
}

// ---------------------------------------------------------------------------
// Check entry points, explicitly instantiated for the three scalar domains.

#define KC_CHECKS(X) \
  X(weak5)           \
  X(coh2)            \
  X(coh3_oracle)     \
  X(weak6)           \
  X(weak7)           \
  X(hoc2)            \
  X(hoc3)            \
  X(dual0)           \
  X(dual1)           \
  X(dual2)           \
  X(dual3)           \
  X(dual6)           \
  X(dual7)           \
  X(enl1)            \
  X(enl2)            \
  X(enl4)            \
  X(comp6)           \
  X(comp5)           \
  X(coh8)            \
  X(hoc1)            \
  X(prel7)           \
  X(telescope)       \
  X(microscope)      \
  X(weak9)

#define KC_DECLARE(name) \
  template <class D>     \
  void check_##name(const Ctx<D>& c, Audit<D>& a);
KC_CHECKS(KC_DECLARE)
#undef KC_DECLARE

#define KC_INSTANTIATE(name)                                                      \
  template void check_##name<ModularDomain>(const Ctx<ModularDomain>&, Audit<ModularDomain>&); \
  template void check_##name<IntegerDomain>(const Ctx<IntegerDomain>&, Audit<IntegerDomain>&); \
  template void check_##name<RationalDomain>(const Ctx<RationalDomain>&, Audit<RationalDomain>&);

}  // namespace kc
