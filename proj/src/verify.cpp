#include "verify_impl.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <regex>
#include <set>
#include <thread>

namespace kc {

Json classification_json(const Classification& c) {
  Json j;
  j["freeRank"] = c.free_rank;
  Json inv = Json::array();
  for (const auto& d : c.invariants) inv.push_back(d.str());
  j["invariants"] = inv;
  if (c.cardinality) j["cardinality"] = c.cardinality->str();
  return j;
}

Json limit_entry_json(const LimitEntry& e) {
  Json j;
  j["kind"] = e.stabilized() ? "stabilized" : "proObject";
  if (e.stabilized()) {
    j["value"] = classification_json(e.value);
    j["stage"] = e.stage;
    j["lag"] = e.lag;
  }
  Json st = Json::array();
  for (const auto& s : e.stages) st.push_back(classification_json(s));
  j["stages"] = st;
  j["transitions"] = e.transitions;
  j["certificate"] = e.certificate;
  return j;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error("InvalidConfig", what); }

long long get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) invalid(std::string("ring needs an integer '") + key + "'");
  return j[key].get<long long>();
}

void only_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) invalid("unknown key '" + k + "' in " + where);
}

int positive(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 1 || j[key].get<long long>() > 64)
    invalid(std::string("'") + key + "' must be an integer in [1, 64]");
  return j[key].get<int>();
}

std::string literal(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  invalid(where + " must be a ring literal (string or integer)");
}

}  // namespace

RingSpec ring_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::smatch m;
    if (s == "Z" || s == "ZZ") return RingSpec::integers();
    if (s == "Q" || s == "QQ") return RingSpec::rationals();
    if (std::regex_match(s, m, std::regex(R"(F_?(\d+))"))) return RingSpec::prime_field(std::stoll(m[1]));
    if (std::regex_match(s, m, std::regex(R"(Z/(\d+))"))) return RingSpec::integers_mod(std::stoll(m[1]));
    if (std::regex_match(s, m, std::regex(R"(Z/(\d+)\[t\]/\(t\^(\d+)\))")))
      return RingSpec::truncated_polynomial(std::stoll(m[1]), std::stoi(m[2]));
    invalid("unrecognized ring '" + s + "'");
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) invalid("ring must be a string or an object with 'kind'");
  const std::string kind = j["kind"];
  if (kind == "Integers") return RingSpec::integers();
  if (kind == "Rationals") return RingSpec::rationals();
  if (kind == "PrimeField") return RingSpec::prime_field(get_int(j, "modulus"));
  if (kind == "IntegersModN") return RingSpec::integers_mod(get_int(j, "modulus"));
  if (kind == "TruncatedPolynomial") {
    const long long k = get_int(j, "degree");
    if (k < 1 || k > 16) invalid("truncated polynomial degree must be in [1, 16]");
    return RingSpec::truncated_polynomial(get_int(j, "modulus"), int(k));
  }
  if (kind == "FiniteAlgebra") {
    const long long rank = get_int(j, "rank");
    if (rank < 1 || rank > 16) invalid("algebra rank must be in [1, 16]");
    if (!j.contains("table")) invalid("algebra needs a multiplication 'table'");
    std::vector<std::vector<std::vector<long long>>> table;
    try {
      table = j["table"].get<decltype(table)>();
    } catch (const Json::exception&) {
      invalid("algebra table must be rank x rank x rank integers");
    }
    if (table.size() != std::size_t(rank)) invalid("algebra table must be rank x rank x rank integers");
    for (const auto& row : table) {
      if (row.size() != std::size_t(rank)) invalid("algebra table must be rank x rank x rank integers");
      for (const auto& e : row)
        if (e.size() != std::size_t(rank)) invalid("algebra table must be rank x rank x rank integers");
    }
    const long long unit = j.contains("unit") ? get_int(j, "unit") : 0;
    return RingSpec::finite_algebra(get_int(j, "modulus"), int(rank), std::move(table), int(unit));
  }
  invalid("unknown ring kind '" + kind + "'");
}

Json ring_to_json(const RingSpec& r) {
  switch (r.kind) {
    case RingKind::Integers: return {{"kind", "Integers"}};
    case RingKind::Rationals: return {{"kind", "Rationals"}};
    case RingKind::PrimeField: return {{"kind", "PrimeField"}, {"modulus", r.modulus}};
    case RingKind::IntegersModN: return {{"kind", "IntegersModN"}, {"modulus", r.modulus}};
    case RingKind::FiniteAlgebra: {
      const RingSpec tp = RingSpec::truncated_polynomial(r.modulus, r.rank);
      if (tp.mul_table == r.mul_table && r.unit_index == 0) return {{"kind", "TruncatedPolynomial"}, {"modulus", r.modulus}, {"degree", r.rank}};
      return {{"kind", "FiniteAlgebra"}, {"modulus", r.modulus}, {"rank", r.rank}, {"table", r.mul_table}, {"unit", r.unit_index}};
    }
  }
  return nullptr;
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) invalid("instance must be an object");
  only_keys(j, {"label", "ring", "module", "sequence", "y", "n", "m", "truncation", "options", "tasks"}, "instance");
  Instance inst;
  if (j.contains("label")) {
    if (!j["label"].is_string()) invalid("'label' must be a string");
    inst.label = j["label"];
  }
  if (!j.contains("ring")) invalid("missing 'ring'");
  inst.ring = ring_from_json(j["ring"]);
  Ring ring;
  try {
    ring = Ring::make(inst.ring);
  } catch (const Error& e) {
    invalid(std::string("bad ring: ") + e.what());
  }
  auto check_literal = [&](const std::string& s) {
    try {
      ring.parse(s);
    } catch (const Error& e) {
      invalid("bad literal '" + s + "': " + e.what());
    }
  };
  if (j.contains("module")) {
    const Json& m = j["module"];
    if (!m.is_object()) invalid("'module' must be an object");
    only_keys(m, {"generators", "relations"}, "module");
    inst.module.generators = positive(m, "generators", 1);
    if (m.contains("relations")) {
      if (!m["relations"].is_array()) invalid("'relations' must be an array of rows");
      for (const auto& row : m["relations"]) {
        if (!row.is_array() || int(row.size()) != inst.module.generators) invalid("each relation row needs one literal per generator");
        std::vector<std::string> r;
        for (const auto& v : row) r.push_back(literal(v, "relation entry"));
        for (const auto& s : r) check_literal(s);
        inst.module.relations.push_back(std::move(r));
      }
    }
  }
  if (!j.contains("sequence") || !j["sequence"].is_array()) invalid("missing 'sequence' array");
  for (const auto& v : j["sequence"]) inst.sequence.push_back(literal(v, "sequence entry"));
  if (inst.sequence.size() > 4) invalid("sequence length is limited to 4");
  for (const auto& s : inst.sequence) check_literal(s);
  if (j.contains("y")) {
    inst.y = literal(j["y"], "'y'");
    check_literal(*inst.y);
  }
  inst.n = positive(j, "n", inst.n);
  inst.m = positive(j, "m", std::max(inst.m, inst.n));
  if (inst.m < inst.n) invalid("need n <= m");
  if (j.contains("truncation")) {
    const Json& t = j["truncation"];
    if (!t.is_object()) invalid("'truncation' must be an object");
    only_keys(t, {"n_max", "m_max", "window"}, "truncation");
    inst.n_max = positive(t, "n_max", inst.n_max);
    inst.m_max = positive(t, "m_max", std::max(inst.m_max, inst.n_max));
    inst.window = positive(t, "window", inst.window);
    if (inst.m_max < inst.n_max) invalid("need n_max <= m_max");
  }
  if (j.contains("options")) {
    if (!j["options"].is_object()) invalid("'options' must be an object");
    inst.options = j["options"];
  }
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  if (!inst.label.empty()) j["label"] = inst.label;
  j["ring"] = ring_to_json(inst.ring);
  j["module"] = {{"generators", inst.module.generators}, {"relations", inst.module.relations}};
  j["sequence"] = inst.sequence;
  if (inst.y) j["y"] = *inst.y;
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["truncation"] = {{"n_max", inst.n_max}, {"m_max", inst.m_max}, {"window", inst.window}};
  j["options"] = inst.options;
  return j;
}

std::string instance_key(const Instance& inst) { return instance_to_json(inst).dump(); }

// ---------------------------------------------------------------------------
// Reports

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict verdict_from_name(const std::string& s) {
  if (s == "Pass") return Verdict::Pass;
  if (s == "Fail") return Verdict::Fail;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw Error("InvalidReport", "unknown verdict '" + s + "'");
}

bool CheckReport::operator==(const CheckReport& o) const {
  return check == o.check && statement == o.statement && instance_key(instance) == instance_key(o.instance) && verdict == o.verdict &&
         reason == o.reason && witness == o.witness && artifacts == o.artifacts;
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["check"] = r.check;
  j["statement"] = r.statement;
  j["instance"] = instance_to_json(r.instance);
  j["verdict"] = verdict_name(r.verdict);
  j["reason"] = r.reason;
  j["witness"] = r.witness;
  j["artifacts"] = r.artifacts;
  return j;
}

CheckReport report_from_json(const Json& j) {
  CheckReport r;
  r.check = j.at("check");
  r.statement = j.at("statement");
  r.instance = instance_from_json(j.at("instance"));
  r.verdict = verdict_from_name(j.at("verdict"));
  r.reason = j.at("reason");
  r.witness = j.at("witness");
  r.artifacts = j.at("artifacts");
  return r;
}

Json suite_report_to_json(const SuiteReport& s) {
  Json reports = Json::array();
  for (const auto& r : s.reports) reports.push_back(report_to_json(r));
  return {{"suite", s.name},
          {"summary", {{"total", s.reports.size()}, {"pass", s.pass}, {"fail", s.fail}, {"inconclusive", s.inconclusive}}},
          {"reports", reports}};
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct Entry {
  std::string statement;
  void (*mod)(const Ctx<ModularDomain>&, Audit<ModularDomain>&);
  void (*integer)(const Ctx<IntegerDomain>&, Audit<IntegerDomain>&);
  void (*rational)(const Ctx<RationalDomain>&, Audit<RationalDomain>&);
};

const std::map<std::string, std::string>& statements() {
  static const std::map<std::string, std::string> s = {
      {"weak5", "K_.(x - U; M[U]/U^(n)) and K_.(x^(n); M) are quasi-isomorphic through explicit maps built from "
                "x^n = (x - U) f_n(x, U) + U^n, compatibly with the transitions from m to n"},
      {"coh2", "The cochain version: K^.(x^(n); M) and K^.(x - U; W_n(M)) are quasi-isomorphic, compatibly with "
               "the transitions given by multiplication by (U_1 ... U_r)^(m - n)"},
      {"coh3_oracle", "The colimit of H^i(K^.(x - U; W_n(M))) equals the Cech cohomology of M"},
      {"weak6", "For each degree, the stage homology of the chain system has order |lim^1 H_(i+1)| |lim H_i| once stabilized"},
      {"weak7", "The pro-zero behaviour of the (x - U) homology matches the pro-regularity search; H_0 maps onto M/x^(n) M and "
                "the completion is recovered when the sequence is pro-regular"},
      {"hoc2", "For one element: H_0 of the system maps onto the completion, H_1 is the kernel of Hom(R_x, M) -> M, and "
               "bounded torsion makes H_1 pro-zero"},
      {"hoc3", "H_i(x - U; M[U]/U^(n)) agrees with the homology of the Hom-dual of the (x - U) Koszul resolution of R"},
      {"dual0", "Hom_R(W_n(R), M) and M[U]/U^(n) are isomorphic compatibly with the U-actions and naturally in M"},
      {"dual1", "Hom_R(K^.(x - U; W_n(R)), M) and K_.(x - U; M[U]/U^(n)) are isomorphic compatibly with the U-actions"},
      {"dual2", "Hom_R(K^.(x - U; W_n(X)), Y) and K_.(x - U; Hom(X, Y)[U]/U^(n)) are isomorphic compatibly with the U-actions"},
      {"dual3", "K_.(x - U; Hom(X, Y)[U]/U^(n)) and Hom_R(X, K_.(x - U; Y[U]/U^(n))) are isomorphic compatibly with the U-actions"},
      {"dual6", "Hom_R(K^.(x - U; W_n(X)), Y) factors through Hom_R[U](K^.(x - U; X[U]/U^(n)), Y[U]/U^(n)) by isomorphisms"},
      {"dual7", "Over Z/N with I = R, Hom(H^i of the Cech complex, I) equals the limit of the dualized truncated Koszul side"},
      {"enl1", "Adding y to the sequence gives long exact sequences of (x - U) homology split by y - V into cokernel and "
               "kernel parts, on the chain and cochain sides"},
      {"enl2", "Completion and local cohomology for the enlarged sequence are assembled from one-element pieces applied to "
               "the results for the original sequence"},
      {"enl4", "0 -> Lambda_1 -> Hom(R_y, M) -> M -> Lambda_0 -> Ext^1(R_y, M) -> 0 is exact for one element y"},
      {"comp6", "In the truncated diagram E -> Lcheck -> Lcal the columns are short exact, Lcheck -> Lcal is a "
                "quasi-isomorphism and Lcal splits off"},
      {"comp5", "The map from the truncated Lcal complex to the Cech complex is a quasi-isomorphism once the window "
                "exceeds the localization exponent"},
      {"coh8", "The map f(U^-1) -> f(1/x)/x from K^.(x - U; W_n(M)) to the Cech complex is a quasi-isomorphism once "
               "the window exceeds the localization exponent"},
      {"hoc1", "Hom(Lcal, M) and Lcal (x) M are the (x - U) Koszul chain and cochain complexes at truncation"},
      {"prel7", "For each x_j the torsion inclusion and the quotient map give exact pairs on Koszul homology"},
      {"telescope", "The finite telescope of the direct (x - U) and power cochain systems is quasi-isomorphic to the last stage"},
      {"microscope", "The finite microscope of the inverse (x - U) and power chain systems receives a quasi-isomorphism from the last stage"},
      {"weak9", "H_0 of the (x - U) chain complex is coker(x - U), its limit is the completion and matches the derived completion"},
  };
  return s;
}

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> r = [] {
    std::map<std::string, Entry> m;
#define KC_REGISTER(name) \
  m[#name] = Entry{statements().at(#name), &check_##name<ModularDomain>, &check_##name<IntegerDomain>, &check_##name<RationalDomain>};
    KC_CHECKS(KC_REGISTER)
#undef KC_REGISTER
    return m;
  }();
  return r;
}

bool unsupported_code(const std::string& code) {
  return code == "TooLarge" || code == "InfiniteRing" || code == "Unsupported" || code == "BadExponents" || code == "WrongRingKind";
}

template <class D>
void run_in(const Ring& ring, const RingView<D>& R, const Instance& inst, void (*fn)(const Ctx<D>&, Audit<D>&), CheckReport& rep) {
  using Elem = typename RingView<D>::Elem;
  std::vector<std::vector<Elem>> rows;
  for (const auto& row : inst.module.relations) {
    std::vector<Elem> r;
    for (const auto& s : row) r.push_back(R.coeffs(ring.parse(s)));
    rows.push_back(std::move(r));
  }
  Seq<D> x;
  for (const auto& s : inst.sequence) x.push_back(R.coeffs(ring.parse(s)));
  std::optional<Elem> y;
  if (inst.y) y = R.coeffs(ring.parse(*inst.y));

  Audit<D> a(R.dom);
  std::optional<std::string> unsupported;
  try {
    Ctx<D> c{ring, R, quotient_of_free(R, inst.module.generators, rows), x, y, inst};
    fn(c, a);
  } catch (const Abandon&) {
  } catch (const Error& e) {
    if (unsupported_code(e.code()))
      unsupported = std::string("UnsupportedInstance: ") + e.what();
    else
      a.require(false, std::string("construction failed: ") + e.what());
  }
  rep.artifacts = a.artifacts;
  rep.artifacts["assertionsPassed"] = a.passed.size();
  if (a.failed()) {
    rep.verdict = Verdict::Fail;
    rep.reason = a.failure()->first;
    rep.witness = a.failure()->second;
  } else if (unsupported || a.inconclusive_reason()) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = unsupported ? *unsupported : *a.inconclusive_reason();
  } else {
    rep.verdict = Verdict::Pass;
  }
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
#define KC_ID(name) v.push_back(#name);
    KC_CHECKS(KC_ID)
#undef KC_ID
    return v;
  }();
  return ids;
}

std::string check_statement(const std::string& id) {
  auto it = registry().find(id);
  if (it == registry().end()) throw Error("UnknownCheck", id);
  return it->second.statement;
}

CheckReport run_check(const std::string& id, const Instance& inst) {
  auto it = registry().find(id);
  if (it == registry().end()) throw Error("UnknownCheck", id);
  const Entry& e = it->second;
  CheckReport rep;
  rep.check = id;
  rep.statement = e.statement;
  rep.instance = inst;
  rep.witness = nullptr;
  const Ring ring = Ring::make(inst.ring);
  with_domain(ring, [&](const auto& R) {
    using D = std::decay_t<decltype(R.dom)>;
    if constexpr (std::is_same_v<D, ModularDomain>)
      run_in(ring, R, inst, e.mod, rep);
    else if constexpr (std::is_same_v<D, IntegerDomain>)
      run_in(ring, R, inst, e.integer, rep);
    else
      run_in(ring, R, inst, e.rational, rep);
  });
  return rep;
}

SuiteReport run_suite(const std::string& name, const std::vector<SuiteEntry>& entries, int jobs) {
  SuiteReport out;
  out.name = name;
  std::vector<CheckReport> results(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        results[i] = run_check(entries[i].check, entries[i].instance);
      } catch (const Error& e) {
        CheckReport r;
        r.check = entries[i].check;
        r.instance = entries[i].instance;
        r.witness = nullptr;
        r.verdict = Verdict::Inconclusive;
        r.reason = std::string("InvalidInstance: ") + e.what();
        results[i] = std::move(r);
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, int(entries.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<std::size_t> order(entries.size());
  std::vector<std::string> keys(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    order[i] = i;
    keys[i] = instance_key(entries[i].instance);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].check != entries[b].check) return entries[a].check < entries[b].check;
    return keys[a] < keys[b];
  });
  for (std::size_t i : order) {
    const auto& r = results[i];
    out.pass += r.verdict == Verdict::Pass;
    out.fail += r.verdict == Verdict::Fail;
    out.inconclusive += r.verdict == Verdict::Inconclusive;
    out.reports.push_back(r);
  }
  return out;
}

std::pair<std::string, std::vector<SuiteEntry>> suite_from_json(const Json& j) {
  if (!j.is_object()) invalid("suite must be an object");
  only_keys(j, {"name", "entries", "description"}, "suite");
  std::string name = j.value("name", std::string("suite"));
  std::vector<SuiteEntry> out;
  if (!j.contains("entries")) return {name, out};
  if (!j["entries"].is_array()) invalid("'entries' must be an array");
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("checks") || !e.contains("instances")) invalid("each entry needs 'checks' and 'instances'");
    only_keys(e, {"checks", "instances", "comment"}, "suite entry");
    std::vector<std::string> checks;
    for (const auto& c : e["checks"]) {
      if (!c.is_string() || !registry().count(c.get<std::string>())) invalid("unknown check " + c.dump());
      checks.push_back(c);
    }
    std::vector<Instance> insts;
    for (const auto& i : e["instances"]) insts.push_back(instance_from_json(i));
    for (const auto& c : checks)
      for (const auto& i : insts) out.push_back({c, i});
  }
  return {name, out};
}

}  // namespace kc
