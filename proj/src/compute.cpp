#include "kc/compute.hpp"

#include "kc/cech.hpp"

#include <map>
#include <set>
#include <sstream>

namespace kc {

namespace {

const std::set<std::string> kComputeTasks = {"localCohomology", "derivedCompletion", "koszulTable", "proregular"};

template <class D>
Seq<D> parse_seq(const Ring& ring, const RingView<D>& R, const std::vector<std::string>& lits) {
  Seq<D> x;
  for (const auto& s : lits) x.push_back(R.coeffs(ring.parse(s)));
  return x;
}

template <class D>
Module<D> parse_module(const Ring& ring, const RingView<D>& R, const ModuleSpec& m) {
  std::vector<std::vector<typename RingView<D>::Elem>> rows;
  for (const auto& row : m.relations) {
    std::vector<typename RingView<D>::Elem> r;
    for (const auto& s : row) r.push_back(R.coeffs(ring.parse(s)));
    rows.push_back(std::move(r));
  }
  return quotient_of_free(R, m.generators, rows);
}

Json by_degree(const std::map<int, LimitEntry>& m, bool cohomological) {
  Json j = Json::object();
  for (const auto& [d, e] : m) j[std::to_string(cohomological ? -d : d)] = limit_entry_json(e);
  return j;
}

template <class D>
Json compute_one(const std::string& task, const Ring& ring, const RingView<D>& R, const Instance& inst) {
  const Module<D> M = parse_module(ring, R, inst.module);
  const Seq<D> x = parse_seq(ring, R, inst.sequence);
  if (task == "localCohomology") {
    auto lim = local_cohomology_koszul(R, x, M, inst.n_max, inst.window);
    Json j;
    j["avatar"] = by_degree(lim.lim, true);
    j["oracle"] = nullptr;
    if (ring.is_finite() && x.size() <= 3) {
      Json o = Json::object();
      auto h = cech_cohomology_oracle(R, x, M);
      bool agree = true;
      for (std::size_t p = 0; p < h.size(); ++p) {
        o[std::to_string(p)] = classification_json(h[p]);
        const LimitEntry& e = lim.lim.at(-int(p));
        agree = agree && e.stabilized() && e.value == h[p];
      }
      j["oracle"] = o;
      j["agree"] = agree;
    }
    return j;
  }
  if (task == "derivedCompletion") {
    auto d = derived_completion_koszul(R, x, M, inst.n_max, inst.m_max, inst.window);
    Json j;
    j["lim"] = by_degree(d.limits.lim, false);
    j["lim1"] = by_degree(d.limits.lim1, false);
    j["identified"] = d.identified;
    j["label"] = d.label;
    j["completion"] = limit_entry_json(limits(completion_system(R, x, M, inst.n_max), inst.window).lim.at(0));
    return j;
  }
  if (task == "koszulTable") {
    Json rows = Json::array();
    for (int n = 1; n <= inst.n_max; ++n) {
      auto k = koszul_chain(R, x, M, uniform(x.size(), n));
      Json h = Json::object();
      for (int i = k.lo; i <= k.hi; ++i) h[std::to_string(i)] = classification_json(homology_classification(k, i));
      rows.push_back({{"n", n}, {"H", h}});
    }
    return rows;
  }
  // proregular
  auto v = proregular_check(R, x, M, inst.n_max, inst.m_max);
  Json idx = Json::array();
  for (const auto& p : v.indices) {
    Json e = {{"i", p.i}, {"verified", p.verified}};
    if (p.verified)
      e["witness"] = p.witness;
    else
      e["firstFailure"] = p.first_failure;
    idx.push_back(e);
  }
  return {{"label", v.label()}, {"n_max", v.n_max}, {"m_max", v.m_max}, {"indices", idx}};
}

bool unsupported_report(const CheckReport& r) {
  return r.verdict == Verdict::Inconclusive && r.reason.rfind("UnsupportedInstance", 0) == 0;
}

std::string class_text(const Json& c) {
  if (c.is_null()) return "-";
  std::string s;
  const long long f = c.at("freeRank");
  if (f > 0) s = "free rank " + std::to_string(f);
  for (const auto& d : c.at("invariants")) s += std::string(s.empty() ? "" : " + ") + "Z/" + d.get<std::string>();
  if (s.empty()) s = "0";
  if (c.contains("cardinality")) s += "  [order " + c["cardinality"].get<std::string>() + "]";
  return s;
}

std::string entry_text(const Json& e) {
  if (e.at("kind") == "stabilized") return class_text(e.at("value"));
  std::string s = "pro-object:";
  for (const auto& st : e.at("stages")) s += " " + class_text(st) + ";";
  return s;
}

}  // namespace

JobConfig job_from_json(const Json& j) {
  JobConfig job;
  job.instance = instance_from_json(j);
  if (!j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty()) throw Error("InvalidConfig", "missing non-empty 'tasks' array");
  for (const auto& t : j["tasks"]) {
    if (!t.is_object() || t.size() != 1) throw Error("InvalidConfig", "each task is an object with exactly one key");
    const auto& [kind, v] = *t.items().begin();
    if (!v.is_string()) throw Error("InvalidConfig", "task value must be a string");
    const std::string name = v;
    if (kind == "compute" && !kComputeTasks.count(name)) throw Error("InvalidConfig", "unknown compute task '" + name + "'");
    if (kind == "check") check_statement(name);  // throws UnknownCheck
    if (kind == "suite") check_group(name);
    if (kind != "compute" && kind != "check" && kind != "suite") throw Error("InvalidConfig", "unknown task kind '" + kind + "'");
    job.tasks.push_back({kind, name});
  }
  return job;
}

const std::vector<std::string>& check_group(const std::string& name) {
  static const std::map<std::string, std::vector<std::string>> groups = {
      {"all", check_ids()},
      {"adic", {"weak5", "coh2", "coh3_oracle", "weak6", "weak7", "weak9", "hoc2", "hoc3", "prel7", "telescope", "microscope"}},
      {"duality", {"dual0", "dual1", "dual2", "dual3", "dual6", "dual7", "hoc1"}},
      {"enlargement", {"enl1", "enl2", "enl4"}},
      {"resolution", {"comp6", "comp5", "coh8"}},
  };
  auto it = groups.find(name);
  if (it == groups.end()) throw Error("InvalidConfig", "unknown suite '" + name + "'");
  return it->second;
}

Json run_job(const JobConfig& job, std::string* unsupported) {
  const Instance& inst = job.instance;
  const Ring ring = Ring::make(inst.ring);
  Json results = Json::array();
  for (const auto& t : job.tasks) {
    Json r = {{"task", {{t.kind, t.name}}}};
    if (t.kind == "compute") {
      r["result"] = with_domain(ring, [&](const auto& R) { return compute_one(t.name, ring, R, inst); });
    } else {
      std::vector<std::string> ids = t.kind == "check" ? std::vector<std::string>{t.name} : check_group(t.name);
      Json reps = Json::array();
      for (const auto& id : ids) {
        CheckReport rep = run_check(id, inst);
        if (unsupported && unsupported->empty() && unsupported_report(rep)) *unsupported = id + ": " + rep.reason;
        reps.push_back(report_to_json(rep));
      }
      r["result"] = t.kind == "check" ? reps[0] : reps;
    }
    results.push_back(r);
  }
  return {{"instance", instance_to_json(inst)}, {"ring", ring.name()}, {"results", results}};
}

std::string report_markdown(const Json& report) {
  std::ostringstream out;
  const Json& inst = report.at("instance");
  out << "# Report\n\n";
  out << "- ring: " << report.at("ring").get<std::string>() << "\n";
  out << "- sequence: (";
  for (std::size_t i = 0; i < inst.at("sequence").size(); ++i) out << (i ? ", " : "") << inst["sequence"][i].get<std::string>();
  out << ")\n";
  out << "- module: " << inst.at("module").at("generators") << " generators, " << inst["module"]["relations"].size() << " relations\n\n";
  for (const auto& r : report.at("results")) {
    const auto& [kind, name] = *r.at("task").items().begin();
    out << "## " << kind << ": " << name.get<std::string>() << "\n\n";
    const Json& res = r.at("result");
    if (kind == "compute" && name == "localCohomology") {
      out << "| p | avatar | Cech oracle |\n|---|---|---|\n";
      for (const auto& [p, e] : res.at("avatar").items())
        out << "| " << p << " | " << entry_text(e) << " | "
            << (res["oracle"].is_null() ? "-" : class_text(res["oracle"].value(p, Json()))) << " |\n";
    } else if (kind == "compute" && name == "derivedCompletion") {
      out << "Identification: " << res.at("label").get<std::string>() << "\n\n";
      out << "| i | lim H_i | lim^1 H_i |\n|---|---|---|\n";
      for (const auto& [i, e] : res.at("lim").items())
        out << "| " << i << " | " << entry_text(e) << " | " << entry_text(res.at("lim1").at(i)) << " |\n";
      out << "\nCompletion: " << entry_text(res.at("completion")) << "\n";
    } else if (kind == "compute" && name == "koszulTable") {
      out << "| n | homology |\n|---|---|\n";
      for (const auto& row : res) {
        out << "| " << row.at("n") << " |";
        for (const auto& [i, c] : row.at("H").items()) out << " H_" << i << " = " << class_text(c) << ";";
        out << " |\n";
      }
    } else if (kind == "compute") {
      out << "Verdict: " << res.at("label").get<std::string>() << "\n\n";
      for (const auto& i : res.at("indices"))
        out << "- i = " << i.at("i") << ": " << (i.at("verified").get<bool>() ? "pro-zero, m(n) = " + i.at("witness").dump() : "no witness") << "\n";
    } else {
      const Json reps = res.is_array() ? res : Json::array({res});
      out << "| check | verdict | reason |\n|---|---|---|\n";
      for (const auto& c : reps)
        out << "| " << c.at("check").get<std::string>() << " | " << c.at("verdict").get<std::string>() << " | "
            << c.at("reason").get<std::string>() << " |\n";
    }
    out << "\n";
  }
  return out.str();
}

Json oracle_table(const Instance& inst) {
  const Ring ring = Ring::make(inst.ring);
  return with_domain(ring, [&](const auto& R) {
    const auto M = parse_module(ring, R, inst.module);
    const auto x = parse_seq(ring, R, inst.sequence);
    auto h = cech_cohomology_oracle(R, x, M);  // throws InfiniteRing / TooLarge
    Json rows = Json::array();
    for (const auto& c : h) rows.push_back(classification_json(c));
    auto gamma = torsion_submodule(R, M, x);
    return Json{{"ring", ring.name()},
                {"sequence", inst.sequence},
                {"cech", rows},
                {"gamma", classification_json(classify_module(R.dom, gamma.presentation()))}};
  });
}

std::string oracle_text(const Json& t) {
  std::ostringstream out;
  out << "ring " << t.at("ring").get<std::string>() << ", x = (";
  for (std::size_t i = 0; i < t.at("sequence").size(); ++i) out << (i ? ", " : "") << t["sequence"][i].get<std::string>();
  out << ")\n";
  out << "p\tH^p(Cech)\n";
  for (std::size_t p = 0; p < t.at("cech").size(); ++p) out << p << "\t" << class_text(t["cech"][p]) << "\n";
  out << "Gamma\t" << class_text(t.at("gamma")) << "\n";
  return out.str();
}

}  // namespace kc
