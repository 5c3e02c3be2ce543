#pragma once

// Check registry: each check builds explicit maps for one instance and
// certifies the claimed structure by exact computation.

#include "kc/adic.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kc {

using Json = nlohmann::json;

// {freeRank, invariants: [decimal strings], cardinality?}
Json classification_json(const Classification& c);
// Stabilized value or the ProObject record: stage classes and transition kinds.
Json limit_entry_json(const LimitEntry& e);

struct ModuleSpec {
  int generators = 1;
  std::vector<std::vector<std::string>> relations;  // rows of ring literals
};

struct Instance {
  std::string label;
  RingSpec ring;
  ModuleSpec module;
  std::vector<std::string> sequence;
  std::optional<std::string> y;
  int n = 2, m = 4;
  int n_max = 6, m_max = 8, window = 2;
  Json options = Json::object();
};

// Parsing throws Error("InvalidConfig", ...).
RingSpec ring_from_json(const Json& j);
Json ring_to_json(const RingSpec& r);
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);
// Compact canonical form, used as the ordering key in suites.
std::string instance_key(const Instance& inst);

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

struct CheckReport {
  std::string check;
  std::string statement;
  Instance instance;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;  // failed assertion or inconclusive cause
  Json witness;        // Fail only: {degree, description, matrices}
  Json artifacts = Json::object();

  bool operator==(const CheckReport& o) const;
};

Json report_to_json(const CheckReport& r);
CheckReport report_from_json(const Json& j);

struct SuiteEntry {
  std::string check;
  Instance instance;
};

struct SuiteReport {
  std::string name;
  std::vector<CheckReport> reports;
  int pass = 0, fail = 0, inconclusive = 0;
};

Json suite_report_to_json(const SuiteReport& s);

const std::vector<std::string>& check_ids();
std::string check_statement(const std::string& id);

// Throws Error("UnknownCheck") for ids outside the registry. Unsupported
// instances (infinite rings on oracle paths, size guards) give Inconclusive.
CheckReport run_check(const std::string& id, const Instance& inst);

// Runs every entry on a pool of `jobs` workers; reports are sorted by
// (check, instance key) so the result does not depend on `jobs`.
SuiteReport run_suite(const std::string& name, const std::vector<SuiteEntry>& entries, int jobs = 1);

// Suite file: {"name", "entries": [{"checks": [...], "instances": [...]}]}.
std::pair<std::string, std::vector<SuiteEntry>> suite_from_json(const Json& j);

}  // namespace kc
