#pragma once

// Job configs for the command line front end: one instance plus a list of
// tasks, each producing a JSON record.

#include "kc/verify.hpp"

#include <string>
#include <vector>

namespace kc {

struct Task {
  std::string kind;  // compute | check | suite
  std::string name;
};

struct JobConfig {
  Instance instance;
  std::vector<Task> tasks;
};

// Throws Error("InvalidConfig", ...).
JobConfig job_from_json(const Json& j);

// Named groups of checks usable as {"suite": name}.
const std::vector<std::string>& check_group(const std::string& name);

// Runs every task. Unsupported instances throw Error with code TooLarge,
// InfiniteRing or Unsupported; a check that comes back Inconclusive for that
// reason is reported through `unsupported`.
Json run_job(const JobConfig& job, std::string* unsupported = nullptr);

std::string report_markdown(const Json& report);

// Cech cohomology and Gamma of the instance as a JSON table and as text.
Json oracle_table(const Instance& inst);
std::string oracle_text(const Json& table);

}  // namespace kc
