#pragma once
// Structural invariants of every module, run as one suite (CLI `selftest` and the
// acceptance binary share it).

#include <cstdint>
#include <string>
#include <vector>

namespace levylap::selftest {

struct Check {
  std::string module;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured defect (or ratio for lower-bound checks)
  double tolerance = 0.0;  // pinned bound
  bool lower_bound = false;  // pass means value >= tolerance instead of <=
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240601;
  int jobs = 1;
};

std::vector<Check> run(const Options& opt = {});
bool all_passed(const std::vector<Check>& checks);

}  // namespace levylap::selftest
