#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmdslab/qmds.hpp"

namespace qmdslab {

struct Claim {
  std::string id;      // stable key, reports are sorted by it
  std::string anchor;  // human-readable statement of the claim
  double measured = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string version = "qmds-lab report v1";
  std::string config_echo;
  std::vector<Claim> claims;

  bool overall() const;
  std::string render() const;  // byte-deterministic, claims sorted by id
};

struct SuiteConfig {
  int64_t q = 5;
  int n = 5;
  int t = 3;
  uint64_t seed = 1;
};

std::vector<std::string> suite_names();
VerificationReport run_verify(const std::string& suite, const SuiteConfig& cfg);

/// Trace distance between the reduced state on `labels` and the maximally
/// mixed state of that dimension.
double mixedness_defect(const QuditState& state,
                        const std::vector<std::string>& labels);

}  // namespace qmdslab
