#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmdslab/network.hpp"
#include "qmdslab/qmds.hpp"
#include "qmdslab/qstate.hpp"

namespace qmdslab {

/// Reference-entangled encoding |Phi> over R (one register per logical qudit)
/// and W1..Wn, plus the erasure bookkeeping.
struct StorageInstance {
  QmdsCode code;
  QuditState state;
  int erased = -1;
};

StorageInstance encode_with_reference(const QmdsCode& code);
StorageInstance erase(const StorageInstance& instance, int e);

struct ProtocolResult {
  QuditState final_state;
  CommLedger ledger;
  double fidelity = 0.0;
  int64_t ec = 0;
  std::vector<int64_t> outcomes;  // teleport symbols and the step-3 result
  bool pass = false;
  std::string trace;
};

/// Download-and-return with the replacement node as hub. forced_eps >= 0
/// forces the step-3 measurement branch (for exhaustive branch checks);
/// cap_logq >= 0 configures a per-edge budget in units of log_Q beta.
ProtocolResult run_download_return_h1(const StorageInstance& instance,
                                      std::vector<int> helpers, uint64_t seed,
                                      int64_t forced_eps = -1, int cap_logq = -1);
ProtocolResult run_download_return_h2(const StorageInstance& instance,
                                      std::vector<int> helpers, int hub,
                                      uint64_t seed, int64_t forced_eps = -1,
                                      int cap_logq = -1);

struct InfeasibilityCertificate {
  std::vector<int> helpers;  // L, of size t-1
  int64_t sr_in = 0;         // sr(W_L What)_chi_in
  int64_t sr_required = 0;   // sr(W_L What)_chi_out
  std::string statement;
};
InfeasibilityCertificate attempt_with_fewer_helpers(const StorageInstance& instance,
                                                    std::vector<int> helpers);

}  // namespace qmdslab
