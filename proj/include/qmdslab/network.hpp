#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmdslab/error.hpp"

namespace qmdslab {

inline std::string node_name(int j) { return "W" + std::to_string(j); }
inline std::string replacement_name(int e) { return "What" + std::to_string(e); }

struct NetEdge {
  std::string a, b;  // unordered endpoints
};

struct Topology {
  std::string kind;  // "h1", "h2", or "general"
  std::vector<NetEdge> edges;
  std::string hub;
  int erased = 0;
  std::vector<int> helpers;
};

Topology star_h1(int e, std::vector<int> helpers);
Topology star_h2(int e, std::vector<int> helpers, int hub);
Topology general_topology(std::vector<NetEdge> edges);

struct LedgerEvent {
  std::string from, to;
  int64_t dim = 0;
  std::string tag;  // "quantum" or "classical"
};

/// Per-edge product of communicated dimensions. Classical traffic is logged
/// but never charged (classical communication is free).
struct CommLedger {
  Topology topo;
  std::map<std::string, int64_t> beta;      // edge key -> charged product
  std::map<std::string, int64_t> cap_beta;  // optional per-edge cap (absent = none)
  std::vector<LedgerEvent> events;
};

CommLedger make_ledger(Topology topo);
std::string edge_key(const std::string& a, const std::string& b);
void charge(CommLedger& ledger, const std::string& from, const std::string& to,
            int64_t dim, const std::string& tag);
/// Sum over edges of log_Q beta as an exact integer.
int64_t entanglement_cost(const CommLedger& ledger, int64_t q);
std::string export_ledger(const CommLedger& ledger, int64_t q);

}  // namespace qmdslab
