#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmdslab/field.hpp"
#include "qmdslab/qstate.hpp"

namespace qmdslab {

/// An [[n, 2t-n]]_Q code given by its K = Q^(2t-n) logical code states over
/// registers W1..Wn. Codes derived via derive_small_code carry no GRS
/// provenance (derived = true).
struct QmdsCode {
  int64_t q = 0;
  int n = 0;
  int t = 0;
  int k = 0;  // logical qudits, 2t - n
  int expected_distance = 0;
  bool derived = false;
  NestedCodePair pair;
  std::vector<QuditState> states;

  int64_t logical_count() const { return states.size(); }
  mutable std::map<std::vector<int>, Unitary> ut_cache;
};

QmdsCode build_code(const NestedCodePair& pair);

struct DistanceReport {
  int distance = 0;
  bool ok = false;
  std::string witness;  // violating (subset, operator, entry) when not ok
};
DistanceReport verify_distance(const QmdsCode& code);

struct HelperUnitary {
  std::vector<int> t_set;  // sorted, 1-based node indices
  Unitary u;               // Q^t x Q^t, column index lexicographic in (s, r)
  double residual = 0.0;   // max reconstruction deviation
};
HelperUnitary extract_helper_unitary(const QmdsCode& code, std::vector<int> t_set);

/// Cached access; extraction runs once per helper set.
const Unitary& helper_unitary(const QmdsCode& code, std::vector<int> t_set);

QmdsCode derive_small_code(const QmdsCode& code, const std::vector<int>& t_set);

/// |Phi> = K^(-1/2) sum_s |s>_R |phi_s>_W over registers R1..Rk, W1..Wn.
QuditState reference_encoding(const QmdsCode& code);

std::string code_descriptor(const QmdsCode& code);
QmdsCode load_descriptor(const std::string& text);

/// All size-w subsets of {1..n}, ascending within each subset.
std::vector<std::vector<int>> subsets_of_size(int n, int w);

}  // namespace qmdslab
