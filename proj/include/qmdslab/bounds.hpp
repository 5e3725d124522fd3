#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmdslab/network.hpp"
#include "qmdslab/qmds.hpp"
#include "qmdslab/qstate.hpp"

namespace qmdslab {

/// Product of maximally entangled pairs W_j W_j' obtained by re-applying the
/// helper unitary on the non-helper block of |Phi>.
QuditState build_psi_in(const QmdsCode& code, std::vector<int> t_set);

/// State just after the hypothetical repair protocol, synthesized directly:
/// g_list holds the n-t-1 single-qudit unitaries, eps the leftover pure state.
QuditState build_psi_out(const QmdsCode& code, std::vector<int> t_set,
                         const std::vector<Eigen::MatrixXcd>& g_list,
                         const Eigen::VectorXcd& eps);

struct BoundTuple {
  std::vector<std::string> cut;
  int64_t sr_in = 0;
  int64_t sr_out = 0;
  int required_logq = 0;
  std::string edge;
};

struct BoundCertificate {
  std::string kind;  // "h1" or "h2"
  std::vector<int> helpers;  // normalized so the erased index is n
  std::string relabeling;    // how (e, T) was normalized, if at all
  std::vector<BoundTuple> tuples;
  int64_t conclusion = 0;
};

BoundCertificate certify_lower_bound(const QmdsCode& code, std::vector<int> t_set,
                                     const Topology& topo);
std::string export_certificate(const BoundCertificate& cert);

bool majorizes(std::vector<double> sigma, std::vector<double> mu);
bool nielsen_feasible(std::vector<double> lambda_in,
                      std::vector<double> lambda_out);

struct EntropyRow {
  std::vector<int> subset;
  double measured_logq = 0.0;
  double expected_logq = 0.0;
  bool pass = false;
};
struct EntropyReport {
  std::vector<EntropyRow> rows;
  bool ok = false;
};
EntropyReport verify_entropy_table(const QmdsCode& code);

struct ChiRankReport {
  double projection_weight = 0.0;
  std::vector<int64_t> ranks;  // sr(W_j)_chi for j in [n-1]
  bool ok = false;
};
ChiRankReport verify_chi_rank(const QmdsCode& code, const Eigen::VectorXcd& eps);

Eigen::MatrixXcd haar_random_unitary(int dim, std::mt19937_64& rng);

}  // namespace qmdslab
