#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qmdslab/error.hpp"

namespace qmdslab {

using cplx = std::complex<double>;

// Hard cap on stored amplitudes; exceeding it is an error, never truncation.
inline constexpr int64_t kMaxAmplitudes = int64_t(1) << 26;

struct Register {
  std::string name;
  int64_t dim = 0;
};

/// Pure state over an ordered list of labeled registers. Amplitudes are kept
/// as a sorted (index, value) list; exact zeros are never stored. regs[0] is
/// the most significant digit of the index.
class QuditState {
 public:
  std::vector<Register> regs;
  std::vector<std::pair<int64_t, cplx>> amps;  // sorted by index

  int64_t dim() const {
    int64_t d = 1;
    for (const auto& r : regs) d *= r.dim;
    return d;
  }
  int reg_index(const std::string& name) const;  // -1 if absent
  std::vector<int64_t> strides() const;
  double norm2() const;
  void sort_amps();
  void check_labels() const;  // unique labels, dims >= 1
};

QuditState basis_state(const std::vector<Register>& regs,
                       const std::vector<int64_t>& digits);
QuditState tensor(const std::vector<QuditState>& states);
QuditState max_entangled(int64_t m, const std::string& label_a,
                         const std::string& label_b);
QuditState normalize(const QuditState& s);
QuditState relabel(const QuditState& s, const std::string& from,
                   const std::string& to);

/// Column-sparse unitary over a d-dimensional space. Dense matrices are
/// converted on entry; exact zero entries are dropped.
struct Unitary {
  int64_t dim = 0;
  std::vector<std::vector<std::pair<int64_t, cplx>>> cols;
  bool verified = false;  // unitarity already checked

  static Unitary from_dense(const Eigen::MatrixXcd& m);
  Unitary adjoint() const;
  double unitarity_defect() const;  // max |U†U - I| entry
  void require_unitary(double tol = 1e-9);
};

Eigen::MatrixXcd generalized_pauli(int64_t q, int64_t a, int64_t b);
Eigen::MatrixXcd fourier_matrix(int64_t q);
/// |x>|y> -> |x>|y + sign*x mod d2>; requires d1 <= d2.
Unitary csum_unitary(int64_t d1, int64_t d2, int sign);

QuditState apply_unitary(const QuditState& s, Unitary u,
                         const std::vector<std::string>& targets);
QuditState apply_unitary(const QuditState& s, const Eigen::MatrixXcd& u,
                         const std::vector<std::string>& targets);

struct SchmidtData {
  std::vector<double> lambda;  // descending
  int64_t rank = 0;            // count of lambda > 1e-8
  double entropy = 0.0;        // natural log units
  double entropy_logq(int64_t q) const { return entropy / std::log(double(q)); }
};
SchmidtData schmidt(const QuditState& s, const std::vector<std::string>& part_a);

struct PartialInnerResult {
  QuditState state;  // unnormalized, contracted registers removed
  double weight = 0.0;
};
PartialInnerResult partial_inner(const QuditState& s,
                                 const std::vector<int64_t>& bra_values,
                                 const std::vector<std::string>& registers);
/// Contract an arbitrary <bra| on one register.
PartialInnerResult project_bra(const QuditState& s, const std::string& reg,
                               const Eigen::VectorXcd& bra);

struct MeasureResult {
  std::vector<int64_t> outcome;  // one digit per measured register
  double probability = 0.0;
  QuditState state;  // collapsed and renormalized; registers retained
};
MeasureResult measure_computational(const QuditState& s,
                                    const std::vector<std::string>& registers,
                                    uint64_t rng_seed);
MeasureResult measure_with_rng(const QuditState& s,
                               const std::vector<std::string>& registers,
                               std::mt19937_64& rng, int64_t forced = -1);

struct TeleportResult {
  QuditState state;  // source and resource-A registers consumed
  int64_t m_fourier = 0;
  int64_t m_shift = 0;
};
/// Relocate `source` into resource register B; the resource pair (A, B) must
/// be |M+> with M >= dim(source). Two classical symbols (the measurement
/// outcomes) are appended to classical_log if given.
TeleportResult teleport(const QuditState& s, const std::string& source,
                        const std::string& res_a, const std::string& res_b,
                        std::mt19937_64& rng,
                        std::vector<int64_t>* classical_log = nullptr,
                        int64_t forced_f = -1, int64_t forced_s = -1);

double fidelity(const QuditState& s1, const QuditState& s2);

std::string dump_state(const QuditState& s);
QuditState load_state(const std::string& text);

}  // namespace qmdslab
