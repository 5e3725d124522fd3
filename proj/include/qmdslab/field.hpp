#pragma once

#include <cstdint>
#include <vector>

#include "qmdslab/error.hpp"

namespace qmdslab {

using FieldMatrix = std::vector<std::vector<int64_t>>;

/// Arithmetic over GF(p) for a prime p in [2, 64]. Elements are plain
/// int64_t values kept in [0, p).
class Field {
 public:
  Field() : p_(2) {}  // default-constructible for aggregate members
  explicit Field(int64_t p);

  int64_t modulus() const { return p_; }

  int64_t add(int64_t a, int64_t b) const { return (a + b) % p_; }
  int64_t sub(int64_t a, int64_t b) const { return ((a - b) % p_ + p_) % p_; }
  int64_t mul(int64_t a, int64_t b) const { return (a * b) % p_; }
  int64_t neg(int64_t a) const { return (p_ - a % p_) % p_; }
  int64_t pow(int64_t a, int64_t e) const;
  int64_t inv(int64_t a) const;

 private:
  int64_t p_;
};

bool is_prime(int64_t p);

/// Reduce `m` to row echelon form in place with lowest-index pivoting.
/// Returns the rank.
int row_reduce(const Field& f, FieldMatrix& m);

int rank_of(const Field& f, FieldMatrix m);

/// Generalized Reed-Solomon code over GF(p): rows of the generator are
/// v_j-scaled evaluations of x^0..x^{k-1} at the points alpha_j.
struct GrsCode {
  Field field;
  int n = 0;
  int k = 0;
  std::vector<int64_t> points;
  std::vector<int64_t> multipliers;
  FieldMatrix generator;  // k x n

  std::vector<int64_t> encode(const std::vector<int64_t>& message) const;
};

GrsCode make_grs(const Field& field, int n, int k,
                 const std::vector<int64_t>& points,
                 const std::vector<int64_t>& multipliers);

/// inner (dim n-t) nested in outer (dim t), same points/multipliers,
/// with coset rows B extending inner's generator to a basis of outer.
struct NestedCodePair {
  GrsCode outer;
  GrsCode inner;
  FieldMatrix coset_rows;  // (2t-n) x n

  int n() const { return outer.n; }
  int t() const { return outer.k; }
  int logical_qudits() const { return 2 * t() - n(); }
};

NestedCodePair make_nested_pair(int64_t p, int n, int t);

}  // namespace qmdslab
