#include "qmdslab/field.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace qmdslab {

bool is_prime(int64_t p) {
  if (p < 2) return false;
  for (int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Field::Field(int64_t p) : p_(p) {
  if (p > 64) fail("TooLarge", "field modulus " + std::to_string(p) + " > 64");
  if (!is_prime(p)) fail("NotPrime", std::to_string(p) + " is not prime");
}

int64_t Field::pow(int64_t a, int64_t e) const {
  a %= p_;
  int64_t r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int64_t Field::inv(int64_t a) const {
  a %= p_;
  if (a == 0) fail("BadDimensions", "inverse of zero");
  return pow(a, p_ - 2);
}

int row_reduce(const Field& f, FieldMatrix& m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    const int64_t scale = f.inv(m[rank][col]);
    for (int c = col; c < cols; ++c) m[rank][c] = f.mul(m[rank][c], scale);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      const int64_t factor = m[r][col];
      for (int c = col; c < cols; ++c)
        m[r][c] = f.sub(m[r][c], f.mul(factor, m[rank][c]));
    }
    ++rank;
  }
  return rank;
}

int rank_of(const Field& f, FieldMatrix m) { return row_reduce(f, m); }

std::vector<int64_t> GrsCode::encode(const std::vector<int64_t>& message) const {
  if (static_cast<int>(message.size()) != k)
    fail("BadDimensions", "message length != k");
  std::vector<int64_t> word(n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i)
      word[j] = field.add(word[j], field.mul(message[i], generator[i][j]));
  return word;
}

GrsCode make_grs(const Field& field, int n, int k,
                 const std::vector<int64_t>& points,
                 const std::vector<int64_t>& multipliers) {
  if (k < 1 || k > n || n > field.modulus())
    fail("BadDimensions", "need 1 <= k <= n <= p");
  if (static_cast<int>(points.size()) != n ||
      static_cast<int>(multipliers.size()) != n)
    fail("BadDimensions", "points/multipliers length != n");
  std::set<int64_t> seen(points.begin(), points.end());
  if (static_cast<int>(seen.size()) != n)
    fail("DuplicatePoint", "evaluation points must be distinct");
  for (int64_t v : multipliers)
    if (v % field.modulus() == 0) fail("ZeroMultiplier", "multiplier is zero");

  GrsCode code{field, n, k, points, multipliers, {}};
  code.generator.assign(k, std::vector<int64_t>(n, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j)
      code.generator[i][j] =
          field.mul(multipliers[j] % field.modulus(), field.pow(points[j], i));
  return code;
}

NestedCodePair make_nested_pair(int64_t p, int n, int t) {
  if (!(1 < t && t < n && n <= 2 * t))
    fail("ParameterViolation", "need 1 < t < n <= 2t");
  Field field(p);
  if (n > p) fail("ParameterViolation", "need n <= p");

  std::vector<int64_t> points(n), mults(n, 1);
  for (int j = 0; j < n; ++j) points[j] = j;

  NestedCodePair pair{make_grs(field, n, t, points, mults),
                      make_grs(field, n, n - t, points, mults),
                      {}};

  // Extend inner's row space to outer's, keeping only the reduced remainders
  // so the choice of B is deterministic.
  FieldMatrix basis = pair.inner.generator;
  row_reduce(field, basis);
  for (const auto& row : pair.outer.generator) {
    std::vector<int64_t> rem = row;
    for (const auto& b : basis) {
      int pivot = 0;
      while (pivot < n && b[pivot] == 0) ++pivot;
      if (pivot == n) continue;
      const int64_t factor = rem[pivot];  // basis rows have unit pivots
      if (factor == 0) continue;
      for (int c = 0; c < n; ++c) rem[c] = field.sub(rem[c], field.mul(factor, b[c]));
    }
    int lead = 0;
    while (lead < n && rem[lead] == 0) ++lead;
    if (lead == n) continue;
    const int64_t scale = field.inv(rem[lead]);
    for (int c = 0; c < n; ++c) rem[c] = field.mul(rem[c], scale);
    pair.coset_rows.push_back(rem);
    basis.push_back(rem);
    row_reduce(field, basis);
  }
  if (static_cast<int>(pair.coset_rows.size()) != 2 * t - n)
    fail("ParameterViolation", "coset basis has wrong size");
  return pair;
}

}  // namespace qmdslab
