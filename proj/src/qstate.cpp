#include "qmdslab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qmdslab {

namespace {

const double kPi = 3.14159265358979323846;

std::vector<int64_t> digits_of(int64_t index, const std::vector<int64_t>& dims) {
  std::vector<int64_t> d(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    d[i] = index % dims[i];
    index /= dims[i];
  }
  return d;
}

// Positions (and validation) of the named registers within the state.
std::vector<int> resolve(const QuditState& s, const std::vector<std::string>& names,
                         const char* err_kind) {
  std::vector<int> idx;
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) fail(err_kind, "repeated register " + name);
    int i = s.reg_index(name);
    if (i < 0) fail(err_kind, "unknown register " + name);
    idx.push_back(i);
  }
  return idx;
}

}  // namespace

int QuditState::reg_index(const std::string& name) const {
  for (size_t i = 0; i < regs.size(); ++i)
    if (regs[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int64_t> QuditState::strides() const {
  std::vector<int64_t> st(regs.size(), 1);
  for (int i = static_cast<int>(regs.size()) - 2; i >= 0; --i)
    st[i] = st[i + 1] * regs[i + 1].dim;
  return st;
}

double QuditState::norm2() const {
  double n = 0;
  for (const auto& [i, v] : amps) n += std::norm(v);
  return n;
}

void QuditState::sort_amps() {
  std::sort(amps.begin(), amps.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

void QuditState::check_labels() const {
  std::set<std::string> seen;
  for (const auto& r : regs) {
    if (r.dim < 1) fail("BadDim", "register " + r.name + " has dim < 1");
    if (!seen.insert(r.name).second) fail("DuplicateLabel", r.name);
  }
}

QuditState basis_state(const std::vector<Register>& regs,
                       const std::vector<int64_t>& digits) {
  if (regs.size() != digits.size()) fail("BadDim", "digit count != register count");
  QuditState s;
  s.regs = regs;
  s.check_labels();
  int64_t index = 0;
  for (size_t i = 0; i < regs.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= regs[i].dim)
      fail("BadDim", "digit out of range for " + regs[i].name);
    index = index * regs[i].dim + digits[i];
  }
  s.amps.push_back({index, cplx(1.0, 0.0)});
  return s;
}

QuditState tensor(const std::vector<QuditState>& states) {
  QuditState out;
  out.amps.push_back({0, cplx(1.0, 0.0)});
  for (const auto& s : states) {
    const int64_t d = s.dim();
    std::vector<std::pair<int64_t, cplx>> next;
    if (static_cast<int64_t>(out.amps.size()) * static_cast<int64_t>(s.amps.size()) >
        kMaxAmplitudes)
      fail("SizeCap", "tensor product exceeds amplitude cap");
    next.reserve(out.amps.size() * s.amps.size());
    for (const auto& [i1, v1] : out.amps)
      for (const auto& [i2, v2] : s.amps) next.push_back({i1 * d + i2, v1 * v2});
    out.amps = std::move(next);
    out.regs.insert(out.regs.end(), s.regs.begin(), s.regs.end());
  }
  out.check_labels();
  out.sort_amps();
  return out;
}

QuditState max_entangled(int64_t m, const std::string& label_a,
                         const std::string& label_b) {
  if (m < 2) fail("BadDim", "maximally entangled state needs dim >= 2");
  QuditState s;
  s.regs = {{label_a, m}, {label_b, m}};
  s.check_labels();
  const double a = 1.0 / std::sqrt(double(m));
  for (int64_t i = 0; i < m; ++i) s.amps.push_back({i * m + i, cplx(a, 0.0)});
  return s;
}

QuditState normalize(const QuditState& s) {
  const double n = std::sqrt(s.norm2());
  if (n < 1e-300) fail("ZeroProjection", "cannot normalize the zero vector");
  QuditState out = s;
  for (auto& [i, v] : out.amps) v /= n;
  return out;
}

QuditState relabel(const QuditState& s, const std::string& from,
                   const std::string& to) {
  int i = s.reg_index(from);
  if (i < 0) fail("LabelMismatch", "unknown register " + from);
  QuditState out = s;
  out.regs[i].name = to;
  out.check_labels();
  return out;
}

Unitary Unitary::from_dense(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) fail("BadDimensions", "unitary must be square");
  Unitary u;
  u.dim = m.rows();
  u.cols.resize(u.dim);
  for (int64_t c = 0; c < u.dim; ++c)
    for (int64_t r = 0; r < u.dim; ++r)
      if (m(r, c) != cplx(0.0, 0.0)) u.cols[c].push_back({r, m(r, c)});
  return u;
}

Unitary Unitary::adjoint() const {
  Unitary out;
  out.dim = dim;
  out.cols.resize(dim);
  for (int64_t c = 0; c < dim; ++c)
    for (const auto& [r, v] : cols[c]) out.cols[r].push_back({c, std::conj(v)});
  out.verified = verified;
  return out;
}

double Unitary::unitarity_defect() const {
  // U†U entries accumulated through shared rows; works in O(sum of row fill^2).
  std::vector<std::vector<std::pair<int64_t, cplx>>> rows(dim);
  for (int64_t c = 0; c < dim; ++c)
    for (const auto& [r, v] : cols[c]) rows[r].push_back({c, v});
  std::unordered_map<int64_t, cplx> acc;
  for (int64_t r = 0; r < dim; ++r)
    for (const auto& [c1, v1] : rows[r])
      for (const auto& [c2, v2] : rows[r]) acc[c1 * dim + c2] += std::conj(v1) * v2;
  double defect = 0.0;
  for (int64_t c = 0; c < dim; ++c) {
    auto it = acc.find(c * dim + c);
    const cplx diag = (it == acc.end()) ? cplx(0.0, 0.0) : it->second;
    defect = std::max(defect, std::abs(diag - cplx(1.0, 0.0)));
  }
  for (const auto& [key, v] : acc)
    if (key / dim != key % dim) defect = std::max(defect, std::abs(v));
  return defect;
}

void Unitary::require_unitary(double tol) {
  if (verified) return;
  if (unitarity_defect() > tol) fail("NotUnitary", "matrix fails the unitarity check");
  verified = true;
}

Eigen::MatrixXcd generalized_pauli(int64_t q, int64_t a, int64_t b) {
  if (q < 2) fail("BadDim", "pauli dimension < 2");
  if (a < 0 || a >= q || b < 0 || b >= q)
    fail("OutOfRange", "pauli exponents must lie in [0, Q)");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
  for (int64_t j = 0; j < q; ++j) {
    const double phase = 2.0 * kPi * double(j * b) / double(q);
    m((j + a) % q, j) = std::polar(1.0, phase);
  }
  return m;
}

Eigen::MatrixXcd fourier_matrix(int64_t q) {
  if (q < 2) fail("BadDim", "fourier dimension < 2");
  Eigen::MatrixXcd m(q, q);
  const double a = 1.0 / std::sqrt(double(q));
  for (int64_t r = 0; r < q; ++r)
    for (int64_t c = 0; c < q; ++c)
      m(r, c) = std::polar(a, 2.0 * kPi * double(r * c) / double(q));
  return m;
}

Unitary csum_unitary(int64_t d1, int64_t d2, int sign) {
  if (d1 < 2 || d2 < 2 || d1 > d2) fail("BadDim", "csum needs 2 <= d1 <= d2");
  Unitary u;
  u.dim = d1 * d2;
  u.cols.resize(u.dim);
  for (int64_t x = 0; x < d1; ++x)
    for (int64_t y = 0; y < d2; ++y) {
      const int64_t yy = ((y + sign * x) % d2 + d2) % d2;
      u.cols[x * d2 + y].push_back({x * d2 + yy, cplx(1.0, 0.0)});
    }
  u.verified = true;
  return u;
}

QuditState apply_unitary(const QuditState& s, Unitary u,
                         const std::vector<std::string>& targets) {
  const auto idx = resolve(s, targets, "LabelMismatch");
  const auto st = s.strides();
  int64_t tdim = 1;
  std::vector<int64_t> tstride(idx.size()), tdims(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) {
    tdims[k] = s.regs[idx[k]].dim;
    tdim *= tdims[k];
    tstride[k] = st[idx[k]];
  }
  if (tdim != u.dim) fail("DimensionMismatch", "unitary dim != product of target dims");
  u.require_unitary();

  // Global offset of each target sub-index, to splice new digits back in.
  std::vector<int64_t> offset(tdim, 0);
  for (int64_t r = 0; r < tdim; ++r) {
    int64_t rem = r;
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
      offset[r] += (rem % tdims[k]) * tstride[k];
      rem /= tdims[k];
    }
  }

  std::unordered_map<int64_t, cplx> out;
  out.reserve(s.amps.size() * 2);
  for (const auto& [i, v] : s.amps) {
    int64_t c = 0;
    for (size_t k = 0; k < idx.size(); ++k)
      c = c * tdims[k] + (i / tstride[k]) % tdims[k];
    const int64_t base = i - offset[c];
    for (const auto& [row, uval] : u.cols[c]) out[base + offset[row]] += uval * v;
    if (static_cast<int64_t>(out.size()) > kMaxAmplitudes)
      fail("SizeCap", "apply_unitary exceeds amplitude cap");
  }

  QuditState res;
  res.regs = s.regs;
  res.amps.reserve(out.size());
  for (const auto& [i, v] : out)
    if (v != cplx(0.0, 0.0)) res.amps.push_back({i, v});
  res.sort_amps();
  return res;
}

QuditState apply_unitary(const QuditState& s, const Eigen::MatrixXcd& u,
                         const std::vector<std::string>& targets) {
  return apply_unitary(s, Unitary::from_dense(u), targets);
}

SchmidtData schmidt(const QuditState& s, const std::vector<std::string>& part_a) {
  if (part_a.empty()) fail("BadPartition", "part A is empty");
  const auto idx = resolve(s, part_a, "BadPartition");
  if (idx.size() >= s.regs.size()) fail("BadPartition", "part A must be a proper subset");
  const auto st = s.strides();
  int64_t da = 1, db = 1;
  std::vector<char> in_a(s.regs.size(), 0);
  for (int i : idx) in_a[i] = 1;
  for (size_t i = 0; i < s.regs.size(); ++i)
    (in_a[i] ? da : db) *= s.regs[i].dim;

  // Row/column coordinates of every stored amplitude in the (dA x dB) reshape.
  // Mixed-radix weights in register order keep both sides canonical.
  std::vector<int64_t> ra(s.amps.size()), cb(s.amps.size());
  {
    const int nregs = static_cast<int>(s.regs.size());
    std::vector<int64_t> wa(nregs, 0), wb(nregs, 0);
    int64_t ma = 1, mb = 1;
    for (int j = nregs - 1; j >= 0; --j) {
      if (in_a[j]) {
        wa[j] = ma;
        ma *= s.regs[j].dim;
      } else {
        wb[j] = mb;
        mb *= s.regs[j].dim;
      }
    }
    for (size_t k = 0; k < s.amps.size(); ++k) {
      int64_t rem = s.amps[k].first, a = 0, b = 0;
      for (int j = nregs - 1; j >= 0; --j) {
        const int64_t digit = rem % s.regs[j].dim;
        rem /= s.regs[j].dim;
        a += digit * wa[j];
        b += digit * wb[j];
      }
      ra[k] = a;
      cb[k] = b;
    }
  }

  // All grouping below runs on a permutation sorted by one of the two keys;
  // this keeps the hot path free of hash tables.
  const size_t m = s.amps.size();
  auto sorted_by = [&](const std::vector<int64_t>& key) {
    std::vector<int32_t> ord(m);
    int64_t dkey = 0;
    for (size_t k = 0; k < m; ++k) dkey = std::max(dkey, key[k] + 1);
    if (dkey <= int64_t(4) * int64_t(m) + 1024) {
      // Counting sort: key spaces here are usually no larger than the state.
      std::vector<int32_t> heads(dkey + 1, 0);
      for (size_t k = 0; k < m; ++k) ++heads[key[k] + 1];
      for (int64_t i = 0; i < dkey; ++i) heads[i + 1] += heads[i];
      for (size_t k = 0; k < m; ++k) ord[heads[key[k]]++] = static_cast<int32_t>(k);
    } else if (dkey < (int64_t(1) << 37)) {
      std::vector<uint64_t> packed(m);
      for (size_t k = 0; k < m; ++k)
        packed[k] = (static_cast<uint64_t>(key[k]) << 27) | k;
      std::sort(packed.begin(), packed.end());
      for (size_t k = 0; k < m; ++k)
        ord[k] = static_cast<int32_t>(packed[k] & ((uint64_t(1) << 27) - 1));
    } else {
      for (size_t k = 0; k < m; ++k) ord[k] = static_cast<int32_t>(k);
      std::sort(ord.begin(), ord.end(),
                [&](int32_t x, int32_t y) { return key[x] < key[y]; });
    }
    return ord;
  };
  auto all_distinct = [&](const std::vector<int32_t>& ord,
                          const std::vector<int64_t>& key) {
    for (size_t k = 1; k < ord.size(); ++k)
      if (key[ord[k]] == key[ord[k - 1]]) return false;
    return true;
  };

  const auto by_col = sorted_by(cb);
  const bool cols_single = all_distinct(by_col, cb);
  std::vector<int32_t> by_row;
  bool rows_single = false;
  if (!cols_single) {
    by_row = sorted_by(ra);
    rows_single = all_distinct(by_row, ra);
  }

  std::vector<double> lambda;
  if (cols_single || rows_single) {
    // One entry per column (row) makes the rows (columns) exactly orthogonal,
    // so singular values are plain row (column) norms.
    const auto& key = cols_single ? ra : cb;
    const auto ord = cols_single ? sorted_by(ra) : by_col;
    size_t k = 0;
    while (k < m) {
      double n2 = 0.0;
      const int64_t group = key[ord[k]];
      for (; k < m && key[ord[k]] == group; ++k) n2 += std::norm(s.amps[ord[k]].second);
      lambda.push_back(std::sqrt(n2));
    }
  } else {
    const bool a_small = da <= db;
    const int64_t dsmall = a_small ? da : db;
    if (dsmall > 16384) fail("SizeCap", "schmidt: both sides of the cut are too large");
    const auto& big_key = a_small ? cb : ra;
    const auto& small_key = a_small ? ra : cb;
    const auto& ord = a_small ? by_col : by_row;
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(dsmall, dsmall);
    size_t k = 0;
    while (k < m) {
      const size_t begin = k;
      const int64_t group = big_key[ord[k]];
      while (k < m && big_key[ord[k]] == group) ++k;
      for (size_t p = begin; p < k; ++p)
        for (size_t q = begin; q < k; ++q)
          gram(small_key[ord[p]], small_key[ord[q]]) +=
              std::conj(s.amps[ord[p]].second) * s.amps[ord[q]].second;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                       Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double clip = ev.cwiseAbs().maxCoeff() * double(std::max(da, db)) *
                        std::numeric_limits<double>::epsilon();
    for (int64_t i = 0; i < ev.size(); ++i)
      lambda.push_back(ev(i) > clip ? std::sqrt(ev(i)) : 0.0);
  }

  std::sort(lambda.begin(), lambda.end(), std::greater<double>());
  SchmidtData data;
  data.lambda = std::move(lambda);
  for (double l : data.lambda) {
    if (l > 1e-8) ++data.rank;
    const double p = l * l;
    if (p > 0.0) data.entropy -= p * std::log(p);
  }
  return data;
}

PartialInnerResult partial_inner(const QuditState& s,
                                 const std::vector<int64_t>& bra_values,
                                 const std::vector<std::string>& registers) {
  if (bra_values.size() != registers.size())
    fail("BadPartition", "value count != register count");
  const auto idx = resolve(s, registers, "BadPartition");
  const auto st = s.strides();
  for (size_t k = 0; k < idx.size(); ++k)
    if (bra_values[k] < 0 || bra_values[k] >= s.regs[idx[k]].dim)
      fail("BadPartition", "bra value out of range");

  std::vector<char> drop(s.regs.size(), 0);
  for (int i : idx) drop[i] = 1;

  PartialInnerResult res;
  for (size_t i = 0; i < s.regs.size(); ++i)
    if (!drop[i]) res.state.regs.push_back(s.regs[i]);

  for (const auto& [i, v] : s.amps) {
    bool match = true;
    for (size_t k = 0; k < idx.size() && match; ++k)
      match = ((i / st[idx[k]]) % s.regs[idx[k]].dim) == bra_values[k];
    if (!match) continue;
    int64_t out = 0;
    for (size_t j = 0; j < s.regs.size(); ++j)
      if (!drop[j]) out = out * s.regs[j].dim + (i / st[j]) % s.regs[j].dim;
    res.state.amps.push_back({out, v});
    res.weight += std::norm(v);
  }
  res.state.sort_amps();
  return res;
}

PartialInnerResult project_bra(const QuditState& s, const std::string& reg,
                               const Eigen::VectorXcd& bra) {
  const int pos = s.reg_index(reg);
  if (pos < 0) fail("BadPartition", "unknown register " + reg);
  if (bra.size() != s.regs[pos].dim) fail("BadPartition", "bra length != register dim");
  const auto st = s.strides();

  PartialInnerResult res;
  for (size_t i = 0; i < s.regs.size(); ++i)
    if (static_cast<int>(i) != pos) res.state.regs.push_back(s.regs[i]);

  std::unordered_map<int64_t, cplx> out;
  for (const auto& [i, v] : s.amps) {
    const int64_t digit = (i / st[pos]) % s.regs[pos].dim;
    const cplx coeff = std::conj(bra(digit)) * v;
    if (coeff == cplx(0.0, 0.0)) continue;
    int64_t o = 0;
    for (size_t j = 0; j < s.regs.size(); ++j)
      if (static_cast<int>(j) != pos)
        o = o * s.regs[j].dim + (i / st[j]) % s.regs[j].dim;
    out[o] += coeff;
  }
  for (const auto& [i, v] : out)
    if (v != cplx(0.0, 0.0)) {
      res.state.amps.push_back({i, v});
      res.weight += std::norm(v);
    }
  res.state.sort_amps();
  return res;
}

MeasureResult measure_with_rng(const QuditState& s,
                               const std::vector<std::string>& registers,
                               std::mt19937_64& rng, int64_t forced) {
  const auto idx = resolve(s, registers, "BadPartition");
  const auto st = s.strides();
  std::vector<int64_t> dims;
  for (int i : idx) dims.push_back(s.regs[i].dim);

  std::map<int64_t, double> prob;  // ordered for deterministic sampling
  for (const auto& [i, v] : s.amps) {
    int64_t o = 0;
    for (size_t k = 0; k < idx.size(); ++k)
      o = o * dims[k] + (i / st[idx[k]]) % dims[k];
    prob[o] += std::norm(v);
  }

  int64_t outcome = -1;
  if (forced >= 0) {
    auto it = prob.find(forced);
    if (it == prob.end() || it->second < 1e-15)
      fail("ZeroProjection", "forced outcome has zero probability");
    outcome = forced;
  } else {
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (const auto& [o, p] : prob) {
      outcome = o;
      if (u < p) break;
      u -= p;
    }
  }

  MeasureResult res;
  res.outcome = digits_of(outcome, dims);
  res.probability = prob[outcome];
  res.state.regs = s.regs;
  const double scale = 1.0 / std::sqrt(res.probability);
  for (const auto& [i, v] : s.amps) {
    int64_t o = 0;
    for (size_t k = 0; k < idx.size(); ++k)
      o = o * dims[k] + (i / st[idx[k]]) % dims[k];
    if (o == outcome) res.state.amps.push_back({i, v * scale});
  }
  return res;
}

MeasureResult measure_computational(const QuditState& s,
                                    const std::vector<std::string>& registers,
                                    uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return measure_with_rng(s, registers, rng);
}

TeleportResult teleport(const QuditState& s, const std::string& source,
                        const std::string& res_a, const std::string& res_b,
                        std::mt19937_64& rng, std::vector<int64_t>* classical_log,
                        int64_t forced_f, int64_t forced_s) {
  const int ps = s.reg_index(source), pa = s.reg_index(res_a), pb = s.reg_index(res_b);
  if (ps < 0 || pa < 0 || pb < 0) fail("LabelMismatch", "teleport register missing");
  const int64_t d = s.regs[ps].dim, m = s.regs[pa].dim;
  if (s.regs[pb].dim != m) fail("ResourceTooSmall", "resource halves differ in dim");
  if (m < d) fail("ResourceTooSmall", "resource dim below source dim");

  QuditState cur = apply_unitary(s, csum_unitary(d, m, -1), {source, res_a});
  cur = apply_unitary(cur, fourier_matrix(d), {source});

  int64_t forced = -1;
  if (forced_f >= 0 && forced_s >= 0) forced = forced_f * m + forced_s;
  MeasureResult mr = measure_with_rng(cur, {source, res_a}, rng, forced);
  const int64_t b = mr.outcome[0], a = mr.outcome[1];

  // X^{-a} then the d-level phase correction on B.
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(m, m);
  for (int64_t y = 0; y < m; ++y) shift(((y - a) % m + m) % m, y) = 1.0;
  QuditState fixed = apply_unitary(mr.state, shift, {res_b});
  Eigen::MatrixXcd phase = Eigen::MatrixXcd::Identity(m, m);
  for (int64_t x = 0; x < d; ++x)
    phase(x, x) = std::polar(1.0, -2.0 * kPi * double(x * b) / double(d));
  fixed = apply_unitary(fixed, phase, {res_b});

  auto dropped = partial_inner(fixed, {b, a}, {source, res_a});
  TeleportResult res;
  res.state = normalize(dropped.state);
  res.m_fourier = b;
  res.m_shift = a;
  if (classical_log) {
    classical_log->push_back(b);
    classical_log->push_back(a);
  }
  return res;
}

double fidelity(const QuditState& s1, const QuditState& s2) {
  if (s1.regs.size() != s2.regs.size()) fail("LabelMismatch", "register sets differ");
  std::vector<int> map2(s2.regs.size());  // s2 position for each s1 register
  for (size_t i = 0; i < s1.regs.size(); ++i) {
    const int j = s2.reg_index(s1.regs[i].name);
    if (j < 0 || s2.regs[j].dim != s1.regs[i].dim)
      fail("LabelMismatch", "register sets differ");
    map2[i] = j;
  }
  const auto st1 = s1.strides(), st2 = s2.strides();
  std::unordered_map<int64_t, cplx> lut;
  lut.reserve(s2.amps.size() * 2);
  for (const auto& [i, v] : s2.amps) lut[i] = v;

  cplx overlap(0.0, 0.0);
  for (const auto& [i, v] : s1.amps) {
    int64_t j = 0;
    for (size_t k = 0; k < s1.regs.size(); ++k)
      j += ((i / st1[k]) % s1.regs[k].dim) * st2[map2[k]];
    auto it = lut.find(j);
    if (it != lut.end()) overlap += std::conj(v) * it->second;
  }
  return std::norm(overlap);
}

std::string dump_state(const QuditState& s) {
  std::ostringstream os;
  os << "qstate v1; labels=";
  for (size_t i = 0; i < s.regs.size(); ++i)
    os << (i ? "," : "") << s.regs[i].name;
  os << "; dims=";
  for (size_t i = 0; i < s.regs.size(); ++i)
    os << (i ? "," : "") << s.regs[i].dim;
  os << "\n";
  char buf[128];
  for (const auto& [i, v] : s.amps) {
    if (std::abs(v) <= 1e-12) continue;
    std::snprintf(buf, sizeof buf, "%lld %.17g %.17g\n",
                  static_cast<long long>(i), v.real(), v.imag());
    os << buf;
  }
  return os.str();
}

QuditState load_state(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header) || header.rfind("qstate v1; labels=", 0) != 0)
    fail("BadDimensions", "bad qstate header");
  const size_t dims_at = header.find("; dims=");
  if (dims_at == std::string::npos) fail("BadDimensions", "bad qstate header");
  const std::string labels = header.substr(18, dims_at - 18);
  const std::string dims = header.substr(dims_at + 7);

  QuditState s;
  std::istringstream ls(labels), ds(dims);
  std::string tok;
  while (std::getline(ls, tok, ',')) s.regs.push_back({tok, 0});
  size_t k = 0;
  while (std::getline(ds, tok, ',')) {
    if (k >= s.regs.size()) fail("BadDimensions", "label/dim count mismatch");
    s.regs[k++].dim = std::stoll(tok);
  }
  if (k != s.regs.size()) fail("BadDimensions", "label/dim count mismatch");
  s.check_labels();

  int64_t index;
  double re, im;
  while (is >> index >> re >> im) s.amps.push_back({index, cplx(re, im)});
  s.sort_amps();
  return s;
}

}  // namespace qmdslab
