#include "qmdslab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace qmdslab {

namespace {

int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::vector<int> checked_t_set(const QmdsCode& code, std::vector<int> t_set,
                               bool exclude_n) {
  std::sort(t_set.begin(), t_set.end());
  if (static_cast<int>(t_set.size()) != code.t)
    fail("BadHelperSet", "helper set size != t");
  for (size_t i = 0; i < t_set.size(); ++i) {
    if (t_set[i] < 1 || t_set[i] > code.n) fail("BadHelperSet", "node out of range");
    if (i > 0 && t_set[i] == t_set[i - 1]) fail("BadHelperSet", "repeated node");
  }
  if (exclude_n && t_set.back() == code.n)
    fail("BadHelperSet", "the erased node n cannot be a helper");
  return t_set;
}

}  // namespace

QuditState build_psi_in(const QmdsCode& code, std::vector<int> t_set) {
  t_set = checked_t_set(code, t_set, false);
  const Unitary& u = helper_unitary(code, t_set);
  QuditState phi = reference_encoding(code);

  // Group (R, W_{[n]\T}) as one Q^t block and run the helper unitary on it.
  std::vector<std::string> block;
  for (int i = 1; i <= code.k; ++i) block.push_back("R" + std::to_string(i));
  std::vector<int> comp;
  for (int j = 1; j <= code.n; ++j)
    if (!std::binary_search(t_set.begin(), t_set.end(), j)) comp.push_back(j);
  for (int j : comp) block.push_back(node_name(j));

  QuditState psi = apply_unitary(phi, u, block);
  for (size_t p = 0; p < block.size(); ++p)
    psi = relabel(psi, block[p], "Wp" + std::to_string(t_set[p]));

  // The construction is only consistent if the result is the expected
  // product of maximally entangled pairs.
  std::vector<QuditState> pairs;
  for (int j : t_set)
    pairs.push_back(max_entangled(code.q, node_name(j), "Wp" + std::to_string(j)));
  if (fidelity(psi, tensor(pairs)) < 1.0 - 1e-9)
    fail("FidelityMismatch", "helper unitary gauge does not reproduce psi_in");
  return psi;
}

QuditState build_psi_out(const QmdsCode& code, std::vector<int> t_set,
                         const std::vector<Eigen::MatrixXcd>& g_list,
                         const Eigen::VectorXcd& eps) {
  t_set = checked_t_set(code, t_set, true);
  const int64_t q = code.q;
  const int nt = code.n - code.t;
  if (static_cast<int>(g_list.size()) != nt - 1)
    fail("BadDimensions", "expected n-t-1 single-qudit unitaries");
  for (const auto& g : g_list) {
    if (g.rows() != q || g.cols() != q) fail("BadDimensions", "G_i must be Q x Q");
    if ((g.adjoint() * g - Eigen::MatrixXcd::Identity(q, q)).cwiseAbs().maxCoeff() >
        1e-9)
      fail("NotUnitary", "G_i fails the unitarity check");
  }
  if (eps.size() != q) fail("BadDimensions", "eps must have length Q");
  if (std::abs(eps.squaredNorm() - 1.0) > 1e-9)
    fail("NotNormalized", "eps must be a unit vector");

  const Unitary& u = helper_unitary(code, t_set);
  const int64_t rcount = ipow(q, nt);
  const int64_t big_k = code.logical_count();
  const double scale = 1.0 / std::sqrt(double(ipow(q, code.t)));

  QuditState psi;
  for (int j : t_set) psi.regs.push_back({node_name(j), q});
  psi.regs.push_back({replacement_name(code.n), q});
  for (int j : t_set) psi.regs.push_back({"Wp" + std::to_string(j), q});

  const int64_t tdim = u.dim;
  std::vector<std::pair<int64_t, cplx>> acc;
  std::vector<int64_t> rdig(nt), xdig(nt);
  for (int64_t s = 0; s < big_k; ++s) {
    for (int64_t r = 0; r < rcount; ++r) {
      int64_t rem = r;
      for (int p = nt - 1; p >= 0; --p) {
        rdig[p] = rem % q;
        rem /= q;
      }
      // x runs over the kets feeding the primed-side helper unitary.
      for (int64_t x = 0; x < rcount; ++x) {
        int64_t xrem = x;
        for (int p = nt - 1; p >= 0; --p) {
          xdig[p] = xrem % q;
          xrem /= q;
        }
        cplx coeff(1.0, 0.0);
        for (int p = 0; p < nt - 1; ++p)
          coeff *= std::conj(g_list[p](rdig[p], xdig[p]));  // <x|G_p^dag|r>
        coeff *= eps(xdig[nt - 1]);
        if (coeff == cplx(0.0, 0.0)) continue;
        for (const auto& [row1, v1] : u.cols[s * rcount + r])
          for (const auto& [row2, v2] : u.cols[s * rcount + x]) {
            const int64_t index = (row1 * q + rdig[nt - 1]) * tdim + row2;
            acc.push_back({index, scale * v1 * coeff * v2});
          }
      }
    }
  }
  // Sort then merge duplicate indices; cheaper than hashing at this scale.
  std::sort(acc.begin(), acc.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  psi.amps.reserve(acc.size());
  for (const auto& [i, v] : acc) {
    if (!psi.amps.empty() && psi.amps.back().first == i)
      psi.amps.back().second += v;
    else
      psi.amps.push_back({i, v});
  }
  std::erase_if(psi.amps, [](const auto& e) { return e.second == cplx(0.0, 0.0); });
  return psi;
}

BoundCertificate certify_lower_bound(const QmdsCode& code, std::vector<int> t_set,
                                     const Topology& topo) {
  if (topo.kind != "h1" && topo.kind != "h2")
    fail("Unsupported", "bound certification needs a star topology");
  t_set = checked_t_set(code, t_set, false);
  const int e = topo.erased;
  if (e < 1 || e > code.n) fail("BadHelperSet", "bad erased index");

  // Normalize the erased index to n by the transposition (e n); the theorem
  // instance is label-invariant and the applied relabeling is recorded.
  BoundCertificate cert;
  cert.kind = topo.kind;
  int hub = 0;
  if (topo.kind == "h2") {
    for (int j : t_set)
      if (node_name(j) == topo.hub) hub = j;
    if (hub == 0) fail("HubNotHelper", "hub must be one of the helpers");
  }
  auto rename = [&](int j) { return j == e ? code.n : (j == code.n ? e : j); };
  std::vector<int> norm_t;
  for (int j : t_set) norm_t.push_back(rename(j));
  std::sort(norm_t.begin(), norm_t.end());
  const int norm_hub = hub ? rename(hub) : 0;
  cert.helpers = norm_t;
  if (e != code.n) {
    std::ostringstream os;
    os << "swapped node labels " << e << " and " << code.n;
    cert.relabeling = os.str();
  }

  QuditState psi_in = build_psi_in(code, norm_t);
  std::vector<Eigen::MatrixXcd> ident(code.n - code.t - 1,
                                      Eigen::MatrixXcd::Identity(code.q, code.q));
  Eigen::VectorXcd eps = Eigen::VectorXcd::Zero(code.q);
  eps(0) = 1.0;
  QuditState psi_out = build_psi_out(code, norm_t, ident, eps);

  const std::string what = replacement_name(code.n);
  for (int j : norm_t) {
    if (topo.kind == "h2" && j == norm_hub) continue;
    BoundTuple tup;
    tup.cut = {node_name(j), "Wp" + std::to_string(j)};
    tup.sr_in = schmidt(psi_in, tup.cut).rank;
    tup.sr_out = schmidt(psi_out, tup.cut).rank;
    tup.edge = edge_key(topo.kind == "h1" ? what : node_name(norm_hub),
                        node_name(j));
    int need = 0;
    int64_t have = tup.sr_in;
    while (have < tup.sr_out) {
      have *= code.q;
      ++need;
    }
    tup.required_logq = need;
    cert.conclusion += need;
    cert.tuples.push_back(std::move(tup));
  }
  if (topo.kind == "h2") {
    BoundTuple tup;
    tup.cut = {what};
    tup.sr_in = 1;  // the replacement qudit starts in a pure product state
    tup.sr_out = schmidt(psi_out, tup.cut).rank;
    tup.edge = edge_key(node_name(norm_hub), what);
    int need = 0;
    int64_t have = tup.sr_in;
    while (have < tup.sr_out) {
      have *= code.q;
      ++need;
    }
    tup.required_logq = need;
    cert.conclusion += need;
    cert.tuples.push_back(std::move(tup));
  }
  return cert;
}

std::string export_certificate(const BoundCertificate& cert) {
  std::ostringstream os;
  if (!cert.relabeling.empty()) os << "relabel=" << cert.relabeling << "\n";
  for (const auto& tup : cert.tuples) {
    os << "cut=";
    for (size_t i = 0; i < tup.cut.size(); ++i) os << (i ? "," : "") << tup.cut[i];
    os << " sr_in=" << tup.sr_in << " sr_out=" << tup.sr_out
       << " requires log_Q beta >= " << tup.required_logq << "\n";
  }
  os << "conclusion EC >= " << cert.conclusion << "\n";
  return os.str();
}

bool majorizes(std::vector<double> sigma, std::vector<double> mu) {
  auto check = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) {
      if (x < -1e-12) fail("NotAdistribution", "negative entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) fail("NotAdistribution", "entries must sum to 1");
  };
  check(sigma);
  check(mu);
  const size_t len = std::max(sigma.size(), mu.size());
  sigma.resize(len, 0.0);
  mu.resize(len, 0.0);
  std::sort(sigma.begin(), sigma.end(), std::greater<double>());
  std::sort(mu.begin(), mu.end(), std::greater<double>());
  double ps = 0.0, pm = 0.0;
  for (size_t i = 0; i < len; ++i) {
    ps += sigma[i];
    pm += mu[i];
    if (ps < pm - 1e-12) return false;
  }
  return true;
}

bool nielsen_feasible(std::vector<double> lambda_in,
                      std::vector<double> lambda_out) {
  auto to_probs = [](const std::vector<double>& l) {
    std::vector<double> p;
    double sum = 0.0;
    for (double x : l) {
      if (x < -1e-12) fail("NotNormalized", "negative Schmidt coefficient");
      p.push_back(x * x);
      sum += x * x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      fail("NotNormalized", "squared Schmidt coefficients must sum to 1");
    return p;
  };
  return majorizes(to_probs(lambda_out), to_probs(lambda_in));
}

EntropyReport verify_entropy_table(const QmdsCode& code) {
  // |Phi> (sparse) stays well under the amplitude cap for every code this
  // library can build, so the full subset sweep is always available.
  QuditState phi = reference_encoding(code);

  EntropyReport rep;
  rep.ok = true;
  for (int w = 1; w <= code.n; ++w)
    for (const auto& subset : subsets_of_size(code.n, w)) {
      std::vector<std::string> labels;
      for (int j : subset) labels.push_back(node_name(j));
      EntropyRow row;
      row.subset = subset;
      // For k = 0 the subset A = [n] covers the whole (pure) state.
      row.measured_logq = labels.size() == phi.regs.size()
                              ? 0.0
                              : schmidt(phi, labels).entropy_logq(code.q);
      row.expected_logq = double(std::min<int64_t>(w, 2 * code.t - w));
      row.pass = std::abs(row.measured_logq - row.expected_logq) <
                 1e-7 / std::log(double(code.q));
      if (!row.pass) rep.ok = false;
      rep.rows.push_back(std::move(row));
    }
  return rep;
}

ChiRankReport verify_chi_rank(const QmdsCode& code, const Eigen::VectorXcd& eps) {
  if (eps.size() != code.q) fail("BadDimensions", "eps must have length Q");
  if (std::abs(eps.squaredNorm() - 1.0) > 1e-9)
    fail("NotNormalized", "eps must be a unit vector");
  QuditState phi = reference_encoding(code);
  auto proj = project_bra(phi, node_name(code.n), eps);
  if (proj.weight < 1e-15)
    fail("ZeroProjection", "eps orthogonal to the W_n marginal support");

  ChiRankReport rep;
  rep.projection_weight = proj.weight;
  QuditState chi = normalize(proj.state);
  rep.ok = true;
  for (int j = 1; j < code.n; ++j) {
    const int64_t rank = schmidt(chi, {node_name(j)}).rank;
    rep.ranks.push_back(rank);
    if (rank != code.q) rep.ok = false;
  }
  return rep;
}

Eigen::MatrixXcd haar_random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const cplx d = r(c, c);
    if (std::abs(d) > 0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

}  // namespace qmdslab
