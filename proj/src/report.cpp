#include "qmdslab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "qmdslab/bounds.hpp"
#include "qmdslab/parallel.hpp"
#include "qmdslab/protocol.hpp"

namespace qmdslab {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string subset_tag(const std::vector<int>& subset) {
  std::string s;
  for (int j : subset) s += std::to_string(j);
  return s;
}

void add_claim(VerificationReport& rep, std::string id, std::string anchor,
               double measured, double expected, double tol) {
  Claim c;
  c.id = std::move(id);
  c.anchor = std::move(anchor);
  c.measured = measured;
  c.expected = expected;
  c.tol = tol;
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= tol;
  rep.claims.push_back(std::move(c));
}

std::vector<double> random_dist(std::mt19937_64& rng, int len) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(len);
  double sum = 0.0;
  for (double& x : p) {
    x = expo(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

Eigen::VectorXcd random_unit_vector(int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (int64_t i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

void suite_distance(const QmdsCode& code, VerificationReport& rep) {
  DistanceReport dr = verify_distance(code);
  add_claim(rep, "def-2.3-distance", "minimum distance D = n - t + 1",
            double(dr.distance), double(code.n - code.t + 1), 0.0);
  add_claim(rep, "def-2.3-singleton", "Singleton equality 2(D - 1) = n - k",
            double(2 * (dr.distance - 1)), double(code.n - code.k), 0.0);
}

void suite_marginals(const QmdsCode& code, VerificationReport& rep) {
  auto subsets = subsets_of_size(code.n, code.n - code.t);
  for (int64_t i = 0; i < code.logical_count(); ++i) {
    double worst = 0.0;
    for (const auto& subset : subsets) {
      std::vector<std::string> labels;
      for (int j : subset) labels.push_back(node_name(j));
      worst = std::max(worst, mixedness_defect(code.states[i], labels));
    }
    add_claim(rep, "app-b-marginal-s" + std::to_string(i),
              "every (n-t)-qudit marginal of a code state is maximally mixed",
              worst, 0.0, 1e-8);
  }
}

void suite_unitary(const QmdsCode& code, VerificationReport& rep) {
  for (const auto& t_set : subsets_of_size(code.n, code.t)) {
    HelperUnitary hu = extract_helper_unitary(code, t_set);
    add_claim(rep, "lem-2.4-ut-T" + subset_tag(t_set),
              "helper unitary reconstructs the code states on T", hu.residual,
              0.0, 1e-8);
  }
}

void suite_small_code(const QmdsCode& code, VerificationReport& rep) {
  std::vector<int> t_set;
  for (int j = 1; j <= code.t; ++j) t_set.push_back(j);
  QmdsCode small = derive_small_code(code, t_set);

  DistanceReport dr = verify_distance(small);
  add_claim(rep, "lem-2.5-derived-distance",
            "derived [[t+1, t-1]] code has distance 2", double(dr.distance), 2.0,
            0.0);
  add_claim(rep, "lem-2.5-derived-singleton",
            "derived code meets the Singleton equality",
            double(2 * (dr.distance - 1)), double(small.n - small.k), 0.0);

  double ortho = 0.0;
  for (int64_t i = 0; i < small.logical_count(); ++i)
    for (int64_t j = 0; j <= i; ++j) {
      const double f = fidelity(small.states[i], small.states[j]);
      ortho = std::max(ortho, std::abs(f - (i == j ? 1.0 : 0.0)));
    }
  add_claim(rep, "lem-2.5-derived-ortho", "derived code states are orthonormal",
            ortho, 0.0, 1e-9);

  double worst = 0.0;
  for (const auto& state : small.states)
    for (int j = 1; j <= small.n; ++j)
      worst = std::max(worst, mixedness_defect(state, {node_name(j)}));
  add_claim(rep, "lem-2.5-derived-marginal",
            "derived code single-qudit marginals are maximally mixed", worst,
            0.0, 1e-8);
}

void suite_entropy_table(const QmdsCode& code, VerificationReport& rep) {
  EntropyReport er = verify_entropy_table(code);
  for (const auto& row : er.rows)
    add_claim(rep, "lem-c.1-entropy-A" + subset_tag(row.subset),
              "S(W_A) = min(|A|, 2t - |A|) log Q", row.measured_logq,
              row.expected_logq, 1e-7);
}

void suite_chi_rank(const QmdsCode& code, const SuiteConfig& cfg,
                    VerificationReport& rep) {
  Eigen::VectorXcd eps = Eigen::VectorXcd::Zero(code.q);
  eps(0) = 1.0;
  ChiRankReport cr = verify_chi_rank(code, eps);
  for (int j = 1; j < code.n; ++j)
    add_claim(rep, "lem-c.2-chi-rank-j" + std::to_string(j),
              "sr(W_j) = Q on the projected state chi", double(cr.ranks[j - 1]),
              double(code.q), 0.0);
  add_claim(rep, "lem-c.2-chi-weight",
            "projecting W_n onto |0> keeps weight 1/Q", cr.projection_weight,
            1.0 / double(code.q), 1e-9);

  int64_t min_rank = code.q;
  for (int s = 0; s < 10; ++s) {
    std::mt19937_64 rng(cfg.seed + uint64_t(s));
    ChiRankReport r = verify_chi_rank(code, random_unit_vector(code.q, rng));
    for (int64_t v : r.ranks) min_rank = std::min(min_rank, v);
  }
  add_claim(rep, "lem-c.2-chi-rank-rand",
            "sr(W_j) = Q on chi for random projection vectors",
            double(min_rank), double(code.q), 0.0);
}

void suite_psi_chain(const QmdsCode& code, const SuiteConfig& cfg,
                     VerificationReport& rep) {
  const int64_t q = code.q;
  const int nt = code.n - code.t;
  const auto t_sets = subsets_of_size(code.n - 1, code.t);
  std::vector<VerificationReport> parts(t_sets.size());
  parallel_for(static_cast<int64_t>(t_sets.size()), [&](int64_t ti) {
    const auto& t_set = t_sets[ti];
    VerificationReport& part = parts[ti];
    QuditState psi_in = build_psi_in(code, t_set);
    int64_t in_rank = -1;
    bool in_ok = true;
    for (int j : t_set) {
      const int64_t r =
          schmidt(psi_in, {node_name(j), "Wp" + std::to_string(j)}).rank;
      if (in_rank == -1) in_rank = r;
      if (r != in_rank) in_ok = false;
    }
    add_claim(part, "lem-3.4-psi-in-T" + subset_tag(t_set),
              "psi_in is a product of pairs: sr(W_j W_j') = 1",
              in_ok ? double(in_rank) : -1.0, 1.0, 0.0);

    int64_t pair_rank = -1, hat_rank = -1;
    bool out_ok = true;
    for (int draw = 0; draw <= 10; ++draw) {
      std::vector<Eigen::MatrixXcd> g_list(
          nt - 1, Eigen::MatrixXcd::Identity(q, q));
      Eigen::VectorXcd eps = Eigen::VectorXcd::Zero(q);
      eps(0) = 1.0;
      if (draw > 0) {
        std::mt19937_64 rng(cfg.seed + uint64_t(draw));
        for (auto& g : g_list) g = haar_random_unitary(int(q), rng);
        eps = random_unit_vector(q, rng);
      }
      QuditState psi_out = build_psi_out(code, t_set, g_list, eps);
      for (int j : t_set) {
        const int64_t r =
            schmidt(psi_out, {node_name(j), "Wp" + std::to_string(j)}).rank;
        if (pair_rank == -1) pair_rank = r;
        if (r != pair_rank) out_ok = false;
      }
      const int64_t rh = schmidt(psi_out, {replacement_name(code.n)}).rank;
      if (hat_rank == -1) hat_rank = rh;
      if (rh != hat_rank) out_ok = false;
    }
    add_claim(part, "lem-3.6-psi-out-pair-T" + subset_tag(t_set),
              "sr(W_j W_j') = Q^2 on psi_out for every helper and unitary draw",
              out_ok ? double(pair_rank) : -1.0, double(q * q), 0.0);
    add_claim(part, "lem-3.6-psi-out-hat-T" + subset_tag(t_set),
              "sr(What_n) = Q on psi_out", out_ok ? double(hat_rank) : -1.0,
              double(q), 0.0);
  });
  for (auto& part : parts)
    for (auto& c : part.claims) rep.claims.push_back(std::move(c));
}

void suite_bound_h1(const QmdsCode& code, const SuiteConfig& cfg,
                    VerificationReport& rep) {
  StorageInstance inst = erase(encode_with_reference(code), code.n);
  for (const auto& t_set : subsets_of_size(code.n - 1, code.t)) {
    const std::string tag = subset_tag(t_set);
    ProtocolResult res = run_download_return_h1(inst, t_set, cfg.seed);
    add_claim(rep, "cor-4.2-ec-h1-T" + tag,
              "download-and-return over H1 charges EC = 2t", double(res.ec),
              double(2 * code.t), 0.0);
    add_claim(rep, "cor-4.2-fid-h1-T" + tag,
              "H1 protocol restores the reference encoding", res.fidelity, 1.0,
              1e-9);
    BoundCertificate cert =
        certify_lower_bound(code, t_set, star_h1(code.n, t_set));
    add_claim(rep, "thm-4.1-lb-h1-T" + tag,
              "Schmidt-rank cuts force EC >= 2t over H1",
              double(cert.conclusion), double(2 * code.t), 0.0);
  }
}

void suite_bound_h2(const QmdsCode& code, const SuiteConfig& cfg,
                    VerificationReport& rep) {
  StorageInstance inst = erase(encode_with_reference(code), code.n);
  for (const auto& t_set : subsets_of_size(code.n - 1, code.t)) {
    const std::string tag = subset_tag(t_set);
    const int hub = t_set.front();
    ProtocolResult res = run_download_return_h2(inst, t_set, hub, cfg.seed);
    add_claim(rep, "cor-4.4-ec-h2-T" + tag,
              "download-and-return over H2 charges EC = 2t - 1", double(res.ec),
              double(2 * code.t - 1), 0.0);
    add_claim(rep, "cor-4.4-fid-h2-T" + tag,
              "H2 protocol restores the reference encoding", res.fidelity, 1.0,
              1e-9);
    BoundCertificate cert =
        certify_lower_bound(code, t_set, star_h2(code.n, t_set, hub));
    add_claim(rep, "thm-4.3-lb-h2-T" + tag,
              "Schmidt-rank cuts force EC >= 2t - 1 over H2",
              double(cert.conclusion), double(2 * code.t - 1), 0.0);
  }
}

void suite_nielsen(const SuiteConfig& cfg, VerificationReport& rep) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> len_dist(2, 6);

  int reflexive_fail = 0, extremal_fail = 0;
  for (int i = 0; i < 200; ++i) {
    const int len = len_dist(rng);
    auto p = random_dist(rng, len);
    if (!majorizes(p, p)) ++reflexive_fail;
    std::vector<double> uniform(len, 1.0 / len);
    std::vector<double> peak(len, 0.0);
    peak[0] = 1.0;
    if (!majorizes(p, uniform) || !majorizes(peak, p)) ++extremal_fail;
  }
  add_claim(rep, "lem-a.2-reflexive", "every distribution majorizes itself",
            double(reflexive_fail), 0.0, 0.0);
  add_claim(rep, "lem-a.2-extremal",
            "peak and uniform vectors are majorization extremes",
            double(extremal_fail), 0.0, 0.0);

  int antisym_fail = 0, antisym_hits = 0;
  for (int i = 0; i < 500; ++i) {
    const int len = len_dist(rng);
    auto a = random_dist(rng, len);
    auto b = a;
    if (i % 2 == 0) std::shuffle(b.begin(), b.end(), rng);
    else b = random_dist(rng, len);
    if (majorizes(a, b) && majorizes(b, a)) {
      ++antisym_hits;
      auto sa = a, sb = b;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      for (int k = 0; k < len; ++k)
        if (std::abs(sa[k] - sb[k]) > 1e-9) ++antisym_fail;
    }
  }
  add_claim(rep, "lem-a.2-antisymmetry",
            "mutual majorization implies equality up to reordering",
            double(antisym_fail), 0.0, 0.0);
  add_claim(rep, "lem-a.2-antisymmetry-hits",
            "the antisymmetry battery exercised the mutual case",
            antisym_hits > 0 ? 1.0 : 0.0, 1.0, 0.0);

  int transitive_fail = 0, transitive_hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const int len = len_dist(rng);
    auto a = random_dist(rng, len);
    // Mixing toward uniform only moves down the majorization order, so the
    // chain a >= b >= c holds often enough to exercise the property.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u1 = unit(rng), u2 = unit(rng);
    std::vector<double> b(len), c(len);
    for (int k = 0; k < len; ++k) {
      b[k] = (1 - u1) * a[k] + u1 / len;
      c[k] = (1 - u2) * b[k] + u2 / len;
    }
    if (majorizes(a, b) && majorizes(b, c)) {
      ++transitive_hits;
      if (!majorizes(a, c)) ++transitive_fail;
    }
  }
  add_claim(rep, "lem-a.2-transitivity", "majorization chains compose",
            double(transitive_fail), 0.0, 0.0);
  add_claim(rep, "lem-a.2-transitivity-hits",
            "the transitivity battery exercised full chains",
            transitive_hits >= 900 ? 1.0 : 0.0, 1.0, 0.0);
}

}  // namespace

bool VerificationReport::overall() const {
  for (const auto& c : claims)
    if (!c.pass) return false;
  return true;
}

std::string VerificationReport::render() const {
  std::vector<const Claim*> sorted;
  for (const auto& c : claims) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const Claim* a, const Claim* b) { return a->id < b->id; });
  std::ostringstream os;
  os << version << "\n";
  os << "config " << config_echo << "\n";
  for (const Claim* c : sorted)
    os << c->id << "\t" << c->anchor << "\t" << fmt17(c->measured) << "\t"
       << fmt17(c->expected) << "\t" << fmt17(c->tol) << "\t"
       << (c->pass ? "pass" : "fail") << "\n";
  os << "overall " << (overall() ? "pass" : "fail") << "\n";
  return os.str();
}

std::vector<std::string> suite_names() {
  return {"distance", "marginals",  "unitary",  "small-code", "entropy-table",
          "chi-rank", "psi-chain",  "bound-h1", "bound-h2",   "nielsen",
          "all"};
}

double mixedness_defect(const QuditState& state,
                        const std::vector<std::string>& labels) {
  SchmidtData sd = schmidt(state, labels);
  int64_t d = 1;
  for (const auto& name : labels) {
    const int idx = state.reg_index(name);
    if (idx < 0) fail("LabelMismatch", "unknown register " + name);
    d *= state.regs[idx].dim;
  }
  double dist = 0.0;
  for (double l : sd.lambda) dist += std::abs(l * l - 1.0 / double(d));
  dist += double(d - int64_t(sd.lambda.size())) / double(d);
  return 0.5 * dist;
}

VerificationReport run_verify(const std::string& suite, const SuiteConfig& cfg) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    fail("Unsupported", "unknown suite " + suite);

  VerificationReport rep;
  {
    std::ostringstream os;
    os << "suite=" << suite << " Q=" << cfg.q << " n=" << cfg.n
       << " t=" << cfg.t << " seed=" << cfg.seed;
    rep.config_echo = os.str();
  }
  const bool all = suite == "all";
  if (suite == "nielsen" || all) suite_nielsen(cfg, rep);
  if (suite == "nielsen") return rep;

  QmdsCode code = build_code(make_nested_pair(cfg.q, cfg.n, cfg.t));
  if (suite == "distance" || all) suite_distance(code, rep);
  if (suite == "marginals" || all) suite_marginals(code, rep);
  if (suite == "unitary" || all) suite_unitary(code, rep);
  if (suite == "small-code" || all) suite_small_code(code, rep);
  if (suite == "entropy-table" || all) suite_entropy_table(code, rep);
  if (suite == "chi-rank" || all) suite_chi_rank(code, cfg, rep);
  if (suite == "psi-chain" || all) suite_psi_chain(code, cfg, rep);
  if (suite == "bound-h1" || all) suite_bound_h1(code, cfg, rep);
  if (suite == "bound-h2" || all) suite_bound_h2(code, cfg, rep);
  return rep;
}

}  // namespace qmdslab
