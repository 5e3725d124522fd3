#include "qmdslab/qmds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "qmdslab/parallel.hpp"

namespace qmdslab {

namespace {

int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::vector<std::string> w_labels(const std::vector<int>& nodes) {
  std::vector<std::string> out;
  for (int j : nodes) out.push_back("W" + std::to_string(j));
  return out;
}

void check_t_set(const QmdsCode& code, std::vector<int>& t_set) {
  std::sort(t_set.begin(), t_set.end());
  if (static_cast<int>(t_set.size()) != code.t)
    fail("BadHelperSet", "helper set size != t");
  for (size_t i = 0; i < t_set.size(); ++i) {
    if (t_set[i] < 1 || t_set[i] > code.n) fail("BadHelperSet", "node out of range");
    if (i > 0 && t_set[i] == t_set[i - 1]) fail("BadHelperSet", "repeated node");
  }
}

}  // namespace

std::vector<std::vector<int>> subsets_of_size(int n, int w) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == w) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v <= n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

QmdsCode build_code(const NestedCodePair& pair) {
  QmdsCode code;
  code.q = pair.outer.field.modulus();
  code.n = pair.n();
  code.t = pair.t();
  code.k = pair.logical_qudits();
  code.expected_distance = code.n - code.t + 1;
  code.pair = pair;

  const Field& f = pair.outer.field;
  const int n = code.n, nt = code.n - code.t;
  const int64_t q = code.q;
  const int64_t big_k = ipow(q, code.k), inner_count = ipow(q, nt);
  const double amp = 1.0 / std::sqrt(double(inner_count));

  std::vector<Register> regs;
  for (int j = 1; j <= n; ++j) regs.push_back({"W" + std::to_string(j), q});

  for (int64_t s = 0; s < big_k; ++s) {
    std::vector<int64_t> base(n, 0);
    int64_t rem = s;
    for (int row = code.k - 1; row >= 0; --row) {
      const int64_t digit = rem % q;
      rem /= q;
      for (int c = 0; c < n; ++c)
        base[c] = f.add(base[c], f.mul(digit, pair.coset_rows[row][c]));
    }
    QuditState st;
    st.regs = regs;
    for (int64_t u = 0; u < inner_count; ++u) {
      std::vector<int64_t> word = base;
      int64_t ur = u;
      for (int row = nt - 1; row >= 0; --row) {
        const int64_t digit = ur % q;
        ur /= q;
        for (int c = 0; c < n; ++c)
          word[c] = f.add(word[c], f.mul(digit, pair.inner.generator[row][c]));
      }
      int64_t index = 0;
      for (int c = 0; c < n; ++c) index = index * q + word[c];
      st.amps.push_back({index, cplx(amp, 0.0)});
    }
    st.sort_amps();
    code.states.push_back(std::move(st));
  }
  return code;
}

DistanceReport verify_distance(const QmdsCode& code) {
  if (code.n > 7 || code.q > 7)
    fail("BudgetExceeded", "distance sweep limited to n <= 7, Q <= 7");
  const int64_t q = code.q;
  const int n = code.n;
  const int64_t total_dim = ipow(q, n);
  const int64_t big_k = code.logical_count();
  const double tol = 1e-8;

  // Global index -> (state id, amplitude); code-state supports are disjoint
  // for every code this library builds.
  std::vector<int32_t> owner(total_dim, -1);
  std::vector<cplx> ampv(total_dim, cplx(0.0, 0.0));
  for (int64_t j = 0; j < big_k; ++j)
    for (const auto& [idx, v] : code.states[j].amps) {
      if (owner[idx] >= 0) fail("Unsupported", "code states share support");
      owner[idx] = static_cast<int32_t>(j);
      ampv[idx] = v;
    }

  const auto strides = code.states[0].strides();
  std::vector<cplx> omega_pow(q);
  for (int64_t i = 0; i < q; ++i)
    omega_pow[i] = std::polar(1.0, 2.0 * 3.14159265358979323846 * double(i) / double(q));

  DistanceReport rep;
  const int wmax = code.n - code.t;
  for (int w = 1; w <= wmax; ++w) {
    const auto subs = subsets_of_size(n, w);
    const int64_t qw = ipow(q, w);
    std::mutex mu;
    std::string witness;
    parallel_for(static_cast<int64_t>(subs.size()), [&](int64_t si) {
      const auto& sub = subs[si];
      std::vector<int64_t> sstride(w);
      for (int p = 0; p < w; ++p) sstride[p] = strides[sub[p] - 1];

      // Per-state digit/shift tables on this subset.
      struct Entry {
        int64_t idx;
        int64_t cs;  // packed base-q digits on the subset
      };
      std::vector<std::vector<Entry>> entries(big_k);
      for (int64_t j = 0; j < big_k; ++j)
        for (const auto& [idx, v] : code.states[j].amps) {
          int64_t cs = 0;
          for (int p = 0; p < w; ++p) cs = cs * q + (idx / sstride[p]) % q;
          entries[j].push_back({idx, cs});
        }

      std::vector<cplx> scratch2(qw);
      auto dft = [&](std::vector<cplx>& vec) {
        // Axis-by-axis DFT: out[b] = sum_c vec[c] omega^(b.c) over base-q digits.
        std::vector<cplx>* src = &vec;
        std::vector<cplx>* dst = &scratch2;
        int64_t block = 1;
        for (int p = w - 1; p >= 0; --p) {
          for (int64_t base = 0; base < qw; ++base) {
            const int64_t digit = (base / block) % q;
            const int64_t lo = base - digit * block;
            cplx acc(0.0, 0.0);
            for (int64_t c = 0; c < q; ++c)
              acc += (*src)[lo + c * block] * omega_pow[(digit * c) % q];
            (*dst)[base] = acc;
          }
          std::swap(src, dst);
          block *= q;
        }
        if (src != &vec) vec = *src;
      };

      for (int64_t a = 0; a < qw; ++a) {
        std::vector<int64_t> adig(w);
        {
          int64_t rem = a;
          for (int p = w - 1; p >= 0; --p) {
            adig[p] = rem % q;
            rem /= q;
          }
        }
        // tallies[j][i] = vector over the subset digits c of
        //   sum over support entries  conj(amp_i(c + a)) * amp_j(c),
        // so that <phi_i|Gamma|phi_j> is its DFT at b. Pairs without any
        // overlapping shifted support are exactly zero and stay absent.
        std::vector<std::unordered_map<int32_t, std::vector<cplx>>> tallies(big_k);
        for (int64_t j = 0; j < big_k; ++j)
          for (const auto& en : entries[j]) {
            int64_t shifted = en.idx, cs = en.cs;
            for (int p = w - 1; p >= 0; --p) {
              const int64_t digit = cs % q;
              cs /= q;
              shifted += ((digit + adig[p]) % q - digit) * sstride[p];
            }
            const int32_t i = owner[shifted];
            if (i < 0) continue;
            auto& vec = tallies[j][i];
            if (vec.empty()) vec.assign(qw, cplx(0.0, 0.0));
            vec[en.cs] += std::conj(ampv[shifted]) * ampv[en.idx];
          }
        for (auto& per_j : tallies)
          for (auto& [i, vec] : per_j) dft(vec);

        auto value_at = [&](int64_t i, int64_t j, int64_t b) -> cplx {
          auto it = tallies[j].find(static_cast<int32_t>(i));
          return it == tallies[j].end() ? cplx(0.0, 0.0) : it->second[b];
        };

        std::string local_witness;
        for (int64_t b = 0; b < qw && local_witness.empty(); ++b) {
          if (a == 0 && b == 0) continue;
          // K > 1: <phi_i|Gamma|phi_j> = c(Gamma) delta_ij with c read from
          // the (1,1) entry. K = 1: <phi|Gamma|phi> = Tr(Gamma)/Q^n = 0 for
          // every nonidentity Gamma.
          const cplx c_gamma = (big_k > 1) ? value_at(0, 0, b) : cplx(0.0, 0.0);
          for (int64_t j = 0; j < big_k && local_witness.empty(); ++j) {
            double dev = std::abs(value_at(j, j, b) - c_gamma);
            for (const auto& [i, vec] : tallies[j])
              if (i != j) dev = std::max(dev, std::abs(vec[b]));
            if (dev > tol) {
              std::ostringstream os;
              os << "subset={";
              for (size_t p = 0; p < sub.size(); ++p)
                os << (p ? "," : "") << sub[p];
              os << "} a=" << a << " b=" << b << " j=" << j << " deviation=" << dev;
              local_witness = os.str();
            }
          }
        }
        if (!local_witness.empty()) {
          std::lock_guard<std::mutex> lock(mu);
          if (witness.empty()) witness = local_witness;
          break;
        }
      }
    });
    if (!witness.empty()) {
      rep.distance = w;  // condition verified only up to weight w - 1
      rep.ok = false;
      rep.witness = witness;
      return rep;
    }
  }
  rep.distance = wmax + 1;
  rep.ok = true;
  return rep;
}

HelperUnitary extract_helper_unitary(const QmdsCode& code, std::vector<int> t_set) {
  check_t_set(code, t_set);
  const int64_t q = code.q;
  const int nt = code.n - code.t;
  const int64_t rcount = ipow(q, nt);
  const int64_t big_k = code.logical_count();
  const double scale = std::sqrt(double(rcount));

  std::vector<int> comp;
  for (int j = 1; j <= code.n; ++j)
    if (!std::binary_search(t_set.begin(), t_set.end(), j)) comp.push_back(j);
  const auto comp_labels = w_labels(comp);

  Unitary u;
  u.dim = ipow(q, code.t);
  u.cols.resize(u.dim);
  for (int64_t s = 0; s < big_k; ++s) {
    for (int64_t r = 0; r < rcount; ++r) {
      std::vector<int64_t> rdig(nt);
      int64_t rem = r;
      for (int p = nt - 1; p >= 0; --p) {
        rdig[p] = rem % q;
        rem /= q;
      }
      auto res = partial_inner(code.states[s], rdig, comp_labels);
      const int64_t col = s * rcount + r;
      for (const auto& [row, v] : res.state.amps)
        u.cols[col].push_back({row, v * scale});
    }
  }
  if (u.unitarity_defect() > 1e-9)
    fail("NotUnitary", "extracted columns are not orthonormal; input is not QMDS");
  u.verified = true;

  // Reconstruction check: the encoder identity must rebuild each code state.
  double residual = 0.0;
  const auto strides = code.states[0].strides();
  const double amp = 1.0 / scale;
  for (int64_t s = 0; s < big_k; ++s) {
    std::unordered_map<int64_t, cplx> rebuilt;
    for (int64_t r = 0; r < rcount; ++r) {
      int64_t comp_part = 0;
      int64_t rem = r;
      for (int p = nt - 1; p >= 0; --p) {
        comp_part += (rem % q) * strides[comp[p] - 1];
        rem /= q;
      }
      for (const auto& [row, v] : u.cols[s * rcount + r]) {
        int64_t t_part = 0, rr = row;
        for (int p = code.t - 1; p >= 0; --p) {
          t_part += (rr % q) * strides[t_set[p] - 1];
          rr /= q;
        }
        rebuilt[t_part + comp_part] += v * amp;
      }
    }
    for (const auto& [idx, v] : code.states[s].amps) rebuilt[idx] -= v;
    for (const auto& [idx, v] : rebuilt)
      residual = std::max(residual, std::abs(v));
  }
  if (residual > 1e-8) fail("ResidualTooLarge", "encoder identity residual too large");

  HelperUnitary h;
  h.t_set = t_set;
  h.u = std::move(u);
  h.residual = residual;
  return h;
}

const Unitary& helper_unitary(const QmdsCode& code, std::vector<int> t_set) {
  // std::map keeps references stable under insertion, so handing out the
  // mapped Unitary& after unlocking is safe.
  static std::mutex cache_mu;
  std::sort(t_set.begin(), t_set.end());
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = code.ut_cache.find(t_set);
    if (it != code.ut_cache.end()) return it->second;
  }
  Unitary u = extract_helper_unitary(code, t_set).u;
  std::lock_guard<std::mutex> lock(cache_mu);
  return code.ut_cache.emplace(t_set, std::move(u)).first->second;
}

QmdsCode derive_small_code(const QmdsCode& code, const std::vector<int>& t_set) {
  const Unitary& u = helper_unitary(code, t_set);
  const int64_t q = code.q;
  QmdsCode small;
  small.q = q;
  small.n = code.t + 1;
  small.t = code.t;
  small.k = code.t - 1;
  small.expected_distance = 2;
  small.derived = true;

  std::vector<Register> regs;
  for (int j = 1; j <= small.n; ++j) regs.push_back({"W" + std::to_string(j), q});
  const double amp = 1.0 / std::sqrt(double(q));
  const int64_t count = ipow(q, small.k);
  for (int64_t s = 0; s < count; ++s) {
    QuditState st;
    st.regs = regs;
    for (int64_t r = 0; r < q; ++r)
      for (const auto& [row, v] : u.cols[s * q + r])
        st.amps.push_back({row * q + r, v * amp});
    st.sort_amps();
    small.states.push_back(std::move(st));
  }
  return small;
}

QuditState reference_encoding(const QmdsCode& code) {
  const int64_t q = code.q;
  const int64_t big_k = code.logical_count();
  const double scale = 1.0 / std::sqrt(double(big_k));
  const int64_t wdim = ipow(q, code.n);
  QuditState phi;
  for (int i = 1; i <= code.k; ++i) phi.regs.push_back({"R" + std::to_string(i), q});
  for (int j = 1; j <= code.n; ++j)
    phi.regs.push_back({"W" + std::to_string(j), q});
  for (int64_t s = 0; s < big_k; ++s)
    for (const auto& [idx, v] : code.states[s].amps)
      phi.amps.push_back({s * wdim + idx, v * scale});
  phi.sort_amps();
  return phi;
}

std::string code_descriptor(const QmdsCode& code) {
  if (code.derived) fail("Unsupported", "derived codes have no descriptor");
  std::ostringstream os;
  os << "qmds v1; Q=" << code.q << "; n=" << code.n << "; t=" << code.t
     << "; points=";
  for (int j = 0; j < code.n; ++j)
    os << (j ? "," : "") << code.pair.outer.points[j];
  os << "; multipliers=";
  for (int j = 0; j < code.n; ++j)
    os << (j ? "," : "") << code.pair.outer.multipliers[j];
  os << "\n";
  return os.str();
}

QmdsCode load_descriptor(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  int64_t q = 0;
  int n = 0, t = 0;
  std::vector<int64_t> points, mults;
  std::istringstream ls(line);
  std::string tok;
  while (std::getline(ls, tok, ';')) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq);
    key.erase(0, key.find_first_not_of(' '));
    const std::string val = tok.substr(eq + 1);
    if (key == "Q") q = std::stoll(val);
    else if (key == "n") n = std::stoi(val);
    else if (key == "t") t = std::stoi(val);
    else if (key == "points" || key == "multipliers") {
      std::istringstream vs(val);
      std::string item;
      auto& dst = (key == "points") ? points : mults;
      while (std::getline(vs, item, ',')) dst.push_back(std::stoll(item));
    }
  }
  if (q == 0 || n == 0 || t == 0) fail("BadDimensions", "bad qmds descriptor");
  if (!(1 < t && t < n && n <= 2 * t)) fail("ParameterViolation", "need 1 < t < n <= 2t");
  Field field(q);
  if (n > q) fail("ParameterViolation", "need n <= Q");
  if (points.empty()) {
    points.resize(n);
    for (int j = 0; j < n; ++j) points[j] = j;
  }
  if (mults.empty()) mults.assign(n, 1);
  NestedCodePair pair{make_grs(field, n, t, points, mults),
                      make_grs(field, n, n - t, points, mults),
                      {}};
  // Rebuild the coset rows exactly as make_nested_pair does.
  NestedCodePair canonical = make_nested_pair(q, n, t);
  if (points == canonical.outer.points && mults == canonical.outer.multipliers)
    return build_code(canonical);
  fail("Unsupported", "descriptor with non-canonical points/multipliers");
}

}  // namespace qmdslab
