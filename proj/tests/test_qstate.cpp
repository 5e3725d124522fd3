#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qmdslab/bounds.hpp"  // haar_random_unitary
#include "qmdslab/qstate.hpp"

using namespace qmdslab;

namespace {

template <class F>
std::string kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

QuditState random_state(const std::vector<Register>& regs, std::mt19937_64& rng) {
  QuditState s;
  s.regs = regs;
  std::normal_distribution<double> gauss(0.0, 1.0);
  double n2 = 0.0;
  for (int64_t i = 0; i < s.dim(); ++i) {
    const cplx v(gauss(rng), gauss(rng));
    s.amps.push_back({i, v});
    n2 += std::norm(v);
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& [i, v] : s.amps) v *= scale;
  return s;
}

// Original state re-homed into register `to` of dimension m >= dim(from).
// Only valid when `from` is the most significant register, so growing it
// leaves every stride unchanged.
QuditState embedded(const QuditState& s, const std::string& from,
                    const std::string& to, int64_t m) {
  QuditState out = relabel(s, from, to);
  REQUIRE(out.reg_index(to) == 0);
  out.regs[0].dim = m;
  return out;
}

}  // namespace

TEST_CASE("basis states and tensor products") {
  QuditState s = basis_state({{"A", 3}, {"B", 2}}, {2, 1});
  CHECK(s.dim() == 6);
  CHECK(s.amps.size() == 1);
  CHECK(s.amps[0].first == 5);

  QuditState t = tensor({basis_state({{"A", 2}}, {1}), basis_state({{"B", 2}}, {0})});
  CHECK(t.amps.size() == 1);
  CHECK(t.amps[0].first == 2);

  CHECK(kind_of([] { basis_state({{"A", 2}, {"A", 2}}, {0, 0}); }) ==
        "DuplicateLabel");
  CHECK(kind_of([] { basis_state({{"A", 0}}, {0}); }) == "BadDim");
}

TEST_CASE("unitary application preserves the norm") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    QuditState s = random_state({{"A", 3}, {"B", 4}}, rng);
    Eigen::MatrixXcd u = haar_random_unitary(3, rng);
    QuditState out = apply_unitary(s, u, {"A"});
    CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::MatrixXcd u2 = haar_random_unitary(12, rng);
    QuditState out2 = apply_unitary(s, u2, {"A", "B"});
    CHECK(out2.norm2() == doctest::Approx(1.0).epsilon(1e-12));
  }
  QuditState s = random_state({{"A", 3}, {"B", 4}}, rng);
  CHECK(kind_of([&] {
          apply_unitary(s, Eigen::MatrixXcd::Identity(4, 4), {"A"});
        }) == "DimensionMismatch");
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3) * 2.0;
  CHECK(kind_of([&] { apply_unitary(s, bad, {"A"}); }) == "NotUnitary");
}

TEST_CASE("generalized Pauli orthogonality") {
  const int64_t q = 5;
  for (int64_t a = 0; a < q; ++a)
    for (int64_t b = 0; b < q; ++b)
      for (int64_t c = 0; c < q; ++c)
        for (int64_t d = 0; d < q; ++d) {
          const cplx tr = (generalized_pauli(q, a, b).adjoint() *
                           generalized_pauli(q, c, d))
                              .trace();
          const double expect = (a == c && b == d) ? double(q) : 0.0;
          CHECK(std::abs(tr - cplx(expect, 0.0)) < 1e-9);
        }
  CHECK(kind_of([] { generalized_pauli(3, 3, 0); }) == "OutOfRange");
}

TEST_CASE("structured unitaries are unitary") {
  for (int64_t q : {2, 3, 5, 7}) {
    CHECK(Unitary::from_dense(fourier_matrix(q)).unitarity_defect() < 1e-12);
    CHECK(csum_unitary(q, q, 1).unitarity_defect() < 1e-12);
    CHECK(csum_unitary(q, 2 * q, -1).unitarity_defect() < 1e-12);
  }
  CHECK(kind_of([] { csum_unitary(5, 3, 1); }) == "BadDim");
}

TEST_CASE("schmidt spectra agree on both sides of the cut") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    QuditState s = random_state({{"A", 3}, {"B", 2}, {"C", 4}}, rng);
    SchmidtData left = schmidt(s, {"A", "B"});
    SchmidtData right = schmidt(s, {"C"});
    REQUIRE(left.lambda.size() >= right.lambda.size());
    for (size_t i = 0; i < right.lambda.size(); ++i)
      CHECK(left.lambda[i] == doctest::Approx(right.lambda[i]).epsilon(1e-9));
    CHECK(left.rank == right.rank);
    CHECK(left.entropy == doctest::Approx(right.entropy).epsilon(1e-9));
  }
  QuditState s = random_state({{"A", 3}, {"B", 2}}, rng);
  CHECK(kind_of([&] { schmidt(s, {"A", "B"}); }) == "BadPartition");
  CHECK(kind_of([&] { schmidt(s, {}); }) == "BadPartition");
}

TEST_CASE("maximally entangled pairs have flat spectra") {
  QuditState pair = max_entangled(5, "A", "B");
  SchmidtData sd = schmidt(pair, {"A"});
  CHECK(sd.rank == 5);
  CHECK(sd.entropy_logq(5) == doctest::Approx(1.0).epsilon(1e-12));

  // Entropy is additive across independent pairs.
  QuditState two = tensor({pair, max_entangled(5, "C", "D")});
  CHECK(schmidt(two, {"A", "C"}).entropy_logq(5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(schmidt(two, {"A", "D"}).entropy_logq(5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(schmidt(two, {"A"}).entropy_logq(5) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("partial inner product and bra projection") {
  QuditState pair = max_entangled(3, "A", "B");
  auto res = partial_inner(pair, {2}, {"A"});
  CHECK(res.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(res.state.regs.size() == 1);
  CHECK(res.state.amps.size() == 1);
  CHECK(res.state.amps[0].first == 2);

  Eigen::VectorXcd bra = Eigen::VectorXcd::Zero(3);
  bra(0) = bra(1) = 1.0 / std::sqrt(2.0);
  auto proj = project_bra(pair, "A", bra);
  CHECK(proj.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(normalize(proj.state).amps.size() == 2);

  CHECK(kind_of([&] { partial_inner(pair, {3}, {"A"}); }) == "BadPartition");
  CHECK(kind_of([&] { project_bra(pair, "Z", bra); }) == "BadPartition");
}

TEST_CASE("computational measurement statistics are uniform on |Q+>") {
  const int64_t q = 5;
  QuditState pair = max_entangled(q, "A", "B");
  std::vector<int> counts(q, 0);
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    MeasureResult r = measure_computational(pair, {"A"}, seed);
    CHECK(r.probability == doctest::Approx(1.0 / q).epsilon(1e-12));
    ++counts[r.outcome[0]];
    // The B side collapses to the same digit.
    MeasureResult rb = measure_computational(r.state, {"B"}, seed + 1);
    CHECK(rb.outcome[0] == r.outcome[0]);
  }
  for (int64_t v = 0; v < q; ++v) {
    // 5 sigma around the expected 2000 for a binomial(10^4, 1/5).
    CHECK(counts[v] > 2000 - 5 * 40);
    CHECK(counts[v] < 2000 + 5 * 40);
  }

  std::mt19937_64 rng(3);
  MeasureResult forced = measure_with_rng(pair, {"A"}, rng, 4);
  CHECK(forced.outcome[0] == 4);
  QuditState zero = basis_state({{"A", 3}}, {0});
  std::mt19937_64 rng2(4);
  CHECK(kind_of([&] { measure_with_rng(zero, {"A"}, rng2, 2); }) ==
        "ZeroProjection");
}

TEST_CASE("teleportation relocates states exactly") {
  std::mt19937_64 rng(31);
  for (int64_t d : {2, 3, 5}) {
    for (int64_t m : {d, 2 * d}) {
      for (int rep = 0; rep < 100; ++rep) {
        QuditState payload = random_state({{"S", d}, {"E", 3}}, rng);
        QuditState s = tensor({payload, max_entangled(m, "A", "B")});
        std::vector<int64_t> log;
        TeleportResult res = teleport(s, "S", "A", "B", rng, &log);
        CHECK(res.state.reg_index("S") == -1);
        CHECK(res.state.reg_index("A") == -1);
        CHECK(log.size() == 2);
        CHECK(log[0] == res.m_fourier);
        CHECK(log[1] == res.m_shift);
        QuditState expect = embedded(payload, "S", "B", m);
        CHECK(fidelity(res.state, expect) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
  QuditState s = tensor({basis_state({{"S", 5}}, {1}), max_entangled(3, "A", "B")});
  std::mt19937_64 rng2(1);
  CHECK(kind_of([&] { teleport(s, "S", "A", "B", rng2); }) ==
        "ResourceTooSmall");
}

TEST_CASE("dump/load round trip is exact") {
  std::mt19937_64 rng(41);
  QuditState s = random_state({{"A", 3}, {"B", 5}}, rng);
  const std::string text = dump_state(s);
  QuditState back = load_state(text);
  CHECK(fidelity(s, back) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dump_state(back) == text);  // byte determinism
  CHECK(kind_of([] { load_state("garbage"); }) == "BadDimensions");
}

TEST_CASE("fidelity is label-permutation aware") {
  QuditState a = tensor({basis_state({{"A", 2}}, {1}), basis_state({{"B", 3}}, {2})});
  QuditState b = tensor({basis_state({{"B", 3}}, {2}), basis_state({{"A", 2}}, {1})});
  CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  QuditState c = basis_state({{"A", 2}}, {1});
  CHECK(kind_of([&] { fidelity(a, c); }) == "LabelMismatch");
}
