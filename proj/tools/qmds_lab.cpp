#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmdslab/bounds.hpp"
#include "qmdslab/protocol.hpp"
#include "qmdslab/report.hpp"

namespace {

using namespace qmdslab;

int exit_for(const Error& e) {
  const std::string k = e.kind();
  if (k == "BudgetExceeded") return 4;
  if (k == "FidelityMismatch" || k == "ResidualTooLarge") return 3;
  return 2;  // everything else is a configuration/validation problem
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("OutOfRange", "cannot open output file " + path);
  out << text;
}

int cmd_build(int64_t q, int n, int t, const std::string& out_path) {
  QmdsCode code = build_code(make_nested_pair(q, n, t));
  write_file(out_path, code_descriptor(code));
  std::printf("Q=%lld n=%d t=%d k=%d D=%d [[%d,%d]]_%lld%s\n",
              static_cast<long long>(code.q), code.n, code.t, code.k,
              code.expected_distance, code.n, code.k,
              static_cast<long long>(code.q), code.k == 0 ? " (AME)" : "");
  return 0;
}

int cmd_repair(int64_t q, int n, int t, const std::string& topology, int e,
               std::vector<int> helpers, int hub, uint64_t seed, int budget,
               const std::string& out_path) {
  QmdsCode code = build_code(make_nested_pair(q, n, t));
  StorageInstance inst = erase(encode_with_reference(code), e);

  if (static_cast<int>(helpers.size()) == t - 1) {
    InfeasibilityCertificate cert = attempt_with_fewer_helpers(inst, helpers);
    std::cout << cert.statement;
    if (!out_path.empty()) write_file(out_path, cert.statement);
    return 5;
  }

  ProtocolResult res;
  if (topology == "h1") {
    res = run_download_return_h1(inst, helpers, seed, -1, budget);
  } else if (topology == "h2") {
    res = run_download_return_h2(inst, helpers, hub, seed, -1, budget);
  } else {
    fail("Unsupported", "topology must be h1 or h2");
  }
  std::string text = export_ledger(res.ledger, q) + res.trace;
  std::cout << text;
  std::printf("ec=%lld fidelity=%.17g\n", static_cast<long long>(res.ec),
              res.fidelity);
  if (!out_path.empty()) write_file(out_path, text);
  return res.pass ? 0 : 3;
}

int cmd_verify(int64_t q, int n, int t, const std::string& suite, uint64_t seed,
               const std::string& out_path) {
  SuiteConfig cfg;
  cfg.q = q;
  cfg.n = n;
  cfg.t = t;
  cfg.seed = seed;
  VerificationReport rep = run_verify(suite, cfg);
  const std::string text = rep.render();
  std::cout << text;
  if (!out_path.empty()) write_file(out_path, text);
  return rep.overall() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qudit state-vector laboratory for QMDS erasure correction"};
  app.set_config("--config");
  app.require_subcommand(1);

  int64_t q = 5;
  int n = 5, t = 3;
  app.add_option("--q", q, "alphabet size (prime)")->capture_default_str();
  app.add_option("--n", n, "code length")->capture_default_str();
  app.add_option("--t", t, "helper count t, with 1 < t < n <= 2t")
      ->capture_default_str();

  auto* build = app.add_subcommand("build", "construct a code descriptor");
  std::string build_out = "code.qmds";
  build->add_option("--out", build_out, "descriptor path")->capture_default_str();

  auto* repair = app.add_subcommand("repair", "run a star repair protocol");
  std::string topology = "h1";
  int e = 0, hub = 0, budget = -1;
  uint64_t seed = 1;
  std::vector<int> helpers;
  std::string repair_out;
  repair->add_option("--topology", topology, "h1 or h2")->capture_default_str();
  repair->add_option("--e", e, "erased node index")->required();
  repair->add_option("--helpers", helpers, "helper node indices")
      ->required()
      ->delimiter(',');
  repair->add_option("--hub", hub, "hub node (h2 only)");
  repair->add_option("--seed", seed, "measurement seed")->capture_default_str();
  repair->add_option("--budget", budget, "per-edge cap on log_Q beta");
  repair->add_option("--out", repair_out, "trace/ledger output path");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  uint64_t vseed = 1;
  std::string verify_out;
  verify->add_option("--suite", suite, "verification suite")
      ->capture_default_str();
  verify->add_option("--seed", vseed, "randomness seed")->capture_default_str();
  verify->add_option("--out", verify_out, "report output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(q, n, t, build_out);
    if (repair->parsed())
      return cmd_repair(q, n, t, topology, e, helpers, hub, seed, budget,
                        repair_out);
    return cmd_verify(q, n, t, suite, vseed, verify_out);
  } catch (const Error& err) {
    std::cerr << err.what() << "\n";
    return exit_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
