#include "qmdslab/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace qmdslab {

namespace {

int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Runner {
  const StorageInstance& inst;
  QuditState cur;
  CommLedger ledger;
  std::mt19937_64 rng;
  std::vector<int64_t> outcomes;
  std::ostringstream trace;
  size_t traced_events = 0;
  int pair_counter = 0;

  Runner(const StorageInstance& instance, Topology topo, uint64_t seed,
         int cap_logq)
      : inst(instance), cur(instance.state), rng(seed) {
    ledger = make_ledger(std::move(topo));
    if (cap_logq >= 0)
      for (const auto& [key, beta] : ledger.beta)
        ledger.cap_beta[key] = ipow(inst.code.q, cap_logq);
  }

  void mark(const std::string& step) {
    flush_events();
    trace << "step=" << step << "\n";
  }

  void flush_events() {
    for (; traced_events < ledger.events.size(); ++traced_events) {
      const auto& ev = ledger.events[traced_events];
      trace << "edge=" << edge_key(ev.from, ev.to) << " dir=" << ev.from << "->"
            << ev.to << " dim=" << ev.dim << " tag=" << ev.tag << "\n";
    }
  }

  /// Move the contents of `source` from node `from` to a fresh register
  /// `payload` at node `to`, through a teleportation resource pair charged on
  /// the connecting edge.
  void teleport_over(const std::string& source, const std::string& from,
                     const std::string& to, const std::string& payload) {
    const int64_t q = inst.code.q;
    const std::string a = "tpa" + std::to_string(pair_counter);
    const std::string b = "tpb" + std::to_string(pair_counter);
    ++pair_counter;
    cur = tensor({cur, max_entangled(q, a, b)});
    charge(ledger, from, to, q, "quantum");
    std::vector<int64_t> classical;
    auto res = teleport(cur, source, a, b, rng, &classical);
    cur = relabel(res.state, b, payload);
    for (int64_t sym : classical) {
      charge(ledger, from, to, q, "classical");
      outcomes.push_back(sym);
    }
  }
};

void validate_helpers(const StorageInstance& inst, std::vector<int>& helpers) {
  if (inst.erased < 1) fail("BadHelperSet", "instance has no erased node");
  std::sort(helpers.begin(), helpers.end());
  for (int j : helpers) {
    if (j == inst.erased)
      fail("AccessViolation", "protocol touches the erased node W" +
                                  std::to_string(j));
    if (j < 1 || j > inst.code.n) fail("BadHelperSet", "node out of range");
  }
}

QuditState target_state(const StorageInstance& inst, int64_t eps) {
  const QuditState phi = reference_encoding(inst.code);
  const std::string we = node_name(inst.erased);
  QuditState tgt = relabel(phi, we, replacement_name(inst.erased));
  return tensor({tgt, basis_state({{we, inst.code.q}}, {eps})});
}

ProtocolResult finish(Runner& r, int64_t eps) {
  ProtocolResult res;
  res.fidelity = fidelity(r.cur, target_state(r.inst, eps));
  res.ec = entanglement_cost(r.ledger, r.inst.code.q);
  res.pass = res.fidelity >= 1.0 - 1e-9;
  r.mark("done");
  r.trace << "fidelity=" << fmt17(res.fidelity) << " ec=" << res.ec << "\n";
  res.final_state = std::move(r.cur);
  res.ledger = std::move(r.ledger);
  res.outcomes = std::move(r.outcomes);
  res.trace = r.trace.str();
  return res;
}

}  // namespace

StorageInstance encode_with_reference(const QmdsCode& code) {
  StorageInstance inst;
  inst.code = code;
  inst.state = reference_encoding(code);
  return inst;
}

StorageInstance erase(const StorageInstance& instance, int e) {
  if (instance.erased >= 1) fail("AlreadyErased", "a node is already erased");
  if (e < 1 || e > instance.code.n) fail("BadHelperSet", "erased index out of range");
  StorageInstance out = instance;
  out.erased = e;
  out.state = tensor({out.state, basis_state({{replacement_name(e),
                                               instance.code.q}},
                                             {0})});
  return out;
}

ProtocolResult run_download_return_h1(const StorageInstance& instance,
                                      std::vector<int> helpers, uint64_t seed,
                                      int64_t forced_eps, int cap_logq) {
  validate_helpers(instance, helpers);
  const QmdsCode& code = instance.code;
  if (static_cast<int>(helpers.size()) != code.t)
    fail("BadHelperSet", "helper set size != t");
  const int e = instance.erased;
  const int64_t q = code.q;
  const Unitary& u = helper_unitary(code, helpers);
  const std::string what = replacement_name(e);

  Runner r(instance, star_h1(e, helpers), seed, cap_logq);
  r.trace << "Q=" << q << " n=" << code.n << " t=" << code.t << " e=" << e << " T=";
  for (size_t i = 0; i < helpers.size(); ++i)
    r.trace << (i ? "," : "") << helpers[i];
  r.trace << " topology=h1 seed=" << seed << "\n";

  // (1) download every helper qudit to the hub
  std::vector<std::string> hub_regs;
  for (int j : helpers) {
    r.mark("download W" + std::to_string(j));
    const std::string payload = "p" + std::to_string(j);
    r.teleport_over(node_name(j), node_name(j), what, payload);
    hub_regs.push_back(payload);
  }

  // (2) locally invert the encoder block
  r.mark("invert encoder");
  r.cur = apply_unitary(r.cur, u.adjoint(), hub_regs);

  // (3) measure the mirror of the erased coordinate
  std::vector<int> comp;
  for (int j = 1; j <= code.n; ++j)
    if (!std::binary_search(helpers.begin(), helpers.end(), j)) comp.push_back(j);
  const int slot =
      code.k + static_cast<int>(std::find(comp.begin(), comp.end(), e) -
                                comp.begin());
  r.mark("measure slot");
  auto mr = measure_with_rng(r.cur, {hub_regs[slot]}, r.rng, forced_eps);
  const int64_t eps = mr.outcome[0];
  r.outcomes.push_back(eps);
  r.cur = std::move(mr.state);

  // (4) reset the slot and entangle it with the replacement qudit
  r.mark("fresh pair");
  r.cur = apply_unitary(r.cur, generalized_pauli(q, (q - eps) % q, 0),
                        {hub_regs[slot]});
  r.cur = apply_unitary(r.cur, fourier_matrix(q), {hub_regs[slot]});
  r.cur = apply_unitary(r.cur, csum_unitary(q, q, 1), {hub_regs[slot], what});

  // (5) re-encode
  r.mark("re-encode");
  r.cur = apply_unitary(r.cur, u, hub_regs);

  // (6) return the helper qudits
  for (size_t i = 0; i < helpers.size(); ++i) {
    const int j = helpers[i];
    r.mark("return W" + std::to_string(j));
    r.teleport_over(hub_regs[i], what, node_name(j), "ret" + std::to_string(j));
    r.cur = relabel(r.cur, "ret" + std::to_string(j), node_name(j));
  }

  return finish(r, eps);
}

ProtocolResult run_download_return_h2(const StorageInstance& instance,
                                      std::vector<int> helpers, int hub,
                                      uint64_t seed, int64_t forced_eps,
                                      int cap_logq) {
  validate_helpers(instance, helpers);
  const QmdsCode& code = instance.code;
  if (static_cast<int>(helpers.size()) != code.t)
    fail("BadHelperSet", "helper set size != t");
  if (!std::binary_search(helpers.begin(), helpers.end(), hub))
    fail("HubNotHelper", "hub must be one of the helpers");
  const int e = instance.erased;
  const int64_t q = code.q;
  const Unitary& u = helper_unitary(code, helpers);
  const std::string what = replacement_name(e);
  const std::string hub_name = node_name(hub);

  Runner r(instance, star_h2(e, helpers, hub), seed, cap_logq);
  r.trace << "Q=" << q << " n=" << code.n << " t=" << code.t << " e=" << e << " T=";
  for (size_t i = 0; i < helpers.size(); ++i)
    r.trace << (i ? "," : "") << helpers[i];
  r.trace << " topology=h2 hub=" << hub << " seed=" << seed << "\n";

  // (1) download the other t-1 helper qudits to the hub
  std::vector<std::string> hub_regs;
  for (int j : helpers) {
    if (j == hub) {
      hub_regs.push_back(hub_name);
      continue;
    }
    r.mark("download W" + std::to_string(j));
    const std::string payload = "p" + std::to_string(j);
    r.teleport_over(node_name(j), node_name(j), hub_name, payload);
    hub_regs.push_back(payload);
  }

  r.mark("invert encoder");
  r.cur = apply_unitary(r.cur, u.adjoint(), hub_regs);

  std::vector<int> comp;
  for (int j = 1; j <= code.n; ++j)
    if (!std::binary_search(helpers.begin(), helpers.end(), j)) comp.push_back(j);
  const int slot =
      code.k + static_cast<int>(std::find(comp.begin(), comp.end(), e) -
                                comp.begin());
  r.mark("measure slot");
  auto mr = measure_with_rng(r.cur, {hub_regs[slot]}, r.rng, forced_eps);
  const int64_t eps = mr.outcome[0];
  r.outcomes.push_back(eps);
  r.cur = std::move(mr.state);

  // fresh replacement half stays local at the hub for now
  r.mark("fresh pair");
  r.cur = apply_unitary(r.cur, generalized_pauli(q, (q - eps) % q, 0),
                        {hub_regs[slot]});
  r.cur = tensor({r.cur, basis_state({{"fresh", q}}, {0})});
  r.cur = apply_unitary(r.cur, fourier_matrix(q), {hub_regs[slot]});
  r.cur = apply_unitary(r.cur, csum_unitary(q, q, 1), {hub_regs[slot], "fresh"});

  r.mark("re-encode");
  r.cur = apply_unitary(r.cur, u, hub_regs);

  // return the downloaded qudits
  for (size_t i = 0; i < helpers.size(); ++i) {
    const int j = helpers[i];
    if (j == hub) continue;
    r.mark("return W" + std::to_string(j));
    r.teleport_over(hub_regs[i], hub_name, node_name(j), "ret" + std::to_string(j));
    r.cur = relabel(r.cur, "ret" + std::to_string(j), node_name(j));
  }

  // send the replacement qudit to the replacement node
  r.mark("send replacement");
  r.teleport_over("fresh", hub_name, what, "repl");
  auto dropped = partial_inner(r.cur, {0}, {what});  // stale |0> placeholder
  r.cur = normalize(dropped.state);
  r.cur = relabel(r.cur, "repl", what);

  return finish(r, eps);
}

InfeasibilityCertificate attempt_with_fewer_helpers(const StorageInstance& instance,
                                                    std::vector<int> helpers) {
  validate_helpers(instance, helpers);
  const QmdsCode& code = instance.code;
  if (static_cast<int>(helpers.size()) != code.t - 1)
    fail("BadHelperSet", "expected exactly t-1 helpers");
  const int e = instance.erased;
  const std::string what = replacement_name(e);

  std::vector<std::string> cut;
  for (int j : helpers) cut.push_back(node_name(j));
  cut.push_back(what);

  const int64_t sr_in = schmidt(instance.state, cut).rank;

  // State after a hypothetically successful repair: |Phi> with W_e relabeled
  // to What_e, times a pure leftover on W_e.
  QuditState out_state = target_state(instance, 0);
  const int64_t sr_required = schmidt(out_state, cut).rank;

  InfeasibilityCertificate cert;
  cert.helpers = helpers;
  cert.sr_in = sr_in;
  cert.sr_required = sr_required;
  std::ostringstream os;
  os << "cut={";
  for (size_t i = 0; i < cut.size(); ++i) os << (i ? "," : "") << cut[i];
  os << "} sr_in=" << sr_in << " sr_required=" << sr_required
     << "; Schmidt rank cannot grow under LOCC, so " << helpers.size()
     << " helpers cannot correct the erasure";
  cert.statement = os.str();
  return cert;
}

}  // namespace qmdslab
