#include "qmdslab/network.hpp"

#include <algorithm>
#include <sstream>

namespace qmdslab {

namespace {

void check_star_inputs(int e, std::vector<int>& helpers) {
  if (helpers.empty()) fail("BadHelperSet", "empty helper set");
  std::sort(helpers.begin(), helpers.end());
  for (size_t i = 0; i < helpers.size(); ++i) {
    if (helpers[i] < 1) fail("BadHelperSet", "node index must be positive");
    if (i > 0 && helpers[i] == helpers[i - 1]) fail("BadHelperSet", "repeated helper");
    if (helpers[i] == e) fail("BadHelperSet", "erased node cannot help");
  }
}

}  // namespace

Topology star_h1(int e, std::vector<int> helpers) {
  check_star_inputs(e, helpers);
  Topology t;
  t.kind = "h1";
  t.hub = replacement_name(e);
  t.erased = e;
  t.helpers = helpers;
  for (int j : helpers) t.edges.push_back({t.hub, node_name(j)});
  return t;
}

Topology star_h2(int e, std::vector<int> helpers, int hub) {
  check_star_inputs(e, helpers);
  if (!std::binary_search(helpers.begin(), helpers.end(), hub))
    fail("HubNotHelper", "hub must be one of the helpers");
  Topology t;
  t.kind = "h2";
  t.hub = node_name(hub);
  t.erased = e;
  t.helpers = helpers;
  t.edges.push_back({t.hub, replacement_name(e)});
  for (int j : helpers)
    if (j != hub) t.edges.push_back({t.hub, node_name(j)});
  return t;
}

Topology general_topology(std::vector<NetEdge> edges) {
  Topology t;
  t.kind = "general";
  t.edges = std::move(edges);
  return t;
}

std::string edge_key(const std::string& a, const std::string& b) {
  return a < b ? a + "-" + b : b + "-" + a;
}

CommLedger make_ledger(Topology topo) {
  CommLedger ledger;
  for (const auto& edge : topo.edges) ledger.beta[edge_key(edge.a, edge.b)] = 1;
  ledger.topo = std::move(topo);
  return ledger;
}

void charge(CommLedger& ledger, const std::string& from, const std::string& to,
            int64_t dim, const std::string& tag) {
  if (dim < 2) fail("BadDim", "charged dimension must be >= 2");
  const std::string key = edge_key(from, to);
  auto it = ledger.beta.find(key);
  if (it == ledger.beta.end()) fail("UnknownEdge", "no edge " + key);
  if (tag == "quantum") {
    it->second *= dim;
    auto cap = ledger.cap_beta.find(key);
    if (cap != ledger.cap_beta.end() && it->second > cap->second)
      fail("BudgetExceeded", "edge " + key + " exceeds its budget");
  } else if (tag != "classical") {
    fail("BadDim", "tag must be quantum or classical");
  }
  ledger.events.push_back({from, to, dim, tag});
}

int64_t entanglement_cost(const CommLedger& ledger, int64_t q) {
  if (q < 2) fail("BadDim", "Q must be >= 2");
  int64_t total = 0;
  for (const auto& [key, beta] : ledger.beta) {
    int64_t b = beta;
    while (b > 1) {
      if (b % q != 0) fail("NotAPowerOfQ", "beta on " + key + " is not a power of Q");
      b /= q;
      ++total;
    }
  }
  return total;
}

std::string export_ledger(const CommLedger& ledger, int64_t q) {
  std::ostringstream os;
  for (const auto& ev : ledger.events) {
    const std::string key = edge_key(ev.from, ev.to);
    os << "edge=" << key << " dir=" << ev.from << "->" << ev.to << " dim=" << ev.dim
       << " tag=" << ev.tag << "\n";
  }
  for (const auto& [key, beta] : ledger.beta) {
    int64_t b = beta, logq = 0;
    bool exact = true;
    while (b > 1 && exact) {
      if (b % q != 0) exact = false;
      else {
        b /= q;
        ++logq;
      }
    }
    os << "total edge=" << key << " beta=" << beta;
    if (exact) os << " logq=" << logq;
    os << "\n";
  }
  os << "total ec=" << entanglement_cost(ledger, q) << "\n";
  return os.str();
}

}  // namespace qmdslab
