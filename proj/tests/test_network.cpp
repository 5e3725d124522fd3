#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmdslab/network.hpp"

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

}  // namespace

TEST_CASE("star topologies") {
  Topology h1 = star_h1(5, {3, 1, 2});
  CHECK(h1.kind == "h1");
  CHECK(h1.hub == "What5");
  CHECK(h1.edges.size() == 3);
  CHECK(h1.helpers == std::vector<int>{1, 2, 3});

  Topology h2 = star_h2(5, {1, 2, 3}, 2);
  CHECK(h2.kind == "h2");
  CHECK(h2.hub == "W2");
  CHECK(h2.edges.size() == 3);  // two helpers + the replacement node
  CHECK(h2.edges[0].b == "What5");

  CHECK(kind_of([] { star_h1(5, {}); }) == "BadHelperSet");
  CHECK(kind_of([] { star_h1(5, {1, 1, 2}); }) == "BadHelperSet");
  CHECK(kind_of([] { star_h1(5, {1, 2, 5}); }) == "BadHelperSet");
  CHECK(kind_of([] { star_h2(5, {1, 2, 3}, 4); }) == "HubNotHelper");
}

TEST_CASE("edge keys are orientation free") {
  CHECK(edge_key("W1", "What5") == edge_key("What5", "W1"));
  CHECK(edge_key("W1", "W2") == "W1-W2");
}

TEST_CASE("charging multiplies beta, classical traffic is free") {
  CommLedger ledger = make_ledger(star_h1(5, {1, 2, 3}));
  charge(ledger, "What5", "W1", 5, "quantum");
  charge(ledger, "W1", "What5", 5, "quantum");
  charge(ledger, "What5", "W1", 5, "classical");
  charge(ledger, "What5", "W1", 5, "classical");
  CHECK(ledger.beta[edge_key("W1", "What5")] == 25);
  CHECK(ledger.beta[edge_key("W2", "What5")] == 1);
  CHECK(ledger.events.size() == 4);
  CHECK(entanglement_cost(ledger, 5) == 2);

  CHECK(kind_of([&] { charge(ledger, "W1", "W2", 5, "quantum"); }) ==
        "UnknownEdge");
  CHECK(kind_of([&] { charge(ledger, "What5", "W1", 1, "quantum"); }) ==
        "BadDim");
  CHECK(kind_of([&] { charge(ledger, "What5", "W1", 5, "qubits"); }) ==
        "BadDim");
}

TEST_CASE("budget caps trip at charge time") {
  CommLedger ledger = make_ledger(star_h1(5, {1, 2, 3}));
  ledger.cap_beta[edge_key("W1", "What5")] = 5;
  charge(ledger, "What5", "W1", 5, "quantum");
  CHECK(kind_of([&] { charge(ledger, "What5", "W1", 5, "quantum"); }) ==
        "BudgetExceeded");
}

TEST_CASE("entanglement cost requires powers of Q") {
  CommLedger ledger = make_ledger(star_h1(5, {1, 2, 3}));
  charge(ledger, "What5", "W1", 10, "quantum");
  CHECK(kind_of([&] { entanglement_cost(ledger, 5); }) == "NotAPowerOfQ");
  CHECK(entanglement_cost(ledger, 10) == 1);
}

TEST_CASE("ledger export is stable and complete") {
  CommLedger ledger = make_ledger(star_h2(4, {1, 2}, 1));
  charge(ledger, "W1", "W2", 5, "quantum");
  charge(ledger, "W2", "W1", 5, "quantum");
  charge(ledger, "W1", "What4", 5, "quantum");
  charge(ledger, "W1", "W2", 5, "classical");
  const std::string text = export_ledger(ledger, 5);
  CHECK(text.find("edge=W1-W2 dir=W1->W2 dim=5 tag=quantum\n") != std::string::npos);
  CHECK(text.find("edge=W1-W2 dir=W1->W2 dim=5 tag=classical\n") != std::string::npos);
  CHECK(text.find("total edge=W1-W2 beta=25 logq=2\n") != std::string::npos);
  CHECK(text.find("total edge=W1-What4 beta=5 logq=1\n") != std::string::npos);
  CHECK(text.find("total ec=3\n") != std::string::npos);
  CHECK(export_ledger(ledger, 5) == text);
}

TEST_CASE("general topologies carry arbitrary edges") {
  Topology g = general_topology({{"A", "B"}, {"B", "C"}});
  CHECK(g.kind == "general");
  CommLedger ledger = make_ledger(g);
  charge(ledger, "C", "B", 7, "quantum");
  CHECK(entanglement_cost(ledger, 7) == 1);
}
