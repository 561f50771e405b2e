#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pnsynth/json_io.hpp"
#include "pnsynth/model.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pnsynth;
using namespace testsupport;

namespace {

Marking random_marking(uint32_t places, std::mt19937& rng) {
  Marking m(places);
  for (uint32_t p = 0; p < places; ++p) {
    if (rng() % 2) m.set(p);
  }
  return m;
}

}  // namespace

TEST_CASE("fixture builds with expected shape") {
  PetriNet net = load_fixture("two_machines.json");
  CHECK(net.place_count() == 8);
  CHECK(net.transition_count() == 6);
  CHECK(net.name() == "two_machines");
  CHECK(net.place(6).kind == PlaceKind::Specification);
  CHECK(net.place(0).kind == PlaceKind::Process);
  CHECK(net.transition(0).id == "c1");
  CHECK(net.transition(0).controllable);
  CHECK_FALSE(net.transition(2).controllable);
  CHECK(net.canonical_name(net.initial_marking()) == "P1P4P7");
}

TEST_CASE("empty net is valid") {
  PetriNet net = PetriNet::build(NetDecl{"empty", {}, {}});
  CHECK(net.place_count() == 0);
  CHECK(net.transition_count() == 0);
  CHECK(net.canonical_name(net.initial_marking()) == "∅");
}

TEST_CASE("validation rejects broken declarations") {
  NetDecl decl;
  decl.name = "bad";
  decl.places = {{"P1", PlaceKind::Process, 1}, {"P2", PlaceKind::Process, 0}};

  SUBCASE("dangling arc reference") {
    decl.transitions = {{"t1", true, {"P1"}, {"P9"}}};
    CHECK_THROWS_WITH_AS(PetriNet::build(decl), doctest::Contains("P9"), Error);
    try {
      PetriNet::build(decl);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
    }
  }
  SUBCASE("duplicate place id") {
    decl.places.push_back({"P1", PlaceKind::Process, 0});
    CHECK_THROWS_AS(PetriNet::build(decl), Error);
  }
  SUBCASE("duplicate transition id") {
    decl.transitions = {{"t1", true, {"P1"}, {"P2"}}, {"t1", true, {"P2"}, {"P1"}}};
    CHECK_THROWS_AS(PetriNet::build(decl), Error);
  }
  SUBCASE("non-binary initial marking") {
    decl.places[0].initial = 2;
    CHECK_THROWS_AS(PetriNet::build(decl), Error);
  }
  SUBCASE("repeated arc on one transition") {
    decl.transitions = {{"t1", true, {"P1", "P1"}, {"P2"}}};
    CHECK_THROWS_AS(PetriNet::build(decl), Error);
  }
}

TEST_CASE("enabling at the initial fixture marking") {
  PetriNet net = load_fixture("two_machines.json");
  const Marking& m0 = net.initial_marking();

  CHECK(net.enabled_real(m0, "c1"));
  CHECK(net.enabled_real(m0, "c2"));
  CHECK_FALSE(net.enabled_real(m0, "f1"));
  CHECK_FALSE(net.enabled_real(m0, "t1"));

  // Quasi enabling matches real enabling for controllable transitions and
  // ignores specification inputs for uncontrollable ones.
  Marking m = net.marking_of({"P1", "P6", "P7"});
  CHECK_FALSE(net.enabled_real(m, "t2"));  // S-place P8 unmarked
  CHECK(net.enabled_quasi(m, "t2"));       // process side P6 marked
  CHECK_FALSE(net.enabled_quasi(m, "t1"));
}

TEST_CASE("unknown transition id raises a validation error") {
  PetriNet net = load_fixture("two_machines.json");
  CHECK_THROWS_WITH_AS(net.enabled_real(net.initial_marking(), "nope"),
                       doctest::Contains("nope"), Error);
}

TEST_CASE("controllable transitions: quasi enabling equals real enabling") {
  PetriNet net = load_fixture("two_machines.json");
  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    Marking m = random_marking(net.place_count(), rng);
    for (uint32_t t = 0; t < net.transition_count(); ++t) {
      if (net.transition(t).controllable) {
        CHECK(net.enabled_quasi(m, t) == net.enabled_real(m, t));
      }
    }
  }
}

TEST_CASE("firing moves tokens") {
  PetriNet net = load_fixture("two_machines.json");

  Marking m1 = net.fire(net.initial_marking(), "c1", Semantics::Real);
  CHECK(net.canonical_name(m1) == "P2P4P7");

  Marking m = net.marking_of({"P3", "P4", "P7"});
  Marking m2 = net.fire(m, "t1", Semantics::Real);
  CHECK(net.canonical_name(m2) == "P1P4P8");

  SUBCASE("firing a disabled transition is an error") {
    CHECK_THROWS_AS(net.fire(net.initial_marking(), "f1", Semantics::Real), Error);
  }
}

TEST_CASE("quasi firing saturates specification places only") {
  PetriNet net = load_fixture("two_machines.json");
  // t2 from P1P6P7: specification input P8 is empty and output P7 is already
  // marked; both stay within {0,1} while the process side moves normally.
  Marking m = net.marking_of({"P1", "P6", "P7"});
  Marking next = net.fire(m, "t2", Semantics::Quasi);
  CHECK(net.canonical_name(next) == "P1P4P7");
}

TEST_CASE("over-producing into a marked process place is a safety error") {
  NetDecl decl;
  decl.name = "unsafe";
  decl.places = {{"P1", PlaceKind::Process, 1}, {"P2", PlaceKind::Process, 1}};
  decl.transitions = {{"t1", true, {"P1"}, {"P1", "P2"}}};
  // t1 keeps P1 marked (self-loop) but produces into the marked P2.
  PetriNet net = PetriNet::build(decl);
  try {
    net.fire(net.initial_marking(), uint32_t(0), Semantics::Real);
    FAIL("expected a safety error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Safety);
  }
}

TEST_CASE("self-loop place keeps its token") {
  NetDecl decl;
  decl.name = "loop";
  decl.places = {{"P1", PlaceKind::Process, 1}, {"P2", PlaceKind::Process, 0}};
  decl.transitions = {{"t1", true, {"P1"}, {"P1", "P2"}}};
  PetriNet net = PetriNet::build(decl);
  Marking next = net.fire(net.initial_marking(), uint32_t(0), Semantics::Real);
  CHECK(next.test(0));
  CHECK(next.test(1));
}

TEST_CASE("fire agrees with per-place arithmetic on the fixture graph") {
  PetriNet net = load_fixture("two_machines.json");
  OracleGraph g = oracle_explore(net, Semantics::Quasi);
  for (uint32_t s = 0; s < g.states.size(); ++s) {
    Marking m = to_marking(g.states[s]);
    for (uint32_t t = 0; t < net.transition_count(); ++t) {
      CHECK(net.enabled_real(m, t) == oracle_enabled_real(net, g.states[s], t));
      CHECK(net.enabled_quasi(m, t) == oracle_enabled_quasi(net, g.states[s], t));
      if (net.enabled_quasi(m, t)) {
        Marking lib = net.fire(m, t, Semantics::Quasi);
        Marking ref = to_marking(oracle_fire(net, g.states[s], t, Semantics::Quasi));
        CHECK(lib == ref);
      }
    }
  }
}

TEST_CASE("canonical names list marked places in declaration order") {
  PetriNet net = load_fixture("two_machines.json");
  CHECK(net.canonical_name(net.marking_of({"P7", "P1", "P4"})) == "P1P4P7");
  CHECK(net.canonical_name(net.marking_of({})) == "∅");

  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    Marking m = random_marking(net.place_count(), rng);
    std::string name = net.canonical_name(m);
    std::string rebuilt;
    for (uint32_t p = 0; p < net.place_count(); ++p) {
      if (m.test(p)) rebuilt += net.place(p).id;
    }
    if (rebuilt.empty()) rebuilt = "∅";
    CHECK(name == rebuilt);
  }
}

TEST_CASE("incidence matrices satisfy c = post - pre") {
  PetriNet net = load_fixture("two_machines.json");
  const IncidenceMatrices& inc = net.incidence();
  CHECK(inc.pre.rows() == 8);
  CHECK(inc.pre.cols() == 6);
  for (uint32_t p = 0; p < 8; ++p) {
    for (uint32_t t = 0; t < 6; ++t) {
      CHECK(inc.c.at(p, t) == inc.post.at(p, t) - inc.pre.at(p, t));
    }
  }
  // Spot checks: t1 consumes P3 and P7, produces P1 and P8.
  uint32_t t1 = *net.transition_index("t1");
  CHECK(inc.pre.at(2, t1) == 1);
  CHECK(inc.pre.at(6, t1) == 1);
  CHECK(inc.post.at(0, t1) == 1);
  CHECK(inc.post.at(7, t1) == 1);
  CHECK(inc.c.at(2, t1) == -1);
  CHECK(inc.c.at(0, t1) == 1);
}

TEST_CASE("JSON round trip preserves the declaration") {
  NetDecl decl = load_net_decl(fixture_path("two_machines.json"));
  nlohmann::ordered_json j = net_to_json(decl);
  NetDecl back = parse_net_decl(j.dump());
  CHECK(back.name == decl.name);
  CHECK(back.places.size() == decl.places.size());
  CHECK(back.transitions.size() == decl.transitions.size());
  CHECK(net_to_json(back) == j);
}

TEST_CASE("malformed JSON raises a parse error with a position") {
  try {
    parse_net_decl("{\"name\": ");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }
}

TEST_CASE("schema violations raise parse errors") {
  CHECK_THROWS_AS(parse_net_decl("[]"), Error);
  CHECK_THROWS_AS(parse_net_decl(R"({"name":"x","places":[],"transitions":0})"), Error);
  CHECK_THROWS_AS(parse_net_decl(
                      R"({"name":"x","places":[{"id":"P1","kind":"green","initial":0}],"transitions":[]})"),
                  Error);
  CHECK_THROWS_AS(parse_net_decl(
                      R"({"name":"x","places":[{"id":"P1","kind":"process"}],"transitions":[]})"),
                  Error);
}
