#include "pnsynth/synthesis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pnsynth {

ConstraintSystem build_system(const PetriNet& net, std::span<const Constraint> selected) {
  ConstraintSystem sys;
  std::set<Constraint> seen;
  for (const Constraint& c : selected) {
    if (!seen.insert(c).second) continue;  // duplicate row adds nothing
    sys.constraints.push_back(c);
  }

  sys.lhs = IntMatrix(uint32_t(sys.constraints.size()), net.place_count());
  sys.bound.reserve(sys.constraints.size());
  for (uint32_t i = 0; i < sys.constraints.size(); ++i) {
    for (uint32_t p : sys.constraints[i].places) sys.lhs.at(i, p) = 1;
    sys.bound.push_back(sys.constraints[i].bound);
  }
  return sys;
}

namespace {

std::string unique_control_id(const PetriNet& net, uint32_t ordinal,
                              const std::set<std::string>& taken) {
  std::string id = "C" + std::to_string(ordinal);
  while (net.place_index(id) || taken.count(id)) id += "_";
  return id;
}

}  // namespace

SynthesisResult control_places(const PetriNet& net, const ConstraintSystem& system) {
  const uint32_t rows = uint32_t(system.constraints.size());
  const uint32_t nt = net.transition_count();

  SynthesisResult result;
  result.system = system;
  result.control_flow = IntMatrix(rows, nt);
  result.control_initial.reserve(rows);

  std::set<std::string> taken;
  for (uint32_t i = 0; i < rows; ++i) {
    result.control_ids.push_back(unique_control_id(net, i + 1, taken));
    taken.insert(result.control_ids.back());
  }

  bool representable = true;
  for (uint32_t i = 0; i < rows; ++i) {
    const Constraint& c = system.constraints[i];

    int32_t tokens = 0;
    for (uint32_t p : c.places) tokens += net.initial_marking().test(p) ? 1 : 0;
    const int32_t slack = system.bound[i] - tokens;
    if (slack < 0) {
      fail(ErrorKind::Infeasible,
           "constraint " + std::to_string(i + 1) + " is already violated at the "
           "initial marking (token count " + std::to_string(tokens) + " > bound " +
           std::to_string(system.bound[i]) + ")");
    }
    result.control_initial.push_back(slack);
    if (slack > 1) representable = false;

    for (uint32_t t = 0; t < nt; ++t) {
      int32_t flow = 0;
      for (uint32_t p : c.places) flow += net.incidence().c.at(p, t);
      const int32_t control = -flow;
      result.control_flow.at(i, t) = control;
      if (control < 0 && !net.transition(t).controllable) {
        fail(ErrorKind::InadmissibleSupervisor,
             "control place " + result.control_ids[i] + " would gate uncontrollable "
             "transition '" + net.transition(t).id + "'");
      }
      if (control < -1 || control > 1) representable = false;
    }
  }

  if (representable) {
    NetDecl decl;
    decl.name = net.name();
    decl.places = net.places();
    for (uint32_t i = 0; i < rows; ++i) {
      decl.places.push_back(PlaceDecl{result.control_ids[i], PlaceKind::Specification,
                                      int(result.control_initial[i])});
    }
    for (uint32_t t = 0; t < nt; ++t) {
      const Transition& tr = net.transition(t);
      TransitionDecl td;
      td.id = tr.id;
      td.controllable = tr.controllable;
      for (uint32_t p : tr.inputs) td.inputs.push_back(net.place(p).id);
      for (uint32_t p : tr.outputs) td.outputs.push_back(net.place(p).id);
      for (uint32_t i = 0; i < rows; ++i) {
        const int32_t flow = result.control_flow.at(i, t);
        if (flow < 0) td.inputs.push_back(result.control_ids[i]);
        if (flow > 0) td.outputs.push_back(result.control_ids[i]);
      }
      decl.transitions.push_back(std::move(td));
    }
    result.controlled = PetriNet::build(decl);
  }
  return result;
}

namespace {

struct ControlledState {
  Marking plant;
  std::vector<int32_t> control;

  friend bool operator<(const ControlledState& a, const ControlledState& b) {
    if (a.plant.words() != b.plant.words()) return a.plant.words() < b.plant.words();
    return a.control < b.control;
  }
};

}  // namespace

VerificationReport verify_mpc(const PetriNet& net, const SynthesisResult& synthesis,
                              const StateClassification& cls,
                              const ReachabilityGraph& quasi, const BuildOptions& options) {
  const uint32_t rows = uint32_t(synthesis.system.constraints.size());
  const uint32_t nt = net.transition_count();

  VerificationReport report;

  std::vector<ControlledState> states;
  std::map<ControlledState, uint32_t> index;
  std::vector<std::pair<uint32_t, uint32_t>> parent;  // (state, transition), or (self, nt)

  ControlledState init{net.initial_marking(),
                       {synthesis.control_initial.begin(), synthesis.control_initial.end()}};
  states.push_back(init);
  index.emplace(std::move(init), 0);
  parent.emplace_back(0, nt);

  auto path_to = [&](uint32_t s) {
    std::vector<std::string> path;
    while (parent[s].second != nt) {
      path.push_back(net.transition(parent[s].second).id);
      s = parent[s].first;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  auto note = [&](const std::string& issue, uint32_t witness, bool with_path) {
    report.issues.push_back(issue);
    if (report.counterexample.empty()) {
      report.counterexample = net.canonical_name(states[witness].plant);
      if (with_path) report.counterexample_path = path_to(witness);
    }
  };

  // Row sums are checked at every state: L*m + m_c must equal b.
  auto check_balance = [&](uint32_t s) {
    for (uint32_t i = 0; i < rows; ++i) {
      int32_t tokens = 0;
      for (uint32_t p : synthesis.system.constraints[i].places) {
        tokens += states[s].plant.test(p) ? 1 : 0;
      }
      if (tokens + states[s].control[i] != synthesis.system.bound[i]) {
        note("balance violated at " + net.canonical_name(states[s].plant) +
                 ": constraint " + std::to_string(i + 1) + " has token count " +
                 std::to_string(tokens) + " with control marking " +
                 std::to_string(states[s].control[i]) + ", bound " +
                 std::to_string(synthesis.system.bound[i]),
             s, true);
        return false;
      }
    }
    return true;
  };
  check_balance(0);

  for (uint32_t s = 0; s < states.size(); ++s) {
    for (uint32_t t = 0; t < nt; ++t) {
      if (!net.enabled_real(states[s].plant, t)) continue;
      bool gated = false;
      for (uint32_t i = 0; i < rows && !gated; ++i) {
        const int32_t flow = synthesis.control_flow.at(i, t);
        if (flow < 0 && states[s].control[i] + flow < 0) gated = true;
      }
      if (gated) continue;

      ControlledState next;
      next.plant = net.fire(states[s].plant, t, Semantics::Real);
      next.control = states[s].control;
      for (uint32_t i = 0; i < rows; ++i) next.control[i] += synthesis.control_flow.at(i, t);

      auto [it, inserted] = index.emplace(next, uint32_t(states.size()));
      if (inserted) {
        if (states.size() >= options.max_states) {
          fail(ErrorKind::StateCap, "state cap exceeded while verifying the closed loop");
        }
        states.push_back(std::move(next));
        parent.emplace_back(s, t);
        check_balance(uint32_t(states.size()) - 1);
      }
    }
  }
  report.controlled_states = states.size();

  // Plant projection vs. the admissible set.
  std::set<Marking> projection;
  std::map<Marking, uint32_t> witness;  // first controlled state per plant marking
  for (uint32_t s = 0; s < states.size(); ++s) {
    if (projection.insert(states[s].plant).second) witness.emplace(states[s].plant, s);
  }
  report.plant_projection.assign(projection.begin(), projection.end());

  std::set<Marking> admissible;
  for (uint32_t s : cls.admissible) admissible.insert(quasi.states[s]);
  std::set<Marking> border;
  for (uint32_t s : cls.border) border.insert(quasi.states[s]);

  for (const Marking& m : admissible) {
    if (!projection.count(m)) {
      report.issues.push_back("admissible state " + net.canonical_name(m) +
                              " is unreachable under control");
      if (report.counterexample.empty()) report.counterexample = net.canonical_name(m);
    }
  }
  for (const Marking& m : report.plant_projection) {
    if (border.count(m)) {
      note("border state " + net.canonical_name(m) + " is reachable under control",
           witness.at(m), true);
    } else if (!admissible.count(m)) {
      note("state " + net.canonical_name(m) +
               " is reachable under control but not admissible",
           witness.at(m), true);
    }
  }

  report.ok = report.issues.empty();
  return report;
}

}  // namespace pnsynth
