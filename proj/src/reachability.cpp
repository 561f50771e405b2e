#include "pnsynth/reachability.hpp"

#include <sstream>

namespace pnsynth {

ReachabilityGraph build_rg(const PetriNet& net, Semantics semantics,
                           const BuildOptions& options) {
  ReachabilityGraph rg;
  rg.semantics = semantics;

  rg.states.push_back(net.initial_marking());
  rg.index_.emplace(net.initial_marking(), 0);

  // States are appended in discovery order and processed in index order, so
  // the arc vector comes out sorted by (source, transition) with no extra
  // work.
  std::vector<std::vector<Arc>> outgoing;
  for (uint32_t s = 0; s < rg.states.size(); ++s) {
    outgoing.emplace_back();
    for (uint32_t t = 0; t < net.transition_count(); ++t) {
      if (!net.enabled(rg.states[s], t, semantics)) continue;
      Marking next = net.fire(rg.states[s], t, semantics);
      auto [it, inserted] = rg.index_.emplace(next, uint32_t(rg.states.size()));
      if (inserted) {
        if (rg.states.size() >= options.max_states) {
          fail(ErrorKind::StateCap,
               "state cap exceeded: more than " + std::to_string(options.max_states) +
                   " reachable states");
        }
        rg.states.push_back(std::move(next));
      }
      outgoing[s].push_back(Arc{s, t, it->second});
    }
  }

  rg.arc_begin.assign(rg.states.size() + 1, 0);
  for (uint32_t s = 0; s < rg.states.size(); ++s) {
    rg.arc_begin[s + 1] = rg.arc_begin[s] + uint32_t(outgoing[s].size());
  }
  rg.arcs.reserve(rg.arc_begin.back());
  for (const std::vector<Arc>& v : outgoing) {
    rg.arcs.insert(rg.arcs.end(), v.begin(), v.end());
  }
  return rg;
}

std::optional<uint32_t> delta(const ReachabilityGraph& rg, uint32_t state,
                              uint32_t transition) {
  if (state >= rg.states.size()) {
    fail(ErrorKind::Internal, "delta: state index out of range");
  }
  for (uint32_t i = rg.arc_begin[state]; i < rg.arc_begin[state + 1]; ++i) {
    if (rg.arcs[i].transition == transition) return rg.arcs[i].target;
  }
  return std::nullopt;
}

std::string export_dot(const ReachabilityGraph& rg, const PetriNet& net,
                       const std::map<uint32_t, StateClass>& highlight) {
  auto fill = [](StateClass c) {
    switch (c) {
      case StateClass::Admissible: return "palegreen";
      case StateClass::Border: return "orange";
      case StateClass::Forbidden: return "lightcoral";
      case StateClass::Dangerous: return "khaki";
      case StateClass::Unreachable: return "lightgray";
    }
    return "white";
  };

  std::ostringstream out;
  out << "digraph reachability {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=ellipse, style=filled, fillcolor=white];\n";
  for (uint32_t s = 0; s < rg.states.size(); ++s) {
    out << "  s" << s << " [label=\"" << net.canonical_name(rg.states[s]) << "\"";
    auto it = highlight.find(s);
    if (it != highlight.end()) out << ", fillcolor=\"" << fill(it->second) << "\"";
    if (s == rg.initial) out << ", peripheries=2";
    out << "];\n";
  }
  for (const Arc& a : rg.arcs) {
    out << "  s" << a.source << " -> s" << a.target << " [label=\""
        << net.transition(a.transition).id << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pnsynth
