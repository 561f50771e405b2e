#include "pnsynth/classification.hpp"

#include <algorithm>

namespace pnsynth {
namespace {

std::vector<uint8_t> member_bits(size_t n, std::span<const uint32_t> indices) {
  std::vector<uint8_t> bits(n, 0);
  for (uint32_t i : indices) bits[i] = 1;
  return bits;
}

std::vector<uint32_t> collect(const std::vector<uint8_t>& bits) {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<uint32_t> detect_forbidden(const PetriNet& net, const ReachabilityGraph& quasi,
                                       ExecutionPolicy policy) {
  std::vector<uint8_t> flags = kernels::scan_forbidden(net, quasi.states, policy);
  return collect(flags);
}

std::vector<uint32_t> dangerous_closure(const PetriNet& net, const ReachabilityGraph& quasi,
                                        std::span<const uint32_t> forbidden) {
  // Reverse adjacency restricted to uncontrollable transitions.
  std::vector<std::vector<uint32_t>> rev(quasi.states.size());
  for (const Arc& a : quasi.arcs) {
    if (!net.transition(a.transition).controllable) rev[a.target].push_back(a.source);
  }

  std::vector<uint8_t> danger = member_bits(quasi.states.size(), forbidden);
  std::vector<uint32_t> work(forbidden.begin(), forbidden.end());
  while (!work.empty()) {
    uint32_t s = work.back();
    work.pop_back();
    for (uint32_t pred : rev[s]) {
      if (!danger[pred]) {
        danger[pred] = 1;
        work.push_back(pred);
      }
    }
  }
  return collect(danger);
}

std::vector<uint32_t> admissible_set(const PetriNet& net, const ReachabilityGraph& quasi,
                                     std::span<const uint32_t> dangerous) {
  (void)net;
  std::vector<uint8_t> danger = member_bits(quasi.states.size(), dangerous);
  if (danger[quasi.initial]) {
    fail(ErrorKind::Infeasible,
         "initial state is dangerous: an uncontrollable path violates the "
         "specification from the start, so no supervisor exists");
  }
  std::vector<uint8_t> seen(quasi.states.size(), 0);
  seen[quasi.initial] = 1;
  std::vector<uint32_t> work{quasi.initial};
  while (!work.empty()) {
    uint32_t s = work.back();
    work.pop_back();
    for (uint32_t i = quasi.arc_begin[s]; i < quasi.arc_begin[s + 1]; ++i) {
      uint32_t d = quasi.arcs[i].target;
      if (!danger[d] && !seen[d]) {
        seen[d] = 1;
        work.push_back(d);
      }
    }
  }
  return collect(seen);
}

std::vector<uint32_t> border_set(const PetriNet& net, const ReachabilityGraph& quasi,
                                 std::span<const uint32_t> admissible,
                                 std::span<const uint32_t> dangerous) {
  std::vector<uint8_t> adm = member_bits(quasi.states.size(), admissible);
  std::vector<uint8_t> danger = member_bits(quasi.states.size(), dangerous);
  std::vector<uint8_t> border(quasi.states.size(), 0);
  for (const Arc& a : quasi.arcs) {
    if (!adm[a.source] || !danger[a.target]) continue;
    if (!net.transition(a.transition).controllable) {
      fail(ErrorKind::Internal,
           "uncontrollable arc '" + net.transition(a.transition).id + "' leads from " +
               net.canonical_name(quasi.states[a.source]) + " into a dangerous state; " +
               "the admissible set is not closed");
    }
    border[a.target] = 1;
  }
  return collect(border);
}

StateClassification classify(const PetriNet& net, const ReachabilityGraph& quasi,
                             ExecutionPolicy policy) {
  StateClassification cls;
  cls.forbidden = detect_forbidden(net, quasi, policy);
  cls.dangerous = dangerous_closure(net, quasi, cls.forbidden);
  cls.admissible = admissible_set(net, quasi, cls.dangerous);
  cls.border = border_set(net, quasi, cls.admissible, cls.dangerous);
  return cls;
}

ClassTable classify_table(const PetriNet& net, std::span<const UnitInvariant> invariants,
                          const ReachabilityGraph& quasi, const StateClassification& cls) {
  ClassTable table;
  table.states = enumerate_possible_states(net, invariants);  // may raise partition error
  table.tags.reserve(table.states.size());

  std::vector<uint8_t> adm = member_bits(quasi.states.size(), cls.admissible);
  std::vector<uint8_t> border = member_bits(quasi.states.size(), cls.border);
  for (const Marking& m : table.states) {
    StateTag tag = StateTag::DontCare;
    if (auto idx = quasi.find_state(m)) {
      if (adm[*idx]) {
        tag = StateTag::Keep;
      } else if (border[*idx]) {
        tag = StateTag::Cut;
      }
    }
    table.tags.push_back(tag);
  }
  return table;
}

}  // namespace pnsynth
