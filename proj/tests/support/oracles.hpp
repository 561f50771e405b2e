#pragma once

// Independent reference implementations used to cross-check the library.
// They use only the net's structural accessors (places, arcs, kinds,
// controllability) and re-derive all semantics with plain per-place
// arithmetic — no bit masks, no library graph code.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "pnsynth/invariants.hpp"
#include "pnsynth/model.hpp"

namespace testsupport {

using StateVec = std::vector<uint8_t>;  // one token count per place

inline StateVec to_vec(const pnsynth::Marking& m) {
  StateVec v(m.size(), 0);
  for (uint32_t p = 0; p < m.size(); ++p) v[p] = m.test(p) ? 1 : 0;
  return v;
}

inline pnsynth::Marking to_marking(const StateVec& v) {
  pnsynth::Marking m(uint32_t(v.size()));
  for (uint32_t p = 0; p < v.size(); ++p) {
    if (v[p]) m.set(p);
  }
  return m;
}

inline bool oracle_enabled_real(const pnsynth::PetriNet& net, const StateVec& m, uint32_t t) {
  for (uint32_t p : net.transition(t).inputs) {
    if (!m[p]) return false;
  }
  return true;
}

inline bool oracle_enabled_quasi(const pnsynth::PetriNet& net, const StateVec& m,
                                 uint32_t t) {
  if (net.transition(t).controllable) return oracle_enabled_real(net, m, t);
  for (uint32_t p : net.transition(t).inputs) {
    if (net.place(p).kind == pnsynth::PlaceKind::Process && !m[p]) return false;
  }
  return true;
}

inline StateVec oracle_fire(const pnsynth::PetriNet& net, const StateVec& m, uint32_t t,
                            pnsynth::Semantics sem) {
  const bool really = oracle_enabled_real(net, m, t);
  StateVec out = m;
  for (uint32_t p : net.transition(t).inputs) out[p] -= 1;
  for (uint32_t p : net.transition(t).outputs) out[p] += 1;
  for (uint32_t p = 0; p < out.size(); ++p) {
    const bool spec = net.place(p).kind == pnsynth::PlaceKind::Specification;
    if (sem == pnsynth::Semantics::Quasi && !really && spec) {
      out[p] = std::clamp<int>(int8_t(out[p]), 0, 1);  // saturating update
    } else if (out[p] > 1 || int8_t(out[p]) < 0) {
      throw std::runtime_error("oracle: non-binary token count");
    }
  }
  return out;
}

struct OracleGraph {
  std::vector<StateVec> states;  // discovery order
  std::map<StateVec, uint32_t> index;
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> succ;  // (transition, target)
};

inline OracleGraph oracle_explore(const pnsynth::PetriNet& net, pnsynth::Semantics sem) {
  OracleGraph g;
  StateVec init = to_vec(net.initial_marking());
  g.states.push_back(init);
  g.index.emplace(init, 0);
  for (uint32_t s = 0; s < g.states.size(); ++s) {
    g.succ.emplace_back();
    for (uint32_t t = 0; t < net.transition_count(); ++t) {
      const bool on = sem == pnsynth::Semantics::Real
                          ? oracle_enabled_real(net, g.states[s], t)
                          : oracle_enabled_quasi(net, g.states[s], t);
      if (!on) continue;
      StateVec next = oracle_fire(net, g.states[s], t, sem);
      auto [it, inserted] = g.index.emplace(next, uint32_t(g.states.size()));
      if (inserted) g.states.push_back(std::move(next));
      g.succ[s].emplace_back(t, it->second);
    }
  }
  return g;
}

inline bool oracle_forbidden(const pnsynth::PetriNet& net, const StateVec& m) {
  for (uint32_t t = 0; t < net.transition_count(); ++t) {
    if (net.transition(t).controllable) continue;
    if (oracle_enabled_quasi(net, m, t) && !oracle_enabled_real(net, m, t)) return true;
  }
  return false;
}

struct OracleClassification {
  std::set<StateVec> forbidden, dangerous, admissible, border;
  bool feasible = true;  // false when the initial state is dangerous
};

/// Supervisory-control fixpoint computed naively: mark forbidden states,
/// repeatedly add states with an uncontrollable step into the marked set,
/// then take forward reachability avoiding the marked set.
inline OracleClassification oracle_classify(const pnsynth::PetriNet& net) {
  OracleGraph g = oracle_explore(net, pnsynth::Semantics::Quasi);
  const uint32_t n = uint32_t(g.states.size());
  OracleClassification out;

  std::vector<uint8_t> danger(n, 0);
  for (uint32_t s = 0; s < n; ++s) {
    if (oracle_forbidden(net, g.states[s])) {
      danger[s] = 1;
      out.forbidden.insert(g.states[s]);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t s = 0; s < n; ++s) {
      if (danger[s]) continue;
      for (auto [t, d] : g.succ[s]) {
        if (!net.transition(t).controllable && danger[d]) {
          danger[s] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  for (uint32_t s = 0; s < n; ++s) {
    if (danger[s]) out.dangerous.insert(g.states[s]);
  }

  if (danger[0]) {
    out.feasible = false;
    return out;
  }
  std::vector<uint8_t> adm(n, 0);
  adm[0] = 1;
  changed = true;
  while (changed) {
    changed = false;
    for (uint32_t s = 0; s < n; ++s) {
      if (!adm[s]) continue;
      for (auto [t, d] : g.succ[s]) {
        if (!danger[d] && !adm[d]) {
          adm[d] = 1;
          changed = true;
        }
      }
    }
  }
  for (uint32_t s = 0; s < n; ++s) {
    if (adm[s]) out.admissible.insert(g.states[s]);
    for (auto [t, d] : g.succ[s]) {
      if (adm[s] && danger[d]) out.border.insert(g.states[d]);
    }
  }
  return out;
}

/// All binary markings consistent with every given invariant (token count
/// exactly one on each). Exhaustive over 2^places, so only for small nets.
inline std::vector<StateVec> oracle_consistent_markings(
    const pnsynth::PetriNet& net, const std::vector<pnsynth::UnitInvariant>& invariants) {
  const uint32_t np = net.place_count();
  if (np > 20) throw std::runtime_error("oracle: too many places to enumerate");
  std::vector<StateVec> out;
  for (uint64_t bits = 0; bits < (uint64_t(1) << np); ++bits) {
    StateVec v(np, 0);
    for (uint32_t p = 0; p < np; ++p) v[p] = bits >> p & 1;
    bool ok = true;
    for (const pnsynth::UnitInvariant& inv : invariants) {
      int sum = 0;
      for (uint32_t p : inv.places) sum += v[p];
      if (sum != 1) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(v));
  }
  return out;
}

inline bool oracle_violates(const StateVec& m, const std::vector<uint32_t>& places,
                            int bound) {
  int sum = 0;
  for (uint32_t p : places) sum += m[p];
  return sum > bound;
}

}  // namespace testsupport
