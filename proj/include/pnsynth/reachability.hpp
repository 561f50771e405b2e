#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pnsynth/model.hpp"

namespace pnsynth {

/// Classification tag used when colouring exported graphs.
enum class StateClass { Admissible, Border, Forbidden, Dangerous, Unreachable };

struct Arc {
  uint32_t source;
  uint32_t transition;
  uint32_t target;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct BuildOptions {
  uint64_t max_states = 1'000'000;
};

/// Reachability graph explored breadth-first from the initial marking, firing
/// transitions in declaration order. State 0 is the initial marking and state
/// numbering is exploration order, so the graph is identical across runs.
/// Arcs are grouped by source state (CSR layout), in firing order.
struct ReachabilityGraph {
  Semantics semantics = Semantics::Real;
  std::vector<Marking> states;
  std::vector<Arc> arcs;
  std::vector<uint32_t> arc_begin;  // size states.size()+1
  uint32_t initial = 0;

  std::optional<uint32_t> find_state(const Marking& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::unordered_map<Marking, uint32_t, MarkingHash> index_;
};

/// Explores the net under the given semantics. Raises a state-cap error when
/// the graph would exceed options.max_states states.
ReachabilityGraph build_rg(const PetriNet& net, Semantics semantics,
                           const BuildOptions& options = {});

/// Successor of `state` by `transition`, if that arc exists.
std::optional<uint32_t> delta(const ReachabilityGraph& rg, uint32_t state,
                              uint32_t transition);

/// Serialises the graph as DOT. Node labels are canonical state names; the
/// highlight map colours states by class and the initial state is drawn with
/// a double border. Output is byte-identical for identical input.
std::string export_dot(const ReachabilityGraph& rg, const PetriNet& net,
                       const std::map<uint32_t, StateClass>& highlight = {});

}  // namespace pnsynth
