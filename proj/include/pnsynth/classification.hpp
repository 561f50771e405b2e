#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pnsynth/invariants.hpp"
#include "pnsynth/kernels.hpp"
#include "pnsynth/reachability.hpp"

namespace pnsynth {

/// State sets over the quasi-semantics reachability graph, as sorted state
/// indices.
///  - forbidden:  an uncontrollable transition is quasi-enabled but not
///                really enabled (the specification alone blocks it);
///  - dangerous:  forbidden states plus everything that can reach one through
///                uncontrollable transitions only;
///  - admissible: states reachable from the initial marking without entering
///                a dangerous state (the behaviour a maximally permissive
///                supervisor retains);
///  - border:     dangerous states entered directly from an admissible state
///                by a controllable transition (the ones a supervisor must
///                cut).
struct StateClassification {
  std::vector<uint32_t> forbidden;
  std::vector<uint32_t> dangerous;
  std::vector<uint32_t> admissible;
  std::vector<uint32_t> border;
};

std::vector<uint32_t> detect_forbidden(const PetriNet& net, const ReachabilityGraph& quasi,
                                       ExecutionPolicy policy = ExecutionPolicy::Auto);

/// Least fixpoint of `forbidden` under backward closure over uncontrollable
/// arcs of the quasi graph. Idempotent and monotone in its argument.
std::vector<uint32_t> dangerous_closure(const PetriNet& net, const ReachabilityGraph& quasi,
                                        std::span<const uint32_t> forbidden);

/// Forward reachability from the initial state that never enters a dangerous
/// state. Raises an infeasibility error when the initial state itself is
/// dangerous: then no supervisor exists.
std::vector<uint32_t> admissible_set(const PetriNet& net, const ReachabilityGraph& quasi,
                                     std::span<const uint32_t> dangerous);

/// Dangerous states with an incoming arc from an admissible state. Such an
/// arc must be controllable — an uncontrollable one would contradict the
/// admissible set being closed under uncontrollable successors — and an
/// internal error is raised otherwise.
std::vector<uint32_t> border_set(const PetriNet& net, const ReachabilityGraph& quasi,
                                 std::span<const uint32_t> admissible,
                                 std::span<const uint32_t> dangerous);

/// Runs the four steps above in order.
StateClassification classify(const PetriNet& net, const ReachabilityGraph& quasi,
                             ExecutionPolicy policy = ExecutionPolicy::Auto);

/// Verdict per possible state: Keep states survive under supervision, Cut
/// states are the border the supervisor removes, DontCare states are
/// unreachable once the border is cut (free to fall on either side of a
/// constraint).
enum class StateTag : uint8_t { Keep, Cut, DontCare };

struct ClassTable {
  std::vector<Marking> states;  // possible-state enumeration order
  std::vector<StateTag> tags;
};

/// Tags every invariant-consistent marking: admissible -> Keep, border ->
/// Cut, everything else -> DontCare. Propagates the partition error when the
/// invariants do not partition the places.
ClassTable classify_table(const PetriNet& net, std::span<const UnitInvariant> invariants,
                          const ReachabilityGraph& quasi, const StateClassification& cls);

}  // namespace pnsynth
