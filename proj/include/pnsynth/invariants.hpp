#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pnsynth/model.hpp"

namespace pnsynth {

/// A place invariant with binary coefficients whose weighted token count is
/// one at the initial marking. For a safe conservative net such an invariant
/// says: exactly one of these places is marked, in every reachable marking.
struct UnitInvariant {
  std::vector<uint32_t> places;  // ascending place indices

  friend bool operator==(const UnitInvariant&, const UnitInvariant&) = default;
};

/// Enumerates the minimal-support place invariants of the net with binary
/// coefficients and initial token count one, ordered by ascending place
/// sequence. Uses the classical tableau elimination over [C | I], one
/// transition column at a time, normalising rows by their gcd and keeping
/// only minimal-support solutions.
std::vector<UnitInvariant> unit_invariants(const PetriNet& net);

/// Number of markings consistent with all invariants (the product of the
/// invariant sizes). Requires the invariants to partition the place set:
/// pairwise disjoint and jointly covering every place; otherwise raises a
/// partition error.
uint64_t possible_state_count(const PetriNet& net, std::span<const UnitInvariant> invariants);

/// Materialises the consistent markings in a canonical order: one place
/// chosen per invariant, with the first invariant's choice varying fastest
/// and choices following each invariant's place order. The first state marks
/// each invariant's first place. Same partition requirement as
/// possible_state_count.
std::vector<Marking> enumerate_possible_states(const PetriNet& net,
                                               std::span<const UnitInvariant> invariants);

}  // namespace pnsynth
