#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pnsynth/classification.hpp"
#include "pnsynth/invariants.hpp"
#include "pnsynth/kernels.hpp"
#include "pnsynth/model.hpp"

namespace pnsynth {

/// A linear marking constraint: the token count summed over `places` must
/// not exceed `bound`. Always satisfies 0 <= bound < |places| here, so every
/// constraint actually excludes something.
struct Constraint {
  std::vector<uint32_t> places;  // ascending place indices
  int bound = 0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
  friend bool operator<(const Constraint& a, const Constraint& b) {
    if (a.places != b.places) return a.places < b.places;
    return a.bound < b.bound;
  }
};

/// A constraint together with the border states it excludes.
struct CoveredSet {
  Constraint constraint;
  std::vector<Marking> covered;
};

/// How a reduction step rewrote the pool.
///  - CollapseInvariant: state-like constraints sharing a remainder and
///    jointly exhibiting every place of a unit invariant collapse into the
///    remainder with the bound lowered by one.
///  - MergeExclusive: same-bound constraints sharing a remainder and
///    distinguished by mutually exclusive places merge into their union with
///    the bound unchanged.
enum class ReductionRule { CollapseInvariant, MergeExclusive };

struct ReductionStep {
  ReductionRule rule;
  std::vector<Constraint> inputs;     // pool items consumed by this step
  Constraint output;
  std::vector<uint32_t> certificate;  // invariant places / exclusive place set
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

struct CandidateGeneration {
  /// Pool snapshot after the collapse phase (don't-care items excluded).
  std::vector<CoveredSet> after_collapse;
  /// Final pool after both phases, before the zero-coverage drop.
  std::vector<Constraint> reduced;
  /// Final pool entries that exclude at least one border state.
  std::vector<CoveredSet> candidates;
  std::vector<Constraint> dropped_zero_coverage;
  ReductionTrace trace;
};

/// One constraint per border state: the token count over its marked places
/// must stay below the number of marked places. Exactly that state (and any
/// superset) violates the constraint; no state differing in some marked
/// place does.
std::vector<Constraint> initial_constraints(const PetriNet& net,
                                            std::span<const Marking> border);

/// Collapse rule applied for one invariant, to fixpoint. `dont_cares` are
/// markings that are free to exclude; they may complete otherwise-incomplete
/// groups but never appear in the result. The invariant must hold on the net
/// (weighted flow zero, token count one at M0) or a validation error is
/// raised.
std::vector<Constraint> collapse_by_invariant(const PetriNet& net,
                                              std::span<const Constraint> pool,
                                              std::span<const Marking> dont_cares,
                                              const UnitInvariant& invariant);

/// Merge rule applied for one set of mutually exclusive places, to fixpoint.
/// The caller certifies that at most one of `exclusive_places` is ever marked
/// (e.g. they belong to one unit invariant). Groups with mismatched bounds or
/// remainders simply do not merge.
std::vector<Constraint> merge_exclusive(std::span<const Constraint> pool,
                                        std::span<const uint32_t> exclusive_places);

/// Full reduction: initial constraints from the border states, collapse
/// phase over all invariants to fixpoint, then merge phase over all
/// invariants to fixpoint, then drop of candidates that exclude no border
/// state. Every step lands in the trace, and replay_trace reproduces the
/// reduced pool from it exactly.
CandidateGeneration generate_candidates(const PetriNet& net,
                                        std::span<const Marking> border,
                                        std::span<const Marking> dont_cares,
                                        std::span<const UnitInvariant> invariants);

/// Re-applies a recorded trace to the same inputs and returns the reduced
/// pool. Raises an internal error if the trace does not fit the inputs.
std::vector<Constraint> replay_trace(const PetriNet& net, std::span<const Marking> border,
                                     std::span<const Marking> dont_cares,
                                     const ReductionTrace& trace);

/// True iff no admissible state violates the constraint. Constraints that
/// fail this would cut behaviour the supervisor must keep.
bool admissibility_check(const PetriNet& net, const Constraint& constraint,
                         std::span<const Marking> admissible,
                         ExecutionPolicy policy = ExecutionPolicy::Auto);

/// Secondary objective when several minimal covers exist.
enum class TieBreak { Places, Arcs };

struct CoverOptions {
  bool exact = false;           // force the exhaustive search
  size_t exact_threshold = 20;  // exhaustive search when this few candidates remain
  TieBreak tie_break = TieBreak::Arcs;
};

struct CoverResult {
  /// Chosen covering constraints in selection order (essentials first).
  std::vector<CoveredSet> selected;
  /// Per-state fallback constraints added for border states no candidate
  /// covered.
  std::vector<Constraint> forced;
  /// Candidates rejected because they would exclude an admissible state.
  std::vector<Constraint> inadmissible;
  bool exact = false;  // whether the exhaustive search ran
};

/// Selects a minimal subset of admissible candidates whose violations cover
/// every border state. Candidates that are the sole cover of some border
/// state are selected first; the remainder is filled exhaustively when few
/// enough candidates remain (or --exact-cover forces it), greedily otherwise.
/// Never selects more constraints than there are border states.
CoverResult minimal_cover(const PetriNet& net, std::span<const CoveredSet> candidates,
                          std::span<const Marking> border,
                          std::span<const Marking> admissible,
                          const CoverOptions& options = {},
                          ExecutionPolicy policy = ExecutionPolicy::Auto);

/// Number of transitions whose net token flow into the constraint's place
/// set is nonzero — the arc count of the control place this constraint would
/// become.
uint32_t constraint_arc_count(const PetriNet& net, const Constraint& constraint);

/// True iff the marking violates the constraint.
bool violates(const Marking& m, const Constraint& c);

/// Human-readable form, e.g. "P5 + P6 + P7 <= 1".
std::string constraint_text(const PetriNet& net, const Constraint& c);

}  // namespace pnsynth
