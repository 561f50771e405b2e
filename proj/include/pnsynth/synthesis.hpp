#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnsynth/classification.hpp"
#include "pnsynth/constraints.hpp"
#include "pnsynth/model.hpp"
#include "pnsynth/reachability.hpp"

namespace pnsynth {

/// The selected constraints in matrix form: L * m <= b over plant markings,
/// one row per constraint in selection order. Duplicate rows are dropped.
struct ConstraintSystem {
  std::vector<Constraint> constraints;
  IntMatrix lhs;               // |constraints| x |places|, 0/1 entries
  std::vector<int32_t> bound;  // b
};

ConstraintSystem build_system(const PetriNet& net, std::span<const Constraint> selected);

/// One control place per constraint row, connected so that the row's token
/// sum plus the control place's marking is constant: arcs follow the negated
/// token flow of the constrained places, and the initial marking is the
/// remaining slack. Raises:
///  - an infeasibility error when a constraint is already violated at the
///    initial marking (negative slack);
///  - an inadmissible-supervisor error when a control place would sit on the
///    input side of an uncontrollable transition.
struct SynthesisResult {
  ConstraintSystem system;
  IntMatrix control_flow;                // |constraints| x |transitions|
  std::vector<int32_t> control_initial;  // slack at M0, per constraint
  std::vector<std::string> control_ids;
  /// Plant net with the control places wired in — present when every control
  /// arc has weight one and every control marking is binary, i.e. when the
  /// controlled net is again a safe weight-1 net. The matrices above are
  /// authoritative either way.
  std::optional<PetriNet> controlled;
};

SynthesisResult control_places(const PetriNet& net, const ConstraintSystem& system);

/// Exhaustive check of the closed loop, explored directly from the matrices
/// (so it also covers non-binary control markings):
///  (a) the plant projection of the controlled behaviour is exactly the
///      admissible set;
///  (b) no border state is reachable;
///  (c) every reached state satisfies L*m + m_c = b row by row.
/// Failures carry the offending state and a firing path from the initial
/// state.
struct VerificationReport {
  bool ok = false;
  uint64_t controlled_states = 0;
  std::vector<Marking> plant_projection;  // canonical order
  std::vector<std::string> issues;
  std::string counterexample;              // offending plant state, if any
  std::vector<std::string> counterexample_path;  // transition ids from M0
};

VerificationReport verify_mpc(const PetriNet& net, const SynthesisResult& synthesis,
                              const StateClassification& cls,
                              const ReachabilityGraph& quasi,
                              const BuildOptions& options = {});

}  // namespace pnsynth
