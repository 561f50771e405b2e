#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pnsynth/classification.hpp"
#include "pnsynth/constraints.hpp"
#include "pnsynth/invariants.hpp"
#include "pnsynth/model.hpp"
#include "pnsynth/reachability.hpp"
#include "pnsynth/synthesis.hpp"

namespace pnsynth {

struct PipelineOptions {
  uint64_t max_states = 1'000'000;
  bool exact_cover = false;
  TieBreak tie_break = TieBreak::Arcs;
  ExecutionPolicy policy = ExecutionPolicy::Auto;
};

/// Everything the pipeline computed for one net, in one place. Analysis
/// fills the classification half; synthesis additionally fills constraint
/// reduction, the control places and the closed-loop verification.
struct Report {
  PetriNet net;
  PipelineOptions options;

  std::vector<UnitInvariant> invariants;
  ReachabilityGraph rg_real;
  ReachabilityGraph rg_quasi;
  StateClassification cls;

  std::optional<uint64_t> possible_count;  // empty when invariants do not partition
  std::string partition_note;              // reason, when they do not
  std::optional<ClassTable> table;

  std::vector<Marking> border_markings;      // canonical order
  std::vector<Marking> admissible_markings;  // canonical order
  std::vector<Marking> dont_cares;           // canonical order

  bool synthesis_ran = false;
  CandidateGeneration generation;
  CoverResult cover;
  SynthesisResult synthesis;
  VerificationReport verification;
};

/// Invariants, both reachability graphs, state classification and — when the
/// invariants partition the places — the tagged possible-state table. When
/// they do not partition, the table is skipped and don't-cares fall back to
/// the quasi-reachable states outside admissible and border.
Report run_analyze(const PetriNet& net, const PipelineOptions& options = {});

/// Full synthesis: analysis, constraint reduction, cover selection, control
/// places, closed-loop verification.
Report run_synthesize(const PetriNet& net, const PipelineOptions& options = {});

nlohmann::ordered_json report_json(const Report& report);
std::string report_text(const Report& report);

}  // namespace pnsynth
