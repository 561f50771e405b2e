#include "pnsynth/pipeline.hpp"

#include <algorithm>
#include <set>

namespace pnsynth {
namespace {

std::vector<Marking> sorted_markings(const ReachabilityGraph& rg,
                                     std::span<const uint32_t> indices) {
  std::vector<Marking> out;
  out.reserve(indices.size());
  for (uint32_t i : indices) out.push_back(rg.states[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Report run_analyze(const PetriNet& net, const PipelineOptions& options) {
  Report report;
  report.net = net;
  report.options = options;

  report.invariants = unit_invariants(net);

  BuildOptions build{options.max_states};
  report.rg_real = build_rg(net, Semantics::Real, build);
  report.rg_quasi = build_rg(net, Semantics::Quasi, build);
  report.cls = classify(net, report.rg_quasi, options.policy);

  report.border_markings = sorted_markings(report.rg_quasi, report.cls.border);
  report.admissible_markings = sorted_markings(report.rg_quasi, report.cls.admissible);

  try {
    report.possible_count = possible_state_count(net, report.invariants);
    report.table = classify_table(net, report.invariants, report.rg_quasi, report.cls);
    for (size_t i = 0; i < report.table->states.size(); ++i) {
      if (report.table->tags[i] == StateTag::DontCare) {
        report.dont_cares.push_back(report.table->states[i]);
      }
    }
    std::sort(report.dont_cares.begin(), report.dont_cares.end());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Partition) throw;
    // The invariants do not partition the places, so the possible-state
    // grid is unavailable. Don't-cares degrade to the quasi-reachable
    // states the supervisor abandons anyway.
    report.partition_note = e.what();
    std::set<Marking> keep(report.admissible_markings.begin(),
                           report.admissible_markings.end());
    keep.insert(report.border_markings.begin(), report.border_markings.end());
    for (const Marking& m : report.rg_quasi.states) {
      if (!keep.count(m)) report.dont_cares.push_back(m);
    }
    std::sort(report.dont_cares.begin(), report.dont_cares.end());
  }
  return report;
}

Report run_synthesize(const PetriNet& net, const PipelineOptions& options) {
  Report report = run_analyze(net, options);
  report.synthesis_ran = true;

  report.generation = generate_candidates(net, report.border_markings, report.dont_cares,
                                          report.invariants);

  CoverOptions cover_options;
  cover_options.exact = options.exact_cover;
  cover_options.tie_break = options.tie_break;
  report.cover = minimal_cover(net, report.generation.candidates, report.border_markings,
                               report.admissible_markings, cover_options, options.policy);

  std::vector<Constraint> selected;
  selected.reserve(report.cover.selected.size());
  for (const CoveredSet& cs : report.cover.selected) selected.push_back(cs.constraint);
  ConstraintSystem system = build_system(net, selected);
  report.synthesis = control_places(net, system);

  report.verification = verify_mpc(net, report.synthesis, report.cls, report.rg_quasi,
                                   BuildOptions{options.max_states});
  return report;
}

}  // namespace pnsynth
