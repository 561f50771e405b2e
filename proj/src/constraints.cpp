#include "pnsynth/constraints.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

namespace pnsynth {

bool violates(const Marking& m, const Constraint& c) {
  int tokens = 0;
  for (uint32_t p : c.places) tokens += m.test(p) ? 1 : 0;
  return tokens > c.bound;
}

std::vector<Constraint> initial_constraints(const PetriNet& net,
                                            std::span<const Marking> border) {
  (void)net;
  std::vector<Constraint> out;
  out.reserve(border.size());
  for (const Marking& m : border) {
    Constraint c;
    c.places = m.marked();
    c.bound = int(c.places.size()) - 1;
    out.push_back(std::move(c));
  }
  return out;
}

uint32_t constraint_arc_count(const PetriNet& net, const Constraint& constraint) {
  uint32_t arcs = 0;
  for (uint32_t t = 0; t < net.transition_count(); ++t) {
    int32_t flow = 0;
    for (uint32_t p : constraint.places) flow += net.incidence().c.at(p, t);
    if (flow != 0) ++arcs;
  }
  return arcs;
}

std::string constraint_text(const PetriNet& net, const Constraint& c) {
  std::ostringstream out;
  for (size_t i = 0; i < c.places.size(); ++i) {
    if (i) out << " + ";
    out << net.place(c.places[i]).id;
  }
  out << " <= " << c.bound;
  return out.str();
}

namespace {

void validate_invariant(const PetriNet& net, const UnitInvariant& inv) {
  if (inv.places.empty()) {
    fail(ErrorKind::Validation, "rejected invariant: empty place set");
  }
  for (uint32_t t = 0; t < net.transition_count(); ++t) {
    int32_t flow = 0;
    for (uint32_t p : inv.places) flow += net.incidence().c.at(p, t);
    if (flow != 0) {
      fail(ErrorKind::Validation, "rejected invariant: transition '" +
                                      net.transition(t).id +
                                      "' changes its token count");
    }
  }
  int tokens = 0;
  for (uint32_t p : inv.places) tokens += net.initial_marking().test(p) ? 1 : 0;
  if (tokens != 1) {
    fail(ErrorKind::Validation,
         "rejected invariant: token count at the initial marking is " +
             std::to_string(tokens) + ", expected 1");
  }
}

/// Pool of constraints under reduction. Items are deduplicated by value and
/// never removed: a consumed item stays available as group-completion
/// evidence (its exclusions are preserved by whatever consumed it), it is
/// merely dropped from the final result. Don't-care items carry hypothetical
/// per-state constraints that are free to enforce; they complete groups but
/// never surface in results.
///
/// Every derived constraint is kept in invariant-reduced form: a place set
/// containing a complete unit invariant carries exactly one guaranteed token,
/// so those places fold out and the bound drops by one. Without this the
/// merge rule can recombine consumed state-like items into enlarged rewrites
/// of constraints the pool already holds.
class Reducer {
 public:
  explicit Reducer(bool record_trace, std::span<const UnitInvariant> invariants = {})
      : record_trace_(record_trace), invariants_(invariants) {}

  size_t add(const Constraint& c, bool dont_care) {
    auto it = by_value_.find(c);
    if (it != by_value_.end()) {
      if (!dont_care) items_[it->second].dont_care = false;  // promote
      return it->second;
    }
    items_.push_back(Item{c, dont_care, false});
    by_value_.emplace(c, items_.size() - 1);
    return items_.size() - 1;
  }

  void add_state_items(std::span<const Marking> markings, bool dont_care) {
    for (const Marking& m : markings) {
      Constraint c;
      c.places = m.marked();
      c.bound = int(c.places.size()) - 1;
      add(c, dont_care);
    }
  }

  /// One collapse sweep for one invariant; returns whether the pool changed.
  bool collapse_pass(const std::vector<uint32_t>& inv) {
    // remainder -> (invariant place -> item). Only state-like items with
    // exactly one place inside the invariant and a nonempty remainder are
    // eligible.
    std::map<std::vector<uint32_t>, std::map<uint32_t, size_t>> groups;
    for (size_t i = 0; i < items_.size(); ++i) {
      const Constraint& c = items_[i].c;
      if (c.bound != int(c.places.size()) - 1) continue;
      if (c.places.size() < 2) continue;
      std::vector<uint32_t> inside, rest;
      split(c.places, inv, inside, rest);
      if (inside.size() != 1) continue;
      groups[rest][inside[0]] = i;
    }

    bool changed = false;
    for (const auto& [rest, members] : groups) {
      if (members.size() != inv.size()) continue;  // some invariant place missing
      Constraint derived{rest, int(rest.size()) - 1};
      changed |= apply(ReductionRule::CollapseInvariant, members, derived, inv);
    }
    return changed;
  }

  /// One merge sweep for one exclusive place set; returns whether the pool
  /// changed.
  bool merge_pass(const std::vector<uint32_t>& exclusive) {
    // (remainder, bound) -> (exclusive place -> item).
    std::map<std::pair<std::vector<uint32_t>, int>, std::map<uint32_t, size_t>> groups;
    for (size_t i = 0; i < items_.size(); ++i) {
      const Constraint& c = items_[i].c;
      std::vector<uint32_t> inside, rest;
      split(c.places, exclusive, inside, rest);
      if (inside.size() != 1) continue;
      groups[{rest, c.bound}][inside[0]] = i;
    }

    bool changed = false;
    for (const auto& [key, members] : groups) {
      if (members.size() < 2) continue;
      Constraint derived;
      derived.places = key.first;
      for (const auto& [p, _] : members) derived.places.push_back(p);
      std::sort(derived.places.begin(), derived.places.end());
      derived.bound = key.second;
      changed |= apply(ReductionRule::MergeExclusive, members, derived, exclusive);
    }
    return changed;
  }

  void run_collapse(std::span<const UnitInvariant> invariants) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const UnitInvariant& inv : invariants) changed |= collapse_pass(inv.places);
    }
  }

  void run_merge(std::span<const UnitInvariant> invariants) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const UnitInvariant& inv : invariants) changed |= merge_pass(inv.places);
    }
  }

  /// Unconsumed real constraints, in canonical order.
  std::vector<Constraint> surviving() const {
    std::vector<Constraint> out;
    for (const Item& item : items_) {
      if (!item.consumed && !item.dont_care) out.push_back(item.c);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  ReductionTrace take_trace() { return std::move(trace_); }

  /// Replays one recorded step; used to check a trace against fresh inputs.
  void replay(const ReductionStep& step) {
    for (const Constraint& input : step.inputs) {
      auto it = by_value_.find(input);
      if (it == by_value_.end()) {
        fail(ErrorKind::Internal, "trace replay: step input not present in pool");
      }
      items_[it->second].consumed = true;
    }
    add(step.output, false);
  }

 private:
  struct Item {
    Constraint c;
    bool dont_care = false;
    bool consumed = false;
  };

  /// Folds complete unit invariants out of a constraint: each one contributes
  /// exactly one token in every consistent marking, so removing its places and
  /// lowering the bound by one preserves the excluded set. The remainder is
  /// kept nonempty so degenerate inputs cannot reduce to an empty place set.
  Constraint normalize(Constraint c) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const UnitInvariant& inv : invariants_) {
        if (inv.places.size() >= c.places.size()) continue;
        if (!std::includes(c.places.begin(), c.places.end(), inv.places.begin(),
                           inv.places.end())) {
          continue;
        }
        std::vector<uint32_t> rest;
        std::set_difference(c.places.begin(), c.places.end(), inv.places.begin(),
                            inv.places.end(), std::back_inserter(rest));
        c.places = std::move(rest);
        c.bound -= 1;
        changed = true;
      }
    }
    return c;
  }

  static void split(const std::vector<uint32_t>& places, const std::vector<uint32_t>& set,
                    std::vector<uint32_t>& inside, std::vector<uint32_t>& rest) {
    for (uint32_t p : places) {
      if (std::binary_search(set.begin(), set.end(), p)) {
        inside.push_back(p);
      } else {
        rest.push_back(p);
      }
    }
  }

  bool apply(ReductionRule rule, const std::map<uint32_t, size_t>& members,
             const Constraint& raw, const std::vector<uint32_t>& certificate) {
    const Constraint derived = normalize(raw);
    // The same complete group re-forms on every sweep; it only counts as a
    // change (and lands in the trace) when it still consumes or adds
    // something.
    bool effective = by_value_.find(derived) == by_value_.end();
    for (const auto& [_, idx] : members) effective |= !items_[idx].consumed;
    if (!effective) return false;

    ReductionStep step;
    step.rule = rule;
    step.certificate = certificate;
    step.output = derived;
    for (const auto& [_, idx] : members) {
      step.inputs.push_back(items_[idx].c);
      items_[idx].consumed = true;
    }
    add(derived, false);
    if (record_trace_) trace_.steps.push_back(std::move(step));
    return true;
  }

  bool record_trace_;
  std::span<const UnitInvariant> invariants_;
  std::vector<Item> items_;
  std::map<Constraint, size_t> by_value_;
  ReductionTrace trace_;
};

std::vector<Marking> covered_border(const PetriNet& net, const Constraint& c,
                                    std::span<const Marking> border) {
  std::vector<uint8_t> hit =
      kernels::scan_violations(net, c.places, c.bound, border, ExecutionPolicy::Serial);
  std::vector<Marking> out;
  for (size_t i = 0; i < border.size(); ++i) {
    if (hit[i]) out.push_back(border[i]);
  }
  return out;
}

}  // namespace

std::vector<Constraint> collapse_by_invariant(const PetriNet& net,
                                              std::span<const Constraint> pool,
                                              std::span<const Marking> dont_cares,
                                              const UnitInvariant& invariant) {
  validate_invariant(net, invariant);
  Reducer reducer(false, std::span<const UnitInvariant>(&invariant, 1));
  for (const Constraint& c : pool) reducer.add(c, false);
  reducer.add_state_items(dont_cares, true);
  while (reducer.collapse_pass(invariant.places)) {
  }
  return reducer.surviving();
}

std::vector<Constraint> merge_exclusive(std::span<const Constraint> pool,
                                        std::span<const uint32_t> exclusive_places) {
  std::vector<uint32_t> exclusive(exclusive_places.begin(), exclusive_places.end());
  std::sort(exclusive.begin(), exclusive.end());
  Reducer reducer(false);
  for (const Constraint& c : pool) reducer.add(c, false);
  while (reducer.merge_pass(exclusive)) {
  }
  return reducer.surviving();
}

CandidateGeneration generate_candidates(const PetriNet& net,
                                        std::span<const Marking> border,
                                        std::span<const Marking> dont_cares,
                                        std::span<const UnitInvariant> invariants) {
  for (const UnitInvariant& inv : invariants) validate_invariant(net, inv);

  Reducer reducer(true, invariants);
  reducer.add_state_items(border, false);
  reducer.add_state_items(dont_cares, true);

  CandidateGeneration gen;
  reducer.run_collapse(invariants);
  for (const Constraint& c : reducer.surviving()) {
    gen.after_collapse.push_back(CoveredSet{c, covered_border(net, c, border)});
  }
  reducer.run_merge(invariants);
  gen.reduced = reducer.surviving();
  gen.trace = reducer.take_trace();

  for (const Constraint& c : gen.reduced) {
    std::vector<Marking> covered = covered_border(net, c, border);
    if (covered.empty()) {
      gen.dropped_zero_coverage.push_back(c);
    } else {
      gen.candidates.push_back(CoveredSet{c, std::move(covered)});
    }
  }
  return gen;
}

std::vector<Constraint> replay_trace(const PetriNet& net, std::span<const Marking> border,
                                     std::span<const Marking> dont_cares,
                                     const ReductionTrace& trace) {
  (void)net;
  Reducer reducer(false);
  reducer.add_state_items(border, false);
  reducer.add_state_items(dont_cares, true);
  for (const ReductionStep& step : trace.steps) reducer.replay(step);
  return reducer.surviving();
}

bool admissibility_check(const PetriNet& net, const Constraint& constraint,
                         std::span<const Marking> admissible, ExecutionPolicy policy) {
  std::vector<uint8_t> hit =
      kernels::scan_violations(net, constraint.places, constraint.bound, admissible, policy);
  return std::none_of(hit.begin(), hit.end(), [](uint8_t v) { return v != 0; });
}

namespace {

struct RankedCandidate {
  CoveredSet cs;
  std::vector<uint64_t> cover_mask;  // bit i = covers border[i]
  uint32_t arc_count = 0;
  bool selected = false;
};

uint32_t mask_count(const std::vector<uint64_t>& m) {
  uint32_t n = 0;
  for (uint64_t w : m) n += uint32_t(std::popcount(w));
  return n;
}

}  // namespace

CoverResult minimal_cover(const PetriNet& net, std::span<const CoveredSet> candidates,
                          std::span<const Marking> border,
                          std::span<const Marking> admissible, const CoverOptions& options,
                          ExecutionPolicy policy) {
  CoverResult result;
  if (border.empty()) return result;

  const size_t nb = border.size();
  const size_t mask_words = (nb + 63) / 64;
  auto border_index = [&](const Marking& m) -> size_t {
    for (size_t i = 0; i < nb; ++i) {
      if (border[i] == m) return i;
    }
    fail(ErrorKind::Internal, "covered set mentions a marking outside the border set");
  };

  std::vector<RankedCandidate> pool;
  for (const CoveredSet& cs : candidates) {
    if (!admissibility_check(net, cs.constraint, admissible, policy)) {
      result.inadmissible.push_back(cs.constraint);
      continue;
    }
    RankedCandidate rc;
    rc.cs = cs;
    rc.cover_mask.assign(mask_words, 0);
    for (const Marking& m : cs.covered) {
      size_t i = border_index(m);
      rc.cover_mask[i >> 6] |= uint64_t(1) << (i & 63);
    }
    rc.arc_count = constraint_arc_count(net, cs.constraint);
    pool.push_back(std::move(rc));
  }

  // Border states no candidate covers get their per-state constraint back.
  for (size_t i = 0; i < nb; ++i) {
    bool covered = false;
    for (const RankedCandidate& rc : pool) {
      if (rc.cover_mask[i >> 6] >> (i & 63) & 1) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    Constraint c;
    c.places = border[i].marked();
    c.bound = int(c.places.size()) - 1;
    if (!admissibility_check(net, c, admissible, policy)) {
      fail(ErrorKind::Infeasible, "border state " + net.canonical_name(border[i]) +
                                      " cannot be excluded without cutting an "
                                      "admissible state (" +
                                      constraint_text(net, c) + " is inadmissible)");
    }
    RankedCandidate rc;
    rc.cs.constraint = c;
    rc.cs.covered = covered_border(net, c, border);
    rc.cover_mask.assign(mask_words, 0);
    for (const Marking& m : rc.cs.covered) {
      size_t j = border_index(m);
      rc.cover_mask[j >> 6] |= uint64_t(1) << (j & 63);
    }
    rc.arc_count = constraint_arc_count(net, c);
    pool.push_back(std::move(rc));
    result.forced.push_back(std::move(c));
  }

  std::vector<uint64_t> covered(mask_words, 0);
  auto select = [&](RankedCandidate& rc) {
    rc.selected = true;
    for (size_t w = 0; w < mask_words; ++w) covered[w] |= rc.cover_mask[w];
    result.selected.push_back(rc.cs);
  };

  // Essentials: sole cover of some border state; selection order follows the
  // border order so reruns agree.
  for (size_t i = 0; i < nb; ++i) {
    RankedCandidate* only = nullptr;
    bool unique = true;
    for (RankedCandidate& rc : pool) {
      if (rc.cover_mask[i >> 6] >> (i & 63) & 1) {
        if (only && only != &rc) {
          unique = false;
          break;
        }
        only = &rc;
      }
    }
    if (unique && only && !only->selected) select(*only);
  }

  auto all_covered = [&] {
    uint32_t have = mask_count(covered);
    return have == nb;
  };

  if (!all_covered()) {
    // Remaining candidates that still contribute something.
    std::vector<size_t> rest;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].selected) continue;
      for (size_t w = 0; w < mask_words; ++w) {
        if (pool[i].cover_mask[w] & ~covered[w]) {
          rest.push_back(i);
          break;
        }
      }
    }

    auto metric = [&](const RankedCandidate& rc) -> std::pair<uint32_t, uint32_t> {
      uint32_t places = uint32_t(rc.cs.constraint.places.size());
      if (options.tie_break == TieBreak::Arcs) return {rc.arc_count, places};
      return {places, rc.arc_count};
    };

    const bool use_exact = options.exact || rest.size() <= options.exact_threshold;
    if (use_exact) {
      constexpr size_t kExactCap = 24;
      if (rest.size() > kExactCap) {
        fail(ErrorKind::StateCap,
             "exhaustive cover search over " + std::to_string(rest.size()) +
                 " candidates exceeds the cap of " + std::to_string(kExactCap) +
                 "; rerun without the exact cover option");
      }
      result.exact = true;

      uint32_t best_size = UINT32_MAX;
      uint64_t best_primary = 0, best_secondary = 0;
      std::vector<size_t> best_pick;
      for (uint64_t mask = 0; mask < (uint64_t(1) << rest.size()); ++mask) {
        std::vector<uint64_t> acc = covered;
        for (size_t j = 0; j < rest.size(); ++j) {
          if (mask >> j & 1) {
            for (size_t w = 0; w < mask_words; ++w) {
              acc[w] |= pool[rest[j]].cover_mask[w];
            }
          }
        }
        if (mask_count(acc) != nb) continue;
        uint32_t size = uint32_t(std::popcount(mask));
        uint64_t primary = 0, secondary = 0;
        std::vector<size_t> pick;
        for (size_t j = 0; j < rest.size(); ++j) {
          if (mask >> j & 1) {
            auto [p, s] = metric(pool[rest[j]]);
            primary += p;
            secondary += s;
            pick.push_back(rest[j]);
          }
        }
        bool better = size < best_size ||
                      (size == best_size &&
                       std::tie(primary, secondary, pick) <
                           std::tie(best_primary, best_secondary, best_pick));
        if (better) {
          best_size = size;
          best_primary = primary;
          best_secondary = secondary;
          best_pick = std::move(pick);
        }
      }
      if (best_size == UINT32_MAX) {
        fail(ErrorKind::Internal, "cover search found no covering subset");
      }
      for (size_t idx : best_pick) select(pool[idx]);
    } else {
      while (!all_covered()) {
        size_t best = SIZE_MAX;
        uint32_t best_gain = 0;
        std::pair<uint32_t, uint32_t> best_metric{UINT32_MAX, UINT32_MAX};
        for (size_t idx : rest) {
          if (pool[idx].selected) continue;
          uint32_t gain = 0;
          for (size_t w = 0; w < mask_words; ++w) {
            gain += uint32_t(std::popcount(pool[idx].cover_mask[w] & ~covered[w]));
          }
          if (gain == 0) continue;
          auto m = metric(pool[idx]);
          if (gain > best_gain || (gain == best_gain && m < best_metric)) {
            best = idx;
            best_gain = gain;
            best_metric = m;
          }
        }
        if (best == SIZE_MAX) {
          fail(ErrorKind::Internal, "greedy cover ran out of candidates");
        }
        select(pool[best]);
      }
    }
  }

  if (result.selected.size() > nb) {
    fail(ErrorKind::Internal, "cover selected more constraints than border states");
  }
  return result;
}

}  // namespace pnsynth
