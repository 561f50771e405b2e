#pragma once

// Deterministic net generators for property tests and benchmarks. Every
// generated net is safe and conservative by construction: it is a parallel
// composition of one-token components, and each transition consumes exactly
// one place and produces exactly one place inside every component it
// touches.

#include <random>
#include <string>
#include <vector>

#include "pnsynth/model.hpp"

namespace testsupport {

/// Random composition of 2–4 one-token components (2–4 places each, at most
/// 12 in total), 4–10 transitions that touch one or two components, mixed
/// controllability with at least one uncontrollable transition. Same seed,
/// same net.
inline pnsynth::NetDecl random_conservative_net(uint32_t seed) {
  std::mt19937 rng(seed);
  auto pick = [&](uint32_t n) { return uint32_t(rng() % n); };

  uint32_t component_count = 2 + pick(3);
  std::vector<uint32_t> sizes;
  uint32_t total = 0;
  for (uint32_t i = 0; i < component_count; ++i) {
    uint32_t s = 2 + pick(3);
    if (total + s > 12) s = 2;
    if (total + s > 12) break;
    sizes.push_back(s);
    total += s;
  }
  component_count = uint32_t(sizes.size());

  std::vector<bool> spec_component(component_count, false);
  for (uint32_t i = 1; i < component_count; ++i) spec_component[i] = pick(3) == 0;
  bool any_spec = false;
  for (uint32_t i = 0; i < component_count; ++i) any_spec |= spec_component[i];
  if (!any_spec && pick(2) == 1) spec_component[component_count - 1] = true;

  pnsynth::NetDecl decl;
  decl.name = "random_" + std::to_string(seed);
  std::vector<std::vector<std::string>> members(component_count);
  for (uint32_t i = 0; i < component_count; ++i) {
    for (uint32_t j = 0; j < sizes[i]; ++j) {
      pnsynth::PlaceDecl p;
      p.id = "P" + std::to_string(decl.places.size() + 1);
      p.kind = spec_component[i] ? pnsynth::PlaceKind::Specification
                                 : pnsynth::PlaceKind::Process;
      p.initial = 0;
      members[i].push_back(p.id);
      decl.places.push_back(std::move(p));
    }
  }
  for (uint32_t i = 0; i < component_count; ++i) {
    const std::string& marked = members[i][pick(sizes[i])];
    for (pnsynth::PlaceDecl& p : decl.places) {
      if (p.id == marked) p.initial = 1;
    }
  }

  const uint32_t transition_count = 4 + pick(7);
  bool any_uncontrollable = false;
  for (uint32_t k = 0; k < transition_count; ++k) {
    pnsynth::TransitionDecl t;
    t.id = "t" + std::to_string(k + 1);
    const uint32_t a = pick(component_count);
    t.inputs.push_back(members[a][pick(sizes[a])]);
    t.outputs.push_back(members[a][pick(sizes[a])]);
    if (component_count >= 2 && pick(2) == 1) {
      const uint32_t b = (a + 1 + pick(component_count - 1)) % component_count;
      t.inputs.push_back(members[b][pick(sizes[b])]);
      t.outputs.push_back(members[b][pick(sizes[b])]);
    }
    t.controllable = pick(2) == 1;
    any_uncontrollable |= !t.controllable;
    decl.transitions.push_back(std::move(t));
  }
  if (!any_uncontrollable) decl.transitions[0].controllable = false;
  return decl;
}

/// Scalable production line: k machines (idle -> working -> done) sharing a
/// k-position transfer sequence, transfer i handing over to position i+1.
/// Safe and conservative with 4k places; the state space grows as 3^k * k,
/// so it sizes the parallel kernels and the benchmark.
inline pnsynth::NetDecl machine_line(uint32_t k) {
  pnsynth::NetDecl decl;
  decl.name = "machine_line_" + std::to_string(k);
  for (uint32_t i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    decl.places.push_back({"I" + n, pnsynth::PlaceKind::Process, 1});
    decl.places.push_back({"W" + n, pnsynth::PlaceKind::Process, 0});
    decl.places.push_back({"D" + n, pnsynth::PlaceKind::Process, 0});
  }
  for (uint32_t i = 1; i <= k; ++i) {
    decl.places.push_back({"S" + std::to_string(i), pnsynth::PlaceKind::Specification,
                           i == 1 ? 1 : 0});
  }
  for (uint32_t i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    const std::string next = std::to_string(i % k + 1);
    decl.transitions.push_back({"c" + n, true, {"I" + n}, {"W" + n}});
    decl.transitions.push_back({"f" + n, false, {"W" + n}, {"D" + n}});
    decl.transitions.push_back({"t" + n, false, {"D" + n, "S" + n}, {"I" + n, "S" + next}});
  }
  return decl;
}

}  // namespace testsupport
