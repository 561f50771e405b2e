#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "pnsynth/json_io.hpp"
#include "pnsynth/model.hpp"
#include "pnsynth/reachability.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
  return std::string(PNSYNTH_FIXTURE_DIR) + "/" + name;
}

inline pnsynth::PetriNet load_fixture(const std::string& name) {
  return pnsynth::load_net(fixture_path(name));
}

inline std::set<std::string> name_set(const pnsynth::PetriNet& net,
                                      const pnsynth::ReachabilityGraph& rg,
                                      std::span<const uint32_t> indices) {
  std::set<std::string> out;
  for (uint32_t i : indices) out.insert(net.canonical_name(rg.states[i]));
  return out;
}

inline std::set<std::string> name_set(const pnsynth::PetriNet& net,
                                      std::span<const pnsynth::Marking> markings) {
  std::set<std::string> out;
  for (const pnsynth::Marking& m : markings) out.insert(net.canonical_name(m));
  return out;
}

// Expected values for the two_machines fixture, frozen from independent
// hand/script derivation of its 18-state behaviour.
inline std::set<std::string> expected_forbidden() {
  return {"P1P6P7", "P2P6P7", "P3P6P7", "P3P4P8", "P3P5P8", "P3P6P8"};
}

inline std::set<std::string> expected_border() {
  return {"P1P5P7", "P2P5P7", "P3P5P7", "P2P4P8", "P2P5P8", "P2P6P8"};
}

inline std::set<std::string> expected_admissible() {
  return {"P1P4P7", "P2P4P7", "P3P4P7", "P1P4P8", "P1P5P8", "P1P6P8"};
}

inline std::set<std::string> expected_dangerous() {
  std::set<std::string> out = expected_forbidden();
  for (const std::string& s : expected_border()) out.insert(s);
  return out;  // forbidden plus border; 12 states
}

// Constraint pools as "text" forms, e.g. "P5 + P7 <= 1".
inline std::set<std::string> expected_after_collapse() {
  return {"P2 + P5 <= 1", "P2 + P6 <= 1", "P2 + P8 <= 1", "P3 + P5 <= 1",
          "P3 + P6 <= 1", "P3 + P8 <= 1", "P5 + P7 <= 1", "P6 + P7 <= 1"};
}

inline std::set<std::string> expected_candidates() {
  return {"P2 + P3 + P8 <= 1", "P5 + P6 + P7 <= 1", "P2 + P3 + P5 + P6 <= 1"};
}

inline std::vector<std::string> expected_selected() {
  return {"P5 + P6 + P7 <= 1", "P2 + P3 + P8 <= 1"};  // selection order
}

}  // namespace testsupport
