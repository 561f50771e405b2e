#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pnsynth/model.hpp"

namespace pnsynth {

/// Parses the JSON interchange format:
/// {
///   "name": "...",
///   "places": [{"id": "P1", "kind": "process"|"spec", "initial": 0|1}, ...],
///   "transitions": [{"id": "t1", "controllable": true,
///                    "inputs": ["P1"], "outputs": ["P2"]}, ...]
/// }
/// Malformed JSON or schema violations raise parse errors with a diagnostic;
/// semantic problems (duplicate ids, dangling arcs) surface as validation
/// errors from PetriNet::build.
NetDecl parse_net_decl(const std::string& json_text);
NetDecl load_net_decl(const std::filesystem::path& path);
PetriNet load_net(const std::filesystem::path& path);

nlohmann::ordered_json net_to_json(const NetDecl& decl);
nlohmann::ordered_json net_to_json(const PetriNet& net);

}  // namespace pnsynth
