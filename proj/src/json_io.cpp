#include "pnsynth/json_io.hpp"

#include <fstream>
#include <sstream>

namespace pnsynth {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& expect(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(ErrorKind::Parse, where + ": missing required field '" + key + "'");
  }
  return *it;
}

std::string expect_string(const json& obj, const char* key, const std::string& where) {
  const json& v = expect(obj, key, where);
  if (!v.is_string()) {
    fail(ErrorKind::Parse, where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_array()) {
    fail(ErrorKind::Parse, where + ": field '" + key + "' must be an array of place ids");
  }
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const json& v : *it) {
    if (!v.is_string()) {
      fail(ErrorKind::Parse, where + ": field '" + key + "' must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

NetDecl parse_net_decl(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, e.what());  // message carries byte/line position
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, "top-level JSON value must be an object");

  NetDecl decl;
  decl.name = expect_string(doc, "name", "net");

  const json& places = expect(doc, "places", "net");
  if (!places.is_array()) fail(ErrorKind::Parse, "net: 'places' must be an array");
  for (size_t i = 0; i < places.size(); ++i) {
    const json& pj = places[i];
    const std::string where = "places[" + std::to_string(i) + "]";
    if (!pj.is_object()) fail(ErrorKind::Parse, where + ": must be an object");

    PlaceDecl p;
    p.id = expect_string(pj, "id", where);
    const std::string kind = expect_string(pj, "kind", where);
    if (kind == "process") {
      p.kind = PlaceKind::Process;
    } else if (kind == "spec") {
      p.kind = PlaceKind::Specification;
    } else {
      fail(ErrorKind::Parse,
           where + ": 'kind' must be \"process\" or \"spec\", got \"" + kind + "\"");
    }
    const json& init = expect(pj, "initial", where);
    if (!init.is_number_integer()) {
      fail(ErrorKind::Parse, where + ": 'initial' must be an integer");
    }
    p.initial = init.get<int>();
    decl.places.push_back(std::move(p));
  }

  const json& transitions = expect(doc, "transitions", "net");
  if (!transitions.is_array()) fail(ErrorKind::Parse, "net: 'transitions' must be an array");
  for (size_t i = 0; i < transitions.size(); ++i) {
    const json& tj = transitions[i];
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!tj.is_object()) fail(ErrorKind::Parse, where + ": must be an object");

    TransitionDecl t;
    t.id = expect_string(tj, "id", where);
    const json& ctl = expect(tj, "controllable", where);
    if (!ctl.is_boolean()) {
      fail(ErrorKind::Parse, where + ": 'controllable' must be a boolean");
    }
    t.controllable = ctl.get<bool>();
    t.inputs = string_list(tj, "inputs", where);
    t.outputs = string_list(tj, "outputs", where);
    decl.transitions.push_back(std::move(t));
  }
  return decl;
}

NetDecl load_net_decl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_net_decl(buf.str());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) {
      fail(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    throw;
  }
}

PetriNet load_net(const std::filesystem::path& path) {
  return PetriNet::build(load_net_decl(path));
}

ordered_json net_to_json(const NetDecl& decl) {
  ordered_json doc;
  doc["name"] = decl.name;
  doc["places"] = ordered_json::array();
  for (const PlaceDecl& p : decl.places) {
    doc["places"].push_back({{"id", p.id},
                             {"kind", p.kind == PlaceKind::Process ? "process" : "spec"},
                             {"initial", p.initial}});
  }
  doc["transitions"] = ordered_json::array();
  for (const TransitionDecl& t : decl.transitions) {
    doc["transitions"].push_back({{"id", t.id},
                                  {"controllable", t.controllable},
                                  {"inputs", t.inputs},
                                  {"outputs", t.outputs}});
  }
  return doc;
}

ordered_json net_to_json(const PetriNet& net) {
  NetDecl decl;
  decl.name = net.name();
  decl.places = net.places();
  for (const Transition& tr : net.transitions()) {
    TransitionDecl td;
    td.id = tr.id;
    td.controllable = tr.controllable;
    for (uint32_t p : tr.inputs) td.inputs.push_back(net.place(p).id);
    for (uint32_t p : tr.outputs) td.outputs.push_back(net.place(p).id);
    decl.transitions.push_back(std::move(td));
  }
  return net_to_json(decl);
}

}  // namespace pnsynth
