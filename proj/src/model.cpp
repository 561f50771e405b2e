#include "pnsynth/model.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace pnsynth {
namespace {

// m covers mask iff every set bit of mask is set in m.
bool covers(const std::vector<uint64_t>& m, const std::vector<uint64_t>& mask) {
  for (size_t i = 0; i < mask.size(); ++i) {
    if ((m[i] & mask[i]) != mask[i]) return false;
  }
  return true;
}

bool any_bit(const std::vector<uint64_t>& w) {
  for (uint64_t x : w) {
    if (x) return true;
  }
  return false;
}

}  // namespace

uint32_t Marking::count() const {
  uint32_t n = 0;
  for (uint64_t w : w_) n += uint32_t(std::popcount(w));
  return n;
}

std::vector<uint32_t> Marking::marked() const {
  std::vector<uint32_t> out;
  for (uint32_t p = 0; p < n_; ++p) {
    if (test(p)) out.push_back(p);
  }
  return out;
}

PetriNet PetriNet::build(const NetDecl& decl) {
  PetriNet net;
  net.name_ = decl.name;
  net.places_ = decl.places;

  for (uint32_t p = 0; p < net.places_.size(); ++p) {
    const PlaceDecl& pl = net.places_[p];
    if (pl.id.empty()) {
      fail(ErrorKind::Validation, "place #" + std::to_string(p) + " has an empty id");
    }
    if (!net.place_index_.emplace(pl.id, p).second) {
      fail(ErrorKind::Validation, "duplicate place id '" + pl.id + "'");
    }
    if (pl.initial != 0 && pl.initial != 1) {
      fail(ErrorKind::Validation,
           "place '" + pl.id + "' has non-binary initial marking " +
               std::to_string(pl.initial));
    }
  }

  const uint32_t np = net.place_count();
  const uint32_t nt = uint32_t(decl.transitions.size());
  const size_t words = (np + 63) / 64;

  net.initial_ = Marking(np);
  for (uint32_t p = 0; p < np; ++p) {
    if (net.places_[p].initial == 1) net.initial_.set(p);
  }

  net.spec_mask_.assign(words, 0);
  for (uint32_t p = 0; p < np; ++p) {
    if (net.places_[p].kind == PlaceKind::Specification) {
      net.spec_mask_[p >> 6] |= uint64_t(1) << (p & 63);
    }
  }

  net.inc_.pre = IntMatrix(np, nt);
  net.inc_.post = IntMatrix(np, nt);
  net.inc_.c = IntMatrix(np, nt);

  auto resolve = [&](const std::string& tid, const std::vector<std::string>& ids,
                     const char* role) {
    std::vector<uint32_t> out;
    std::unordered_set<uint32_t> seen;
    out.reserve(ids.size());
    for (const std::string& pid : ids) {
      auto it = net.place_index_.find(pid);
      if (it == net.place_index_.end()) {
        fail(ErrorKind::Validation, "transition '" + tid + "' references unknown place '" +
                                        pid + "' in its " + role + " arcs");
      }
      if (!seen.insert(it->second).second) {
        fail(ErrorKind::Validation, "transition '" + tid + "' lists place '" + pid +
                                        "' twice in its " + role + " arcs");
      }
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  net.transitions_.reserve(nt);
  for (uint32_t t = 0; t < nt; ++t) {
    const TransitionDecl& td = decl.transitions[t];
    if (td.id.empty()) {
      fail(ErrorKind::Validation, "transition #" + std::to_string(t) + " has an empty id");
    }
    if (!net.transition_index_.emplace(td.id, t).second) {
      fail(ErrorKind::Validation, "duplicate transition id '" + td.id + "'");
    }

    Transition tr;
    tr.id = td.id;
    tr.controllable = td.controllable;
    tr.inputs = resolve(td.id, td.inputs, "input");
    tr.outputs = resolve(td.id, td.outputs, "output");
    tr.in_mask.assign(words, 0);
    tr.proc_in_mask.assign(words, 0);
    tr.out_mask.assign(words, 0);
    for (uint32_t p : tr.inputs) {
      tr.in_mask[p >> 6] |= uint64_t(1) << (p & 63);
      if (net.places_[p].kind == PlaceKind::Process) {
        tr.proc_in_mask[p >> 6] |= uint64_t(1) << (p & 63);
      }
      net.inc_.pre.at(p, t) = 1;
    }
    for (uint32_t p : tr.outputs) {
      tr.out_mask[p >> 6] |= uint64_t(1) << (p & 63);
      net.inc_.post.at(p, t) = 1;
    }
    net.transitions_.push_back(std::move(tr));
  }

  for (uint32_t p = 0; p < np; ++p) {
    for (uint32_t t = 0; t < nt; ++t) {
      net.inc_.c.at(p, t) = net.inc_.post.at(p, t) - net.inc_.pre.at(p, t);
    }
  }
  return net;
}

std::optional<uint32_t> PetriNet::place_index(std::string_view id) const {
  auto it = place_index_.find(std::string(id));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> PetriNet::transition_index(std::string_view id) const {
  auto it = transition_index_.find(std::string(id));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

uint32_t PetriNet::require_transition(std::string_view id) const {
  auto idx = transition_index(id);
  if (!idx) {
    fail(ErrorKind::Validation, "unknown transition id '" + std::string(id) + "'");
  }
  return *idx;
}

bool PetriNet::enabled_real(const Marking& m, uint32_t t) const {
  return covers(m.words(), transitions_[t].in_mask);
}

bool PetriNet::enabled_quasi(const Marking& m, uint32_t t) const {
  const Transition& tr = transitions_[t];
  if (tr.controllable) return covers(m.words(), tr.in_mask);
  return covers(m.words(), tr.proc_in_mask);
}

Marking PetriNet::fire(const Marking& m, uint32_t t, Semantics sem) const {
  if (!enabled(m, t, sem)) {
    fail(ErrorKind::Validation, "transition '" + transitions_[t].id +
                                    "' is not enabled at " + canonical_name(m));
  }
  const Transition& tr = transitions_[t];
  const bool really = enabled_real(m, t);

  Marking out = m;
  std::vector<uint64_t>& w = out.words();
  const size_t words = w.size();
  std::vector<uint64_t> clash(words, 0);
  for (size_t i = 0; i < words; ++i) {
    // A place that is both input and output of the transition has zero net
    // flow and keeps its token count; only the one-sided arcs move tokens.
    const uint64_t loop = tr.in_mask[i] & tr.out_mask[i];
    const uint64_t in_only = tr.in_mask[i] & ~loop;
    const uint64_t out_only = tr.out_mask[i] & ~loop;
    const uint64_t consumed = w[i] & ~in_only;
    // Producing into a place that is still marked after consumption would
    // yield two tokens there.
    clash[i] = consumed & out_only;
    w[i] = consumed | out_only;
  }
  if (!really) {
    // Quasi firing of a transition whose specification inputs are not all
    // marked: specification places saturate (floor zero, cap one), so only a
    // process-place clash is a genuine safety violation.
    for (size_t i = 0; i < words; ++i) clash[i] &= ~spec_mask_[i];
  }
  if (any_bit(clash)) {
    fail(ErrorKind::Safety, "firing '" + tr.id + "' at " + canonical_name(m) +
                                " would exceed one token on a place; net is not safe");
  }
  return out;
}

bool PetriNet::enabled_real(const Marking& m, std::string_view t) const {
  return enabled_real(m, require_transition(t));
}

bool PetriNet::enabled_quasi(const Marking& m, std::string_view t) const {
  return enabled_quasi(m, require_transition(t));
}

Marking PetriNet::fire(const Marking& m, std::string_view t, Semantics sem) const {
  return fire(m, require_transition(t), sem);
}

std::string PetriNet::canonical_name(const Marking& m) const {
  std::string out;
  for (uint32_t p = 0; p < place_count(); ++p) {
    if (m.test(p)) out += places_[p].id;
  }
  if (out.empty()) out = "∅";
  return out;
}

Marking PetriNet::marking_of(const std::vector<std::string>& place_ids) const {
  Marking m(place_count());
  for (const std::string& id : place_ids) {
    auto idx = place_index(id);
    if (!idx) fail(ErrorKind::Validation, "unknown place id '" + id + "'");
    m.set(*idx);
  }
  return m;
}

}  // namespace pnsynth
