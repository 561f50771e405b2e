#include <algorithm>
#include <iomanip>
#include <sstream>

#include "pnsynth/pipeline.hpp"

namespace pnsynth {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> names(const PetriNet& net, std::span<const Marking> markings) {
  std::vector<std::string> out;
  out.reserve(markings.size());
  for (const Marking& m : markings) out.push_back(net.canonical_name(m));
  return out;
}

std::vector<std::string> names(const PetriNet& net, const ReachabilityGraph& rg,
                               std::span<const uint32_t> indices) {
  std::vector<Marking> markings;
  markings.reserve(indices.size());
  for (uint32_t i : indices) markings.push_back(rg.states[i]);
  std::sort(markings.begin(), markings.end());
  return names(net, markings);
}

ordered_json invariant_json(const PetriNet& net, const UnitInvariant& inv) {
  ordered_json out = ordered_json::array();
  for (uint32_t p : inv.places) out.push_back(net.place(p).id);
  return out;
}

ordered_json constraint_json(const PetriNet& net, const Constraint& c) {
  ordered_json out;
  out["text"] = constraint_text(net, c);
  out["places"] = ordered_json::array();
  for (uint32_t p : c.places) out["places"].push_back(net.place(p).id);
  out["bound"] = c.bound;
  return out;
}

ordered_json covered_json(const PetriNet& net, const CoveredSet& cs) {
  ordered_json out = constraint_json(net, cs.constraint);
  out["covers"] = names(net, cs.covered);
  return out;
}

const char* tag_word(StateTag tag) {
  switch (tag) {
    case StateTag::Keep: return "keep";
    case StateTag::Cut: return "cut";
    case StateTag::DontCare: return "dont-care";
  }
  return "?";
}

const char* tag_mark(StateTag tag) {
  switch (tag) {
    case StateTag::Keep: return "1";
    case StateTag::Cut: return "0";
    case StateTag::DontCare: return "Φ";
  }
  return "?";
}

void join_names(std::ostream& out, const std::vector<std::string>& items) {
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out << ", ";
    out << items[i];
  }
}

}  // namespace

ordered_json report_json(const Report& report) {
  const PetriNet& net = report.net;
  ordered_json doc;

  doc["net"] = {{"name", net.name()},
                {"places", net.place_count()},
                {"transitions", net.transition_count()}};

  doc["invariants"] = ordered_json::array();
  for (const UnitInvariant& inv : report.invariants) {
    doc["invariants"].push_back(invariant_json(net, inv));
  }
  if (report.possible_count) {
    doc["possible_states"] = *report.possible_count;
  } else {
    doc["possible_states"] = nullptr;
    doc["partition_note"] = report.partition_note;
  }

  doc["reachability"] = {{"real_states", report.rg_real.states.size()},
                         {"real_arcs", report.rg_real.arcs.size()},
                         {"quasi_states", report.rg_quasi.states.size()},
                         {"quasi_arcs", report.rg_quasi.arcs.size()}};

  ordered_json cls;
  cls["forbidden"] = names(net, report.rg_quasi, report.cls.forbidden);
  cls["dangerous"] = names(net, report.rg_quasi, report.cls.dangerous);
  cls["admissible"] = names(net, report.rg_quasi, report.cls.admissible);
  cls["border"] = names(net, report.rg_quasi, report.cls.border);
  cls["specification_controllable"] = report.cls.forbidden.empty();
  doc["classification"] = std::move(cls);

  if (report.table) {
    ordered_json table = ordered_json::array();
    for (size_t i = 0; i < report.table->states.size(); ++i) {
      table.push_back({{"state", net.canonical_name(report.table->states[i])},
                       {"tag", tag_word(report.table->tags[i])}});
    }
    doc["table"] = std::move(table);
  }

  if (!report.synthesis_ran) return doc;

  ordered_json cons;
  cons["initial"] = ordered_json::array();
  for (const Constraint& c : initial_constraints(net, report.border_markings)) {
    cons["initial"].push_back(constraint_json(net, c));
  }
  cons["after_collapse"] = ordered_json::array();
  for (const CoveredSet& cs : report.generation.after_collapse) {
    cons["after_collapse"].push_back(covered_json(net, cs));
  }
  cons["candidates"] = ordered_json::array();
  for (const CoveredSet& cs : report.generation.candidates) {
    cons["candidates"].push_back(covered_json(net, cs));
  }
  cons["dropped_zero_coverage"] = ordered_json::array();
  for (const Constraint& c : report.generation.dropped_zero_coverage) {
    cons["dropped_zero_coverage"].push_back(constraint_json(net, c));
  }
  cons["selected"] = ordered_json::array();
  for (const CoveredSet& cs : report.cover.selected) {
    cons["selected"].push_back(covered_json(net, cs));
  }
  cons["forced"] = ordered_json::array();
  for (const Constraint& c : report.cover.forced) {
    cons["forced"].push_back(constraint_json(net, c));
  }
  cons["inadmissible"] = ordered_json::array();
  for (const Constraint& c : report.cover.inadmissible) {
    cons["inadmissible"].push_back(constraint_json(net, c));
  }
  cons["exact_cover"] = report.cover.exact;
  doc["constraints"] = std::move(cons);

  ordered_json syn;
  syn["transitions"] = ordered_json::array();
  for (const Transition& t : net.transitions()) syn["transitions"].push_back(t.id);
  syn["constraint_matrix"] = ordered_json::array();
  for (uint32_t i = 0; i < report.synthesis.system.lhs.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (uint32_t p = 0; p < net.place_count(); ++p) {
      row.push_back(report.synthesis.system.lhs.at(i, p));
    }
    syn["constraint_matrix"].push_back(std::move(row));
  }
  syn["bounds"] = report.synthesis.system.bound;
  syn["control_places"] = ordered_json::array();
  for (uint32_t i = 0; i < report.synthesis.control_ids.size(); ++i) {
    ordered_json cp;
    cp["id"] = report.synthesis.control_ids[i];
    cp["constraint"] = constraint_text(net, report.synthesis.system.constraints[i]);
    cp["initial"] = report.synthesis.control_initial[i];
    ordered_json flow = ordered_json::array();
    for (uint32_t t = 0; t < net.transition_count(); ++t) {
      flow.push_back(report.synthesis.control_flow.at(i, t));
    }
    cp["flow"] = std::move(flow);
    syn["control_places"].push_back(std::move(cp));
  }
  syn["controlled_net_representable"] = report.synthesis.controlled.has_value();
  doc["synthesis"] = std::move(syn);

  ordered_json ver;
  ver["ok"] = report.verification.ok;
  ver["controlled_states"] = report.verification.controlled_states;
  ver["plant_projection"] = names(net, report.verification.plant_projection);
  ver["issues"] = report.verification.issues;
  if (!report.verification.counterexample.empty()) {
    ver["counterexample"] = report.verification.counterexample;
    ver["counterexample_path"] = report.verification.counterexample_path;
  }
  doc["verification"] = std::move(ver);
  return doc;
}

namespace {

/// Fig-style grid over the possible states: columns follow the first
/// invariant (the fastest-varying one in enumeration order), rows the
/// remaining combinations.
void render_grid(std::ostream& out, const Report& report) {
  const PetriNet& net = report.net;
  const ClassTable& table = *report.table;
  if (table.states.empty()) return;

  const UnitInvariant& first = report.invariants.front();
  const size_t cols = first.places.size();
  const size_t rows = table.states.size() / cols;

  size_t width = 3;
  for (uint32_t p : first.places) width = std::max(width, net.place(p).id.size() + 2);

  std::vector<std::string> row_labels(rows);
  size_t label_width = 0;
  for (size_t r = 0; r < rows; ++r) {
    Marking rest = table.states[r * cols];
    for (uint32_t p : first.places) rest.reset(p);
    row_labels[r] = net.canonical_name(rest);
    label_width = std::max(label_width, row_labels[r].size());
  }

  out << "classification grid (1 = kept, 0 = cut by the supervisor, "
         "Φ = unreachable under supervision):\n";
  out << "  " << std::setw(int(label_width)) << "";
  for (uint32_t p : first.places) out << std::setw(int(width)) << net.place(p).id;
  out << "\n";
  for (size_t r = 0; r < rows; ++r) {
    out << "  " << std::setw(int(label_width)) << row_labels[r];
    for (size_t c = 0; c < cols; ++c) {
      // "Φ" is two bytes; pad manually so columns stay aligned.
      const char* mark = tag_mark(table.tags[r * cols + c]);
      size_t glyphs = 1;
      out << std::string(width - glyphs, ' ') << mark;
    }
    out << "\n";
  }
}

void render_cover_matrix(std::ostream& out, const Report& report) {
  const PetriNet& net = report.net;
  const std::vector<std::string> border = names(net, report.border_markings);
  if (border.empty()) return;

  std::vector<const CoveredSet*> rows;
  for (const CoveredSet& cs : report.generation.candidates) rows.push_back(&cs);
  for (const CoveredSet& cs : report.cover.selected) {
    bool known = false;
    for (const CoveredSet* r : rows) {
      if (r->constraint == cs.constraint) known = true;
    }
    if (!known) {
      rows.push_back(&cs);  // forced per-state constraints
    }
  }
  auto is_selected = [&](const Constraint& c) {
    for (const CoveredSet& cs : report.cover.selected) {
      if (cs.constraint == c) return true;
    }
    return false;
  };

  size_t label_width = std::string("candidate").size();
  for (const CoveredSet* cs : rows) {
    label_width = std::max(label_width, constraint_text(net, cs->constraint).size() + 2);
  }

  out << "cover matrix (x = constraint excludes the border state, * = selected):\n";
  out << "  " << std::left << std::setw(int(label_width)) << "candidate" << std::right;
  for (const std::string& b : border) out << "  " << b;
  out << "\n";
  for (const CoveredSet* cs : rows) {
    std::string label = constraint_text(net, cs->constraint);
    if (is_selected(cs->constraint)) label += " *";
    out << "  " << std::left << std::setw(int(label_width)) << label << std::right;
    for (size_t i = 0; i < border.size(); ++i) {
      const bool hit = std::any_of(cs->covered.begin(), cs->covered.end(),
                                   [&](const Marking& m) {
                                     return m == report.border_markings[i];
                                   });
      const size_t w = border[i].size();
      out << "  " << std::string(w / 2, ' ') << (hit ? "x" : " ")
          << std::string(w - w / 2 - 1, ' ');
    }
    out << "\n";
  }
}

}  // namespace

std::string report_text(const Report& report) {
  const PetriNet& net = report.net;
  std::ostringstream out;

  out << "net: " << net.name() << " (" << net.place_count() << " places, "
      << net.transition_count() << " transitions)\n\n";

  out << "unit invariants (" << report.invariants.size() << "):\n";
  for (const UnitInvariant& inv : report.invariants) {
    out << "  {";
    for (size_t i = 0; i < inv.places.size(); ++i) {
      if (i) out << ", ";
      out << net.place(inv.places[i]).id;
    }
    out << "}\n";
  }
  if (report.possible_count) {
    out << "possible states: " << *report.possible_count << "\n";
  } else {
    out << "possible states: unavailable (" << report.partition_note << ")\n";
  }
  out << "\n";

  out << "reachability: real " << report.rg_real.states.size() << " states / "
      << report.rg_real.arcs.size() << " arcs; quasi " << report.rg_quasi.states.size()
      << " states / " << report.rg_quasi.arcs.size() << " arcs\n\n";

  auto list = [&](const char* label, const std::vector<uint32_t>& set) {
    out << label << " (" << set.size() << ")";
    if (!set.empty()) {
      out << ": ";
      join_names(out, names(net, report.rg_quasi, set));
    }
    out << "\n";
  };
  if (report.cls.forbidden.empty()) {
    out << "specification controllable: no forbidden states\n";
  }
  list("forbidden states", report.cls.forbidden);
  list("dangerous states", report.cls.dangerous);
  list("admissible states", report.cls.admissible);
  list("border states", report.cls.border);
  out << "\n";

  if (report.table) {
    render_grid(out, report);
    out << "\n";
  }

  if (!report.synthesis_ran) return out.str();

  out << "constraints:\n";
  out << "  per border state (" << report.border_markings.size() << "):\n";
  for (const Constraint& c : initial_constraints(net, report.border_markings)) {
    out << "    " << constraint_text(net, c) << "\n";
  }
  out << "  after invariant collapse (" << report.generation.after_collapse.size()
      << "):\n";
  for (const CoveredSet& cs : report.generation.after_collapse) {
    out << "    " << constraint_text(net, cs.constraint) << "  [excludes ";
    join_names(out, names(net, cs.covered));
    out << "]\n";
  }
  out << "  candidates after exclusive merge (" << report.generation.candidates.size()
      << "):\n";
  for (const CoveredSet& cs : report.generation.candidates) {
    out << "    " << constraint_text(net, cs.constraint) << "  [excludes ";
    join_names(out, names(net, cs.covered));
    out << "]\n";
  }
  for (const Constraint& c : report.generation.dropped_zero_coverage) {
    out << "  dropped (excludes no border state): " << constraint_text(net, c) << "\n";
  }
  for (const Constraint& c : report.cover.inadmissible) {
    out << "  rejected (would cut an admissible state): " << constraint_text(net, c)
        << "\n";
  }
  out << "  selected cover (" << report.cover.selected.size() << ", "
      << (report.cover.exact ? "exhaustive" : "greedy") << "):\n";
  for (const CoveredSet& cs : report.cover.selected) {
    out << "    " << constraint_text(net, cs.constraint) << "\n";
  }
  out << "\n";

  if (!report.border_markings.empty()) {
    render_cover_matrix(out, report);
    out << "\n";
  }

  if (report.synthesis.control_ids.empty()) {
    out << "control places: none needed\n";
  } else {
    out << "control places (columns:";
    for (const Transition& t : net.transitions()) out << " " << t.id;
    out << "):\n";
    for (uint32_t i = 0; i < report.synthesis.control_ids.size(); ++i) {
      out << "  " << report.synthesis.control_ids[i] << ": "
          << constraint_text(net, report.synthesis.system.constraints[i])
          << ", initial marking " << report.synthesis.control_initial[i] << ", flow [";
      for (uint32_t t = 0; t < net.transition_count(); ++t) {
        if (t) out << " ";
        out << std::setw(2) << report.synthesis.control_flow.at(i, t);
      }
      out << "]\n";
    }
    if (!report.synthesis.controlled) {
      out << "  (controlled net not representable with weight-1 arcs and binary "
             "markings; matrices above are authoritative)\n";
    }
  }
  out << "\n";

  out << "verification: " << (report.verification.ok ? "PASS" : "FAIL") << " ("
      << report.verification.controlled_states << " controlled states, plant projection "
      << report.verification.plant_projection.size() << " states)\n";
  for (const std::string& issue : report.verification.issues) {
    out << "  issue: " << issue << "\n";
  }
  if (!report.verification.counterexample.empty()) {
    out << "  counterexample: " << report.verification.counterexample;
    if (!report.verification.counterexample_path.empty()) {
      out << " via ";
      join_names(out, report.verification.counterexample_path);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace pnsynth
