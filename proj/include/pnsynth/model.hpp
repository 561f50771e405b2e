#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pnsynth/error.hpp"

namespace pnsynth {

/// Process places model the plant; specification places model the desired
/// behaviour imposed on it. Only the distinction matters to the algorithms:
/// an uncontrollable transition is quasi-enabled as soon as its process-side
/// inputs are marked, regardless of specification-side inputs.
enum class PlaceKind { Process, Specification };

/// Firing semantics for safe nets.
///  - Real: a transition needs every input place marked.
///  - Quasi: an uncontrollable transition additionally fires whenever its
///    process-side inputs are marked; unmarked specification inputs are then
///    consumed at floor zero and marked specification outputs saturate at one.
///    Controllable transitions behave identically under both semantics.
enum class Semantics { Real, Quasi };

struct PlaceDecl {
  std::string id;
  PlaceKind kind = PlaceKind::Process;
  int initial = 0;  // 0 or 1; anything else is rejected
};

struct TransitionDecl {
  std::string id;
  bool controllable = true;
  std::vector<std::string> inputs;   // place ids (weight-1 arcs)
  std::vector<std::string> outputs;  // place ids (weight-1 arcs)
};

/// Raw, unvalidated description of a net; mirrors the JSON interchange format.
struct NetDecl {
  std::string name;
  std::vector<PlaceDecl> places;
  std::vector<TransitionDecl> transitions;
};

/// A binary marking over a fixed set of places, stored as a bit vector.
class Marking {
 public:
  Marking() = default;
  explicit Marking(uint32_t place_count)
      : n_(place_count), w_((place_count + 63) / 64, 0) {}

  uint32_t size() const { return n_; }

  bool test(uint32_t place) const {
    return (w_[place >> 6] >> (place & 63)) & 1u;
  }
  void set(uint32_t place) { w_[place >> 6] |= uint64_t(1) << (place & 63); }
  void reset(uint32_t place) { w_[place >> 6] &= ~(uint64_t(1) << (place & 63)); }

  uint32_t count() const;
  std::vector<uint32_t> marked() const;

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }

  friend bool operator==(const Marking&, const Marking&) = default;

  /// Orders markings by their ascending sequence of marked place indices
  /// (lexicographically). Used wherever state sets are reported, so output
  /// order never depends on exploration order.
  bool operator<(const Marking& other) const {
    return marked() < other.marked();
  }

 private:
  uint32_t n_ = 0;
  std::vector<uint64_t> w_;
};

struct MarkingHash {
  size_t operator()(const Marking& m) const noexcept {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over the words
    for (uint64_t w : m.words()) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

/// Dense row-major integer matrix; small enough nets that nothing fancier
/// is warranted.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(uint32_t rows, uint32_t cols)
      : rows_(rows), cols_(cols), v_(size_t(rows) * cols, 0) {}

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }

  int32_t& at(uint32_t r, uint32_t c) { return v_[size_t(r) * cols_ + c]; }
  int32_t at(uint32_t r, uint32_t c) const { return v_[size_t(r) * cols_ + c]; }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  uint32_t rows_ = 0, cols_ = 0;
  std::vector<int32_t> v_;
};

/// pre(p,t)=1 iff p is an input of t; post(p,t)=1 iff p is an output of t;
/// c = post - pre. Rows are places, columns transitions, both in declaration
/// order.
struct IncidenceMatrices {
  IntMatrix pre, post, c;
};

/// Validated transition with index-based arcs and precomputed bit masks for
/// fast enabling tests (one mask word set per 64 places).
struct Transition {
  std::string id;
  bool controllable = true;
  std::vector<uint32_t> inputs;   // ascending place indices
  std::vector<uint32_t> outputs;  // ascending place indices
  std::vector<uint64_t> in_mask;
  std::vector<uint64_t> proc_in_mask;  // in_mask restricted to process places
  std::vector<uint64_t> out_mask;
};

/// An immutable safe Petri net. Construct with build(), which validates the
/// declaration (unique ids, resolvable arcs, binary initial marking).
class PetriNet {
 public:
  static PetriNet build(const NetDecl& decl);

  const std::string& name() const { return name_; }
  uint32_t place_count() const { return uint32_t(places_.size()); }
  uint32_t transition_count() const { return uint32_t(transitions_.size()); }

  const PlaceDecl& place(uint32_t p) const { return places_[p]; }
  const Transition& transition(uint32_t t) const { return transitions_[t]; }
  const std::vector<PlaceDecl>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  std::optional<uint32_t> place_index(std::string_view id) const;
  std::optional<uint32_t> transition_index(std::string_view id) const;

  const Marking& initial_marking() const { return initial_; }
  const IncidenceMatrices& incidence() const { return inc_; }
  const std::vector<uint64_t>& specification_mask() const { return spec_mask_; }

  bool enabled_real(const Marking& m, uint32_t t) const;
  bool enabled_quasi(const Marking& m, uint32_t t) const;
  bool enabled(const Marking& m, uint32_t t, Semantics sem) const {
    return sem == Semantics::Real ? enabled_real(m, t) : enabled_quasi(m, t);
  }

  /// Fires t from m and returns the successor marking. The transition must be
  /// enabled under the given semantics. A firing that would push a process
  /// place (or, under real enabling, any place) above one token raises a
  /// safety error: the net was declared safe and is not.
  Marking fire(const Marking& m, uint32_t t, Semantics sem) const;

  // Id-based conveniences; unknown ids raise validation errors.
  bool enabled_real(const Marking& m, std::string_view t) const;
  bool enabled_quasi(const Marking& m, std::string_view t) const;
  Marking fire(const Marking& m, std::string_view t, Semantics sem) const;

  /// Canonical state name: concatenated ids of the marked places in
  /// declaration order ("P1P4P7"); the empty marking reads "∅".
  std::string canonical_name(const Marking& m) const;

  /// Builds a marking from place ids (test/report convenience).
  Marking marking_of(const std::vector<std::string>& place_ids) const;

 private:
  uint32_t require_transition(std::string_view id) const;

  std::string name_;
  std::vector<PlaceDecl> places_;
  std::vector<Transition> transitions_;
  std::unordered_map<std::string, uint32_t> place_index_;
  std::unordered_map<std::string, uint32_t> transition_index_;
  Marking initial_;
  IncidenceMatrices inc_;
  std::vector<uint64_t> spec_mask_;
};

}  // namespace pnsynth
