#include "pnsynth/kernels.hpp"

#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pnsynth::kernels {
namespace {

// Below this many states the parallel variants are pure overhead.
constexpr size_t kAutoThreshold = 4096;

bool pick_parallel(ExecutionPolicy policy, size_t n) {
  switch (policy) {
    case ExecutionPolicy::Serial: return false;
    case ExecutionPolicy::Parallel: return parallel_available();
    case ExecutionPolicy::Auto: return parallel_available() && n >= kAutoThreshold;
  }
  return false;
}

inline bool forbidden_state(const PetriNet& net, const Marking& m) {
  const std::vector<uint64_t>& w = m.words();
  for (const Transition& tr : net.transitions()) {
    if (tr.controllable) continue;
    bool quasi = true, real = true;
    for (size_t i = 0; i < w.size(); ++i) {
      if ((w[i] & tr.proc_in_mask[i]) != tr.proc_in_mask[i]) {
        quasi = false;
        break;
      }
      if ((w[i] & tr.in_mask[i]) != tr.in_mask[i]) real = false;
    }
    if (quasi && !real) return true;
  }
  return false;
}

std::vector<uint64_t> place_mask(const PetriNet& net, std::span<const uint32_t> places) {
  std::vector<uint64_t> mask((net.place_count() + 63) / 64, 0);
  for (uint32_t p : places) mask[p >> 6] |= uint64_t(1) << (p & 63);
  return mask;
}

inline int masked_count(const Marking& m, const std::vector<uint64_t>& mask) {
  int n = 0;
  const std::vector<uint64_t>& w = m.words();
  for (size_t i = 0; i < mask.size(); ++i) n += std::popcount(w[i] & mask[i]);
  return n;
}

}  // namespace

bool parallel_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

std::vector<uint8_t> scan_forbidden_serial(const PetriNet& net,
                                           std::span<const Marking> states) {
  std::vector<uint8_t> out(states.size(), 0);
  for (size_t i = 0; i < states.size(); ++i) {
    out[i] = forbidden_state(net, states[i]) ? 1 : 0;
  }
  return out;
}

std::vector<uint8_t> scan_forbidden_parallel(const PetriNet& net,
                                             std::span<const Marking> states) {
  std::vector<uint8_t> out(states.size(), 0);
  const int64_t n = int64_t(states.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int64_t i = 0; i < n; ++i) {
    out[size_t(i)] = forbidden_state(net, states[size_t(i)]) ? 1 : 0;
  }
  return out;
}

std::vector<uint8_t> scan_forbidden(const PetriNet& net, std::span<const Marking> states,
                                    ExecutionPolicy policy) {
  return pick_parallel(policy, states.size()) ? scan_forbidden_parallel(net, states)
                                              : scan_forbidden_serial(net, states);
}

std::vector<uint8_t> scan_violations_serial(const PetriNet& net,
                                            std::span<const uint32_t> places, int bound,
                                            std::span<const Marking> states) {
  const std::vector<uint64_t> mask = place_mask(net, places);
  std::vector<uint8_t> out(states.size(), 0);
  for (size_t i = 0; i < states.size(); ++i) {
    out[i] = masked_count(states[i], mask) > bound ? 1 : 0;
  }
  return out;
}

std::vector<uint8_t> scan_violations_parallel(const PetriNet& net,
                                              std::span<const uint32_t> places, int bound,
                                              std::span<const Marking> states) {
  const std::vector<uint64_t> mask = place_mask(net, places);
  std::vector<uint8_t> out(states.size(), 0);
  const int64_t n = int64_t(states.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int64_t i = 0; i < n; ++i) {
    out[size_t(i)] = masked_count(states[size_t(i)], mask) > bound ? 1 : 0;
  }
  return out;
}

std::vector<uint8_t> scan_violations(const PetriNet& net, std::span<const uint32_t> places,
                                     int bound, std::span<const Marking> states,
                                     ExecutionPolicy policy) {
  return pick_parallel(policy, states.size())
             ? scan_violations_parallel(net, places, bound, states)
             : scan_violations_serial(net, places, bound, states);
}

}  // namespace pnsynth::kernels
