#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pnsynth/model.hpp"

namespace pnsynth {

/// Selects between the serial reference kernels and their OpenMP variants.
/// Auto picks the parallel variant for large inputs when OpenMP is compiled
/// in. Both variants produce identical output for identical input.
enum class ExecutionPolicy { Serial, Parallel, Auto };

namespace kernels {

bool parallel_available();

/// out[i] = 1 iff states[i] has some uncontrollable transition that is
/// quasi-enabled but not really enabled — i.e. only the specification side
/// blocks an event the plant can produce.
std::vector<uint8_t> scan_forbidden(const PetriNet& net,
                                    std::span<const Marking> states,
                                    ExecutionPolicy policy = ExecutionPolicy::Auto);

/// out[i] = 1 iff the token count of states[i] summed over `places` exceeds
/// `bound`.
std::vector<uint8_t> scan_violations(const PetriNet& net,
                                     std::span<const uint32_t> places, int bound,
                                     std::span<const Marking> states,
                                     ExecutionPolicy policy = ExecutionPolicy::Auto);

// Exposed for the equivalence tests and the benchmark.
std::vector<uint8_t> scan_forbidden_serial(const PetriNet&, std::span<const Marking>);
std::vector<uint8_t> scan_forbidden_parallel(const PetriNet&, std::span<const Marking>);
std::vector<uint8_t> scan_violations_serial(const PetriNet&, std::span<const uint32_t>,
                                            int bound, std::span<const Marking>);
std::vector<uint8_t> scan_violations_parallel(const PetriNet&, std::span<const uint32_t>,
                                              int bound, std::span<const Marking>);

}  // namespace kernels
}  // namespace pnsynth
