#pragma once

#include <atomic>
#include <cstdint>

namespace argus::diagnostics {

// Hard-constraint violation counters. Every solver result is checked against
// its constraint before it is returned; these must stay at zero.
inline std::atomic<std::uint64_t> budget_violations{0};
inline std::atomic<std::uint64_t> ceiling_violations{0};
inline std::atomic<std::uint64_t> constraint_checks{0};

inline void reset() {
  budget_violations = 0;
  ceiling_violations = 0;
  constraint_checks = 0;
}

}  // namespace argus::diagnostics
