#pragma once

#include <vector>

#include "ramlock/localfield.hpp"

namespace ramlock {

/// Exhaustive search for x in O_F with v_F(f(x)) >= target_vF, over digit
/// prefixes of depth min(target_vF, depth_cap). The search tree is pruned
/// with the exact congruence f(x + pi^t d) = f(x) mod pi^t, which keeps
/// every prefix of a true witness alive, so a negative answer at full
/// depth is conclusive.
struct ScanOptions {
    long budget = 2'000'000;  // node limit; TooLarge beyond
    bool parallel = true;     // OpenMP over top-level digit prefixes
};

struct ScanResult {
    bool found = false;
    long nodes = 0;
    long best_val = -1;  // max v_F(f(x)) seen at full prefix depth
    LFElement witness;   // valid iff found
};

ScanResult scan_poly_value(const std::vector<LFElement>& f, long target_vF,
                           const ScanOptions& opts = {});

/// Serial reference implementation; the parallel kernel must agree with it
/// on found/best_val.
ScanResult scan_poly_value_serial(const std::vector<LFElement>& f,
                                  long target_vF, const ScanOptions& opts = {});

/// Default enumeration budget, overridable via RAMLOCK_BUDGET.
long default_scan_budget();

}  // namespace ramlock
