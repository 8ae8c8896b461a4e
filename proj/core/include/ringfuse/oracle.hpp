#pragma once

#include <string>
#include <vector>

#include "ringfuse/instance.hpp"

namespace ringfuse {

enum class OracleMethod { HeldKarp, Enumeration };

struct OracleResult {
    Tour optimal_tour;
    double optimal_length = 0.0;
    OracleMethod method = OracleMethod::HeldKarp;
    int node_budget = 0; // N solved
};

/// Canonical cyclic form: rotated so city 0 is first, oriented so the
/// second entry is the smaller of city 0's two tour neighbors.
std::vector<int> canonical_order(const std::vector<int>& order);

/// Exhaustive search over the (N-1)!/2 distinct cyclic orders. N <= 10.
/// Ties broken by lexicographically smallest canonical order.
OracleResult solve_enumeration(const Instance& inst);

/// Held-Karp dynamic program, O(2^N N^2). N <= 15.
OracleResult solve_held_karp(const Instance& inst);

std::string oracle_to_json(const Instance& inst, const OracleResult& res);

} // namespace ringfuse
