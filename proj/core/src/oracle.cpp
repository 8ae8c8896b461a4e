#include "ringfuse/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ringfuse {

std::vector<int> canonical_order(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (n == 0) return {};
    int zero_pos = 0;
    for (int i = 0; i < n; ++i)
        if (order[static_cast<size_t>(i)] == 0) zero_pos = i;
    std::vector<int> rotated(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rotated[static_cast<size_t>(i)] = order[static_cast<size_t>((zero_pos + i) % n)];
    if (n > 2 && rotated[static_cast<size_t>(n - 1)] < rotated[1]) {
        std::reverse(rotated.begin() + 1, rotated.end());
    }
    return rotated;
}

namespace {

OracleResult small_result(const Instance& inst, OracleMethod method) {
    OracleResult res;
    res.method = method;
    res.node_budget = inst.size();
    std::vector<int> order(static_cast<size_t>(inst.size()));
    std::iota(order.begin(), order.end(), 0);
    res.optimal_tour = make_tour(inst, order);
    res.optimal_length = res.optimal_tour.length;
    return res;
}

} // namespace

OracleResult solve_enumeration(const Instance& inst) {
    const int n = inst.size();
    if (n < 1 || n > 10) throw std::invalid_argument("solve_enumeration: N must be in 1..10");
    if (n <= 3) return small_result(inst, OracleMethod::Enumeration);

    std::vector<int> perm(static_cast<size_t>(n - 1));
    std::iota(perm.begin(), perm.end(), 1);

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_order;
    std::vector<int> order(static_cast<size_t>(n));
    order[0] = 0;
    do {
        // Fix orientation: first city after 0 smaller than the last one.
        if (perm.front() > perm.back()) continue;
        std::copy(perm.begin(), perm.end(), order.begin() + 1);
        double len = inst.distance(0, order[1]);
        for (int i = 1; i + 1 < n; ++i) len += inst.distance(order[static_cast<size_t>(i)], order[static_cast<size_t>(i + 1)]);
        len += inst.distance(order[static_cast<size_t>(n - 1)], 0);
        if (len < best) {
            best = len;
            best_order = order;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    OracleResult res;
    res.method = OracleMethod::Enumeration;
    res.node_budget = n;
    res.optimal_tour = make_tour(inst, canonical_order(best_order));
    res.optimal_length = res.optimal_tour.length;
    return res;
}

OracleResult solve_held_karp(const Instance& inst) {
    const int n = inst.size();
    if (n < 1 || n > 15) throw std::invalid_argument("solve_held_karp: N must be in 1..15");
    if (n <= 3) return small_result(inst, OracleMethod::HeldKarp);

    // dp[mask][j]: shortest path from city 0 through the cities of `mask`
    // (subset of 1..n-1, j included), ending at j.
    const int m = n - 1;
    const size_t nmask = size_t{1} << m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(nmask * static_cast<size_t>(m), inf);
    std::vector<int> parent(nmask * static_cast<size_t>(m), -1);
    auto at = [m](size_t mask, int j) { return mask * static_cast<size_t>(m) + static_cast<size_t>(j); };

    for (int j = 0; j < m; ++j) dp[at(size_t{1} << j, j)] = inst.distance(0, j + 1);

    for (size_t mask = 1; mask < nmask; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (!(mask & (size_t{1} << j))) continue;
            const double base = dp[at(mask, j)];
            if (base == inf) continue;
            for (int k = 0; k < m; ++k) {
                if (mask & (size_t{1} << k)) continue;
                const size_t next = mask | (size_t{1} << k);
                const double cand = base + inst.distance(j + 1, k + 1);
                if (cand < dp[at(next, k)]) {
                    dp[at(next, k)] = cand;
                    parent[at(next, k)] = j;
                }
            }
        }
    }

    const size_t full = nmask - 1;
    double best = inf;
    int best_end = -1;
    for (int j = 0; j < m; ++j) {
        const double cand = dp[at(full, j)] + inst.distance(j + 1, 0);
        if (cand < best) {
            best = cand;
            best_end = j;
        }
    }

    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    size_t mask = full;
    int j = best_end;
    while (j >= 0) {
        order.push_back(j + 1);
        const int p = parent[at(mask, j)];
        mask &= ~(size_t{1} << j);
        j = p;
    }
    order.push_back(0);
    std::reverse(order.begin(), order.end());

    OracleResult res;
    res.method = OracleMethod::HeldKarp;
    res.node_budget = n;
    res.optimal_tour = make_tour(inst, canonical_order(order));
    res.optimal_length = res.optimal_tour.length;
    return res;
}

std::string oracle_to_json(const Instance& inst, const OracleResult& res) {
    std::ostringstream out;
    out.precision(12);
    out << "{\"instance_name\": \"" << inst.name << "\", \"method\": \""
        << (res.method == OracleMethod::HeldKarp ? "held_karp" : "enumeration")
        << "\", \"node_budget\": " << res.node_budget << ", \"optimal_length\": " << res.optimal_length
        << ", \"optimal_tour\": [";
    for (size_t i = 0; i < res.optimal_tour.order.size(); ++i) {
        if (i) out << ", ";
        out << res.optimal_tour.order[i];
    }
    out << "]}";
    return out.str();
}

} // namespace ringfuse
