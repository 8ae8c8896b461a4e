#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ringfuse {

enum class FieldDomain { Real, Circular };

/// Quadratic nearest-neighbor field on a fixed graph with energy
/// (K/2) sum_{<i,j>} d(w_i, w_j)^2. Pinned nodes are clamped to 0; in the
/// real domain at least one pin is required to remove the zero mode.
struct LatticeGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    double coupling = 1.0; // K > 0
    std::vector<int> pinned;
    FieldDomain domain = FieldDomain::Real;

    std::vector<int> free_nodes() const;
    void validate() const; // connectivity, no self-loops/duplicates, pin rules
};

struct FieldConfig {
    std::vector<double> w;
};

struct McEstimate {
    double log_z = 0.0;
    double std_error = 0.0;
};

double field_energy(const LatticeGraph& graph, const FieldConfig& config);

/// Closed form for the real domain:
/// log Z = (n_free/2) log(2 pi / K) - (1/2) log det(L_free),
/// L_free the graph Laplacian restricted to free nodes. Throws
/// std::runtime_error when L_free is singular (free component with no pin).
double log_partition_exact(const LatticeGraph& graph);

/// Real domain: importance sampling against a standard-normal proposal on
/// the free nodes, jackknife standard error of log Z. Circular domain:
/// Z = (2 pi)^{n_free} E_uniform[exp(-E)].
McEstimate log_partition_mc(const LatticeGraph& graph, long samples, std::uint64_t seed);

/// Single-site Gibbs sweeps (real domain). Each free node's conditional is
/// Gaussian with mean = neighbor average and variance 1/(K deg). Returns one
/// FieldConfig per sweep.
std::vector<FieldConfig> gibbs_sample(const LatticeGraph& graph, long sweeps, std::uint64_t seed);

/// Covariance of the free nodes under the exact Gaussian: L_free^{-1} / K.
/// Row/column order follows free_nodes().
std::vector<std::vector<double>> free_covariance(const LatticeGraph& graph);

/// Edge-list format: header "n K pinned=i,j,..." (pinned list optional,
/// "domain=circular" token optional), then one "i j" pair per line.
LatticeGraph parse_lattice_graph(std::istream& in);
LatticeGraph parse_lattice_graph_file(const std::string& path);

} // namespace ringfuse
