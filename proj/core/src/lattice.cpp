#include "ringfuse/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ringfuse/geometry.hpp"
#include "ringfuse/rng.hpp"

namespace ringfuse {

std::vector<int> LatticeGraph::free_nodes() const {
    std::vector<bool> is_pinned(static_cast<size_t>(n), false);
    for (int p : pinned) is_pinned[static_cast<size_t>(p)] = true;
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
        if (!is_pinned[static_cast<size_t>(i)]) free.push_back(i);
    return free;
}

void LatticeGraph::validate() const {
    if (n < 1) throw std::invalid_argument("lattice: n must be >= 1");
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n) throw std::invalid_argument("lattice: edge index out of range");
        if (i == j) throw std::invalid_argument("lattice: self-loop");
        const auto key = std::minmax(i, j);
        if (!seen.insert(key).second) throw std::invalid_argument("lattice: duplicate edge");
    }
    std::set<int> pins;
    for (int p : pinned) {
        if (p < 0 || p >= n) throw std::invalid_argument("lattice: pinned index out of range");
        if (!pins.insert(p).second) throw std::invalid_argument("lattice: duplicate pinned node");
    }
    if (domain == FieldDomain::Real) {
        if (pinned.empty()) throw std::invalid_argument("lattice: real domain requires a pinned node");
        if (!(coupling > 0.0)) throw std::invalid_argument("lattice: coupling must be > 0");
    } else if (coupling < 0.0) {
        throw std::invalid_argument("lattice: coupling must be >= 0");
    }
}

namespace {

double pair_energy(const LatticeGraph& g, double wi, double wj) {
    const double d = g.domain == FieldDomain::Circular ? wrap_angle_diff(wi, wj) : wi - wj;
    return d * d;
}

// Laplacian of the full graph restricted to the free nodes.
std::vector<std::vector<double>> restricted_laplacian(const LatticeGraph& g, const std::vector<int>& free) {
    std::vector<int> pos(static_cast<size_t>(g.n), -1);
    for (size_t k = 0; k < free.size(); ++k) pos[static_cast<size_t>(free[k])] = static_cast<int>(k);
    const size_t m = free.size();
    std::vector<std::vector<double>> lap(m, std::vector<double>(m, 0.0));
    for (const auto& [i, j] : g.edges) {
        const int pi = pos[static_cast<size_t>(i)], pj = pos[static_cast<size_t>(j)];
        if (pi >= 0) lap[static_cast<size_t>(pi)][static_cast<size_t>(pi)] += 1.0;
        if (pj >= 0) lap[static_cast<size_t>(pj)][static_cast<size_t>(pj)] += 1.0;
        if (pi >= 0 && pj >= 0) {
            lap[static_cast<size_t>(pi)][static_cast<size_t>(pj)] -= 1.0;
            lap[static_cast<size_t>(pj)][static_cast<size_t>(pi)] -= 1.0;
        }
    }
    return lap;
}

// In-place Cholesky A = L L^T; returns false if A is not positive definite.
bool cholesky(std::vector<std::vector<double>>& a) {
    const size_t m = a.size();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            if (i == j) {
                if (s <= 1e-12) return false;
                a[i][i] = std::sqrt(s);
            } else {
                a[i][j] = s / a[j][j];
            }
        }
        for (size_t j = i + 1; j < m; ++j) a[i][j] = 0.0;
    }
    return true;
}

std::runtime_error singular_error() {
    return std::runtime_error("singular restricted Laplacian (disconnected free component with no pinned anchor)");
}

McEstimate jackknife_log_mean(const std::vector<double>& log_weights, double offset) {
    // log-mean-exp with leave-one-out jackknife standard error.
    const size_t s = log_weights.size();
    double mx = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights) mx = std::max(mx, lw);
    std::vector<double> y(s);
    double total = 0.0;
    for (size_t i = 0; i < s; ++i) {
        y[i] = std::exp(log_weights[i] - mx);
        total += y[i];
    }
    McEstimate est;
    est.log_z = offset + mx + std::log(total / static_cast<double>(s));
    std::vector<double> theta(s);
    double theta_bar = 0.0;
    const double tiny = 1e-300;
    for (size_t i = 0; i < s; ++i) {
        theta[i] = mx + std::log(std::max(total - y[i], tiny) / static_cast<double>(s - 1));
        theta_bar += theta[i];
    }
    theta_bar /= static_cast<double>(s);
    double var = 0.0;
    for (size_t i = 0; i < s; ++i) var += (theta[i] - theta_bar) * (theta[i] - theta_bar);
    est.std_error = std::sqrt(var * static_cast<double>(s - 1) / static_cast<double>(s));
    return est;
}

} // namespace

double field_energy(const LatticeGraph& graph, const FieldConfig& config) {
    if (static_cast<int>(config.w.size()) != graph.n)
        throw std::invalid_argument("field_energy: config size does not match graph");
    double e = 0.0;
    for (const auto& [i, j] : graph.edges)
        e += pair_energy(graph, config.w[static_cast<size_t>(i)], config.w[static_cast<size_t>(j)]);
    return 0.5 * graph.coupling * e;
}

double log_partition_exact(const LatticeGraph& graph) {
    if (graph.domain != FieldDomain::Real)
        throw std::invalid_argument("log_partition_exact: real domain only");
    graph.validate();
    const auto free = graph.free_nodes();
    if (free.empty()) return 0.0;
    auto lap = restricted_laplacian(graph, free);
    if (!cholesky(lap)) throw singular_error();
    double log_det = 0.0;
    for (size_t i = 0; i < lap.size(); ++i) log_det += 2.0 * std::log(lap[i][i]);
    const double nf = static_cast<double>(free.size());
    return 0.5 * nf * std::log(2.0 * M_PI / graph.coupling) - 0.5 * log_det;
}

McEstimate log_partition_mc(const LatticeGraph& graph, long samples, std::uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("log_partition_mc: need at least 1000 samples");
    graph.validate();
    const auto free = graph.free_nodes();
    const size_t nf = free.size();
    if (nf == 0) return McEstimate{0.0, 0.0};

    Rng rng(seed);
    FieldConfig cfg;
    cfg.w.assign(static_cast<size_t>(graph.n), 0.0);
    std::vector<double> log_weights(static_cast<size_t>(samples));

    if (graph.domain == FieldDomain::Real) {
        // Z = (2 pi)^{nf/2} E_{w ~ N(0,I)}[ exp(-E(w) + |w|^2 / 2) ]
        for (long k = 0; k < samples; ++k) {
            double half_norm2 = 0.0;
            for (int idx : free) {
                const double v = rng.normal();
                cfg.w[static_cast<size_t>(idx)] = v;
                half_norm2 += 0.5 * v * v;
            }
            log_weights[static_cast<size_t>(k)] = -field_energy(graph, cfg) + half_norm2;
        }
        return jackknife_log_mean(log_weights, 0.5 * static_cast<double>(nf) * std::log(2.0 * M_PI));
    }

    // Circular: Z = (2 pi)^{nf} E_uniform[ exp(-E) ]
    for (long k = 0; k < samples; ++k) {
        for (int idx : free) cfg.w[static_cast<size_t>(idx)] = rng.uniform(0.0, 2.0 * M_PI);
        log_weights[static_cast<size_t>(k)] = -field_energy(graph, cfg);
    }
    return jackknife_log_mean(log_weights, static_cast<double>(nf) * std::log(2.0 * M_PI));
}

std::vector<FieldConfig> gibbs_sample(const LatticeGraph& graph, long sweeps, std::uint64_t seed) {
    if (graph.domain != FieldDomain::Real)
        throw std::invalid_argument("gibbs_sample: real domain only");
    graph.validate();
    const auto free = graph.free_nodes();

    std::vector<std::vector<int>> neighbors(static_cast<size_t>(graph.n));
    for (const auto& [i, j] : graph.edges) {
        neighbors[static_cast<size_t>(i)].push_back(j);
        neighbors[static_cast<size_t>(j)].push_back(i);
    }
    for (int idx : free)
        if (neighbors[static_cast<size_t>(idx)].empty())
            throw singular_error(); // isolated free node has no conditional

    Rng rng(seed);
    FieldConfig cfg;
    cfg.w.assign(static_cast<size_t>(graph.n), 0.0);
    std::vector<FieldConfig> stream;
    stream.reserve(static_cast<size_t>(sweeps));
    for (long t = 0; t < sweeps; ++t) {
        for (int idx : free) {
            const auto& nb = neighbors[static_cast<size_t>(idx)];
            double mean = 0.0;
            for (int j : nb) mean += cfg.w[static_cast<size_t>(j)];
            mean /= static_cast<double>(nb.size());
            const double sd = 1.0 / std::sqrt(graph.coupling * static_cast<double>(nb.size()));
            cfg.w[static_cast<size_t>(idx)] = mean + sd * rng.normal();
        }
        stream.push_back(cfg);
    }
    return stream;
}

std::vector<std::vector<double>> free_covariance(const LatticeGraph& graph) {
    graph.validate();
    const auto free = graph.free_nodes();
    const size_t m = free.size();
    auto lap = restricted_laplacian(graph, free);
    auto chol = lap;
    if (!cholesky(chol)) throw singular_error();
    // Invert via L L^T x = e_k column solves.
    std::vector<std::vector<double>> inv(m, std::vector<double>(m, 0.0));
    std::vector<double> y(m);
    for (size_t col = 0; col < m; ++col) {
        for (size_t i = 0; i < m; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (size_t k = 0; k < i; ++k) s -= chol[i][k] * y[k];
            y[i] = s / chol[i][i];
        }
        for (size_t ii = m; ii-- > 0;) {
            double s = y[ii];
            for (size_t k = ii + 1; k < m; ++k) s -= chol[k][ii] * inv[k][col];
            inv[ii][col] = s / chol[ii][ii];
        }
    }
    for (auto& row : inv)
        for (auto& v : row) v /= graph.coupling;
    return inv;
}

LatticeGraph parse_lattice_graph(std::istream& in) {
    LatticeGraph g;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first) || first[0] == '#') continue;
        if (!have_header) {
            try {
                g.n = std::stoi(first);
            } catch (const std::exception&) {
                throw std::runtime_error("lattice file line " + std::to_string(lineno) + ": expected node count");
            }
            if (!(ss >> g.coupling))
                throw std::runtime_error("lattice file line " + std::to_string(lineno) + ": expected coupling K");
            std::string tok;
            while (ss >> tok) {
                if (tok.rfind("pinned=", 0) == 0) {
                    std::istringstream ps(tok.substr(7));
                    std::string id;
                    while (std::getline(ps, id, ','))
                        if (!id.empty()) g.pinned.push_back(std::stoi(id));
                } else if (tok == "domain=circular") {
                    g.domain = FieldDomain::Circular;
                } else if (tok == "domain=real") {
                    g.domain = FieldDomain::Real;
                } else {
                    throw std::runtime_error("lattice file line " + std::to_string(lineno) +
                                             ": unknown header token '" + tok + "'");
                }
            }
            have_header = true;
        } else {
            int j;
            std::istringstream es(line);
            int i;
            if (!(es >> i >> j))
                throw std::runtime_error("lattice file line " + std::to_string(lineno) + ": expected 'i j'");
            g.edges.emplace_back(i, j);
        }
    }
    if (!have_header) throw std::runtime_error("lattice file: missing header line");
    g.validate();
    return g;
}

LatticeGraph parse_lattice_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open lattice graph file: " + path);
    return parse_lattice_graph(f);
}

} // namespace ringfuse
