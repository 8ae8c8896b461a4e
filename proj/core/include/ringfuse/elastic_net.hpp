#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ringfuse/instance.hpp"

namespace ringfuse {

/// Parameters of the annealed elastic-ring minimization. Zero-valued
/// fields are resolved against the instance by resolve_defaults():
///   m_nodes   -> ceil(2.5 N)
///   lambda0   -> 0.5 * bbox_diagonal / sqrt(N)
///   lambda_min-> 1e-3 * lambda0
///   capture_tol -> lambda_min
struct ElasticParams {
    int m_nodes = 0;
    double k_tension = 1.0;
    double lambda0 = 0.0;
    double lambda_decay = 0.99;
    int steps_per_stage = 5;
    double step_size = 0.02;
    double lambda_min = 0.0;
    int max_stages = 1000;
    double capture_tol = 0.0;
};

struct RingState {
    std::vector<Point2> w;
    double lambda = 0.0;
    long iteration = 0;
    double swept_area = 0.0;
};

struct StageRecord {
    int stage = 0;
    double lambda = 0.0;
    double energy = 0.0;
    double swept_area = 0.0;
    double max_capture_dist = 0.0;
};

struct SolveTrace {
    std::vector<StageRecord> stages;
    Tour tour;
    std::uint64_t seed = 0;
    bool converged = false; // false: max_stages hit with uncaptured cities
    double swept_area = 0.0;
};

ElasticParams resolve_defaults(ElasticParams p, const Instance& inst);

void validate_params(const ElasticParams& p, const Instance& inst);

/// Ring energy E = -lambda^2 sum_mu log sum_i exp(-|xi_mu - w_i|^2 / (2 lambda^2))
///              + (K/2) sum_i |w_{i+1} - w_i|^2   (cyclic ring).
/// The log-sum is evaluated with max-subtraction.
double elastic_energy(const Instance& inst, std::span<const Point2> w, double lambda, double k_tension);

/// Analytic gradient: dE/dw_i = -sum_mu L_mu_i (xi_mu - w_i)
///                             + K (2 w_i - w_{i-1} - w_{i+1}),
/// with L the per-city softmax over nodes.
std::vector<Point2> elastic_gradient(const Instance& inst, std::span<const Point2> w, double lambda,
                                     double k_tension);

/// Unsigned area swept between two ring configurations, as the sum of the
/// two triangles covering each edge quad. A 2-node ring counts its single
/// segment once.
double swept_area_increment(std::span<const Point2> w_prev, std::span<const Point2> w_next);

/// Nearest-node assignment; cities at the same node ordered by signed
/// projection onto that node's outgoing ring edge. Always a permutation.
Tour extract_tour(const Instance& inst, const RingState& ring);

/// Largest city-to-nearest-node distance.
double max_capture_distance(const Instance& inst, std::span<const Point2> w);

/// Called after each completed stage, before lambda decays.
using StageCallback = std::function<void(const StageRecord&, const RingState&)>;

/// Deterministic annealed gradient descent. The ring starts on a circle of
/// radius 0.1 * bbox diagonal around the city centroid with seeded jitter,
/// then alternates fixed-lambda descent stages with lambda <- rho * lambda
/// until lambda <= lambda_min, all cities are captured, or max_stages.
SolveTrace anneal_solve(const Instance& inst, const ElasticParams& params, std::uint64_t seed,
                        const StageCallback& on_stage = nullptr);

std::string trace_to_csv(const SolveTrace& trace);

/// Ring polyline over city points, deterministic output (no timestamps).
std::string ring_to_svg(const Instance& inst, const RingState& ring);

} // namespace ringfuse
