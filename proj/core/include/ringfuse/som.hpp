#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringfuse/geometry.hpp"

namespace ringfuse {

/// Feature space of the map. Scalar and Circular use only Point2::x;
/// Circular values live on [0, 2pi) with arc distance and wrapped updates.
enum class FeatureMode { Scalar, Point2D, Circular };

struct SomState {
    int n = 0;
    bool ring_topology = true; // false: open chain
    FeatureMode mode = FeatureMode::Scalar;
    std::vector<Point2> w;
    long t = 0;
};

struct NeighborhoodFn {
    enum class Shape { Gaussian, Box };
    Shape shape = Shape::Gaussian;
    double width = 1.0;     // sigma (gaussian) or radius (box), graph-distance units
    double amplitude = 1.0; // h(0), in (0, 1]

    /// h(d): non-increasing in |d|, zero beyond 3*sigma (gaussian) or the radius (box).
    double operator()(double d) const;
};

/// Finite stimulus support with probabilities.
struct StimulusModel {
    std::vector<Point2> support;
    std::vector<double> prob;
};

SomState make_som_ring(int n, FeatureMode mode, std::uint64_t seed);

/// Graph distance between node indices (ring: shorter way around).
double graph_distance(const SomState& state, int r, int s);

double feature_distance(FeatureMode mode, const Point2& a, const Point2& b);

/// phi - w, wrapped to (-pi, pi] per component x in circular mode.
Point2 feature_diff(FeatureMode mode, const Point2& phi, const Point2& w);

/// Node whose w is closest to phi; ties go to the lowest node id.
int find_winner(const SomState& state, const Point2& phi);

/// w(r, t+1) = w(r, t) + h(d(r, s)) [phi - w(r, t)], s the winner.
SomState kohonen_step(const SomState& state, const Point2& phi, const NeighborhoodFn& h);

/// Partition of the stimulus support: index list per node, nearest-w
/// assignment with lowest-id tie-break. Disjoint and exhaustive.
std::vector<std::vector<int>> receptive_fields(const SomState& state, const StimulusModel& stimuli);

/// E[w] = (1/2) sum_r sum_s h(d(r,s)) sum_{phi in R(s)} P(phi) |phi - w(r)|^2.
double som_energy(const SomState& state, const StimulusModel& stimuli, const NeighborhoodFn& h);

/// Expected single-step displacement per node:
/// E_phi[ h(d(r, s(phi))) (phi - w(r)) ]. Equals -grad of som_energy with
/// receptive fields frozen at the current state.
std::vector<Point2> expected_update(const SomState& state, const StimulusModel& stimuli,
                                    const NeighborhoodFn& h);

/// Number of wrapped consecutive differences around a circular-mode ring
/// whose sign disagrees with the majority orientation. 0 for a perfectly
/// monotone map.
int orientation_reversals(const SomState& state);

/// JSON dump {node id -> w}.
std::string som_map_to_json(const SomState& state);

/// Ring training demo: uniform circular stimuli, sigma and amplitude
/// annealed log-linearly between their endpoints.
struct SomTrainConfig {
    int nodes = 16;
    long steps = 10000;
    double sigma0 = 4.0;
    double sigma1 = 0.5;
    double amp0 = 0.5;
    double amp1 = 0.05;
    std::uint64_t seed = 1;
    long trace_every = 100;   // energy/sigma recording stride
    int energy_support = 64;  // circle discretization used for the energy trace
};

struct SomTrainRecord {
    long step = 0;
    double energy = 0.0;
    double sigma = 0.0;
};

struct SomTrainResult {
    SomState state;
    std::vector<SomTrainRecord> trace;
};

SomTrainResult train_circular_ring(const SomTrainConfig& cfg);

std::string som_trace_to_csv(const std::vector<SomTrainRecord>& trace);

} // namespace ringfuse
