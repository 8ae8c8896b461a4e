#include "ringfuse/som.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ringfuse/rng.hpp"

namespace ringfuse {

double NeighborhoodFn::operator()(double d) const {
    const double ad = std::abs(d);
    if (shape == Shape::Gaussian) {
        if (ad > 3.0 * width) return 0.0;
        return amplitude * std::exp(-0.5 * (ad / width) * (ad / width));
    }
    return ad <= width ? amplitude : 0.0;
}

SomState make_som_ring(int n, FeatureMode mode, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_som_ring: n must be >= 1");
    SomState st;
    st.n = n;
    st.mode = mode;
    st.ring_topology = true;
    st.w.resize(static_cast<size_t>(n));
    Rng rng(seed);
    for (auto& w : st.w) {
        switch (mode) {
        case FeatureMode::Scalar: w = {rng.uniform(), 0.0}; break;
        case FeatureMode::Point2D: w = {rng.uniform(), rng.uniform()}; break;
        case FeatureMode::Circular: w = {rng.uniform(0.0, 2.0 * M_PI), 0.0}; break;
        }
    }
    return st;
}

double graph_distance(const SomState& state, int r, int s) {
    const int d = std::abs(r - s);
    if (state.ring_topology) return static_cast<double>(std::min(d, state.n - d));
    return static_cast<double>(d);
}

double feature_distance(FeatureMode mode, const Point2& a, const Point2& b) {
    switch (mode) {
    case FeatureMode::Scalar: return std::abs(a.x - b.x);
    case FeatureMode::Point2D: return dist(a, b);
    case FeatureMode::Circular: return std::abs(wrap_angle_diff(a.x, b.x));
    }
    return 0.0;
}

Point2 feature_diff(FeatureMode mode, const Point2& phi, const Point2& w) {
    if (mode == FeatureMode::Circular) return {wrap_angle_diff(phi.x, w.x), 0.0};
    if (mode == FeatureMode::Scalar) return {phi.x - w.x, 0.0};
    return phi - w;
}

int find_winner(const SomState& state, const Point2& phi) {
    if (state.n < 1) throw std::invalid_argument("find_winner: empty graph");
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int r = 0; r < state.n; ++r) {
        const double d = feature_distance(state.mode, state.w[static_cast<size_t>(r)], phi);
        if (d < best_d) {
            best_d = d;
            best = r;
        }
    }
    return best;
}

namespace {

double reduce_mod_2pi(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

} // namespace

SomState kohonen_step(const SomState& state, const Point2& phi, const NeighborhoodFn& h) {
    const int s = find_winner(state, phi);
    SomState next = state;
    for (int r = 0; r < state.n; ++r) {
        const double hr = h(graph_distance(state, r, s));
        if (hr == 0.0) continue;
        const Point2 d = feature_diff(state.mode, phi, state.w[static_cast<size_t>(r)]);
        next.w[static_cast<size_t>(r)] += hr * d;
        if (state.mode == FeatureMode::Circular)
            next.w[static_cast<size_t>(r)].x = reduce_mod_2pi(next.w[static_cast<size_t>(r)].x);
    }
    ++next.t;
    return next;
}

std::vector<std::vector<int>> receptive_fields(const SomState& state, const StimulusModel& stimuli) {
    std::vector<std::vector<int>> fields(static_cast<size_t>(state.n));
    for (size_t k = 0; k < stimuli.support.size(); ++k)
        fields[static_cast<size_t>(find_winner(state, stimuli.support[k]))].push_back(static_cast<int>(k));
    return fields;
}

double som_energy(const SomState& state, const StimulusModel& stimuli, const NeighborhoodFn& h) {
    const auto fields = receptive_fields(state, stimuli);
    double e = 0.0;
    for (int r = 0; r < state.n; ++r) {
        for (int s = 0; s < state.n; ++s) {
            const double hs = h(graph_distance(state, r, s));
            if (hs == 0.0) continue;
            double inner = 0.0;
            for (int k : fields[static_cast<size_t>(s)]) {
                const double d = feature_distance(state.mode, stimuli.support[static_cast<size_t>(k)],
                                                  state.w[static_cast<size_t>(r)]);
                inner += stimuli.prob[static_cast<size_t>(k)] * d * d;
            }
            e += hs * inner;
        }
    }
    return 0.5 * e;
}

std::vector<Point2> expected_update(const SomState& state, const StimulusModel& stimuli,
                                    const NeighborhoodFn& h) {
    std::vector<Point2> upd(static_cast<size_t>(state.n), Point2{});
    for (size_t k = 0; k < stimuli.support.size(); ++k) {
        const Point2& phi = stimuli.support[k];
        const int s = find_winner(state, phi);
        for (int r = 0; r < state.n; ++r) {
            const double hr = h(graph_distance(state, r, s));
            if (hr == 0.0) continue;
            upd[static_cast<size_t>(r)] +=
                stimuli.prob[k] * hr * feature_diff(state.mode, phi, state.w[static_cast<size_t>(r)]);
        }
    }
    return upd;
}

int orientation_reversals(const SomState& state) {
    if (state.mode != FeatureMode::Circular || state.n < 3) return 0;
    int pos = 0, neg = 0;
    std::vector<double> diffs(static_cast<size_t>(state.n));
    for (int r = 0; r < state.n; ++r) {
        const double d = wrap_angle_diff(state.w[static_cast<size_t>((r + 1) % state.n)].x,
                                         state.w[static_cast<size_t>(r)].x);
        diffs[static_cast<size_t>(r)] = d;
        if (d > 0.0) ++pos;
        else if (d < 0.0) ++neg;
    }
    return std::min(pos, neg);
}

SomTrainResult train_circular_ring(const SomTrainConfig& cfg) {
    if (cfg.steps < 1) throw std::invalid_argument("train_circular_ring: steps must be >= 1");
    if (!(cfg.sigma0 > 0.0 && cfg.sigma1 > 0.0))
        throw std::invalid_argument("train_circular_ring: sigma endpoints must be > 0");
    if (!(cfg.amp0 > 0.0 && cfg.amp0 <= 1.0 && cfg.amp1 > 0.0 && cfg.amp1 <= 1.0))
        throw std::invalid_argument("train_circular_ring: amplitudes must be in (0,1]");

    SomTrainResult res;
    res.state = make_som_ring(cfg.nodes, FeatureMode::Circular, cfg.seed);
    Rng stimulus_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    StimulusModel energy_support;
    for (int k = 0; k < cfg.energy_support; ++k) {
        energy_support.support.push_back({2.0 * M_PI * k / cfg.energy_support, 0.0});
        energy_support.prob.push_back(1.0 / cfg.energy_support);
    }

    for (long t = 0; t < cfg.steps; ++t) {
        const double f = cfg.steps > 1 ? static_cast<double>(t) / static_cast<double>(cfg.steps - 1) : 0.0;
        NeighborhoodFn h;
        h.shape = NeighborhoodFn::Shape::Gaussian;
        h.width = cfg.sigma0 * std::pow(cfg.sigma1 / cfg.sigma0, f);
        h.amplitude = cfg.amp0 * std::pow(cfg.amp1 / cfg.amp0, f);
        const Point2 phi{stimulus_rng.uniform(0.0, 2.0 * M_PI), 0.0};
        res.state = kohonen_step(res.state, phi, h);
        if (t % cfg.trace_every == 0 || t == cfg.steps - 1)
            res.trace.push_back({t, som_energy(res.state, energy_support, h), h.width});
    }
    return res;
}

std::string som_trace_to_csv(const std::vector<SomTrainRecord>& trace) {
    std::ostringstream out;
    out << "step,energy,sigma\n";
    char buf[96];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof(buf), "%ld,%.9g,%.9g\n", r.step, r.energy, r.sigma);
        out << buf;
    }
    return out.str();
}

std::string som_map_to_json(const SomState& state) {
    std::ostringstream out;
    char buf[96];
    out << "{";
    for (int r = 0; r < state.n; ++r) {
        if (r) out << ", ";
        const Point2& w = state.w[static_cast<size_t>(r)];
        if (state.mode == FeatureMode::Point2D)
            std::snprintf(buf, sizeof(buf), "\"%d\": [%.9g, %.9g]", r, w.x, w.y);
        else
            std::snprintf(buf, sizeof(buf), "\"%d\": %.9g", r, w.x);
        out << buf;
    }
    out << "}";
    return out.str();
}

} // namespace ringfuse
