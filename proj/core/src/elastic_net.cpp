#include "ringfuse/elastic_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ringfuse/rng.hpp"

namespace ringfuse {

ElasticParams resolve_defaults(ElasticParams p, const Instance& inst) {
    const int n = inst.size();
    if (p.m_nodes == 0) p.m_nodes = static_cast<int>(std::ceil(2.5 * n));
    if (p.lambda0 == 0.0) {
        const double diag = inst.bounding_box_diagonal();
        p.lambda0 = diag > 0.0 ? 0.5 * diag / std::sqrt(static_cast<double>(n)) : 1.0;
    }
    if (p.lambda_min == 0.0) p.lambda_min = 1e-3 * p.lambda0;
    if (p.capture_tol == 0.0) p.capture_tol = p.lambda_min;
    return p;
}

void validate_params(const ElasticParams& p, const Instance& inst) {
    if (p.m_nodes < inst.size()) throw std::invalid_argument("elastic params: m_nodes must be >= N");
    if (!(p.k_tension > 0.0)) throw std::invalid_argument("elastic params: k_tension must be > 0");
    if (!(p.lambda0 > 0.0)) throw std::invalid_argument("elastic params: lambda0 must be > 0");
    if (!(p.lambda_decay > 0.0 && p.lambda_decay < 1.0))
        throw std::invalid_argument("elastic params: lambda_decay must be in (0,1)");
    if (p.steps_per_stage < 1) throw std::invalid_argument("elastic params: steps_per_stage must be >= 1");
    if (!(p.step_size > 0.0)) throw std::invalid_argument("elastic params: step_size must be > 0");
    if (!(p.lambda_min > 0.0)) throw std::invalid_argument("elastic params: lambda_min must be > 0");
    if (p.max_stages < 1) throw std::invalid_argument("elastic params: max_stages must be >= 1");
    if (!(p.capture_tol > 0.0)) throw std::invalid_argument("elastic params: capture_tol must be > 0");
}

double elastic_energy(const Instance& inst, std::span<const Point2> w, double lambda, double k_tension) {
    if (w.empty()) throw std::invalid_argument("elastic_energy: need at least one node");
    if (!(lambda > 0.0)) throw std::invalid_argument("elastic_energy: lambda must be > 0");
    const double inv2l2 = 1.0 / (2.0 * lambda * lambda);
    double attraction = 0.0;
    for (const auto& city : inst.cities) {
        const Point2 xi = city.pos();
        double mx = -std::numeric_limits<double>::infinity();
        for (const auto& wi : w) mx = std::max(mx, -dist2(xi, wi) * inv2l2);
        double s = 0.0;
        for (const auto& wi : w) s += std::exp(-dist2(xi, wi) * inv2l2 - mx);
        attraction -= lambda * lambda * (mx + std::log(s));
    }
    double tension = 0.0;
    const size_t m = w.size();
    if (m > 1)
        for (size_t i = 0; i < m; ++i) tension += dist2(w[(i + 1) % m], w[i]);
    return attraction + 0.5 * k_tension * tension;
}

std::vector<Point2> elastic_gradient(const Instance& inst, std::span<const Point2> w, double lambda,
                                     double k_tension) {
    if (w.empty()) throw std::invalid_argument("elastic_gradient: need at least one node");
    if (!(lambda > 0.0)) throw std::invalid_argument("elastic_gradient: lambda must be > 0");
    const size_t m = w.size();
    const double inv2l2 = 1.0 / (2.0 * lambda * lambda);
    std::vector<Point2> grad(m, Point2{});
    std::vector<double> weights(m);
    for (const auto& city : inst.cities) {
        const Point2 xi = city.pos();
        double mx = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
            weights[i] = -dist2(xi, w[i]) * inv2l2;
            mx = std::max(mx, weights[i]);
        }
        double s = 0.0;
        for (size_t i = 0; i < m; ++i) {
            weights[i] = std::exp(weights[i] - mx);
            s += weights[i];
        }
        const double inv_s = 1.0 / s;
        for (size_t i = 0; i < m; ++i) {
            const double lam = weights[i] * inv_s; // softmax row, sums to 1
            grad[i] -= lam * (xi - w[i]);
        }
    }
    if (m > 1) {
        for (size_t i = 0; i < m; ++i) {
            const Point2& prev = w[(i + m - 1) % m];
            const Point2& next = w[(i + 1) % m];
            grad[i] += k_tension * (2.0 * w[i] - prev - next);
        }
    }
    return grad;
}

double swept_area_increment(std::span<const Point2> w_prev, std::span<const Point2> w_next) {
    if (w_prev.size() != w_next.size())
        throw std::invalid_argument("swept_area_increment: mismatched node counts");
    const size_t m = w_prev.size();
    if (m < 2) return 0.0;
    // A 2-node ring has one geometric segment; count it once.
    const size_t edges = m > 2 ? m : 1;
    double area = 0.0;
    for (size_t i = 0; i < edges; ++i) {
        const size_t j = (i + 1) % m;
        area += triangle_area(w_prev[i], w_prev[j], w_next[j]);
        area += triangle_area(w_prev[i], w_next[j], w_next[i]);
    }
    return area;
}

double max_capture_distance(const Instance& inst, std::span<const Point2> w) {
    double worst = 0.0;
    for (const auto& city : inst.cities) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& wi : w) best = std::min(best, dist(city.pos(), wi));
        worst = std::max(worst, best);
    }
    return worst;
}

Tour extract_tour(const Instance& inst, const RingState& ring) {
    const int n = inst.size();
    const size_t m = ring.w.size();
    if (static_cast<int>(m) < n) throw std::invalid_argument("extract_tour: ring smaller than instance");

    struct Key {
        size_t node;
        double proj;
        int city;
    };
    std::vector<Key> keys;
    keys.reserve(static_cast<size_t>(n));
    for (const auto& city : inst.cities) {
        size_t best_node = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
            const double d = dist2(city.pos(), ring.w[i]);
            if (d < best_d) { // strict: ties keep the lower node index
                best_d = d;
                best_node = i;
            }
        }
        const Point2 edge = ring.w[(best_node + 1) % m] - ring.w[best_node];
        const double proj = dot(city.pos() - ring.w[best_node], edge);
        keys.push_back(Key{best_node, proj, city.id});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.node != b.node) return a.node < b.node;
        if (a.proj != b.proj) return a.proj < b.proj;
        return a.city < b.city;
    });
    std::vector<int> order;
    order.reserve(static_cast<size_t>(n));
    for (const auto& k : keys) order.push_back(k.city);
    return make_tour(inst, std::move(order));
}

SolveTrace anneal_solve(const Instance& inst, const ElasticParams& params, std::uint64_t seed,
                        const StageCallback& on_stage) {
    const ElasticParams p = resolve_defaults(params, inst);
    validate_params(p, inst);

    Rng rng(seed);
    RingState ring;
    ring.lambda = p.lambda0;
    ring.w.resize(static_cast<size_t>(p.m_nodes));
    const Point2 center = inst.centroid();
    const double radius = 0.1 * inst.bounding_box_diagonal();
    const double jitter = radius; // restart diversity comes from the seeded jitter
    for (int i = 0; i < p.m_nodes; ++i) {
        const double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(p.m_nodes);
        ring.w[static_cast<size_t>(i)] = {center.x + radius * std::cos(angle) + rng.uniform(-jitter, jitter),
                                          center.y + radius * std::sin(angle) + rng.uniform(-jitter, jitter)};
    }

    SolveTrace trace;
    trace.seed = seed;
    bool captured = false;
    std::vector<Point2> next(ring.w.size());
    for (int stage = 1; stage <= p.max_stages; ++stage) {
        for (int step = 0; step < p.steps_per_stage; ++step) {
            const auto grad = elastic_gradient(inst, ring.w, ring.lambda, p.k_tension);
            for (size_t i = 0; i < ring.w.size(); ++i) next[i] = ring.w[i] - p.step_size * grad[i];
            ring.swept_area += swept_area_increment(ring.w, next);
            ring.w.swap(next);
            ++ring.iteration;
        }
        StageRecord rec;
        rec.stage = stage;
        rec.lambda = ring.lambda;
        rec.energy = elastic_energy(inst, ring.w, ring.lambda, p.k_tension);
        rec.swept_area = ring.swept_area;
        rec.max_capture_dist = max_capture_distance(inst, ring.w);
        trace.stages.push_back(rec);
        if (on_stage) on_stage(rec, ring);

        captured = rec.max_capture_dist <= p.capture_tol;
        if (captured || ring.lambda <= p.lambda_min) break;
        ring.lambda *= p.lambda_decay;
    }

    trace.converged = captured || trace.stages.back().lambda <= p.lambda_min;
    trace.swept_area = ring.swept_area;
    trace.tour = extract_tour(inst, ring);
    return trace;
}

std::string trace_to_csv(const SolveTrace& trace) {
    std::ostringstream out;
    out << "stage,lambda,energy,swept_area,max_capture_dist\n";
    char buf[160];
    for (const auto& r : trace.stages) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g\n", r.stage, r.lambda, r.energy,
                      r.swept_area, r.max_capture_dist);
        out << buf;
    }
    return out.str();
}

std::string ring_to_svg(const Instance& inst, const RingState& ring) {
    double xmin = inst.cities[0].x, xmax = xmin, ymin = inst.cities[0].y, ymax = ymin;
    for (const auto& c : inst.cities) {
        xmin = std::min(xmin, c.x);
        xmax = std::max(xmax, c.x);
        ymin = std::min(ymin, c.y);
        ymax = std::max(ymax, c.y);
    }
    for (const auto& w : ring.w) {
        xmin = std::min(xmin, w.x);
        xmax = std::max(xmax, w.x);
        ymin = std::min(ymin, w.y);
        ymax = std::max(ymax, w.y);
    }
    const double span = std::max(std::max(xmax - xmin, ymax - ymin), 1e-9);
    const double pad = 0.05 * span;
    const double scale = 500.0 / (span + 2.0 * pad);
    auto sx = [&](double x) { return (x - xmin + pad) * scale; };
    auto sy = [&](double y) { return 500.0 - (y - ymin + pad) * scale; };

    std::ostringstream out;
    out.precision(9);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\">\n";
    out << "<polygon fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (size_t i = 0; i < ring.w.size(); ++i) {
        if (i) out << " ";
        out << sx(ring.w[i].x) << "," << sy(ring.w[i].y);
    }
    out << "\"/>\n";
    for (const auto& c : inst.cities)
        out << "<circle cx=\"" << sx(c.x) << "\" cy=\"" << sy(c.y) << "\" r=\"3\" fill=\"crimson\"/>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace ringfuse
