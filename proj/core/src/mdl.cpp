#include "ringfuse/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "ringfuse/oracle.hpp"

namespace ringfuse {

std::vector<double> bayes_posterior(const ClassModel& model) {
    if (model.priors.size() != model.likelihoods.size())
        throw std::invalid_argument("bayes_posterior: priors/likelihoods length mismatch");
    if (model.priors.empty()) throw std::invalid_argument("bayes_posterior: empty model");
    double total = 0.0;
    std::vector<double> post(model.priors.size());
    for (size_t i = 0; i < post.size(); ++i) {
        if (model.priors[i] < 0.0 || model.likelihoods[i] < 0.0)
            throw std::invalid_argument("bayes_posterior: negative prior or likelihood");
        post[i] = model.priors[i] * model.likelihoods[i];
        total += post[i];
    }
    if (total == 0.0) throw AllZeroEvidence();
    for (auto& p : post) p /= total;
    return post;
}

std::vector<double> boltzmann_distribution(const std::vector<double>& costs) {
    if (costs.empty()) throw std::invalid_argument("boltzmann_distribution: empty cost list");
    double mn = std::numeric_limits<double>::infinity();
    for (double c : costs) {
        if (!std::isfinite(c)) throw std::invalid_argument("boltzmann_distribution: non-finite cost");
        mn = std::min(mn, c);
    }
    std::vector<double> p(costs.size());
    double total = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(mn - costs[i]);
        total += p[i];
    }
    for (auto& v : p) v /= total;
    return p;
}

double free_energy(const std::vector<double>& probabilities, const std::vector<double>& costs) {
    if (probabilities.size() != costs.size())
        throw std::invalid_argument("free_energy: length mismatch");
    if (probabilities.empty()) throw std::invalid_argument("free_energy: empty input");
    double sum_p = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw std::invalid_argument("free_energy: negative probability");
        sum_p += p;
    }
    if (std::abs(sum_p - 1.0) > 1e-9) throw std::invalid_argument("free_energy: probabilities must sum to 1");
    double f = 0.0;
    for (size_t i = 0; i < costs.size(); ++i) {
        const double p = probabilities[i];
        if (p > 0.0) f += p * costs[i] + p * std::log(p);
    }
    return f;
}

double explanation_weight(double area, const MdlConfig& cfg) {
    if (area < 0.0) throw std::invalid_argument("explanation_weight: area must be >= 0");
    if (!(cfg.a0 > 0.0)) throw std::invalid_argument("explanation_weight: a0 must be > 0");
    return std::exp(-area / cfg.a0);
}

ExplanationEnsemble ensemble_from_runs(const std::vector<SolveTrace>& traces, const MdlConfig& cfg) {
    if (traces.empty()) throw std::invalid_argument("ensemble_from_runs: empty trace list");
    if (!(cfg.a0 > 0.0)) throw std::invalid_argument("ensemble_from_runs: a0 must be > 0");

    // Canonical order identifies a tour up to rotation and reversal.
    std::map<std::vector<int>, double> best_cost;
    for (const auto& trace : traces) {
        const auto label = canonical_order(trace.tour.order);
        const double cost = cfg.cost_mode == CostMode::SweptArea
                                ? trace.swept_area / cfg.a0
                                : 0.5 * cfg.k_tension * trace.tour.length;
        auto [it, inserted] = best_cost.emplace(label, cost);
        if (!inserted) it->second = std::min(it->second, cost);
    }

    ExplanationEnsemble ens;
    ens.cost_mode = cfg.cost_mode;
    ens.a0 = cfg.a0;
    for (const auto& [label, cost] : best_cost) {
        ens.labels.push_back(label);
        ens.costs.push_back(cost);
    }
    ens.posterior = boltzmann_distribution(ens.costs);
    ens.free_energy = free_energy(ens.posterior, ens.costs);
    return ens;
}

std::string ensemble_to_json(const ExplanationEnsemble& ens) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return std::string(buf);
    };
    out << "{\"explanations\": [";
    for (size_t i = 0; i < ens.labels.size(); ++i) {
        if (i) out << ", ";
        out << "{\"canonical_order\": [";
        for (size_t j = 0; j < ens.labels[i].size(); ++j) {
            if (j) out << ", ";
            out << ens.labels[i][j];
        }
        out << "], \"cost\": " << num(ens.costs[i]) << ", \"posterior\": " << num(ens.posterior[i]) << "}";
    }
    out << "], \"free_energy\": " << num(ens.free_energy) << ", \"cost_mode\": \""
        << (ens.cost_mode == CostMode::SweptArea ? "swept_area" : "tour_length") << "\", \"a0\": " << num(ens.a0)
        << "}";
    return out.str();
}

} // namespace ringfuse
