#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ringfuse/elastic_net.hpp"

namespace ringfuse {

/// Finite class model: priors p(alpha) and evaluated likelihoods p(x|alpha).
struct ClassModel {
    std::vector<double> priors;
    std::vector<double> likelihoods;
};

enum class CostMode { SweptArea, TourLength };

struct MdlConfig {
    double a0 = 1.0;            // elementary area (length^2)
    CostMode cost_mode = CostMode::SweptArea;
    double k_tension = 1.0;     // used by the tour-length cost (K/2 * length)
};

/// Costs are in nats throughout; divide by ln 2 for bits.
struct ExplanationEnsemble {
    std::vector<std::vector<int>> labels; // canonical tour orders
    std::vector<double> costs;            // E_alpha, nats
    std::vector<double> posterior;        // P(alpha|x)
    double free_energy = 0.0;
    CostMode cost_mode = CostMode::SweptArea;
    double a0 = 1.0;
};

class AllZeroEvidence : public std::runtime_error {
public:
    AllZeroEvidence() : std::runtime_error("bayes_posterior: every prior*likelihood product is zero") {}
};

/// P(alpha|x) = p(alpha) p(x|alpha) / sum_beta p(beta) p(x|beta).
std::vector<double> bayes_posterior(const ClassModel& model);

/// P_alpha = exp(-E_alpha) / sum exp(-E_beta), max-subtracted.
std::vector<double> boltzmann_distribution(const std::vector<double>& costs);

/// F = sum P_alpha E_alpha + sum P_alpha log P_alpha (0 log 0 := 0).
double free_energy(const std::vector<double>& probabilities, const std::vector<double>& costs);

/// exp(-area / a0); the matching cost is area / a0 nats.
double explanation_weight(double area, const MdlConfig& cfg);

/// Groups traces by canonical tour, assigns each group its minimum cost,
/// and places a Boltzmann posterior over the groups.
ExplanationEnsemble ensemble_from_runs(const std::vector<SolveTrace>& traces, const MdlConfig& cfg);

/// {explanations: [{canonical_order, cost, posterior}], free_energy, cost_mode, a0}
std::string ensemble_to_json(const ExplanationEnsemble& ens);

} // namespace ringfuse
