#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ringfuse/mdl.hpp"
#include "ringfuse/rng.hpp"

using namespace ringfuse;

TEST_CASE("bayes_posterior: forced values") {
    ClassModel uniform{{0.25, 0.25, 0.25, 0.25}, {0.7, 0.7, 0.7, 0.7}};
    for (double p : bayes_posterior(uniform)) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

    ClassModel two{{0.3, 0.7}, {0.5, 0.1}};
    const auto post = bayes_posterior(two);
    CHECK(post[0] == doctest::Approx(15.0 / 22.0).epsilon(1e-12));
    CHECK(post[1] == doctest::Approx(7.0 / 22.0).epsilon(1e-12));

    ClassModel onehot{{0.5, 0.5}, {0.0, 0.9}};
    const auto oh = bayes_posterior(onehot);
    CHECK(oh[0] == 0.0);
    CHECK(oh[1] == 1.0);
}

TEST_CASE("bayes_posterior: scale invariance and zero evidence") {
    ClassModel m{{0.2, 0.3, 0.5}, {0.4, 0.05, 0.2}};
    const auto base = bayes_posterior(m);
    ClassModel scaled = m;
    for (auto& l : scaled.likelihoods) l *= 1234.5;
    const auto post = bayes_posterior(scaled);
    for (size_t i = 0; i < post.size(); ++i) CHECK(post[i] == doctest::Approx(base[i]).epsilon(1e-12));

    ClassModel dead{{0.5, 0.5}, {0.0, 0.0}};
    CHECK_THROWS_AS(bayes_posterior(dead), AllZeroEvidence);
}

TEST_CASE("boltzmann_distribution: forced values and stability") {
    const auto eq = boltzmann_distribution({7.0, 7.0, 7.0});
    for (double p : eq) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto p123 = boltzmann_distribution({1.0, 2.0, 3.0});
    CHECK(p123[0] == doctest::Approx(0.6652409557748219).epsilon(1e-12));
    CHECK(p123[1] == doctest::Approx(0.24472847105479767).epsilon(1e-12));
    CHECK(p123[2] == doctest::Approx(0.09003057317038046).epsilon(1e-12));

    const auto extreme = boltzmann_distribution({0.0, 1000.0});
    CHECK(extreme[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(extreme[1] <= 1e-300);
    CHECK(std::isfinite(extreme[1]));
}

TEST_CASE("boltzmann_distribution: invariant under a common cost shift") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> costs;
        const size_t n = 1 + rng.uniform_index(8);
        for (size_t i = 0; i < n; ++i) costs.push_back(rng.uniform(-5.0, 5.0));
        const double shift = rng.uniform(-100.0, 100.0);
        auto shifted = costs;
        for (auto& c : shifted) c += shift;
        const auto a = boltzmann_distribution(costs);
        const auto b = boltzmann_distribution(shifted);
        double sum = 0.0;
        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(a[i] - b[i]) <= 1e-12);
            sum += a[i];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("free_energy: forced values") {
    CHECK(free_energy({1.0}, {2.71828}) == doctest::Approx(2.71828).epsilon(1e-12));

    const std::vector<double> costs{1.0, 2.0};
    const auto boltz = boltzmann_distribution(costs);
    CHECK(free_energy(boltz, costs) == doctest::Approx(0.6867383124817771).epsilon(1e-12));
    CHECK(free_energy({0.9, 0.1}, costs) == doctest::Approx(0.7749170266085518).epsilon(1e-12));
    CHECK(free_energy({0.9, 0.1}, costs) > free_energy(boltz, costs));
}

TEST_CASE("free_energy: identity with the log partition sum") {
    Rng rng(707);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> costs;
        const size_t n = 1 + rng.uniform_index(10);
        for (size_t i = 0; i < n; ++i) costs.push_back(rng.uniform(-3.0, 6.0));
        double z = 0.0;
        for (double c : costs) z += std::exp(-c);
        CHECK(std::abs(free_energy(boltzmann_distribution(costs), costs) + std::log(z)) <= 1e-12);
    }
}

TEST_CASE("free_energy: input validation") {
    CHECK_THROWS_AS(free_energy({0.5, 0.5}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(free_energy({0.7, 0.7}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("explanation_weight") {
    MdlConfig cfg;
    cfg.a0 = 2.0;
    CHECK(explanation_weight(0.0, cfg) == 1.0);
    CHECK(explanation_weight(2.0, cfg) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(explanation_weight(6.0, cfg) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(explanation_weight(-1.0, cfg), std::invalid_argument);
}

namespace {

SolveTrace fake_trace(const Instance& inst, std::vector<int> order, double swept, std::uint64_t seed) {
    SolveTrace t;
    t.tour = make_tour(inst, std::move(order));
    t.swept_area = swept;
    t.seed = seed;
    t.converged = true;
    return t;
}

} // namespace

TEST_CASE("ensemble_from_runs: single run and rotation merging") {
    const auto sq = fixtures::unit_square();
    const auto one = ensemble_from_runs({fake_trace(sq, {0, 1, 2, 3}, 0.5, 1)}, MdlConfig{});
    REQUIRE(one.posterior.size() == 1);
    CHECK(one.posterior[0] == 1.0);

    // same tour rotated and reversed collapses to one explanation with min cost
    const auto merged = ensemble_from_runs({fake_trace(sq, {0, 1, 2, 3}, 0.5, 1),
                                            fake_trace(sq, {2, 3, 0, 1}, 0.8, 2),
                                            fake_trace(sq, {3, 2, 1, 0}, 0.3, 3)},
                                           MdlConfig{});
    REQUIRE(merged.labels.size() == 1);
    CHECK(merged.costs[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(merged.posterior[0] == 1.0);
}

TEST_CASE("ensemble_from_runs: cost modes and posterior normalization") {
    const auto sq = fixtures::unit_square();
    const auto t1 = fake_trace(sq, {0, 1, 2, 3}, 0.4, 1);  // length 4
    const auto t2 = fake_trace(sq, {0, 2, 1, 3}, 0.9, 2);  // crossing tour, longer
    MdlConfig area_cfg;
    area_cfg.a0 = 0.5;
    const auto by_area = ensemble_from_runs({t1, t2}, area_cfg);
    REQUIRE(by_area.labels.size() == 2);
    double sum = 0.0;
    for (double p : by_area.posterior) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(by_area.costs[0] == doctest::Approx(0.4 / 0.5).epsilon(1e-12));

    MdlConfig len_cfg;
    len_cfg.cost_mode = CostMode::TourLength;
    len_cfg.k_tension = 2.0;
    const auto by_len = ensemble_from_runs({t1, t2}, len_cfg);
    // cost = (K/2) * length
    CHECK(by_len.costs[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(free_energy(by_len.posterior, by_len.costs) == doctest::Approx(by_len.free_energy).epsilon(1e-12));
}

TEST_CASE("ensemble JSON shape") {
    const auto sq = fixtures::unit_square();
    const auto ens = ensemble_from_runs({fake_trace(sq, {0, 1, 2, 3}, 0.5, 1)}, MdlConfig{});
    const std::string json = ensemble_to_json(ens);
    CHECK(json.find("\"canonical_order\": [0, 1, 2, 3]") != std::string::npos);
    CHECK(json.find("\"cost_mode\": \"swept_area\"") != std::string::npos);
    CHECK(json.find("\"a0\": 1") != std::string::npos);
}
