// ringfuse CLI: instance generation, elastic-ring solving, exact oracles,
// SOM demos, lattice partition-function checks, and benchmark tables.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringfuse/elastic_net.hpp"
#include "ringfuse/instance.hpp"
#include "ringfuse/lattice.hpp"
#include "ringfuse/mdl.hpp"
#include "ringfuse/oracle.hpp"
#include "ringfuse/som.hpp"

namespace fs = std::filesystem;
using namespace ringfuse;

namespace {

struct GlobalOpts {
    std::string out_dir = ".";
    int threads = 1;
    bool quiet = false;
};

std::string fmt9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void say(const GlobalOpts& g, const std::string& msg) {
    if (!g.quiet) std::cout << msg << "\n";
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; results are
// collected in index order so output never depends on scheduling.
template <typename Fn>
auto run_indexed(int count, int threads, Fn fn) {
    using R = decltype(fn(0));
    std::vector<R> results(static_cast<size_t>(count));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) results[static_cast<size_t>(i)] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            results[static_cast<size_t>(i)] = fn(i);
        }
    };
    std::vector<std::future<void>> futs;
    for (int t = 0; t < std::min(threads, count); ++t)
        futs.push_back(std::async(std::launch::async, worker));
    for (auto& f : futs) f.get();
    return results;
}

struct SolveFlags {
    ElasticParams params;
    std::vector<std::uint64_t> seeds{1};
    double a0 = 1.0;
    std::string cost_mode = "swept_area";
    bool snapshots = false;
};

void add_elastic_flags(CLI::App* cmd, ElasticParams& p) {
    cmd->add_option("--m-nodes", p.m_nodes, "ring nodes (0: ceil(2.5N))");
    cmd->add_option("--k-tension", p.k_tension, "tension constant K")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda0", p.lambda0, "initial range (0: auto)");
    cmd->add_option("--lambda-decay", p.lambda_decay, "per-stage decay rho")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--steps-per-stage", p.steps_per_stage)->check(CLI::PositiveNumber);
    cmd->add_option("--step-size", p.step_size, "gradient step eta")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda-min", p.lambda_min, "stopping range (0: 1e-3 lambda0)");
    cmd->add_option("--max-stages", p.max_stages)->check(CLI::PositiveNumber);
    cmd->add_option("--capture-tol", p.capture_tol, "capture distance (0: lambda_min)");
}

int do_solve(const GlobalOpts& g, const std::string& instance_path, const SolveFlags& flags) {
    const Instance inst = parse_instance_file(instance_path);
    fs::create_directories(g.out_dir);

    std::vector<std::uint64_t> seeds = flags.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    const ElasticParams resolved = resolve_defaults(flags.params, inst);
    // Snapshot stride keeps at most 200 frames per run.
    const int expected_stages =
        std::min(resolved.max_stages,
                 static_cast<int>(std::ceil(std::log(resolved.lambda_min / resolved.lambda0) /
                                            std::log(resolved.lambda_decay))) +
                     1);
    const int stride = std::max(1, (expected_stages + 199) / 200);

    auto traces = run_indexed(static_cast<int>(seeds.size()), g.threads, [&](int i) {
        const std::uint64_t seed = seeds[static_cast<size_t>(i)];
        std::ostringstream svg_batch;
        StageCallback cb = nullptr;
        std::vector<std::pair<int, std::string>> frames;
        if (flags.snapshots) {
            cb = [&](const StageRecord& rec, const RingState& ring) {
                if ((rec.stage - 1) % stride == 0 && frames.size() < 200)
                    frames.emplace_back(rec.stage, ring_to_svg(inst, ring));
            };
        }
        SolveTrace trace = anneal_solve(inst, flags.params, seed, cb);
        for (const auto& [stage, svg] : frames) {
            char name[96];
            std::snprintf(name, sizeof(name), "snapshot_seed%llu_stage%05d.svg",
                          static_cast<unsigned long long>(seed), stage);
            write_file(fs::path(g.out_dir) / name, svg);
        }
        return trace;
    });

    int converged = 0;
    for (const auto& trace : traces) {
        char name[64];
        std::snprintf(name, sizeof(name), "trace_seed%llu.csv",
                      static_cast<unsigned long long>(trace.seed));
        write_file(fs::path(g.out_dir) / name, trace_to_csv(trace));
        if (trace.converged) ++converged;
        else say(g, "seed " + std::to_string(trace.seed) + ": NonConvergence (max stages reached)");
    }

    MdlConfig cfg;
    cfg.a0 = flags.a0;
    cfg.k_tension = resolved.k_tension;
    if (flags.cost_mode == "swept_area") cfg.cost_mode = CostMode::SweptArea;
    else if (flags.cost_mode == "tour_length") cfg.cost_mode = CostMode::TourLength;
    else throw CLI::ValidationError("--cost-mode", "must be swept_area or tour_length");
    const auto ensemble = ensemble_from_runs(traces, cfg);
    write_file(fs::path(g.out_dir) / "ensemble.json", ensemble_to_json(ensemble));

    const auto best = std::min_element(traces.begin(), traces.end(), [](const auto& a, const auto& b) {
        return a.tour.length < b.tour.length;
    });
    std::ostringstream msg;
    msg << "best tour (seed " << best->seed << "): length " << fmt9(best->tour.length) << ", order [";
    for (size_t i = 0; i < best->tour.order.size(); ++i)
        msg << (i ? " " : "") << best->tour.order[i];
    msg << "]\nfree energy: " << fmt9(ensemble.free_energy);
    say(g, msg.str());
    return converged > 0 ? 0 : 1;
}

int do_bench(const GlobalOpts& g, const std::vector<int>& sizes, int instances_per_size, int seeds,
             std::uint64_t seed_base, const ElasticParams& params) {
    fs::create_directories(g.out_dir);
    std::ostringstream csv;
    csv << "N,seed,elastic_length,optimal_length,ratio,swept_area,wall_ms\n";
    double ratio_sum = 0.0, ratio_max = 0.0;
    int rows = 0;
    for (int n : sizes) {
        if (n > 15) throw CLI::ValidationError("--sizes", "sizes must be <= 15 (oracle cap)");
        for (int k = 0; k < instances_per_size; ++k) {
            const std::uint64_t iseed = seed_base + static_cast<std::uint64_t>(k) * 1000 +
                                        static_cast<std::uint64_t>(n);
            const Instance inst = generate_instance(n, iseed, 1.0);
            const OracleResult opt = solve_held_karp(inst);
            const auto t0 = std::chrono::steady_clock::now();
            auto traces = run_indexed(seeds, g.threads, [&](int i) {
                return anneal_solve(inst, params, static_cast<std::uint64_t>(i + 1));
            });
            const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            const auto best = std::min_element(traces.begin(), traces.end(), [](const auto& a, const auto& b) {
                return a.tour.length < b.tour.length;
            });
            const double ratio = best->tour.length / opt.optimal_length;
            ratio_sum += ratio;
            ratio_max = std::max(ratio_max, ratio);
            ++rows;
            csv << n << "," << iseed << "," << fmt9(best->tour.length) << ","
                << fmt9(opt.optimal_length) << "," << fmt9(ratio) << "," << fmt9(best->swept_area)
                << "," << wall_ms << "\n";
        }
    }
    csv << "summary,,,," << fmt9(ratio_sum / rows) << ",max_ratio," << fmt9(ratio_max) << "\n";
    write_file(fs::path(g.out_dir) / "bench.csv", csv.str());
    say(g, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elastic-ring TSP solver with MDL ensemble scoring"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);

    GlobalOpts g;
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for multi-seed runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a uniform random instance");
    int gen_n = 0;
    std::uint64_t gen_seed = 1;
    double gen_box = 1.0;
    std::string gen_out = "instance.tsp";
    gen->add_option("--n", gen_n, "city count")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--box", gen_box, "box side length")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--out", gen_out, "output file name (relative to --out-dir)")->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "run the annealed elastic-ring solver");
    std::string solve_instance;
    SolveFlags sf;
    solve->add_option("instance", solve_instance, "TSPLIB instance file")->required();
    solve->add_option("--seeds", sf.seeds, "solver seeds")->delimiter(',')->capture_default_str();
    solve->add_option("--a0", sf.a0, "elementary area A0")->check(CLI::PositiveNumber)->capture_default_str();
    solve->add_option("--cost-mode", sf.cost_mode, "swept_area | tour_length")->capture_default_str();
    solve->add_flag("--snapshots", sf.snapshots, "write per-stage ring SVGs");
    add_elastic_flags(solve, sf.params);

    // oracle
    auto* orc = app.add_subcommand("oracle", "exact small-instance solve");
    std::string orc_instance, orc_method = "held-karp", orc_out;
    orc->add_option("instance", orc_instance)->required();
    orc->add_option("--method", orc_method, "held-karp | enumeration")->capture_default_str();
    orc->add_option("--out", orc_out, "also write JSON here (relative to --out-dir)");

    // bench
    auto* bench = app.add_subcommand("bench", "elastic vs oracle benchmark table");
    std::vector<int> bench_sizes;
    int bench_instances = 20, bench_seeds = 20;
    std::uint64_t bench_seed_base = 0;
    ElasticParams bench_params;
    bench->add_option("--sizes", bench_sizes, "instance sizes")->delimiter(',')->required()
        ->check(CLI::PositiveNumber);
    bench->add_option("--instances-per-size", bench_instances)->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--seeds", bench_seeds, "solver seeds per instance")->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--seed-base", bench_seed_base)->capture_default_str();
    add_elastic_flags(bench, bench_params);

    // som-demo
    auto* som = app.add_subcommand("som-demo", "train a circular SOM ring");
    SomTrainConfig som_cfg;
    som->add_option("--nodes", som_cfg.nodes)->check(CLI::PositiveNumber)->capture_default_str();
    som->add_option("--steps", som_cfg.steps)->check(CLI::PositiveNumber)->capture_default_str();
    som->add_option("--sigma0", som_cfg.sigma0)->check(CLI::PositiveNumber)->capture_default_str();
    som->add_option("--sigma1", som_cfg.sigma1)->check(CLI::PositiveNumber)->capture_default_str();
    som->add_option("--amp0", som_cfg.amp0)->check(CLI::Range(1e-9, 1.0))->capture_default_str();
    som->add_option("--amp1", som_cfg.amp1)->check(CLI::Range(1e-9, 1.0))->capture_default_str();
    som->add_option("--seed", som_cfg.seed)->capture_default_str();
    som->add_option("--trace-every", som_cfg.trace_every)->check(CLI::PositiveNumber)->capture_default_str();

    // lattice-check
    auto* lat = app.add_subcommand("lattice-check", "exact vs Monte Carlo log partition function");
    std::string lat_graph;
    long lat_samples = 100000;
    std::uint64_t lat_seed = 1;
    lat->add_option("graph", lat_graph, "edge-list graph file")->required();
    lat->add_option("--samples", lat_samples)->check(CLI::Range(1000L, 1000000000L))->capture_default_str();
    lat->add_option("--seed", lat_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            const Instance inst = generate_instance(gen_n, gen_seed, gen_box);
            fs::create_directories(g.out_dir);
            const fs::path path = fs::path(g.out_dir) / gen_out;
            write_file(path, serialize_instance(inst));
            std::cout << path.string() << "\n";
        } else if (solve->parsed()) {
            if (sf.seeds.empty()) throw CLI::ValidationError("--seeds", "at least one seed required");
            return do_solve(g, solve_instance, sf);
        } else if (orc->parsed()) {
            const Instance inst = parse_instance_file(orc_instance);
            OracleResult res;
            if (orc_method == "held-karp") res = solve_held_karp(inst);
            else if (orc_method == "enumeration") res = solve_enumeration(inst);
            else throw CLI::ValidationError("--method", "must be held-karp or enumeration");
            const std::string json = oracle_to_json(inst, res);
            std::cout << json << "\n";
            if (!orc_out.empty()) {
                fs::create_directories(g.out_dir);
                write_file(fs::path(g.out_dir) / orc_out, json);
            }
        } else if (bench->parsed()) {
            return do_bench(g, bench_sizes, bench_instances, bench_seeds, bench_seed_base, bench_params);
        } else if (som->parsed()) {
            const auto result = train_circular_ring(som_cfg);
            fs::create_directories(g.out_dir);
            write_file(fs::path(g.out_dir) / "som_trace.csv", som_trace_to_csv(result.trace));
            write_file(fs::path(g.out_dir) / "som_map.json", som_map_to_json(result.state));
            say(g, "final map reversals: " + std::to_string(orientation_reversals(result.state)));
        } else if (lat->parsed()) {
            const LatticeGraph graph = parse_lattice_graph_file(lat_graph);
            const McEstimate mc = log_partition_mc(graph, lat_samples, lat_seed);
            std::ostringstream json;
            if (graph.domain == FieldDomain::Real)
                json << "{\"logZ_exact\": " << fmt9(log_partition_exact(graph));
            else
                json << "{\"logZ_exact\": null";
            json << ", \"logZ_mc\": " << fmt9(mc.log_z) << ", \"stderr\": " << fmt9(mc.std_error) << "}";
            std::cout << json.str() << "\n";
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
