#include "pathinf/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "pathinf/errors.hpp"
#include "pathinf/parallel.hpp"
#include "pathinf/rng.hpp"

namespace pathinf {

PipelineResult run_pipeline(const ObservationMatrix& obs, const PipelineOptions& opts) {
    PipelineResult result;
    result.dist = fit(obs, opts.prior, opts.solver);
    result.state_matrix = prune(result.dist, opts.prune_eps);
    auto inference = greedy_infer(result.state_matrix, obs.labels);
    result.graph = std::move(inference.graph);
    result.trace = std::move(inference.trace);
    return result;
}

GraphDiff diff(const PathGraph& inferred, const GroundTruthDag& truth) {
    if (inferred.n_vars != truth.n_nodes) {
        throw DimensionError("inferred graph has " + std::to_string(inferred.n_vars) +
                             " nodes, truth has " + std::to_string(truth.n_nodes));
    }
    const auto skeleton_vec = truth.skeleton();
    if (skeleton_vec.empty()) {
        throw ConfigError("truth graph has no edges, rates are undefined");
    }
    const std::set<std::pair<int, int>> skeleton(skeleton_vec.begin(), skeleton_vec.end());

    GraphDiff d;
    d.true_edges = static_cast<int>(skeleton.size());
    for (const auto& e : inferred.edges) {
        if (skeleton.count(e)) ++d.recovered;
        else ++d.false_pos;
    }
    d.false_neg = d.true_edges - d.recovered;
    d.fp_rate = static_cast<double>(d.false_pos) / d.true_edges;
    d.fn_rate = static_cast<double>(d.false_neg) / d.true_edges;
    return d;
}

StabilityReport cross_validate(const ObservationMatrix& obs, double fraction,
                               int repeats, const PipelineOptions& opts,
                               std::uint64_t seed, unsigned threads) {
    obs.validate();
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("subsample fraction must lie in (0, 1], got " +
                          std::to_string(fraction));
    }
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    const std::size_t m = obs.n_rows();
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m)));
    if (k < 1) throw ConfigError("subsample would contain no rows");

    StabilityReport report;
    report.fraction = fraction;
    report.repeats = repeats;

    const PathGraph full_graph = run_pipeline(obs, opts).graph;
    report.full_edges.assign(full_graph.edges.begin(), full_graph.edges.end());

    std::vector<std::set<std::pair<int, int>>> run_edges(repeats);
    PipelineOptions run_opts = opts;
    run_opts.solver.threads = 1;  // runs are the parallel unit
    parallel_for_index(static_cast<std::size_t>(repeats), threads, [&](std::size_t r) {
        Rng rng = make_rng(seed, SeedStream::Subsample, r);
        std::vector<std::size_t> index(m);
        std::iota(index.begin(), index.end(), std::size_t{0});
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, m - 1);
            std::swap(index[i], index[pick(rng)]);
        }
        index.resize(k);
        std::sort(index.begin(), index.end());

        ObservationMatrix sub;
        sub.labels = obs.labels;
        sub.rows.reserve(k);
        for (const std::size_t i : index) sub.rows.push_back(obs.rows[i]);
        run_edges[r] = run_pipeline(sub, run_opts).graph.edges;
    });

    std::map<std::pair<int, int>, int> counts;
    for (const auto& edges : run_edges) {
        for (const auto& e : edges) ++counts[e];
    }
    for (const auto& e : report.full_edges) counts.emplace(e, 0);

    report.entries.reserve(counts.size());
    for (const auto& [edge, count] : counts) {
        EdgeFrequency f;
        f.a = edge.first;
        f.b = edge.second;
        f.frequency = static_cast<double>(count) / repeats;
        f.in_full_graph = full_graph.edges.count(edge) > 0;
        report.entries.push_back(f);
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const EdgeFrequency& x, const EdgeFrequency& y) {
                  if (x.frequency != y.frequency) return x.frequency > y.frequency;
                  return std::tie(x.a, x.b) < std::tie(y.a, y.b);
              });
    return report;
}

std::vector<SweepCell> sweep(const std::vector<SimulationConfig>& grid, int repeats,
                             std::uint64_t seed, const SolverOptions& solver,
                             double prune_eps, unsigned threads,
                             double fallback_prior) {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    for (const auto& cfg : grid) cfg.validate();

    const std::size_t jobs = grid.size() * static_cast<std::size_t>(repeats);
    std::vector<std::pair<double, double>> rates(jobs);
    parallel_for_index(jobs, threads, [&](std::size_t job) {
        const std::size_t c = job / static_cast<std::size_t>(repeats);
        SimulationConfig cfg = grid[c];
        cfg.seed = derive_seed(seed, SeedStream::Sweep, job);
        const SimulatedDataset ds = generate_dataset(cfg);

        PipelineOptions opts;
        opts.prior.p_miss_pos = (cfg.p_miss_pos > 0.0 && cfg.p_miss_pos < 0.5)
                                    ? cfg.p_miss_pos
                                    : fallback_prior;
        opts.prior.p_miss_neg = cfg.p_miss_neg;
        opts.solver = solver;
        opts.solver.threads = 1;  // jobs are the parallel unit
        opts.prune_eps = prune_eps;

        const GraphDiff d = diff(run_pipeline(ds.observations, opts).graph, ds.truth);
        rates[job] = {d.fp_rate, d.fn_rate};
    });

    std::vector<SweepCell> cells;
    cells.reserve(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        SweepCell cell;
        cell.config = grid[c];
        cell.repeats = repeats;
        double sum_fp = 0.0, sum_fn = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto& [fp, fn] = rates[c * repeats + r];
            sum_fp += fp;
            sum_fn += fn;
        }
        cell.mean_fp = sum_fp / repeats;
        cell.mean_fn = sum_fn / repeats;
        double ss_fp = 0.0, ss_fn = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto& [fp, fn] = rates[c * repeats + r];
            ss_fp += (fp - cell.mean_fp) * (fp - cell.mean_fp);
            ss_fn += (fn - cell.mean_fn) * (fn - cell.mean_fn);
        }
        if (repeats > 1) {
            cell.var_fp = ss_fp / (repeats - 1);
            cell.var_fn = ss_fn / (repeats - 1);
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace pathinf
