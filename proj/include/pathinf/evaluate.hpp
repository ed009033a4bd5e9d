#pragma once

// Scoring of inferred graphs against ground truth (false-positive /
// false-negative edge rates against the undirected skeleton) plus the
// subsampling stability cross-validation and the simulation sweep grid.

#include <cstdint>
#include <utility>
#include <vector>

#include "pathinf/infer.hpp"
#include "pathinf/simulate.hpp"
#include "pathinf/summarize.hpp"

namespace pathinf {

struct GraphDiff {
    int true_edges = 0;
    int recovered = 0;
    int false_pos = 0;
    int false_neg = 0;
    double fp_rate = 0.0;  // false_pos / true_edges; may exceed 1
    double fn_rate = 0.0;  // false_neg / true_edges; in [0, 1]
};

struct EdgeFrequency {
    int a = 0;
    int b = 0;
    double frequency = 0.0;   // fraction of subsample runs containing the edge
    bool in_full_graph = false;
};

struct StabilityReport {
    double fraction = 0.0;
    int repeats = 0;
    std::vector<std::pair<int, int>> full_edges;   // graph inferred from all rows
    std::vector<EdgeFrequency> entries;            // frequency desc, then (a, b)
};

// Options shared by every summarize -> prune -> infer composition.
struct PipelineOptions {
    MissingnessPrior prior;
    SolverOptions solver;
    double prune_eps = 1e-6;
};

struct PipelineResult {
    SummaryDistribution dist;
    StateMatrix state_matrix;
    PathGraph graph;
    InferenceTrace trace;
};

PipelineResult run_pipeline(const ObservationMatrix& obs, const PipelineOptions& opts);

// Compares an inferred undirected graph against the skeleton of the truth
// DAG; both rates are normalized by the skeleton size.
GraphDiff diff(const PathGraph& inferred, const GroundTruthDag& truth);

// Runs the pipeline on `repeats` uniform row-subsamples of size
// ceil(fraction * m) (without replacement within each run) and reports each
// edge's appearance frequency. Runs are independent and may execute on
// `threads` workers without changing the result.
StabilityReport cross_validate(const ObservationMatrix& obs, double fraction,
                               int repeats, const PipelineOptions& opts,
                               std::uint64_t seed, unsigned threads = 1);

struct SweepCell {
    SimulationConfig config;   // the cell's generator settings
    int repeats = 0;
    double mean_fp = 0.0;
    double mean_fn = 0.0;
    double var_fp = 0.0;       // sample variance over repeats
    double var_fn = 0.0;
};

// For each grid cell: generate a dataset, run the full pipeline with the
// prior matched to the cell's missingness, diff against the generating DAG,
// and average over repeats with derived per-repeat seeds. The estimator
// prior falls back to `fallback_prior` for cells with no positive-value
// missingness (complete-data fits do not depend on it).
std::vector<SweepCell> sweep(const std::vector<SimulationConfig>& grid, int repeats,
                             std::uint64_t seed, const SolverOptions& solver = {},
                             double prune_eps = 1e-6, unsigned threads = 1,
                             double fallback_prior = 0.25);

}  // namespace pathinf
