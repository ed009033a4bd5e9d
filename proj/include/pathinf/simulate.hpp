#pragma once

// Ground-truth generation for validation: random weighted DAGs and cascade
// samples spreading from a source node, with biased missing-value injection.

#include <cstdint>
#include <vector>

#include "pathinf/rng.hpp"
#include "pathinf/types.hpp"

namespace pathinf {

struct DagEdge {
    int from = 0;
    int to = 0;
    double weight = 0.0;
};

struct GroundTruthDag {
    int n_nodes = 0;
    std::vector<DagEdge> edges;  // sorted by (from, to); weights > 0

    std::vector<int> sources() const;  // nodes with indegree 0, ascending
    bool is_acyclic() const;           // topological-sort check
    void validate() const;
    // Undirected edge set with direction dropped, normalized a < b.
    std::vector<std::pair<int, int>> skeleton() const;
};

struct SimulationConfig {
    int n_nodes = 10;
    int n_edges = 15;
    int n_samples = 1000;
    double poisson_lambda = 4.0;  // transition-step count parameter
    double p_miss_pos = 0.25;
    double p_miss_neg = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

// Uniform random permutation as topological order, then n_edges distinct
// forward pairs sampled uniformly without replacement, Uniform(0,1] weights.
GroundTruthDag random_dag(int n_nodes, int n_edges, Rng& rng);

// One cascade: T ~ Poisson(lambda) transition steps from a uniformly chosen
// source; each step marks exactly one new node positive with probability
// proportional to its total in-edge weight from the current positive set,
// stopping early when no unmarked node is reachable.
std::vector<std::uint8_t> sample_cascade(const GroundTruthDag& dag, double lambda,
                                         Rng& rng);

// Masks each entry independently: positives become Missing with probability
// p_miss_pos, negatives with p_miss_neg.
std::vector<Cell> inject_missing(const std::vector<std::uint8_t>& sample,
                                 double p_miss_pos, double p_miss_neg, Rng& rng);

struct SimulatedDataset {
    ObservationMatrix observations;
    GroundTruthDag truth;
};

// One DAG, cfg.n_samples cascades passed through missing-value injection.
// Fully reproducible from cfg.seed; per-sample sub-seeds are derived with a
// counter-based split so parallel generation matches serial output.
SimulatedDataset generate_dataset(const SimulationConfig& cfg);

}  // namespace pathinf
