#include "pathinf/simulate.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "pathinf/errors.hpp"

namespace pathinf {

std::vector<int> GroundTruthDag::sources() const {
    std::vector<int> indegree(n_nodes, 0);
    for (const auto& e : edges) ++indegree[e.to];
    std::vector<int> out;
    for (int v = 0; v < n_nodes; ++v) {
        if (indegree[v] == 0) out.push_back(v);
    }
    return out;
}

bool GroundTruthDag::is_acyclic() const {
    std::vector<int> indegree(n_nodes, 0);
    std::vector<std::vector<int>> adj(n_nodes);
    for (const auto& e : edges) {
        ++indegree[e.to];
        adj[e.from].push_back(e.to);
    }
    std::queue<int> ready;
    for (int v = 0; v < n_nodes; ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    int visited = 0;
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop();
        ++visited;
        for (int w : adj[v]) {
            if (--indegree[w] == 0) ready.push(w);
        }
    }
    return visited == n_nodes;
}

void GroundTruthDag::validate() const {
    if (n_nodes < 1) throw ConfigError("graph needs at least one node");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= n_nodes || e.to < 0 || e.to >= n_nodes) {
            throw DimensionError("edge " + std::to_string(e.from) + "->" +
                                 std::to_string(e.to) + " out of range");
        }
        if (e.from == e.to) {
            throw ConfigError("self-loop on node " + std::to_string(e.from));
        }
        if (!seen.insert({e.from, e.to}).second) {
            throw ConfigError("duplicate edge " + std::to_string(e.from) + "->" +
                              std::to_string(e.to));
        }
        if (!(e.weight > 0.0)) {
            throw ConfigError("edge " + std::to_string(e.from) + "->" +
                              std::to_string(e.to) + " has non-positive weight");
        }
    }
    if (!is_acyclic()) throw ConfigError("transition graph contains a cycle");
}

std::vector<std::pair<int, int>> GroundTruthDag::skeleton() const {
    std::set<std::pair<int, int>> undirected;
    for (const auto& e : edges) {
        undirected.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
    }
    return {undirected.begin(), undirected.end()};
}

void SimulationConfig::validate() const {
    if (n_nodes < 1) throw ConfigError("n_nodes must be positive");
    if (n_nodes > 63) throw ConfigError("at most 63 nodes are supported");
    const long long max_edges =
        static_cast<long long>(n_nodes) * (n_nodes - 1) / 2;
    if (n_edges < 0 || n_edges > max_edges) {
        throw ConfigError("infeasible edge count: n_edges must lie in [0, " +
                          std::to_string(max_edges) + "] for " +
                          std::to_string(n_nodes) + " nodes, got " +
                          std::to_string(n_edges));
    }
    if (n_samples < 1) throw ConfigError("n_samples must be positive");
    if (!(poisson_lambda > 0.0)) throw ConfigError("poisson_lambda must be positive");
    if (!(p_miss_pos >= 0.0 && p_miss_pos < 0.5)) {
        throw ConfigError("p_miss_pos must lie in [0, 0.5), got " +
                          std::to_string(p_miss_pos));
    }
    if (!(p_miss_neg >= 0.0 && p_miss_neg <= 1.0)) {
        throw ConfigError("p_miss_neg must lie in [0, 1], got " +
                          std::to_string(p_miss_neg));
    }
}

GroundTruthDag random_dag(int n_nodes, int n_edges, Rng& rng) {
    if (n_nodes < 1) throw ConfigError("n_nodes must be positive");
    const long long max_edges =
        static_cast<long long>(n_nodes) * (n_nodes - 1) / 2;
    if (n_edges < 0 || n_edges > max_edges) {
        throw ConfigError("infeasible edge count: cannot place " +
                          std::to_string(n_edges) + " edges on " +
                          std::to_string(n_nodes) + " nodes");
    }

    std::vector<int> order(n_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    // All forward pairs along the drawn order, then a partial Fisher-Yates
    // picks n_edges of them uniformly without replacement.
    std::vector<std::pair<int, int>> pool;
    pool.reserve(static_cast<std::size_t>(max_edges));
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = i + 1; j < n_nodes; ++j) {
            pool.emplace_back(order[i], order[j]);
        }
    }

    GroundTruthDag dag;
    dag.n_nodes = n_nodes;
    dag.edges.reserve(n_edges);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < n_edges; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
        std::swap(pool[k], pool[pick(rng)]);
        dag.edges.push_back({pool[k].first, pool[k].second, 1.0 - unit(rng)});
    }
    std::sort(dag.edges.begin(), dag.edges.end(), [](const DagEdge& a, const DagEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    dag.validate();
    return dag;
}

std::vector<std::uint8_t> sample_cascade(const GroundTruthDag& dag, double lambda,
                                         Rng& rng) {
    dag.validate();
    if (!(lambda > 0.0)) throw ConfigError("poisson_lambda must be positive");

    std::poisson_distribution<int> step_count(lambda);
    const int t = step_count(rng);

    const std::vector<int> sources = dag.sources();
    std::vector<std::uint8_t> state(dag.n_nodes, 0);
    std::size_t start = 0;
    if (sources.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, sources.size() - 1);
        start = pick(rng);
    }
    state[sources[start]] = 1;

    std::vector<double> inflow(dag.n_nodes);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int step = 0; step < t; ++step) {
        std::fill(inflow.begin(), inflow.end(), 0.0);
        double total = 0.0;
        for (const auto& e : dag.edges) {
            if (state[e.from] && !state[e.to]) {
                inflow[e.to] += e.weight;
                total += e.weight;
            }
        }
        if (total <= 0.0) break;
        const double u = unit(rng) * total;
        double cumulative = 0.0;
        int chosen = -1;
        for (int v = 0; v < dag.n_nodes; ++v) {
            if (inflow[v] <= 0.0) continue;
            chosen = v;
            cumulative += inflow[v];
            if (u < cumulative) break;
        }
        state[chosen] = 1;
    }
    return state;
}

std::vector<Cell> inject_missing(const std::vector<std::uint8_t>& sample,
                                 double p_miss_pos, double p_miss_neg, Rng& rng) {
    if (!(p_miss_pos >= 0.0 && p_miss_pos <= 1.0) ||
        !(p_miss_neg >= 0.0 && p_miss_neg <= 1.0)) {
        throw ConfigError("missing-value probabilities must lie in [0, 1]");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Cell> row(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double p = sample[i] ? p_miss_pos : p_miss_neg;
        const double u = unit(rng);  // one draw per entry keeps streams aligned
        if (u < p) {
            row[i] = Cell::Missing;
        } else {
            row[i] = sample[i] ? Cell::Positive : Cell::Negative;
        }
    }
    return row;
}

SimulatedDataset generate_dataset(const SimulationConfig& cfg) {
    cfg.validate();
    SimulatedDataset ds;

    Rng dag_rng = make_rng(cfg.seed, SeedStream::Dag);
    ds.truth = random_dag(cfg.n_nodes, cfg.n_edges, dag_rng);

    ds.observations.labels.reserve(cfg.n_nodes);
    for (int v = 0; v < cfg.n_nodes; ++v) {
        ds.observations.labels.push_back("n" + std::to_string(v));
    }
    ds.observations.rows.reserve(cfg.n_samples);
    for (int i = 0; i < cfg.n_samples; ++i) {
        Rng rng = make_rng(cfg.seed, SeedStream::Sample, static_cast<std::uint64_t>(i));
        const auto sample = sample_cascade(ds.truth, cfg.poisson_lambda, rng);
        ds.observations.rows.push_back(
            inject_missing(sample, cfg.p_miss_pos, cfg.p_miss_neg, rng));
    }
    ds.observations.validate();
    return ds;
}

}  // namespace pathinf
