#pragma once

// Stage two: infer an undirected pathway graph from the pruned state matrix.
// The graph must make every state's positive vertex set induce a connected
// subgraph, with as few edges as the greedy construction manages: forced
// edges for two-positive states first, then repeatedly the highest-scoring
// edge until every state is satisfied.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pathinf/summarize.hpp"
#include "pathinf/types.hpp"

namespace pathinf {

struct PathGraph {
    int n_vars = 0;
    std::vector<std::string> labels;               // optional, size n_vars when set
    std::set<std::pair<int, int>> edges;           // normalized a < b

    bool has_edge(int a, int b) const;
    void add_edge(int a, int b);                   // validates range, no self-loops
    // Global connectivity (any path), not restricted to an induced subset.
    bool connected(int a, int b) const;
};

struct TraceEntry {
    int a = 0;
    int b = 0;
    double score = 0.0;  // W(a, b) for scored edges; unused when forced
    bool forced = false;
    int iteration = 0;
};

struct InferenceTrace {
    std::vector<TraceEntry> entries;
    bool satisfied = false;
};

struct InferenceResult {
    PathGraph graph;
    InferenceTrace trace;
};

// Number of connected components of the subgraph induced on vset (only
// edges with both endpoints in vset count). Empty vset yields 0.
int components_within(const PathGraph& graph, const std::vector<int>& vset);

// W(x, y): sum over states containing both endpoints of P(S) divided by the
// component count of the state's induced subgraph. Defined only for pairs
// with no path between them; throws ContractViolation otherwise.
double edge_score(int x, int y, const StateMatrix& sm, const PathGraph& graph);

// True iff every state's positive set induces at most one component. States
// with zero or one positive are vacuously satisfied.
bool is_satisfied(const PathGraph& graph, const StateMatrix& sm);

// Greedy minimum-edge construction; labels are carried into the graph when
// provided. Deterministic: ties break on the smallest (min, max) index pair.
InferenceResult greedy_infer(const StateMatrix& sm,
                             std::vector<std::string> labels = {});

}  // namespace pathinf
