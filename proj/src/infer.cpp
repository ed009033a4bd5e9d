#include "pathinf/infer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "pathinf/errors.hpp"

namespace pathinf {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

void check_vertex(int v, int n_vars) {
    if (v < 0 || v >= n_vars) {
        throw DimensionError("vertex " + std::to_string(v) + " out of range [0, " +
                             std::to_string(n_vars) + ")");
    }
}

}  // namespace

bool PathGraph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return edges.count({a, b}) > 0;
}

void PathGraph::add_edge(int a, int b) {
    check_vertex(a, n_vars);
    check_vertex(b, n_vars);
    if (a == b) throw ConfigError("self-loop on vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
}

bool PathGraph::connected(int a, int b) const {
    check_vertex(a, n_vars);
    check_vertex(b, n_vars);
    if (a == b) return true;
    UnionFind uf(n_vars);
    for (const auto& [x, y] : edges) uf.unite(x, y);
    return uf.find(a) == uf.find(b);
}

int components_within(const PathGraph& graph, const std::vector<int>& vset) {
    if (vset.empty()) return 0;
    for (int v : vset) check_vertex(v, graph.n_vars);
    UnionFind uf(graph.n_vars);
    std::vector<char> in_set(graph.n_vars, 0);
    for (int v : vset) in_set[v] = 1;
    int components = static_cast<int>(vset.size());
    for (const auto& [x, y] : graph.edges) {
        if (in_set[x] && in_set[y] && uf.unite(x, y)) --components;
    }
    return components;
}

double edge_score(int x, int y, const StateMatrix& sm, const PathGraph& graph) {
    check_vertex(x, graph.n_vars);
    check_vertex(y, graph.n_vars);
    if (x == y) throw ContractViolation("edge score requires distinct vertices");
    if (graph.connected(x, y)) {
        throw ContractViolation("edge score is undefined for connected vertices " +
                                std::to_string(x) + " and " + std::to_string(y));
    }
    double w = 0.0;
    for (std::size_t s = 0; s < sm.states.size(); ++s) {
        const State& st = sm.states[s];
        if (!st.bit(x) || !st.bit(y)) continue;
        w += sm.probs[s] / components_within(graph, st.positives());
    }
    return w;
}

bool is_satisfied(const PathGraph& graph, const StateMatrix& sm) {
    for (const State& st : sm.states) {
        if (st.positive_count() <= 1) continue;
        if (components_within(graph, st.positives()) > 1) return false;
    }
    return true;
}

InferenceResult greedy_infer(const StateMatrix& sm, std::vector<std::string> labels) {
    if (sm.states.empty()) throw ConfigError("state matrix is empty");
    if (!labels.empty() && labels.size() != sm.n_vars) {
        throw DimensionError("got " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(sm.n_vars) + " variables");
    }
    InferenceResult result;
    PathGraph& g = result.graph;
    g.n_vars = static_cast<int>(sm.n_vars);
    g.labels = std::move(labels);

    struct Relevant {
        std::vector<int> positives;
        double prob;
    };
    std::vector<Relevant> states;
    for (std::size_t s = 0; s < sm.states.size(); ++s) {
        if (sm.states[s].positive_count() < 2) continue;
        states.push_back({sm.states[s].positives(), sm.probs[s]});
    }

    for (const auto& st : states) {
        if (st.positives.size() != 2) continue;
        const int a = st.positives[0];
        const int b = st.positives[1];
        if (g.has_edge(a, b)) continue;
        g.add_edge(a, b);
        result.trace.entries.push_back({a, b, 0.0, true, 0});
    }

    int iteration = 0;
    while (true) {
        // Component structure of every induced subgraph, recomputed once per
        // iteration and shared across the pair scores.
        std::vector<int> comp_count(states.size());
        std::vector<UnionFind> comp(states.size(), UnionFind(g.n_vars));
        bool satisfied = true;
        for (std::size_t s = 0; s < states.size(); ++s) {
            std::vector<char> in_set(g.n_vars, 0);
            for (int v : states[s].positives) in_set[v] = 1;
            int c = static_cast<int>(states[s].positives.size());
            for (const auto& [x, y] : g.edges) {
                if (in_set[x] && in_set[y] && comp[s].unite(x, y)) --c;
            }
            comp_count[s] = c;
            if (c > 1) satisfied = false;
        }
        if (satisfied) break;
        ++iteration;

        UnionFind global(g.n_vars);
        for (const auto& [x, y] : g.edges) global.unite(x, y);

        struct PairInfo {
            double w = 0.0;
            bool split_somewhere = false;  // endpoints in different components of some state
        };
        std::map<std::pair<int, int>, PairInfo> pairs;
        for (std::size_t s = 0; s < states.size(); ++s) {
            const auto& pos = states[s].positives;
            const double contribution = states[s].prob / comp_count[s];
            for (std::size_t i = 0; i < pos.size(); ++i) {
                for (std::size_t j = i + 1; j < pos.size(); ++j) {
                    auto& info = pairs[{pos[i], pos[j]}];
                    info.w += contribution;
                    if (comp[s].find(pos[i]) != comp[s].find(pos[j])) {
                        info.split_somewhere = true;
                    }
                }
            }
        }

        // Prefer pairs with no global path (the defined scoring domain); when
        // every such pair is exhausted but a state is still split, fall back
        // to pairs split inside that state so the loop cannot stall.
        const std::pair<int, int>* best = nullptr;
        double best_w = 0.0;
        bool have_disconnected = false;
        for (const auto& [pair, info] : pairs) {
            if (global.find(pair.first) != global.find(pair.second)) {
                have_disconnected = true;
                break;
            }
        }
        for (const auto& [pair, info] : pairs) {
            const bool eligible =
                have_disconnected
                    ? global.find(pair.first) != global.find(pair.second)
                    : info.split_somewhere;
            if (!eligible) continue;
            if (best == nullptr || info.w > best_w) {
                best = &pair;
                best_w = info.w;
            }
        }
        if (best == nullptr) {
            throw ContractViolation("no admissible edge although a state is split");
        }
        g.add_edge(best->first, best->second);
        result.trace.entries.push_back(
            {best->first, best->second, best_w, false, iteration});
    }

    result.trace.satisfied = true;
    return result;
}

}  // namespace pathinf
