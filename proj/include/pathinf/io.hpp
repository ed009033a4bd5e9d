#pragma once

// File codecs for the CLI: observations CSV, ground-truth / state-matrix /
// graph JSON, DOT export, run manifests. All writers are deterministic so
// a re-run from the same configuration is byte-identical.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathinf/evaluate.hpp"
#include "pathinf/infer.hpp"
#include "pathinf/simulate.hpp"
#include "pathinf/summarize.hpp"
#include "pathinf/types.hpp"

namespace pathinf {

// CSV: header row of labels; cells 0 / 1 / NA ("?" accepted on input).
ObservationMatrix read_observations_csv(const std::filesystem::path& path);
void write_observations_csv(const std::filesystem::path& path,
                            const ObservationMatrix& obs);

struct TruthFile {
    GroundTruthDag dag;
    std::vector<std::string> labels;
};

// {"nodes": [labels], "edges": [{"from": i, "to": j, "weight": w}]}
TruthFile read_truth_json(const std::filesystem::path& path);
void write_truth_json(const std::filesystem::path& path, const GroundTruthDag& dag,
                      const std::vector<std::string>& labels);

struct StateMatrixFile {
    StateMatrix sm;
    std::vector<std::string> labels;
    double objective = 0.0;
    long iterations = 0;
    bool converged = false;
};

// {"labels": [...], "states": {"0101": p, ...}, "objective": f,
//  "solver": {"iters": k, "converged": b}}
StateMatrixFile read_state_matrix_json(const std::filesystem::path& path);
void write_state_matrix_json(const std::filesystem::path& path,
                             const StateMatrixFile& file);

// {"labels": [...], "edges": [[i, j], ...]}
PathGraph read_graph_json(const std::filesystem::path& path);
void write_graph_json(const std::filesystem::path& path, const PathGraph& graph);

// Undirected DOT with node labels preserved; trace scores as edge comments.
void write_graph_dot(const std::filesystem::path& path, const PathGraph& graph,
                     const InferenceTrace* trace = nullptr);

void write_diff_json(const std::filesystem::path& path, const GraphDiff& d);
void write_stability_json(const std::filesystem::path& path, const StabilityReport& report,
                          const std::vector<std::string>& labels);
void write_sweep_json(const std::filesystem::path& path,
                      const std::vector<SweepCell>& cells);
// Grid-shaped CSV: one block of rows per metric, columns are the p values.
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepCell>& cells);

struct RunManifest {
    std::string version;
    std::string subcommand;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;  // full resolved configuration
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    double duration_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

// key=value lines ('#' comments); a manifest JSON is accepted too, in which
// case its "config" object is returned.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Shortest round-trip decimal representation (deterministic).
std::string format_double(double v);

}  // namespace pathinf
