#include "pathinf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pathinf/errors.hpp"

namespace pathinf {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string() + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw ConfigError("failed writing " + path.string());
}

// One CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (quoted) {
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(field);
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(where + ": missing \"" + key + "\"");
    }
    return j.at(key);
}

std::vector<std::string> string_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_string()) throw ParseError(where + ": expected strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace

ObservationMatrix read_observations_csv(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    ObservationMatrix obs;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line, line_no);
        if (obs.labels.empty()) {
            for (const auto& f : fields) obs.labels.push_back(trim(f));
            continue;
        }
        if (fields.size() != obs.labels.size()) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(obs.labels.size()));
        }
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string token = trim(fields[c]);
            if (token == "0") {
                row.push_back(Cell::Negative);
            } else if (token == "1") {
                row.push_back(Cell::Positive);
            } else if (token == "NA" || token == "?" || token == "na") {
                row.push_back(Cell::Missing);
            } else {
                throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                                 ", column " + std::to_string(c + 1) + " (" +
                                 obs.labels[c] + "): unexpected value \"" + token +
                                 "\", want 0, 1, or NA");
            }
        }
        obs.rows.push_back(std::move(row));
    }
    obs.validate();
    return obs;
}

void write_observations_csv(const std::filesystem::path& path,
                            const ObservationMatrix& obs) {
    obs.validate();
    std::string out;
    for (std::size_t i = 0; i < obs.labels.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(obs.labels[i]);
    }
    out.push_back('\n');
    for (const auto& row : obs.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            switch (row[i]) {
                case Cell::Negative: out.push_back('0'); break;
                case Cell::Positive: out.push_back('1'); break;
                case Cell::Missing: out += "NA"; break;
            }
        }
        out.push_back('\n');
    }
    write_file(path, out);
}

TruthFile read_truth_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    TruthFile file;
    file.labels = string_array(require(j, "nodes", path.string()), path.string() + " /nodes");
    file.dag.n_nodes = static_cast<int>(file.labels.size());
    const json& edges = require(j, "edges", path.string());
    if (!edges.is_array()) throw ParseError(path.string() + " /edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = path.string() + " /edges/" + std::to_string(i);
        const json& e = edges[i];
        const json& from = require(e, "from", where);
        const json& to = require(e, "to", where);
        const json& weight = require(e, "weight", where);
        if (!from.is_number_integer() || !to.is_number_integer() || !weight.is_number()) {
            throw ParseError(where + ": expected integer endpoints and numeric weight");
        }
        file.dag.edges.push_back(
            {from.get<int>(), to.get<int>(), weight.get<double>()});
    }
    try {
        file.dag.validate();
    } catch (const std::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return file;
}

void write_truth_json(const std::filesystem::path& path, const GroundTruthDag& dag,
                      const std::vector<std::string>& labels) {
    dag.validate();
    if (static_cast<int>(labels.size()) != dag.n_nodes) {
        throw DimensionError("got " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(dag.n_nodes) + " nodes");
    }
    json j;
    j["nodes"] = labels;
    j["edges"] = json::array();
    for (const auto& e : dag.edges) {
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    }
    write_file(path, j.dump(2) + "\n");
}

StateMatrixFile read_state_matrix_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    StateMatrixFile file;
    file.labels = string_array(require(j, "labels", path.string()),
                               path.string() + " /labels");
    if (file.labels.empty() || file.labels.size() > 63) {
        throw ParseError(path.string() + " /labels: need 1..63 labels");
    }
    const json& states = require(j, "states", path.string());
    if (!states.is_object() || states.empty()) {
        throw ParseError(path.string() + " /states: expected a non-empty object");
    }
    file.sm.n_vars = file.labels.size();
    double total = 0.0;
    for (const auto& [key, value] : states.items()) {
        State st;
        try {
            st = State::from_string(key);
        } catch (const std::exception& e) {
            throw ParseError(path.string() + " /states: " + e.what());
        }
        if (st.n_vars != static_cast<int>(file.labels.size())) {
            throw ParseError(path.string() + " /states/" + key + ": key width " +
                             std::to_string(key.size()) + " does not match " +
                             std::to_string(file.labels.size()) + " labels");
        }
        if (!value.is_number()) {
            throw ParseError(path.string() + " /states/" + key + ": expected a number");
        }
        const double p = value.get<double>();
        if (!(p > 0.0 && p <= 1.0 + 1e-9)) {
            throw ParseError(path.string() + " /states/" + key +
                             ": probability must lie in (0, 1], got " + format_double(p));
        }
        file.sm.states.push_back(st);
        file.sm.probs.push_back(p);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-3) {
        throw ParseError(path.string() + " /states: probabilities sum to " +
                         format_double(total) + ", expected 1");
    }
    for (auto& p : file.sm.probs) p /= total;

    if (j.contains("objective")) {
        if (!j["objective"].is_number()) {
            throw ParseError(path.string() + " /objective: expected a number");
        }
        file.objective = j["objective"].get<double>();
    }
    if (j.contains("solver")) {
        const json& solver = j["solver"];
        try {
            if (solver.contains("iters")) file.iterations = solver["iters"].get<long>();
            if (solver.contains("converged")) {
                file.converged = solver["converged"].get<bool>();
            }
        } catch (const json::exception& e) {
            throw ParseError(path.string() + " /solver: " + e.what());
        }
    }
    return file;
}

void write_state_matrix_json(const std::filesystem::path& path,
                             const StateMatrixFile& file) {
    if (file.labels.size() != file.sm.n_vars) {
        throw DimensionError("got " + std::to_string(file.labels.size()) +
                             " labels for " + std::to_string(file.sm.n_vars) +
                             " variables");
    }
    json j;
    j["labels"] = file.labels;
    json states = json::object();
    for (std::size_t i = 0; i < file.sm.states.size(); ++i) {
        states[file.sm.states[i].to_string()] = file.sm.probs[i];
    }
    j["states"] = std::move(states);
    j["objective"] = file.objective;
    j["solver"] = {{"iters", file.iterations}, {"converged", file.converged}};
    write_file(path, j.dump(2) + "\n");
}

PathGraph read_graph_json(const std::filesystem::path& path) {
    const json j = parse_json_file(path);
    PathGraph g;
    g.labels = string_array(require(j, "labels", path.string()),
                            path.string() + " /labels");
    g.n_vars = static_cast<int>(g.labels.size());
    const json& edges = require(j, "edges", path.string());
    if (!edges.is_array()) throw ParseError(path.string() + " /edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = path.string() + " /edges/" + std::to_string(i);
        const json& e = edges[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer()) {
            throw ParseError(where + ": expected an [i, j] pair");
        }
        try {
            g.add_edge(e[0].get<int>(), e[1].get<int>());
        } catch (const std::exception& ex) {
            throw ParseError(where + ": " + ex.what());
        }
    }
    return g;
}

void write_graph_json(const std::filesystem::path& path, const PathGraph& graph) {
    json j;
    j["labels"] = graph.labels;
    j["edges"] = json::array();
    for (const auto& [a, b] : graph.edges) j["edges"].push_back({a, b});
    write_file(path, j.dump(2) + "\n");
}

namespace {

bool is_dot_id(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (const char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    static const std::set<std::string> keywords = {"graph",    "digraph", "subgraph",
                                                   "node",     "edge",    "strict"};
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return keywords.count(lower) == 0;
}

std::string dot_id(const std::string& s) {
    if (is_dot_id(s)) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

void write_graph_dot(const std::filesystem::path& path, const PathGraph& graph,
                     const InferenceTrace* trace) {
    std::vector<std::string> names;
    names.reserve(graph.n_vars);
    for (int v = 0; v < graph.n_vars; ++v) {
        names.push_back(graph.labels.empty() ? "v" + std::to_string(v)
                                             : graph.labels[v]);
    }
    std::map<std::pair<int, int>, const TraceEntry*> notes;
    if (trace != nullptr) {
        for (const auto& entry : trace->entries) {
            notes[{std::min(entry.a, entry.b), std::max(entry.a, entry.b)}] = &entry;
        }
    }
    std::string out = "graph pathway {\n";
    for (int v = 0; v < graph.n_vars; ++v) {
        out += "  " + dot_id(names[v]) + ";\n";
    }
    for (const auto& [a, b] : graph.edges) {
        out += "  " + dot_id(names[a]) + " -- " + dot_id(names[b]) + ";";
        const auto it = notes.find({a, b});
        if (it != notes.end()) {
            if (it->second->forced) {
                out += " // forced (two-positive state)";
            } else {
                out += " // W = " + format_double(it->second->score) + ", iteration " +
                       std::to_string(it->second->iteration);
            }
        }
        out.push_back('\n');
    }
    out += "}\n";
    write_file(path, out);
}

void write_diff_json(const std::filesystem::path& path, const GraphDiff& d) {
    json j;
    j["true_edges"] = d.true_edges;
    j["recovered"] = d.recovered;
    j["false_pos"] = d.false_pos;
    j["false_neg"] = d.false_neg;
    j["fp_rate"] = d.fp_rate;
    j["fn_rate"] = d.fn_rate;
    write_file(path, j.dump(2) + "\n");
}

void write_stability_json(const std::filesystem::path& path,
                          const StabilityReport& report,
                          const std::vector<std::string>& labels) {
    json j;
    j["fraction"] = report.fraction;
    j["repeats"] = report.repeats;
    j["labels"] = labels;
    j["full_edges"] = json::array();
    for (const auto& [a, b] : report.full_edges) j["full_edges"].push_back({a, b});
    j["edges"] = json::array();
    for (const auto& e : report.entries) {
        j["edges"].push_back({{"a", e.a},
                              {"b", e.b},
                              {"frequency", e.frequency},
                              {"in_full_graph", e.in_full_graph}});
    }
    write_file(path, j.dump(2) + "\n");
}

void write_sweep_json(const std::filesystem::path& path,
                      const std::vector<SweepCell>& cells) {
    json j;
    j["cells"] = json::array();
    for (const auto& cell : cells) {
        j["cells"].push_back({{"n_nodes", cell.config.n_nodes},
                              {"n_edges", cell.config.n_edges},
                              {"n_samples", cell.config.n_samples},
                              {"poisson_lambda", cell.config.poisson_lambda},
                              {"p_miss_pos", cell.config.p_miss_pos},
                              {"p_miss_neg", cell.config.p_miss_neg},
                              {"repeats", cell.repeats},
                              {"mean_fp", cell.mean_fp},
                              {"mean_fn", cell.mean_fn},
                              {"var_fp", cell.var_fp},
                              {"var_fn", cell.var_fn}});
    }
    write_file(path, j.dump(2) + "\n");
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepCell>& cells) {
    std::set<int> edge_values;
    std::set<double> p_values;
    std::map<std::pair<int, double>, const SweepCell*> index;
    for (const auto& cell : cells) {
        edge_values.insert(cell.config.n_edges);
        p_values.insert(cell.config.p_miss_pos);
        index[{cell.config.n_edges, cell.config.p_miss_pos}] = &cell;
    }
    std::string out = "metric,n_edges";
    for (const double p : p_values) out += ",p=" + format_double(p);
    out.push_back('\n');
    for (const char* metric : {"fp_rate", "fn_rate"}) {
        const bool fp = std::string(metric) == "fp_rate";
        for (const int e : edge_values) {
            out += metric;
            out += ',' + std::to_string(e);
            for (const double p : p_values) {
                out.push_back(',');
                const auto it = index.find({e, p});
                if (it == index.end()) {
                    out += "NA";
                } else {
                    out += format_double(fp ? it->second->mean_fp : it->second->mean_fn);
                }
            }
            out.push_back('\n');
        }
    }
    write_file(path, out);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    json j;
    j["version"] = manifest.version;
    j["subcommand"] = manifest.subcommand;
    j["seed"] = manifest.seed;
    j["config"] = manifest.config;
    j["inputs"] = manifest.inputs;
    j["outputs"] = manifest.outputs;
    j["duration_seconds"] = manifest.duration_seconds;
    write_file(path, j.dump(2) + "\n");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    const auto first = content.find_first_not_of(" \t\r\n");
    std::map<std::string, std::string> out;
    if (first != std::string::npos && content[first] == '{') {
        json j;
        try {
            j = json::parse(content);
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        const json& config = j.contains("config") ? j.at("config") : j;
        if (!config.is_object()) {
            throw ParseError(path.string() + ": expected a config object");
        }
        for (const auto& [key, value] : config.items()) {
            out[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        return out;
    }
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ": expected key=value");
        }
        out[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
    }
    return out;
}

std::string format_double(double v) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, result.ptr);
}

}  // namespace pathinf
