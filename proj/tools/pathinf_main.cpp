// pathinf: summarize incomplete binary observations into a sparse state
// distribution and infer the minimum-edge pathway graph whose states stay
// connected. Subcommands cover simulation, the two pipeline stages, the
// composed pipeline, evaluation against ground truth, subsampling stability,
// and the simulation sweep grid.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathinf/errors.hpp"
#include "pathinf/evaluate.hpp"
#include "pathinf/io.hpp"
#include "pathinf/version.hpp"

namespace fs = std::filesystem;
using namespace pathinf;

namespace {

struct CommonOpts {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string config_path;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--seed", common.seed, "Master seed for all randomness");
    cmd->add_option("--threads", common.threads, "Worker cap (any count gives identical outputs)");
    cmd->add_option("--config", common.config_path,
                    "key=value file or run manifest; entries override flags");
    cmd->add_option("--out-dir", common.out_dir, "Directory for output files");
}

// Config-file overrides. Each subcommand registers a setter per key; the
// file wins over command-line flags.
class Overrides {
  public:
    void on(const std::string& key, std::function<void(const std::string&)> setter) {
        setters_[key] = std::move(setter);
    }

    void apply(const std::string& config_path) {
        if (config_path.empty()) return;
        for (const auto& [key, value] : read_config_file(config_path)) {
            const auto it = setters_.find(key);
            if (it == setters_.end()) {
                throw ConfigError("unknown config key \"" + key + "\"");
            }
            it->second(value);
        }
    }

  private:
    std::map<std::string, std::function<void(const std::string&)>> setters_;
};

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const long long v = std::stoll(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got \"" + value + "\"");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const unsigned long long v = std::stoull(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got \"" + value + "\"");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t idx = 0;
        const double v = std::stod(value, &idx);
        if (idx != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got \"" + value + "\"");
    }
}

// Input paths may arrive as a flag or as a config entry; either works.
const std::string& require_input(const std::string& value, const std::string& flag) {
    if (value.empty()) {
        throw ConfigError("missing " + flag + " (pass the flag or a config entry)");
    }
    return value;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string token =
            value.substr(start, comma == std::string::npos ? comma : comma - start);
        out.push_back(static_cast<int>(parse_integer(key, token)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
    return out;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string token =
            value.substr(start, comma == std::string::npos ? comma : comma - start);
        out.push_back(parse_real(key, token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back(',');
        out += format_double(v[i]);
    }
    return out;
}

void register_common(Overrides& ov, CommonOpts& common) {
    ov.on("seed", [&](const std::string& v) { common.seed = parse_u64("seed", v); });
    ov.on("threads", [&](const std::string& v) {
        common.threads = static_cast<unsigned>(parse_u64("threads", v));
    });
    ov.on("out-dir", [&](const std::string& v) { common.out_dir = v; });
}

// Solver and prior flags shared by summarize, pipeline, and crossval.
struct FitOpts {
    double prior_p = 0.25;
    double prior_neg = 0.5;
    double tol = 1e-9;
    long max_iters = 20000;
    std::string init = "uniform";
    std::uint64_t cap = std::uint64_t{1} << 20;
    double prune_eps = 1e-6;
};

void add_fit(CLI::App* cmd, FitOpts& fit) {
    cmd->add_option("--prior-p", fit.prior_p,
                    "Probability that a positive value went unrecorded, in (0, 0.5)");
    cmd->add_option("--prior-neg", fit.prior_neg,
                    "Probability that a negative value went unrecorded, in [0, 1]");
    cmd->add_option("--tol", fit.tol, "Relative objective-change stopping tolerance");
    cmd->add_option("--max-iters", fit.max_iters, "Gradient-descent iteration cap");
    cmd->add_option("--init", fit.init, "Starting point: uniform or random")
        ->check(CLI::IsMember({"uniform", "random"}));
    cmd->add_option("--cap", fit.cap, "Candidate-state count limit");
    cmd->add_option("--prune-eps", fit.prune_eps, "Probability threshold for pruning");
}

void register_fit(Overrides& ov, FitOpts& fit) {
    ov.on("prior-p", [&](const std::string& v) { fit.prior_p = parse_real("prior-p", v); });
    ov.on("prior-neg",
          [&](const std::string& v) { fit.prior_neg = parse_real("prior-neg", v); });
    ov.on("tol", [&](const std::string& v) { fit.tol = parse_real("tol", v); });
    ov.on("max-iters", [&](const std::string& v) {
        fit.max_iters = static_cast<long>(parse_integer("max-iters", v));
    });
    ov.on("init", [&](const std::string& v) {
        if (v != "uniform" && v != "random") {
            throw ConfigError("init: expected uniform or random, got \"" + v + "\"");
        }
        fit.init = v;
    });
    ov.on("cap", [&](const std::string& v) { fit.cap = parse_u64("cap", v); });
    ov.on("prune-eps",
          [&](const std::string& v) { fit.prune_eps = parse_real("prune-eps", v); });
}

PipelineOptions to_pipeline_options(const FitOpts& fit, const CommonOpts& common) {
    PipelineOptions opts;
    opts.prior.p_miss_pos = fit.prior_p;
    opts.prior.p_miss_neg = fit.prior_neg;
    opts.solver.tol = fit.tol;
    opts.solver.max_iters = fit.max_iters;
    opts.solver.init = fit.init == "random" ? SolverOptions::Init::Random
                                            : SolverOptions::Init::Uniform;
    opts.solver.seed = common.seed;
    opts.solver.candidate_cap = static_cast<std::size_t>(fit.cap);
    opts.solver.threads = common.threads;
    opts.prune_eps = fit.prune_eps;
    return opts;
}

void put_fit_config(RunManifest& manifest, const FitOpts& fit) {
    manifest.config["prior-p"] = format_double(fit.prior_p);
    manifest.config["prior-neg"] = format_double(fit.prior_neg);
    manifest.config["tol"] = format_double(fit.tol);
    manifest.config["max-iters"] = std::to_string(fit.max_iters);
    manifest.config["init"] = fit.init;
    manifest.config["cap"] = std::to_string(fit.cap);
    manifest.config["prune-eps"] = format_double(fit.prune_eps);
}

// Composed subcommands prefix errors with the failing stage.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    } catch (const DimensionError& e) {
        throw DimensionError(name + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(name + ": " + e.what());
    } catch (const CapacityError& e) {
        throw CapacityError(name + ": " + e.what());
    }
}

class ManifestTimer {
  public:
    explicit ManifestTimer(RunManifest& manifest)
        : manifest_(manifest), start_(std::chrono::steady_clock::now()) {}

    void finish(const fs::path& out_dir) {
        manifest_.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count();
        write_manifest(out_dir / "manifest.json", manifest_);
    }

  private:
    RunManifest& manifest_;
    std::chrono::steady_clock::time_point start_;
};

fs::path prepare_out_dir(const CommonOpts& common) {
    fs::path dir(common.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + dir.string() + ": " +
                          ec.message());
    }
    return dir;
}

RunManifest base_manifest(const std::string& subcommand, const CommonOpts& common) {
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.subcommand = subcommand;
    manifest.seed = common.seed;
    manifest.config["seed"] = std::to_string(common.seed);
    return manifest;
}

std::string percent(double rate) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.1f", rate * 100.0);
    return std::string(buffer) + "%";
}

int cmd_simulate(const CommonOpts& common, const SimulationConfig& cfg_in) {
    SimulationConfig cfg = cfg_in;
    cfg.seed = common.seed;
    RunManifest manifest = base_manifest("simulate", common);
    ManifestTimer timer(manifest);
    manifest.config["nodes"] = std::to_string(cfg.n_nodes);
    manifest.config["edges"] = std::to_string(cfg.n_edges);
    manifest.config["samples"] = std::to_string(cfg.n_samples);
    manifest.config["lambda"] = format_double(cfg.poisson_lambda);
    manifest.config["p-miss-pos"] = format_double(cfg.p_miss_pos);
    manifest.config["p-miss-neg"] = format_double(cfg.p_miss_neg);

    const SimulatedDataset ds = generate_dataset(cfg);
    const fs::path out = prepare_out_dir(common);
    write_observations_csv(out / "observations.csv", ds.observations);
    write_truth_json(out / "truth.json", ds.truth, ds.observations.labels);
    manifest.outputs["observations"] = (out / "observations.csv").string();
    manifest.outputs["truth"] = (out / "truth.json").string();
    timer.finish(out);
    std::cout << "wrote " << (out / "observations.csv").string() << " ("
              << ds.observations.n_rows() << " rows, " << ds.observations.n_vars()
              << " variables)\n";
    return 0;
}

int cmd_summarize(const CommonOpts& common, const FitOpts& fit_opts,
                  const std::string& input) {
    RunManifest manifest = base_manifest("summarize", common);
    ManifestTimer timer(manifest);
    manifest.config["in"] = input;
    put_fit_config(manifest, fit_opts);
    manifest.inputs["observations"] = input;

    const ObservationMatrix obs = read_observations_csv(input);
    const PipelineOptions opts = to_pipeline_options(fit_opts, common);
    const SummaryDistribution dist = fit(obs, opts.prior, opts.solver);
    const StateMatrix sm = prune(dist, opts.prune_eps);

    StateMatrixFile file;
    file.sm = sm;
    file.labels = obs.labels;
    file.objective = dist.objective;
    file.iterations = dist.iterations;
    file.converged = dist.converged;

    const fs::path out = prepare_out_dir(common);
    write_state_matrix_json(out / "state_matrix.json", file);
    manifest.outputs["state_matrix"] = (out / "state_matrix.json").string();
    timer.finish(out);
    std::cout << "retained " << sm.states.size() << " of " << dist.candidate_set.size()
              << " candidate states, objective " << format_double(dist.objective)
              << (dist.converged ? "" : " (iteration cap reached)") << "\n";
    return 0;
}

int cmd_infer(const CommonOpts& common, const std::string& input) {
    RunManifest manifest = base_manifest("infer", common);
    ManifestTimer timer(manifest);
    manifest.config["in"] = input;
    manifest.inputs["state_matrix"] = input;

    const StateMatrixFile file = read_state_matrix_json(input);
    const InferenceResult result = greedy_infer(file.sm, file.labels);

    const fs::path out = prepare_out_dir(common);
    write_graph_json(out / "graph.json", result.graph);
    write_graph_dot(out / "graph.dot", result.graph, &result.trace);
    manifest.outputs["graph"] = (out / "graph.json").string();
    manifest.outputs["dot"] = (out / "graph.dot").string();
    timer.finish(out);
    std::cout << "inferred " << result.graph.edges.size() << " edges over "
              << result.graph.n_vars << " variables\n";
    return 0;
}

int cmd_pipeline(const CommonOpts& common, const FitOpts& fit_opts,
                 const std::string& input) {
    RunManifest manifest = base_manifest("pipeline", common);
    ManifestTimer timer(manifest);
    manifest.config["in"] = input;
    put_fit_config(manifest, fit_opts);
    manifest.inputs["observations"] = input;

    const ObservationMatrix obs =
        stage("read", [&] { return read_observations_csv(input); });
    const PipelineOptions opts = to_pipeline_options(fit_opts, common);
    const SummaryDistribution dist =
        stage("summarize", [&] { return fit(obs, opts.prior, opts.solver); });
    const StateMatrix sm = stage("summarize", [&] { return prune(dist, opts.prune_eps); });
    const InferenceResult result =
        stage("infer", [&] { return greedy_infer(sm, obs.labels); });

    StateMatrixFile file;
    file.sm = sm;
    file.labels = obs.labels;
    file.objective = dist.objective;
    file.iterations = dist.iterations;
    file.converged = dist.converged;

    const fs::path out = prepare_out_dir(common);
    write_state_matrix_json(out / "state_matrix.json", file);
    write_graph_json(out / "graph.json", result.graph);
    write_graph_dot(out / "graph.dot", result.graph, &result.trace);
    manifest.outputs["state_matrix"] = (out / "state_matrix.json").string();
    manifest.outputs["graph"] = (out / "graph.json").string();
    manifest.outputs["dot"] = (out / "graph.dot").string();
    timer.finish(out);
    std::cout << "retained " << sm.states.size() << " states, inferred "
              << result.graph.edges.size() << " edges\n";
    return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& graph_path,
                 const std::string& truth_path) {
    RunManifest manifest = base_manifest("evaluate", common);
    ManifestTimer timer(manifest);
    manifest.config["graph"] = graph_path;
    manifest.config["truth"] = truth_path;
    manifest.inputs["graph"] = graph_path;
    manifest.inputs["truth"] = truth_path;

    const PathGraph graph = read_graph_json(graph_path);
    const TruthFile truth = read_truth_json(truth_path);
    const GraphDiff d = diff(graph, truth.dag);

    const fs::path out = prepare_out_dir(common);
    write_diff_json(out / "diff.json", d);
    manifest.outputs["diff"] = (out / "diff.json").string();
    timer.finish(out);
    std::cout << "FP " << percent(d.fp_rate) << " FN " << percent(d.fn_rate) << "\n";
    return 0;
}

int cmd_crossval(const CommonOpts& common, const FitOpts& fit_opts,
                 const std::string& input, double fraction, int repeats) {
    RunManifest manifest = base_manifest("crossval", common);
    ManifestTimer timer(manifest);
    manifest.config["in"] = input;
    manifest.config["fraction"] = format_double(fraction);
    manifest.config["repeats"] = std::to_string(repeats);
    put_fit_config(manifest, fit_opts);
    manifest.inputs["observations"] = input;

    const ObservationMatrix obs = read_observations_csv(input);
    const PipelineOptions opts = to_pipeline_options(fit_opts, common);
    const StabilityReport report =
        cross_validate(obs, fraction, repeats, opts, common.seed, common.threads);

    const fs::path out = prepare_out_dir(common);
    write_stability_json(out / "stability.json", report, obs.labels);
    manifest.outputs["stability"] = (out / "stability.json").string();
    timer.finish(out);

    for (const auto& e : report.entries) {
        std::cout << obs.labels[static_cast<std::size_t>(e.a)] << " -- "
                  << obs.labels[static_cast<std::size_t>(e.b)] << "  "
                  << percent(e.frequency)
                  << (e.in_full_graph ? "  (in full-data graph)" : "") << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& edges_list,
              const std::string& p_list, int nodes, int samples, double lambda,
              double p_miss_neg, int repeats) {
    RunManifest manifest = base_manifest("sweep", common);
    ManifestTimer timer(manifest);
    const std::vector<int> edges = parse_int_list("edges-list", edges_list);
    const std::vector<double> ps = parse_real_list("p-list", p_list);
    manifest.config["edges-list"] = join_ints(edges);
    manifest.config["p-list"] = join_reals(ps);
    manifest.config["nodes"] = std::to_string(nodes);
    manifest.config["samples"] = std::to_string(samples);
    manifest.config["lambda"] = format_double(lambda);
    manifest.config["p-miss-neg"] = format_double(p_miss_neg);
    manifest.config["repeats"] = std::to_string(repeats);

    std::vector<SimulationConfig> grid;
    for (const int e : edges) {
        for (const double p : ps) {
            SimulationConfig cfg;
            cfg.n_nodes = nodes;
            cfg.n_edges = e;
            cfg.n_samples = samples;
            cfg.poisson_lambda = lambda;
            cfg.p_miss_pos = p;
            cfg.p_miss_neg = p_miss_neg;
            grid.push_back(cfg);
        }
    }
    const std::vector<SweepCell> cells =
        sweep(grid, repeats, common.seed, SolverOptions{}, 1e-6, common.threads);

    const fs::path out = prepare_out_dir(common);
    write_sweep_csv(out / "sweep.csv", cells);
    write_sweep_json(out / "sweep.json", cells);
    manifest.outputs["sweep_csv"] = (out / "sweep.csv").string();
    manifest.outputs["sweep_json"] = (out / "sweep.json").string();
    timer.finish(out);

    for (const auto& cell : cells) {
        std::cout << cell.config.n_edges << " edges, p=" << format_double(cell.config.p_miss_pos)
                  << ": FP " << percent(cell.mean_fp) << " FN " << percent(cell.mean_fn)
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pathway inference from incomplete binary observations"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts common;

    auto* sim = app.add_subcommand("simulate", "Generate a ground-truth DAG and cascades");
    SimulationConfig sim_cfg;
    add_common(sim, common);
    sim->add_option("--nodes", sim_cfg.n_nodes, "Node count");
    sim->add_option("--edges", sim_cfg.n_edges, "Edge count");
    sim->add_option("--samples", sim_cfg.n_samples, "Sample count");
    sim->add_option("--lambda", sim_cfg.poisson_lambda, "Poisson mean of transition steps");
    sim->add_option("--p-miss-pos", sim_cfg.p_miss_pos,
                    "Probability a positive entry becomes missing");
    sim->add_option("--p-miss-neg", sim_cfg.p_miss_neg,
                    "Probability a negative entry becomes missing");

    auto* sum = app.add_subcommand("summarize",
                                   "Fit the sparse state distribution from a CSV");
    FitOpts sum_fit;
    std::string sum_in;
    add_common(sum, common);
    add_fit(sum, sum_fit);
    sum->add_option("--in", sum_in, "Observations CSV");

    auto* inf = app.add_subcommand("infer", "Infer the pathway graph from a state matrix");
    std::string inf_in;
    add_common(inf, common);
    inf->add_option("--in", inf_in, "State-matrix JSON");

    auto* pipe = app.add_subcommand("pipeline", "Summarize then infer in one run");
    FitOpts pipe_fit;
    std::string pipe_in;
    add_common(pipe, common);
    add_fit(pipe, pipe_fit);
    pipe->add_option("--in", pipe_in, "Observations CSV");

    auto* eval = app.add_subcommand("evaluate", "Score a graph against ground truth");
    std::string eval_graph, eval_truth;
    add_common(eval, common);
    eval->add_option("--graph", eval_graph, "Inferred graph JSON");
    eval->add_option("--truth", eval_truth, "Ground-truth JSON");

    auto* cv = app.add_subcommand("crossval", "Edge stability under row subsampling");
    FitOpts cv_fit;
    std::string cv_in;
    double cv_fraction = 0.85;
    int cv_repeats = 100;
    add_common(cv, common);
    add_fit(cv, cv_fit);
    cv->add_option("--in", cv_in, "Observations CSV");
    cv->add_option("--fraction", cv_fraction, "Row fraction per run, in (0, 1]");
    cv->add_option("--repeats", cv_repeats, "Number of subsample runs");

    auto* sw = app.add_subcommand("sweep", "FP/FN rates over an edge-count x missingness grid");
    std::string sw_edges = "10,15,20,25";
    std::string sw_ps = "0.1,0.2,0.3,0.4";
    int sw_nodes = 10;
    int sw_samples = 1000;
    double sw_lambda = 4.0;
    double sw_p_neg = 0.5;
    int sw_repeats = 10;
    add_common(sw, common);
    sw->add_option("--edges-list", sw_edges, "Comma-separated edge counts");
    sw->add_option("--p-list", sw_ps, "Comma-separated missingness probabilities");
    sw->add_option("--nodes", sw_nodes, "Node count");
    sw->add_option("--samples", sw_samples, "Samples per dataset");
    sw->add_option("--lambda", sw_lambda, "Poisson mean of transition steps");
    sw->add_option("--p-miss-neg", sw_p_neg, "Negative-entry missingness");
    sw->add_option("--repeats", sw_repeats, "Datasets per grid cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Overrides ov;
        register_common(ov, common);
        if (sim->parsed()) {
            ov.on("nodes", [&](const std::string& v) {
                sim_cfg.n_nodes = static_cast<int>(parse_integer("nodes", v));
            });
            ov.on("edges", [&](const std::string& v) {
                sim_cfg.n_edges = static_cast<int>(parse_integer("edges", v));
            });
            ov.on("samples", [&](const std::string& v) {
                sim_cfg.n_samples = static_cast<int>(parse_integer("samples", v));
            });
            ov.on("lambda", [&](const std::string& v) {
                sim_cfg.poisson_lambda = parse_real("lambda", v);
            });
            ov.on("p-miss-pos", [&](const std::string& v) {
                sim_cfg.p_miss_pos = parse_real("p-miss-pos", v);
            });
            ov.on("p-miss-neg", [&](const std::string& v) {
                sim_cfg.p_miss_neg = parse_real("p-miss-neg", v);
            });
            ov.apply(common.config_path);
            return cmd_simulate(common, sim_cfg);
        }
        if (sum->parsed()) {
            register_fit(ov, sum_fit);
            ov.on("in", [&](const std::string& v) { sum_in = v; });
            ov.apply(common.config_path);
            return cmd_summarize(common, sum_fit, require_input(sum_in, "--in"));
        }
        if (inf->parsed()) {
            ov.on("in", [&](const std::string& v) { inf_in = v; });
            ov.apply(common.config_path);
            return cmd_infer(common, require_input(inf_in, "--in"));
        }
        if (pipe->parsed()) {
            register_fit(ov, pipe_fit);
            ov.on("in", [&](const std::string& v) { pipe_in = v; });
            ov.apply(common.config_path);
            return cmd_pipeline(common, pipe_fit, require_input(pipe_in, "--in"));
        }
        if (eval->parsed()) {
            ov.on("graph", [&](const std::string& v) { eval_graph = v; });
            ov.on("truth", [&](const std::string& v) { eval_truth = v; });
            ov.apply(common.config_path);
            return cmd_evaluate(common, require_input(eval_graph, "--graph"),
                                require_input(eval_truth, "--truth"));
        }
        if (cv->parsed()) {
            register_fit(ov, cv_fit);
            ov.on("in", [&](const std::string& v) { cv_in = v; });
            ov.on("fraction",
                  [&](const std::string& v) { cv_fraction = parse_real("fraction", v); });
            ov.on("repeats", [&](const std::string& v) {
                cv_repeats = static_cast<int>(parse_integer("repeats", v));
            });
            ov.apply(common.config_path);
            return cmd_crossval(common, cv_fit, require_input(cv_in, "--in"), cv_fraction,
                                cv_repeats);
        }
        if (sw->parsed()) {
            ov.on("edges-list", [&](const std::string& v) { sw_edges = v; });
            ov.on("p-list", [&](const std::string& v) { sw_ps = v; });
            ov.on("nodes", [&](const std::string& v) {
                sw_nodes = static_cast<int>(parse_integer("nodes", v));
            });
            ov.on("samples", [&](const std::string& v) {
                sw_samples = static_cast<int>(parse_integer("samples", v));
            });
            ov.on("lambda",
                  [&](const std::string& v) { sw_lambda = parse_real("lambda", v); });
            ov.on("p-miss-neg",
                  [&](const std::string& v) { sw_p_neg = parse_real("p-miss-neg", v); });
            ov.on("repeats", [&](const std::string& v) {
                sw_repeats = static_cast<int>(parse_integer("repeats", v));
            });
            ov.apply(common.config_path);
            return cmd_sweep(common, sw_edges, sw_ps, sw_nodes, sw_samples, sw_lambda,
                             sw_p_neg, sw_repeats);
        }
        std::cerr << "error: no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}
