#include "pathinf/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "pathinf/parallel.hpp"
#include "pathinf/rng.hpp"

namespace pathinf {

void ObservationMatrix::validate() const {
    if (labels.empty()) throw ConfigError("observation matrix has no variables");
    if (labels.size() > 63) {
        throw ConfigError("at most 63 variables are supported, got " +
                          std::to_string(labels.size()));
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw ConfigError("variable labels must be non-empty");
        if (!seen.insert(l).second) throw ConfigError("duplicate variable label \"" + l + "\"");
    }
    if (rows.empty()) throw ConfigError("observation matrix has no rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != labels.size()) {
            throw DimensionError("row " + std::to_string(i + 1) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(labels.size()));
        }
    }
}

void MissingnessPrior::validate() const {
    if (!(p_miss_pos > 0.0 && p_miss_pos < 0.5)) {
        throw ConfigError("p_miss_pos must lie in (0, 0.5), got " +
                          std::to_string(p_miss_pos));
    }
    if (!(p_miss_neg >= 0.0 && p_miss_neg <= 1.0)) {
        throw ConfigError("p_miss_neg must lie in [0, 1], got " +
                          std::to_string(p_miss_neg));
    }
}

const std::vector<std::uint32_t>& CandidateStateSet::conformity_of_row(
    std::size_t row) const {
    if (row >= row_to_unique.size()) {
        throw DimensionError("row index " + std::to_string(row) + " out of range");
    }
    return unique_conformity[row_to_unique[row]];
}

bool conforms(const std::vector<Cell>& row, const State& state) {
    if (static_cast<int>(row.size()) != state.n_vars) {
        throw DimensionError("row width " + std::to_string(row.size()) +
                             " does not match state width " +
                             std::to_string(state.n_vars));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == Cell::Missing) continue;
        const bool positive = row[i] == Cell::Positive;
        if (positive != state.bit(static_cast<int>(i))) return false;
    }
    return true;
}

double row_likelihood(const std::vector<Cell>& row, const State& state,
                      const MissingnessPrior& prior) {
    if (!conforms(row, state)) return 0.0;
    // Conforming pair: per-entry factors. Positive state entries are observed
    // with probability q = 1 - p_miss_pos and missing otherwise; negative
    // entries are observed with probability 1 - p_miss_neg and missing
    // otherwise. With the default p_miss_neg = 0.5 this collapses to
    // q^x (1-q)^(y-x) 0.5^(n-y).
    const double q = 1.0 - prior.p_miss_pos;
    double log_l = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const bool pos = state.bit(static_cast<int>(i));
        double factor;
        if (row[i] == Cell::Missing) {
            factor = pos ? prior.p_miss_pos : prior.p_miss_neg;
        } else {
            factor = pos ? q : 1.0 - prior.p_miss_neg;
        }
        if (factor == 0.0) return 0.0;
        log_l += std::log(factor);
    }
    return std::exp(log_l);
}

namespace {

std::vector<int> missing_indices(const std::vector<Cell>& row) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == Cell::Missing) idx.push_back(static_cast<int>(i));
    }
    return idx;
}

std::uint64_t observed_positive_bits(const std::vector<Cell>& row) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] == Cell::Positive) bits |= std::uint64_t{1} << i;
    }
    return bits;
}

}  // namespace

CandidateStateSet enumerate_candidates(const ObservationMatrix& obs, std::size_t cap) {
    obs.validate();
    if (cap == 0) throw ConfigError("candidate cap must be positive");

    CandidateStateSet cs;
    cs.n_vars = obs.n_vars();

    // Deduplicate rows in lexicographic order so the solver sees a canonical
    // multiset regardless of row order.
    std::map<std::vector<Cell>, double> row_counts;
    for (const auto& row : obs.rows) row_counts[row] += 1.0;
    cs.unique_rows.reserve(row_counts.size());
    cs.unique_weights.reserve(row_counts.size());
    std::map<std::vector<Cell>, std::uint32_t> row_index;
    for (const auto& [row, count] : row_counts) {
        row_index.emplace(row, static_cast<std::uint32_t>(cs.unique_rows.size()));
        cs.unique_rows.push_back(row);
        cs.unique_weights.push_back(count);
    }
    cs.row_to_unique.reserve(obs.n_rows());
    for (const auto& row : obs.rows) cs.row_to_unique.push_back(row_index.at(row));

    std::set<std::uint64_t> candidates;
    for (std::size_t u = 0; u < cs.unique_rows.size(); ++u) {
        const auto missing = missing_indices(cs.unique_rows[u]);
        if (missing.size() >= 63 ||
            (std::uint64_t{1} << missing.size()) > static_cast<std::uint64_t>(cap)) {
            throw CapacityError(
                "row with " + std::to_string(missing.size()) + " missing entries implies 2^" +
                std::to_string(missing.size()) +
                " completions, exceeding the candidate cap of " + std::to_string(cap) +
                "; raise the cap or subset the variables");
        }
        const std::uint64_t base = observed_positive_bits(cs.unique_rows[u]);
        const std::uint64_t n_completions = std::uint64_t{1} << missing.size();
        for (std::uint64_t mask = 0; mask < n_completions; ++mask) {
            std::uint64_t bits = base;
            for (std::size_t k = 0; k < missing.size(); ++k) {
                if ((mask >> k) & 1u) bits |= std::uint64_t{1} << missing[k];
            }
            candidates.insert(bits);
            if (candidates.size() > cap) {
                throw CapacityError(
                    "candidate set exceeded the cap of " + std::to_string(cap) + " after " +
                    std::to_string(u + 1) + " distinct rows; raise the cap or subset the "
                    "variables");
            }
        }
    }

    cs.states.reserve(candidates.size());
    for (std::uint64_t bits : candidates) {
        cs.states.push_back(State{bits, static_cast<int>(cs.n_vars)});
    }

    // Conformity as indices into the ascending state list.
    std::vector<std::uint64_t> sorted_bits(candidates.begin(), candidates.end());
    cs.unique_conformity.resize(cs.unique_rows.size());
    for (std::size_t u = 0; u < cs.unique_rows.size(); ++u) {
        const auto missing = missing_indices(cs.unique_rows[u]);
        const std::uint64_t base = observed_positive_bits(cs.unique_rows[u]);
        const std::uint64_t n_completions = std::uint64_t{1} << missing.size();
        std::vector<std::uint32_t> conf;
        conf.reserve(n_completions);
        for (std::uint64_t mask = 0; mask < n_completions; ++mask) {
            std::uint64_t bits = base;
            for (std::size_t k = 0; k < missing.size(); ++k) {
                if ((mask >> k) & 1u) bits |= std::uint64_t{1} << missing[k];
            }
            const auto it = std::lower_bound(sorted_bits.begin(), sorted_bits.end(), bits);
            conf.push_back(static_cast<std::uint32_t>(it - sorted_bits.begin()));
        }
        std::sort(conf.begin(), conf.end());
        cs.unique_conformity[u] = std::move(conf);
    }
    return cs;
}

LikelihoodTable::LikelihoodTable(const CandidateStateSet& cs,
                                 const MissingnessPrior& prior, unsigned threads)
    : n_candidates_(cs.states.size()),
      weights_(cs.unique_weights),
      rows_(cs.unique_rows.size()) {
    const double q = 1.0 - prior.p_miss_pos;
    const double log_q = std::log(q);
    const double log_miss_pos = std::log(prior.p_miss_pos);
    const double log_obs_neg =
        prior.p_miss_neg < 1.0 ? std::log(1.0 - prior.p_miss_neg) : 0.0;
    const double log_miss_neg = prior.p_miss_neg > 0.0 ? std::log(prior.p_miss_neg) : 0.0;

    parallel_for_index(cs.unique_rows.size(), threads, [&](std::size_t u) {
        const auto& row = cs.unique_rows[u];
        int x = 0, obs_neg = 0, miss = 0;
        for (const Cell c : row) {
            if (c == Cell::Positive) ++x;
            else if (c == Cell::Negative) ++obs_neg;
            else ++miss;
        }
        if (obs_neg > 0 && prior.p_miss_neg >= 1.0) return;  // row impossible
        const double base = x * log_q + obs_neg * log_obs_neg;
        auto& out = rows_[u];
        out.reserve(cs.unique_conformity[u].size());
        for (const std::uint32_t j : cs.unique_conformity[u]) {
            const int y = cs.states[j].positive_count();
            const int d = y - x;            // positives hidden behind missing entries
            const int miss_neg = miss - d;  // missing entries that are negative in S_j
            if (miss_neg > 0 && prior.p_miss_neg <= 0.0) continue;
            const double log_l = base + d * log_miss_pos + miss_neg * log_miss_neg;
            out.emplace_back(j, std::exp(log_l));
        }
    });
}

double LikelihoodTable::objective(std::span<const double> probs) const {
    double obj = 0.0;
    for (std::size_t u = 0; u < rows_.size(); ++u) {
        double p_row = 0.0;
        for (const auto& [j, l] : rows_[u]) p_row += l * probs[j];
        obj -= weights_[u] * std::log(std::max(p_row, kProbFloor));
    }
    return obj;
}

void LikelihoodTable::gradient(std::span<const double> probs,
                               std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t u = 0; u < rows_.size(); ++u) {
        double p_row = 0.0;
        for (const auto& [j, l] : rows_[u]) p_row += l * probs[j];
        const double scale = weights_[u] / std::max(p_row, kProbFloor);
        for (const auto& [j, l] : rows_[u]) out[j] -= scale * l;
    }
}

double objective(const SummaryDistribution& dist, const ObservationMatrix& obs,
                 const MissingnessPrior& prior) {
    if (obs.n_vars() != dist.candidate_set.n_vars) {
        throw DimensionError("observation width does not match the candidate set");
    }
    LikelihoodTable table(dist.candidate_set, prior);
    return table.objective(dist.probs);
}

std::vector<double> gradient(const SummaryDistribution& dist, const ObservationMatrix& obs,
                             const MissingnessPrior& prior) {
    if (obs.n_vars() != dist.candidate_set.n_vars) {
        throw DimensionError("observation width does not match the candidate set");
    }
    LikelihoodTable table(dist.candidate_set, prior);
    std::vector<double> g(dist.probs.size());
    table.gradient(dist.probs, g);
    return g;
}

std::vector<double> project_simplex(std::span<const double> v) {
    if (v.empty()) throw DimensionError("cannot project an empty vector");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double running = 0.0;
    double tau = 0.0;
    std::size_t support = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        running += sorted[k];
        const double candidate = (running - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            tau = candidate;
            support = k + 1;
        }
    }
    (void)support;
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
    return out;
}

namespace {

std::vector<double> initial_point(std::size_t n, const SolverOptions& opts) {
    std::vector<double> p(n);
    if (opts.init == SolverOptions::Init::Uniform) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
        return p;
    }
    // Symmetric Dirichlet(1): normalized Exp(1) draws.
    Rng rng = make_rng(opts.seed, SeedStream::Solver);
    std::exponential_distribution<double> exp_dist(1.0);
    double total = 0.0;
    for (auto& x : p) {
        x = exp_dist(rng);
        total += x;
    }
    for (auto& x : p) x /= total;
    return p;
}

}  // namespace

SummaryDistribution fit(const ObservationMatrix& obs, const MissingnessPrior& prior,
                        const SolverOptions& opts) {
    prior.validate();
    if (opts.tol <= 0.0) throw ConfigError("solver tol must be positive");
    if (opts.max_iters < 1) throw ConfigError("max_iters must be at least 1");

    SummaryDistribution dist;
    dist.candidate_set = enumerate_candidates(obs, opts.candidate_cap);
    const std::size_t n = dist.candidate_set.size();
    LikelihoodTable table(dist.candidate_set, prior, opts.threads);

    std::vector<double> p = project_simplex(initial_point(n, opts));
    double f = table.objective(p);
    std::vector<double> g(n), shifted(n);

    constexpr double kArmijoC = 1e-4;
    constexpr double kShrink = 0.5;
    constexpr double kMinStep = 1e-20;
    // Trial displacement bounds. The objective floor lets the gradient reach
    // ~1/epsilon_floor when a row loses its last supported candidate, so an
    // absolute step floor alone would abandon the search while step * |g| is
    // still enormous; backtracking must continue until the trial point itself
    // is numerically indistinct from p. The upper bound skips trials so far
    // outside the unit box that projecting them is pure cancellation noise;
    // Armijo could never accept them.
    constexpr double kMinShift = 1e-18;
    constexpr double kMaxShift = 1e9;

    bool converged = false;
    long iter = 0;
    while (iter < opts.max_iters) {
        ++iter;
        table.gradient(p, g);
        double g_max = 0.0;
        for (const double gi : g) g_max = std::max(g_max, std::abs(gi));

        double step = 1.0;
        bool accepted = false;
        std::vector<double> next;
        double f_next = f;
        // The flooring kinks the objective: once a row's conforming mass is
        // projected to zero, the linearized sufficient-decrease target grows
        // with the exploded gradient while the true decrease saturates, and
        // no step can satisfy Armijo. Remember the best strictly-improving
        // trial so an exhausted search still makes monotone progress.
        double best_f = f;
        std::vector<double> best_point;
        while (step >= kMinStep || step * g_max >= kMinShift) {
            if (step * g_max > kMaxShift) {
                step *= kShrink;
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) shifted[i] = p[i] - step * g[i];
            next = project_simplex(shifted);
            f_next = table.objective(next);
            double descent = 0.0;
            for (std::size_t i = 0; i < n; ++i) descent += g[i] * (next[i] - p[i]);
            if (f_next <= f + kArmijoC * descent) {
                accepted = true;
                break;
            }
            if (f_next < best_f) {
                best_f = f_next;
                best_point = next;
            }
            step *= kShrink;
        }
        if (!accepted && !best_point.empty()) {
            next = std::move(best_point);
            f_next = best_f;
            accepted = true;
        }
        if (!accepted) {
            // No trial decreases the objective: stationary up to rounding.
            converged = true;
            break;
        }
        const double change = std::abs(f - f_next) / std::max(1.0, std::abs(f));
        p = std::move(next);
        f = f_next;
        if (change < opts.tol) {
            converged = true;
            break;
        }
    }

    dist.probs = std::move(p);
    dist.objective = f;
    dist.iterations = iter;
    dist.converged = converged;
    return dist;
}

StateMatrix prune(const SummaryDistribution& dist, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw ConfigError("pruning threshold must lie in [0, 1), got " +
                          std::to_string(eps));
    }
    StateMatrix sm;
    sm.n_vars = dist.candidate_set.n_vars;
    double total = 0.0;
    for (std::size_t j = 0; j < dist.probs.size(); ++j) {
        if (dist.probs[j] > eps) {
            sm.states.push_back(dist.candidate_set.states[j]);
            sm.probs.push_back(dist.probs[j]);
            total += dist.probs[j];
        }
    }
    if (sm.states.empty()) {
        throw DegenerateResultError("pruning removed every state (eps = " +
                                    std::to_string(eps) + ")");
    }
    for (auto& p : sm.probs) p /= total;
    return sm;
}

}  // namespace pathinf
