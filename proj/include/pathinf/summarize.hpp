#pragma once

// Stage one of the pipeline: summarize a binary observation matrix with
// missing values into a sparse distribution over latent states.
//
// The observation model treats each state entry independently: a positive
// entry is observed with probability q = 1 - p_miss_pos and missing
// otherwise; a negative entry is observed with probability 1 - p_miss_neg
// and missing otherwise. A state is conformed with a row when every
// observed entry matches. The state distribution is fitted by minimizing
// the negative log-likelihood of the rows over the probability simplex
// with projected gradient descent, then pruned to its positive support.

#include <cstdint>
#include <span>
#include <vector>

#include "pathinf/types.hpp"

namespace pathinf {

// Finite support for the simplex optimization: the union over rows of all
// completions of each row's missing entries. States outside this set have
// zero likelihood against every row and an optimal probability of zero.
struct CandidateStateSet {
    std::size_t n_vars = 0;
    std::vector<State> states;  // distinct, ascending by bit value

    // Observation rows deduplicated in lexicographic order; weights carry
    // the multiplicities so the objective stays that of the full matrix.
    std::vector<std::vector<Cell>> unique_rows;
    std::vector<double> unique_weights;
    std::vector<std::uint32_t> row_to_unique;
    std::vector<std::vector<std::uint32_t>> unique_conformity;

    std::size_t size() const { return states.size(); }

    // Conformity set {j : row i conforms to states[j]} for an original row.
    const std::vector<std::uint32_t>& conformity_of_row(std::size_t row) const;
};

struct SolverOptions {
    double tol = 1e-9;           // relative objective change for convergence
    long max_iters = 20000;
    enum class Init { Uniform, Random } init = Init::Uniform;
    std::uint64_t seed = 0;      // used by Init::Random
    std::size_t candidate_cap = std::size_t{1} << 20;
    unsigned threads = 1;        // workers for the likelihood table build
};

struct SummaryDistribution {
    CandidateStateSet candidate_set;
    std::vector<double> probs;   // aligned with candidate_set.states
    double objective = 0.0;      // final value of the negative log-likelihood
    long iterations = 0;
    bool converged = false;
};

// The sparse summary: states retained after pruning, probabilities
// renormalized to sum to one.
struct StateMatrix {
    std::size_t n_vars = 0;
    std::vector<State> states;
    std::vector<double> probs;
};

// Per-(row, state) likelihoods stored sparsely: only conforming pairs are
// kept. Rows here are the deduplicated observation rows.
class LikelihoodTable {
  public:
    LikelihoodTable(const CandidateStateSet& cs, const MissingnessPrior& prior,
                    unsigned threads = 1);

    std::size_t n_candidates() const { return n_candidates_; }

    // -sum_i c_i ln(max(P(O_i), floor)) with P(O_i) = sum_j L_ij probs_j.
    double objective(std::span<const double> probs) const;

    // grad_j = -sum_i c_i L_ij / max(P(O_i), floor).
    void gradient(std::span<const double> probs, std::span<double> out) const;

  private:
    std::size_t n_candidates_ = 0;
    std::vector<double> weights_;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows_;
};

inline constexpr double kProbFloor = 1e-300;  // floor inside ln()

// True iff every non-missing entry of the row equals the corresponding
// state bit. Throws DimensionError on width mismatch.
bool conforms(const std::vector<Cell>& row, const State& state);

// P(row | state) under the missingness priors; zero when not conforming.
double row_likelihood(const std::vector<Cell>& row, const State& state,
                      const MissingnessPrior& prior);

// Enumerates the union of per-row missing-entry completions. Throws
// CapacityError when the distinct candidate count would exceed cap.
CandidateStateSet enumerate_candidates(const ObservationMatrix& obs, std::size_t cap);

// Objective and gradient of the fitted distribution against obs; thin
// wrappers over LikelihoodTable for callers holding a SummaryDistribution.
double objective(const SummaryDistribution& dist, const ObservationMatrix& obs,
                 const MissingnessPrior& prior);
std::vector<double> gradient(const SummaryDistribution& dist, const ObservationMatrix& obs,
                             const MissingnessPrior& prior);

// Euclidean projection onto the probability simplex (sort-and-threshold).
std::vector<double> project_simplex(std::span<const double> v);

// Fits the state distribution by projected gradient descent with Armijo
// backtracking, starting from the configured initialization. Non-convergence
// at max_iters returns the best iterate with converged = false.
SummaryDistribution fit(const ObservationMatrix& obs, const MissingnessPrior& prior,
                        const SolverOptions& opts = {});

// Keeps states with probability > eps and renormalizes. Throws
// DegenerateResultError if nothing survives.
StateMatrix prune(const SummaryDistribution& dist, double eps = 1e-6);

}  // namespace pathinf
