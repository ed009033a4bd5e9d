#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>

#include "pathinf/rng.hpp"
#include "pathinf/simulate.hpp"
#include "pathinf/summarize.hpp"

#include "oracles.hpp"

using namespace pathinf;

namespace {

constexpr Cell P = Cell::Positive;
constexpr Cell N = Cell::Negative;
constexpr Cell M = Cell::Missing;

ObservationMatrix make_obs(std::vector<std::vector<Cell>> rows) {
    ObservationMatrix obs;
    for (std::size_t i = 0; i < rows[0].size(); ++i) {
        obs.labels.push_back("v" + std::to_string(i));
    }
    obs.rows = std::move(rows);
    return obs;
}

std::vector<std::string> state_strings(const CandidateStateSet& cs) {
    std::vector<std::string> out;
    for (const auto& st : cs.states) out.push_back(st.to_string());
    return out;
}

// Every length-n row over {0, 1, ?}.
std::vector<std::vector<Cell>> all_rows(int n) {
    std::vector<std::vector<Cell>> rows{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<Cell>> next;
        for (const auto& row : rows) {
            for (const Cell c : {N, P, M}) {
                auto extended = row;
                extended.push_back(c);
                next.push_back(std::move(extended));
            }
        }
        rows = std::move(next);
    }
    return rows;
}

}  // namespace

TEST_CASE("conforms checks observed entries only") {
    const State s1010 = State::from_string("1010");
    const State s1011 = State::from_string("1011");
    const std::vector<Cell> row{P, M, P, M};
    CHECK(conforms(row, s1010));
    CHECK(conforms(row, s1011));

    const std::vector<Cell> complete{P, N};
    CHECK(conforms(complete, State::from_string("10")));
    CHECK_FALSE(conforms(complete, State::from_string("00")));
    CHECK_FALSE(conforms(complete, State::from_string("01")));
    CHECK_FALSE(conforms(complete, State::from_string("11")));

    const std::vector<Cell> blank{M, M};
    for (const char* s : {"00", "10", "01", "11"}) {
        CHECK(conforms(blank, State::from_string(s)));
    }

    CHECK_THROWS_AS(conforms({P, N, P}, State::from_string("10")), DimensionError);
}

TEST_CASE("row likelihood multiplies per-entry factors") {
    const MissingnessPrior prior{0.4, 0.5};

    CHECK(row_likelihood({P, N}, State::from_string("01"), prior) == 0.0);

    // state 10, row (1,?): observed positive 0.6, missing negative 0.5.
    CHECK(row_likelihood({P, M}, State::from_string("10"), prior) ==
          doctest::Approx(0.3).epsilon(1e-12));

    // state 00, row (?,?): two missing negatives.
    CHECK(row_likelihood({M, M}, State::from_string("00"), prior) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(row_likelihood({M, M}, State::from_string("00"), MissingnessPrior{0.2, 0.5}) ==
          doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(row_likelihood({P}, State::from_string("10"), prior), DimensionError);
}

TEST_CASE("row likelihood is positive exactly on conforming pairs") {
    const MissingnessPrior prior{0.25, 0.5};
    for (const auto& row : all_rows(3)) {
        for (std::uint64_t bits = 0; bits < 8; ++bits) {
            const State st{bits, 3};
            const double l = row_likelihood(row, st, prior);
            CHECK((l > 0.0) == conforms(row, st));
            CHECK(l <= 1.0);
        }
    }
}

TEST_CASE("per state, likelihoods over all observation rows sum to one") {
    // The likelihood is a generative model of the observed row given the
    // state, so it normalizes over rows for each fixed state (not over
    // states for a fixed row).
    for (const MissingnessPrior prior : {MissingnessPrior{0.25, 0.5},
                                         MissingnessPrior{0.4, 0.3},
                                         MissingnessPrior{0.1, 0.9}}) {
        for (int n = 1; n <= 4; ++n) {
            const auto rows = all_rows(n);
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
                const State st{bits, n};
                double total = 0.0;
                for (const auto& row : rows) total += row_likelihood(row, st, prior);
                CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("candidate enumeration unions per-row completions") {
    SUBCASE("complete rows contribute only themselves") {
        const auto cs = enumerate_candidates(make_obs({{P, N}, {N, P}}), 1 << 10);
        CHECK(state_strings(cs) == std::vector<std::string>{"10", "01"});
    }
    SUBCASE("one missing bit yields two completions") {
        const auto cs = enumerate_candidates(make_obs({{P, M}}), 1 << 10);
        CHECK(state_strings(cs) == std::vector<std::string>{"10", "11"});
    }
    SUBCASE("union over rows deduplicates") {
        const auto cs = enumerate_candidates(make_obs({{P, M, M}, {M, M, P}}), 1 << 10);
        const auto strings = state_strings(cs);
        CHECK(strings.size() == 6);
        const std::set<std::string> got(strings.begin(), strings.end());
        CHECK(got == std::set<std::string>{"100", "110", "101", "111", "001", "011"});
    }
    SUBCASE("states are ascending by bit value") {
        const auto cs = enumerate_candidates(make_obs({{M, M}}), 1 << 10);
        REQUIRE(cs.states.size() == 4);
        for (std::size_t i = 1; i < cs.states.size(); ++i) {
            CHECK(cs.states[i - 1].bits < cs.states[i].bits);
        }
    }
}

TEST_CASE("candidate enumeration aggregates duplicate rows") {
    const auto cs = enumerate_candidates(
        make_obs({{P, N}, {N, P}, {P, N}, {P, N}}), 1 << 10);
    REQUIRE(cs.unique_rows.size() == 2);
    // Lexicographic unique order puts (0,1) before (1,0).
    CHECK(cs.unique_weights[0] == 1.0);
    CHECK(cs.unique_weights[1] == 3.0);
    CHECK(cs.row_to_unique == std::vector<std::uint32_t>{1, 0, 1, 1});
}

TEST_CASE("conformity sets match a brute-force check") {
    const auto obs = make_obs({{P, M, N}, {M, M, M}, {N, N, P}, {P, M, N}});
    const auto cs = enumerate_candidates(obs, 1 << 10);
    for (std::size_t i = 0; i < obs.n_rows(); ++i) {
        std::set<std::uint32_t> expected;
        for (std::uint32_t j = 0; j < cs.states.size(); ++j) {
            if (conforms(obs.rows[i], cs.states[j])) expected.insert(j);
        }
        const auto& got = cs.conformity_of_row(i);
        CHECK(std::set<std::uint32_t>(got.begin(), got.end()) == expected);
    }
}

TEST_CASE("candidate cap overflow raises a capacity error") {
    CHECK_THROWS_AS(enumerate_candidates(make_obs({{M, M, M}}), 4), CapacityError);
    std::vector<Cell> wide(25, M);
    CHECK_THROWS_AS(enumerate_candidates(make_obs({wide}), 1 << 20), CapacityError);
    try {
        enumerate_candidates(make_obs({{M, M, M}}), 4);
    } catch (const CapacityError& e) {
        const std::string what = e.what();
        CHECK(what.find("cap") != std::string::npos);
    }
}

TEST_CASE("objective sums weighted negative log row probabilities") {
    const MissingnessPrior prior{0.4, 0.5};
    const auto obs = make_obs({{P, M}, {M, M}});
    SummaryDistribution dist;
    dist.candidate_set = enumerate_candidates(obs, 1 << 10);
    REQUIRE(dist.candidate_set.size() == 4);  // 00, 10, 01, 11
    dist.probs = {0.5, 0.5, 0.0, 0.0};

    // P(row1) = 0.5 * L((1,?), "10") = 0.5 * 0.3
    // P(row2) = 0.5 * L((?,?), "00") + 0.5 * L((?,?), "10") = 0.5*0.25 + 0.5*0.2
    const double expected = -std::log(0.15) - std::log(0.225);
    CHECK(objective(dist, obs, prior) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("objective floors vanishing row probabilities") {
    const auto obs = make_obs({{P, M}, {N, N}});
    SummaryDistribution dist;
    dist.candidate_set = enumerate_candidates(obs, 1 << 10);
    REQUIRE(dist.candidate_set.size() == 3);  // 00, 10, 11
    dist.probs = {0.0, 1.0, 0.0};  // row (0,0) gets probability 0
    const MissingnessPrior prior{0.25, 0.5};
    const double f = objective(dist, obs, prior);
    CHECK(std::isfinite(f));
    CHECK(f > -std::log(kProbFloor) * 0.5);  // the floored term dominates
}

TEST_CASE("gradient matches the hand-differentiated one-row case") {
    const MissingnessPrior prior{0.4, 0.5};
    const auto obs = make_obs({{P, M}});
    SummaryDistribution dist;
    dist.candidate_set = enumerate_candidates(obs, 1 << 10);
    REQUIRE(dist.candidate_set.size() == 2);  // 10, 11
    dist.probs = {0.5, 0.5};
    const double l1 = 0.3;   // L((1,?), "10")
    const double l2 = 0.24;  // L((1,?), "11") = 0.6 * 0.4
    const double denom = 0.5 * l1 + 0.5 * l2;
    const auto g = gradient(dist, obs, prior);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == doctest::Approx(-l1 / denom).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-l2 / denom).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences on random instances") {
    Rng rng(20240817);
    std::uniform_int_distribution<int> n_dist(2, 4);
    std::uniform_int_distribution<int> m_dist(1, 20);
    std::uniform_int_distribution<int> cell_dist(0, 2);
    std::uniform_real_distribution<double> p_pos_dist(0.05, 0.45);
    std::uniform_real_distribution<double> p_neg_dist(0.1, 0.9);
    std::exponential_distribution<double> exp_dist(1.0);

    for (int instance = 0; instance < 25; ++instance) {
        const int n = n_dist(rng);
        const int m = m_dist(rng);
        std::vector<std::vector<Cell>> rows;
        for (int i = 0; i < m; ++i) {
            std::vector<Cell> row;
            for (int j = 0; j < n; ++j) row.push_back(static_cast<Cell>(cell_dist(rng)));
            rows.push_back(std::move(row));
        }
        const auto obs = make_obs(std::move(rows));
        const MissingnessPrior prior{p_pos_dist(rng), p_neg_dist(rng)};
        const auto cs = enumerate_candidates(obs, 1 << 10);
        LikelihoodTable table(cs, prior);

        // Strictly interior simplex point: Dirichlet draw mixed with uniform.
        std::vector<double> p(cs.size());
        double total = 0.0;
        for (auto& x : p) {
            x = exp_dist(rng);
            total += x;
        }
        for (auto& x : p) x = 0.5 * (x / total) + 0.5 / static_cast<double>(p.size());

        std::vector<double> g(p.size());
        table.gradient(p, g);
        const auto fd = oracle::fd_gradient(table, p, 1e-6);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double scale = std::max({std::abs(g[j]), std::abs(fd[j]), 1e-6});
            CHECK(std::abs(g[j] - fd[j]) / scale <= 1e-5);
        }
    }
}

TEST_CASE("likelihood table reproduces dense per-pair likelihoods") {
    Rng rng(99);
    std::uniform_int_distribution<int> cell_dist(0, 2);
    std::exponential_distribution<double> exp_dist(1.0);
    for (const MissingnessPrior prior : {MissingnessPrior{0.25, 0.5},
                                         MissingnessPrior{0.35, 0.3}}) {
        std::vector<std::vector<Cell>> rows;
        for (int i = 0; i < 12; ++i) {
            std::vector<Cell> row;
            for (int j = 0; j < 4; ++j) row.push_back(static_cast<Cell>(cell_dist(rng)));
            rows.push_back(std::move(row));
        }
        const auto obs = make_obs(std::move(rows));
        const auto cs = enumerate_candidates(obs, 1 << 10);
        LikelihoodTable table(cs, prior);

        std::vector<double> p(cs.size());
        double total = 0.0;
        for (auto& x : p) {
            x = exp_dist(rng) + 0.01;
            total += x;
        }
        for (auto& x : p) x /= total;

        double expected = 0.0;
        for (const auto& row : obs.rows) {
            double p_row = 0.0;
            for (std::size_t j = 0; j < cs.size(); ++j) {
                p_row += row_likelihood(row, cs.states[j], prior) * p[j];
            }
            expected -= std::log(std::max(p_row, kProbFloor));
        }
        CHECK(table.objective(p) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("simplex projection follows the sort-and-threshold rule") {
    SUBCASE("points on the simplex are fixed") {
        const std::vector<double> v{0.2, 0.5, 0.3};
        const auto p = project_simplex(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(p[i] == doctest::Approx(v[i]).epsilon(1e-12));
        }
    }
    SUBCASE("worked examples") {
        const auto p1 = project_simplex(std::vector<double>{2.0, 0.0});
        CHECK(p1[0] == doctest::Approx(1.0));
        CHECK(p1[1] == doctest::Approx(0.0));
        const auto p2 = project_simplex(std::vector<double>{0.5, 0.5, 0.5});
        for (const double x : p2) CHECK(x == doctest::Approx(1.0 / 3));
    }
    SUBCASE("feasibility and optimality against random simplex points") {
        Rng rng(7);
        std::uniform_real_distribution<double> coord(-2.0, 2.0);
        std::exponential_distribution<double> exp_dist(1.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> v(5);
            for (auto& x : v) x = coord(rng);
            const auto p = project_simplex(v);
            double sum = 0.0;
            for (const double x : p) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

            const auto again = project_simplex(p);
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(again[i] == doctest::Approx(p[i]).epsilon(1e-9));
            }

            double p_dist = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                p_dist += (p[i] - v[i]) * (p[i] - v[i]);
            }
            for (int other = 0; other < 1000; ++other) {
                std::vector<double> q(v.size());
                double total = 0.0;
                for (auto& x : q) {
                    x = exp_dist(rng);
                    total += x;
                }
                double q_dist = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    q[i] /= total;
                    q_dist += (q[i] - v[i]) * (q[i] - v[i]);
                }
                CHECK(p_dist <= q_dist + 1e-12);
            }
        }
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(project_simplex(std::vector<double>{}), DimensionError);
    }
}

TEST_CASE("fit recovers empirical frequencies on complete data") {
    std::vector<std::vector<Cell>> rows;
    for (int i = 0; i < 7; ++i) rows.push_back({P, N});
    for (int i = 0; i < 3; ++i) rows.push_back({N, P});
    const auto obs = make_obs(std::move(rows));
    const auto dist = fit(obs, MissingnessPrior{});
    REQUIRE(dist.candidate_set.size() == 2);
    CHECK(dist.converged);
    CHECK(dist.candidate_set.states[0].to_string() == "10");
    CHECK(dist.probs[0] == doctest::Approx(0.7).epsilon(1e-4));
    CHECK(dist.probs[1] == doctest::Approx(0.3).epsilon(1e-4));
}

TEST_CASE("fit with a single candidate settles immediately") {
    const auto obs = make_obs({{P, P}, {P, P}});
    const auto dist = fit(obs, MissingnessPrior{});
    REQUIRE(dist.candidate_set.size() == 1);
    CHECK(dist.probs[0] == 1.0);
    CHECK(dist.converged);
}

TEST_CASE("fit zeroes a dominated superset state") {
    // Both states conform to every row; the one with an extra unobserved
    // positive pays (1-q) < 0.5 per row and is driven to zero.
    std::vector<std::vector<Cell>> rows(50, std::vector<Cell>{P, N, P, M});
    const auto obs = make_obs(std::move(rows));
    const MissingnessPrior prior{0.3, 0.5};
    const auto dist = fit(obs, prior);
    REQUIRE(dist.candidate_set.size() == 2);
    CHECK(dist.candidate_set.states[0].to_string() == "1010");
    CHECK(dist.candidate_set.states[1].to_string() == "1011");
    CHECK(dist.probs[0] >= 0.999);

    const auto sm = prune(dist);
    REQUIRE(sm.states.size() == 1);
    CHECK(sm.states[0].to_string() == "1010");
    CHECK(sm.probs[0] == 1.0);
}

TEST_CASE("fit never increases the objective") {
    Rng rng(4242);
    std::uniform_int_distribution<int> cell_dist(0, 2);
    for (int instance = 0; instance < 5; ++instance) {
        std::vector<std::vector<Cell>> rows;
        for (int i = 0; i < 15; ++i) {
            std::vector<Cell> row;
            for (int j = 0; j < 4; ++j) row.push_back(static_cast<Cell>(cell_dist(rng)));
            rows.push_back(std::move(row));
        }
        const auto obs = make_obs(std::move(rows));
        const MissingnessPrior prior{0.25, 0.5};
        const auto dist = fit(obs, prior);

        SummaryDistribution uniform;
        uniform.candidate_set = enumerate_candidates(obs, 1 << 20);
        uniform.probs.assign(uniform.candidate_set.size(),
                             1.0 / static_cast<double>(uniform.candidate_set.size()));
        CHECK(dist.objective <= objective(uniform, obs, prior) + 1e-12);
    }
}

TEST_CASE("fit is deterministic for both initializations") {
    const auto obs = make_obs({{P, M, N}, {M, P, N}, {N, M, P}, {P, P, M}});
    const MissingnessPrior prior{0.25, 0.5};

    const auto a = fit(obs, prior);
    const auto b = fit(obs, prior);
    CHECK(a.probs == b.probs);
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective == b.objective);

    SolverOptions random_init;
    random_init.init = SolverOptions::Init::Random;
    random_init.seed = 7;
    const auto c = fit(obs, prior, random_init);
    const auto d = fit(obs, prior, random_init);
    CHECK(c.probs == d.probs);
    CHECK(c.objective == doctest::Approx(a.objective).epsilon(1e-6));
}

TEST_CASE("prune keeps states above the threshold and renormalizes") {
    const auto obs = make_obs({{P, M}, {N, N}});
    SummaryDistribution dist;
    dist.candidate_set = enumerate_candidates(obs, 1 << 10);
    REQUIRE(dist.candidate_set.size() == 3);  // 00, 10, 11

    SUBCASE("exact zeros are removed without renormalization") {
        dist.probs = {0.7, 0.3, 0.0};
        const auto sm = prune(dist, 1e-6);
        REQUIRE(sm.states.size() == 2);
        CHECK(sm.probs[0] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(sm.probs[1] == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("tiny probabilities trigger renormalization") {
        dist.probs = {0.6999, 0.2999, 0.0002};
        const auto sm = prune(dist, 1e-3);
        REQUIRE(sm.states.size() == 2);
        CHECK(sm.probs[0] == doctest::Approx(0.70003).epsilon(1e-4));
        CHECK(sm.probs[1] == doctest::Approx(0.29997).epsilon(1e-4));
        CHECK(sm.probs[0] + sm.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("a lone state passes through") {
        dist.probs = {1.0, 0.0, 0.0};
        const auto sm = prune(dist, 0.5);
        REQUIRE(sm.states.size() == 1);
        CHECK(sm.probs[0] == 1.0);
    }
    SUBCASE("removing everything is an error") {
        dist.probs = {0.4, 0.3, 0.3};
        CHECK_THROWS_AS(prune(dist, 0.5), DegenerateResultError);
    }
    SUBCASE("threshold is validated") {
        dist.probs = {1.0, 0.0, 0.0};
        CHECK_THROWS_AS(prune(dist, 1.0), ConfigError);
        CHECK_THROWS_AS(prune(dist, -0.1), ConfigError);
    }
}

TEST_CASE("fit matches a dense grid search on tiny instances") {
    Rng rng(31337);
    std::uniform_int_distribution<int> cell_dist(0, 2);
    int done = 0;
    while (done < 5) {
        std::vector<std::vector<Cell>> rows;
        const int m = 4 + static_cast<int>(rng() % 8);
        for (int i = 0; i < m; ++i) {
            std::vector<Cell> row;
            for (int j = 0; j < 3; ++j) row.push_back(static_cast<Cell>(cell_dist(rng)));
            rows.push_back(std::move(row));
        }
        const auto obs = make_obs(std::move(rows));
        const auto cs = enumerate_candidates(obs, 1 << 10);
        if (cs.size() > 4) continue;
        ++done;
        const MissingnessPrior prior{0.25, 0.5};
        const auto dist = fit(obs, prior);
        LikelihoodTable table(cs, prior);
        const double grid_min = oracle::grid_min_objective(table, cs.size(), 100);
        CHECK(dist.objective <= grid_min + 1e-3);
        CHECK(grid_min - dist.objective <= 2.5e-2);
    }
}

TEST_CASE("fit reaches the multiplicative-update optimum on simulated data") {
    // Regression guard: on datasets this size the projection zeroes whole
    // conformity sets mid-descent, the floored rows blow up the gradient, and
    // a line search bounded by an absolute minimum step stalls hundreds above
    // the optimum while reporting convergence.
    SimulationConfig cfg;
    cfg.p_miss_pos = 0.2;
    cfg.seed = 42;
    const auto data = generate_dataset(cfg);
    const MissingnessPrior prior{0.2, 0.5};
    const auto dist = fit(data.observations, prior);
    CHECK(dist.converged);

    const auto& cs = dist.candidate_set;
    LikelihoodTable table(cs, prior);
    double total_weight = 0.0;
    for (const double w : cs.unique_weights) total_weight += w;
    const double em = oracle::em_min_objective(table, cs.size(), total_weight, 5000);
    CHECK(dist.objective <= em + 0.1);
    CHECK(dist.objective >= em - 1e-6);
}

TEST_CASE("input validation rejects malformed matrices and priors") {
    ObservationMatrix obs;
    CHECK_THROWS_AS(obs.validate(), ConfigError);  // no labels
    obs.labels = {"a", "a"};
    obs.rows = {{P, N}};
    CHECK_THROWS_AS(obs.validate(), ConfigError);  // duplicate labels
    obs.labels = {"a", "b"};
    obs.rows = {{P, N, P}};
    CHECK_THROWS_AS(obs.validate(), DimensionError);
    obs.rows = {};
    CHECK_THROWS_AS(obs.validate(), ConfigError);  // no rows

    CHECK_THROWS_AS((MissingnessPrior{0.0, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((MissingnessPrior{0.5, 0.5}.validate()), ConfigError);
    CHECK_THROWS_AS((MissingnessPrior{0.25, 1.5}.validate()), ConfigError);
    CHECK_NOTHROW((MissingnessPrior{0.25, 0.5}.validate()));
}
