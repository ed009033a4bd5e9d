#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <doctest.h>

#include "pathinf/simulate.hpp"

using namespace pathinf;

namespace {

GroundTruthDag make_dag(int n, std::vector<DagEdge> edges) {
    GroundTruthDag dag;
    dag.n_nodes = n;
    dag.edges = std::move(edges);
    return dag;
}

}  // namespace

TEST_CASE("dag validation catches structural defects") {
    auto ok = make_dag(3, {{0, 1, 0.5}, {1, 2, 1.0}});
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.sources() == std::vector<int>{0});
    CHECK(ok.skeleton() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    CHECK_THROWS_AS(make_dag(2, {{0, 0, 1.0}}).validate(), ConfigError);
    CHECK_THROWS_AS(make_dag(2, {{0, 2, 1.0}}).validate(), DimensionError);
    CHECK_THROWS_AS(make_dag(2, {{0, 1, 0.0}}).validate(), ConfigError);
    CHECK_THROWS_AS(make_dag(2, {{0, 1, 1.0}, {0, 1, 0.3}}).validate(), ConfigError);
    CHECK_THROWS_AS(make_dag(2, {{0, 1, 1.0}, {1, 0, 0.3}}).validate(), ConfigError);
    CHECK_FALSE(make_dag(2, {{0, 1, 1.0}, {1, 0, 0.3}}).is_acyclic());
}

TEST_CASE("simulation config validation") {
    SimulationConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    cfg.p_miss_pos = 0.0;
    cfg.p_miss_neg = 0.0;
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("node count bounds") {
        cfg.n_nodes = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg.n_nodes = 64;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
    SUBCASE("edge count must fit the node count") {
        cfg.n_nodes = 7;
        cfg.n_edges = 26;
        CHECK_THROWS_WITH_AS(cfg.validate(),
                             doctest::Contains("infeasible edge count"), ConfigError);
        cfg.n_edges = -1;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg.n_edges = 21;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("remaining scalar ranges") {
        cfg.n_samples = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SimulationConfig{};
        cfg.poisson_lambda = 0.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SimulationConfig{};
        cfg.p_miss_pos = 0.5;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SimulationConfig{};
        cfg.p_miss_neg = 1.5;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}

TEST_CASE("random dag respects the requested shape") {
    SUBCASE("two nodes one edge") {
        auto rng = make_rng(7, SeedStream::Dag);
        const auto dag = random_dag(2, 1, rng);
        REQUIRE(dag.edges.size() == 1);
        CHECK(dag.skeleton() == std::vector<std::pair<int, int>>{{0, 1}});
        CHECK(dag.edges[0].weight > 0.0);
        CHECK(dag.edges[0].weight <= 1.0);
    }
    SUBCASE("dense case stays acyclic") {
        auto rng = make_rng(11, SeedStream::Dag);
        const auto dag = random_dag(10, 25, rng);
        CHECK(dag.edges.size() == 25);
        CHECK(dag.is_acyclic());
        CHECK_FALSE(dag.sources().empty());
        CHECK(std::is_sorted(dag.edges.begin(), dag.edges.end(),
                             [](const DagEdge& a, const DagEdge& b) {
                                 return std::pair{a.from, a.to} < std::pair{b.from, b.to};
                             }));
        const auto skel = dag.skeleton();
        CHECK(std::set<std::pair<int, int>>(skel.begin(), skel.end()).size() == 25);
    }
    SUBCASE("infeasible edge counts are rejected") {
        auto rng = make_rng(1, SeedStream::Dag);
        CHECK_THROWS_WITH_AS(random_dag(7, 26, rng),
                             doctest::Contains("infeasible edge count"), ConfigError);
        CHECK_THROWS_AS(random_dag(0, 0, rng), ConfigError);
    }
    SUBCASE("deterministic under the same generator state") {
        auto rng_a = make_rng(42, SeedStream::Dag);
        auto rng_b = make_rng(42, SeedStream::Dag);
        const auto a = random_dag(8, 13, rng_a);
        const auto b = random_dag(8, 13, rng_b);
        REQUIRE(a.edges.size() == b.edges.size());
        for (std::size_t i = 0; i < a.edges.size(); ++i) {
            CHECK(a.edges[i].from == b.edges[i].from);
            CHECK(a.edges[i].to == b.edges[i].to);
            CHECK(a.edges[i].weight == b.edges[i].weight);
        }
    }
}

TEST_CASE("random dag skeletons are uniform over pair triples") {
    // With 4 nodes and 3 edges the skeleton is a uniform 3-subset of the 6
    // unordered pairs: the permutation maps position pairs to label pairs
    // bijectively, so each of the C(6,3) = 20 subsets has probability 1/20.
    const int draws = 1000;
    std::map<std::vector<std::pair<int, int>>, int> counts;
    std::map<std::pair<int, int>, std::pair<int, int>> direction;  // pair -> {fwd, present}
    for (int i = 0; i < draws; ++i) {
        auto rng = make_rng(999, SeedStream::Dag, static_cast<std::uint64_t>(i));
        const auto dag = random_dag(4, 3, rng);
        counts[dag.skeleton()] += 1;
        for (const auto& e : dag.edges) {
            auto& d = direction[{std::min(e.from, e.to), std::max(e.from, e.to)}];
            if (e.from < e.to) d.first += 1;
            d.second += 1;
        }
    }
    REQUIRE(counts.size() == 20);

    const double expected = draws / 20.0;
    double stat = 0.0;
    for (const auto& [skel, count] : counts) {
        const double delta = count - expected;
        stat += delta * delta / expected;
    }
    const boost::math::chi_squared dist(19);
    const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
    CHECK(p_value > 0.001);

    // Orientation of a present edge follows the permutation, a fair coin.
    for (const auto& [pair, d] : direction) {
        CHECK(d.second > 300);
        const double fwd = static_cast<double>(d.first) / d.second;
        CHECK(fwd > 0.4);
        CHECK(fwd < 0.6);
    }
}

TEST_CASE("cascades grow along edges from a single source") {
    const auto chain = make_dag(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    SUBCASE("chain samples are prefixes") {
        std::set<std::vector<std::uint8_t>> seen;
        auto rng = make_rng(5, SeedStream::Sample);
        for (int i = 0; i < 1000; ++i) seen.insert(sample_cascade(chain, 1.0, rng));
        const std::set<std::vector<std::uint8_t>> prefixes = {
            {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
        CHECK(seen == prefixes);
    }
    SUBCASE("large step counts saturate the reachable set") {
        auto rng = make_rng(6, SeedStream::Sample);
        for (int i = 0; i < 50; ++i) {
            CHECK(sample_cascade(chain, 50.0, rng) == std::vector<std::uint8_t>{1, 1, 1});
        }
    }
    SUBCASE("lambda must be positive") {
        auto rng = make_rng(7, SeedStream::Sample);
        CHECK_THROWS_AS(sample_cascade(chain, 0.0, rng), ConfigError);
    }
}

TEST_CASE("cascade transitions follow edge weights") {
    const auto fork = make_dag(3, {{0, 1, 0.9}, {0, 2, 0.1}});
    auto rng = make_rng(21, SeedStream::Sample);
    int two_positive = 0;
    int picked_heavy = 0;
    for (int i = 0; i < 30000; ++i) {
        const auto sample = sample_cascade(fork, 1.0, rng);
        const int positives = sample[0] + sample[1] + sample[2];
        if (positives != 2) continue;
        two_positive += 1;
        if (sample[1] == 1) picked_heavy += 1;
    }
    REQUIRE(two_positive > 8000);
    const double frequency = static_cast<double>(picked_heavy) / two_positive;
    CHECK(frequency == doctest::Approx(0.9).epsilon(0.015));
}

TEST_CASE("missing-value injection masks entries independently") {
    std::vector<std::uint8_t> sample(1000);
    for (std::size_t i = 500; i < 1000; ++i) sample[i] = 1;

    SUBCASE("zero probabilities keep everything observed") {
        auto rng = make_rng(1, SeedStream::Sample);
        const auto cells = inject_missing(sample, 0.0, 0.0, rng);
        REQUIRE(cells.size() == sample.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            CHECK(cells[i] == (sample[i] ? Cell::Positive : Cell::Negative));
        }
    }
    SUBCASE("unit probabilities hide everything") {
        auto rng = make_rng(2, SeedStream::Sample);
        const auto cells = inject_missing(sample, 1.0, 1.0, rng);
        for (const Cell c : cells) CHECK(c == Cell::Missing);
    }
    SUBCASE("masking rates match the priors") {
        int missing_pos = 0;
        int missing_neg = 0;
        for (int rep = 0; rep < 1; ++rep) {
            auto rng = make_rng(3, SeedStream::Sample);
            const auto cells = inject_missing(sample, 0.4, 0.5, rng);
            for (std::size_t i = 0; i < 500; ++i) {
                if (cells[i] == Cell::Missing) missing_neg += 1;
            }
            for (std::size_t i = 500; i < 1000; ++i) {
                if (cells[i] == Cell::Missing) missing_pos += 1;
            }
        }
        CHECK(missing_pos > 200 - 45);
        CHECK(missing_pos < 200 + 45);
        CHECK(missing_neg > 250 - 45);
        CHECK(missing_neg < 250 + 45);
    }
    SUBCASE("probabilities outside the unit interval are rejected") {
        auto rng = make_rng(4, SeedStream::Sample);
        CHECK_THROWS_AS(inject_missing(sample, -0.1, 0.5, rng), ConfigError);
        CHECK_THROWS_AS(inject_missing(sample, 0.2, 1.1, rng), ConfigError);
    }
}

TEST_CASE("dataset generation is reproducible and well formed") {
    SimulationConfig cfg;
    cfg.n_nodes = 8;
    cfg.n_edges = 12;
    cfg.n_samples = 200;
    cfg.seed = 31;

    const auto a = generate_dataset(cfg);
    const auto b = generate_dataset(cfg);
    CHECK(a.observations.rows == b.observations.rows);
    REQUIRE(a.truth.edges.size() == b.truth.edges.size());
    for (std::size_t i = 0; i < a.truth.edges.size(); ++i) {
        CHECK(a.truth.edges[i].from == b.truth.edges[i].from);
        CHECK(a.truth.edges[i].to == b.truth.edges[i].to);
        CHECK(a.truth.edges[i].weight == b.truth.edges[i].weight);
    }

    CHECK(a.observations.n_rows() == 200);
    CHECK(a.observations.n_vars() == 8);
    CHECK(a.observations.labels[0] == "n0");
    CHECK(a.observations.labels[7] == "n7");
    CHECK_NOTHROW(a.observations.validate());
    CHECK(a.truth.edges.size() == 12);

    SimulationConfig other = cfg;
    other.seed = 32;
    const auto c = generate_dataset(other);
    CHECK(a.observations.rows != c.observations.rows);
}

TEST_CASE("complete datasets are valid cascade snapshots") {
    SimulationConfig cfg;
    cfg.n_nodes = 9;
    cfg.n_edges = 14;
    cfg.n_samples = 300;
    cfg.p_miss_pos = 0.0;
    cfg.p_miss_neg = 0.0;
    cfg.seed = 77;

    const auto data = generate_dataset(cfg);
    std::vector<std::set<int>> in_neighbors(static_cast<std::size_t>(cfg.n_nodes));
    for (const auto& e : data.truth.edges) {
        in_neighbors[static_cast<std::size_t>(e.to)].insert(e.from);
    }

    for (const auto& row : data.observations.rows) {
        std::set<int> positives;
        for (int v = 0; v < cfg.n_nodes; ++v) {
            CHECK(row[static_cast<std::size_t>(v)] != Cell::Missing);
            if (row[static_cast<std::size_t>(v)] == Cell::Positive) positives.insert(v);
        }
        REQUIRE_FALSE(positives.empty());
        // Exactly one positive lacks a positive in-neighbor: the source.
        int orphan = 0;
        for (const int v : positives) {
            bool fed = false;
            for (const int u : in_neighbors[static_cast<std::size_t>(v)]) {
                if (positives.count(u)) fed = true;
            }
            if (!fed) orphan += 1;
        }
        CHECK(orphan == 1);
    }
}
