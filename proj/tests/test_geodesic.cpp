#include <doctest.h>

#include "geoc/error.hpp"
#include "geoc/geodesic.hpp"
#include "geoc/synth.hpp"
#include "oracles.hpp"

using namespace geoc;

namespace {

NeighborGraph path_graph(std::size_t n, double w = 1.0) {
    NeighborGraph g;
    g.n = n;
    g.adjacency.assign(n, {});
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, w);
    return g;
}

}  // namespace

TEST_CASE("path A-B-C with unit weights") {
    const auto geo = all_pairs_geodesic(path_graph(3));
    CHECK(geo.distances(0, 2) == 2.0);
    CHECK(geo.distances(2, 0) == 2.0);
    CHECK(geo.distances(1, 1) == 0.0);
}

TEST_CASE("complete metric graph keeps its edge weights") {
    const auto x = oracle::random_matrix(7, 3, 2);
    const auto g = build_knn_graph(oracle::dataset(x), 6);
    const auto geo = all_pairs_geodesic(g);
    const auto d = oracle::pairwise_distances(x);
    CHECK((geo.distances - d).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("matches Floyd-Warshall on random connected graphs") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const std::size_t n = 2 + seed % 49;
        const auto g = oracle::random_connected_graph(n, seed, 0.05 + 0.01 * static_cast<double>(seed % 10));
        const auto geo = all_pairs_geodesic(g, {2, 2ULL << 30});
        const auto fw = oracle::floyd_warshall(g);
        CHECK((geo.distances - fw).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(geo.distances == geo.distances.transpose());
    }
}

TEST_CASE("single source from the matrix") {
    const auto g = path_graph(5);
    const auto geo = all_pairs_geodesic(g);

    SUBCASE("coincident with a vertex") {
        const std::vector<EntryEdge> entry{{2, 0.0}};
        const auto d = single_source_geodesic(geo, entry);
        for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == geo.distances(2, static_cast<Eigen::Index>(i)));
    }
    SUBCASE("one entry edge adds its weight") {
        const std::vector<EntryEdge> entry{{1, 0.25}};
        const auto d = single_source_geodesic(geo, entry);
        for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == doctest::Approx(0.25 + std::abs(1.0 - static_cast<double>(i))));
    }
    SUBCASE("two entries take the element-wise minimum") {
        const std::vector<EntryEdge> entry{{0, 1.5}, {4, 0.5}};
        const auto d = single_source_geodesic(geo, entry);
        const std::vector<double> expected{1.5, 2.5, 2.5, 1.5, 0.5};
        for (std::size_t i = 0; i < 5; ++i) CHECK(d[i] == doctest::Approx(expected[i]));
    }
}

TEST_CASE("augmented Dijkstra agrees with the matrix form") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto g = oracle::random_connected_graph(30, seed, 0.1);
        const auto geo = all_pairs_geodesic(g);
        SplitMix64 rng(seed);
        std::vector<EntryEdge> entry;
        for (int e = 0; e < 3; ++e) entry.push_back({rng.below(30), rng.uniform(0.0, 2.0)});
        const auto a = single_source_geodesic(geo, entry);
        const auto b = single_source_geodesic(g, entry);
        for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    }
}

TEST_CASE("adding an edge never increases any distance") {
    auto g = oracle::random_connected_graph(25, 7, 0.05);
    const auto before = all_pairs_geodesic(g);
    g.add_edge(0, 24, 0.01);
    const auto after = all_pairs_geodesic(g);
    CHECK((after.distances.array() <= before.distances.array()).all());
}

TEST_CASE("triangle inequality on a neighbor graph") {
    const auto sample = gen_swiss_roll(120, 0.1, 5);
    const auto geo = all_pairs_geodesic(build_knn_graph(sample.dataset, 6));
    const auto& d = geo.distances;
    for (Eigen::Index i = 0; i < 120; i += 7)
        for (Eigen::Index j = 0; j < 120; j += 5)
            for (Eigen::Index k = 0; k < 120; k += 11) CHECK(d(i, j) <= d(i, k) + d(k, j) + 1e-9);
}

TEST_CASE("geodesic between line endpoints is Euclidean") {
    const auto sample = gen_line(500, 10, 3);
    const auto geo = all_pairs_geodesic(build_knn_graph(sample.dataset, 5));
    const auto d = oracle::pairwise_distances(sample.dataset.vectors);
    CHECK((geo.distances - d).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("thread count does not change the result") {
    const auto g = oracle::random_connected_graph(40, 3, 0.1);
    CHECK(all_pairs_geodesic(g, {1, 2ULL << 30}).distances == all_pairs_geodesic(g, {4, 2ULL << 30}).distances);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(all_pairs_geodesic(path_graph(100), {1, 1000}), ResourceError);
    NeighborGraph split;
    split.n = 2;
    split.adjacency.assign(2, {});
    CHECK_THROWS_AS(all_pairs_geodesic(split), InputError);
}
