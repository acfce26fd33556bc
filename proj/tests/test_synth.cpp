#include <doctest.h>

#include "geoc/geodesic.hpp"
#include "geoc/isomap.hpp"
#include "geoc/pca.hpp"
#include "geoc/synth.hpp"
#include "oracles.hpp"

using namespace geoc;

TEST_CASE("generators are deterministic per seed") {
    CHECK(gen_swiss_roll(50, 0.1, 3).dataset.vectors == gen_swiss_roll(50, 0.1, 3).dataset.vectors);
    CHECK_FALSE(gen_swiss_roll(50, 0.1, 3).dataset.vectors == gen_swiss_roll(50, 0.1, 4).dataset.vectors);
    const auto a = gen_lifted_moons(40, 16, 5), b = gen_lifted_moons(40, 16, 5);
    CHECK(a.dataset.vectors == b.dataset.vectors);
    CHECK(a.dataset.labels == b.dataset.labels);
    CHECK(gen_line(30, 4, 1).dataset.vectors == gen_line(30, 4, 1).dataset.vectors);
}

TEST_CASE("swiss roll latent is arc length") {
    const auto s = gen_swiss_roll(200, 0.0, 1);
    REQUIRE(s.latent.rows() == 200);
    // Arc length by numerical integration of |d/dt (t cos t, t sin t)| = sqrt(1 + t^2).
    for (Eigen::Index i = 0; i < 200; i += 37) {
        const double x = s.dataset.vectors(i, 0), z = s.dataset.vectors(i, 2);
        const double t = std::sqrt(x * x + z * z);
        const double t0 = 1.5 * std::numbers::pi;
        const int steps = 20000;
        double arc = 0.0;
        for (int q = 0; q < steps; ++q) {
            const double u = t0 + (t - t0) * (q + 0.5) / steps;
            arc += std::sqrt(1.0 + u * u) * (t - t0) / steps;
        }
        CHECK(s.latent(i, 0) == doctest::Approx(arc).epsilon(1e-6));
        CHECK(s.latent(i, 1) == s.dataset.vectors(i, 1));
    }
}

TEST_CASE("moons labels are balanced") {
    for (std::size_t n : {2u, 7u, 600u}) {
        const auto s = gen_lifted_moons(n, 3, 2);
        std::size_t ones = 0;
        for (auto l : *s.dataset.labels) ones += l;
        CHECK(std::abs(static_cast<long>(2 * ones) - static_cast<long>(n)) <= 1);
    }
}

TEST_CASE("identity lift without noise gives the standard half moons") {
    MoonsOptions opts;
    opts.noise = 0.0;
    opts.identity_lift = true;
    const auto s = gen_lifted_moons(100, 2, 3, opts);
    CHECK(s.dataset.vectors == s.latent);
    for (Eigen::Index i = 0; i < 100; ++i) {
        const double x = s.latent(i, 0), y = s.latent(i, 1);
        if (i % 2 == 0) {
            CHECK(std::hypot(x, y) == doctest::Approx(1.0));
            CHECK(y >= 0.0);
        } else {
            CHECK(std::hypot(x - 1.0, y - 0.5) == doctest::Approx(1.0));
            CHECK(y <= 0.5);
        }
    }
}

TEST_CASE("n=10, k=9 makes geodesics Euclidean") {
    const auto s = gen_swiss_roll(10, 0.0, 8);
    const auto geo = all_pairs_geodesic(build_knn_graph(s.dataset, 9));
    CHECK((geo.distances - oracle::pairwise_distances(s.dataset.vectors)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("line: Isomap and PCA agree and recover the position") {
    const auto s = gen_line(80, 12, 4);
    const auto iso = isomap_fit(s.dataset, 1, 2).embedding();
    const auto lin = pca_transform(pca_fit(s.dataset, 1), s.dataset).vectors;
    const double r = oracle::pearson(iso.col(0), s.latent.col(0));
    CHECK(r * r >= 1.0 - 1e-9);
    // Both are centered, so only the sign can differ.
    const double sign = iso(0, 0) * lin(0, 0) >= 0 ? 1.0 : -1.0;
    CHECK((iso.col(0) - sign * lin.col(0)).cwiseAbs().maxCoeff() <= 1e-6);
    // Endpoints: geodesic equals Euclidean.
    const auto geo = all_pairs_geodesic(build_knn_graph(s.dataset, 2));
    Eigen::Index lo = 0, hi = 0;
    s.latent.col(0).minCoeff(&lo);
    s.latent.col(0).maxCoeff(&hi);
    CHECK(std::abs(geo.distances(lo, hi) - (s.dataset.vectors.row(lo) - s.dataset.vectors.row(hi)).norm()) <= 1e-9);
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS(gen_swiss_roll(5, 0.0, 1));
    CHECK_THROWS(gen_swiss_roll(50, -1.0, 1));
    CHECK_THROWS(gen_lifted_moons(10, 1, 1));
    MoonsOptions opts;
    opts.identity_lift = true;
    CHECK_THROWS(gen_lifted_moons(10, 3, 1, opts));
}
