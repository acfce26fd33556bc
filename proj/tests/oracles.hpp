#pragma once

// Independent reference computations used only by the test suites. None of
// these call into the library code paths they are used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geoc/dataio.hpp"
#include "geoc/model.hpp"
#include "geoc/neighbors.hpp"
#include "geoc/random.hpp"

namespace oracle {

struct Eigen_ {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns
};

// Cyclic Jacobi rotations run until the off-diagonal mass vanishes.
inline Eigen_ jacobi_eigen(Eigen::MatrixXd a) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
    Eigen_ out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        out.values(c) = a(order[static_cast<std::size_t>(c)], order[static_cast<std::size_t>(c)]);
        out.vectors.col(c) = v.col(order[static_cast<std::size_t>(c)]);
    }
    return out;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed, double scale = 1.0) {
    geoc::SplitMix64 rng(seed);
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i) a(i, j) = a(j, i) = scale * rng.gaussian();
    return a;
}

inline geoc::RowMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale = 1.0) {
    geoc::SplitMix64 rng(seed);
    geoc::RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * rng.gaussian();
    return m;
}

inline geoc::EmbeddingDataset dataset(geoc::RowMatrix m) {
    geoc::EmbeddingDataset ds;
    ds.vectors = std::move(m);
    return ds;
}

// Plain O(n^3) relaxation over an adjacency matrix.
inline Eigen::MatrixXd floyd_warshall(const geoc::NeighborGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 0.0;
        for (const geoc::Edge& e : g.adjacency[static_cast<std::size_t>(i)])
            d(i, static_cast<Eigen::Index>(e.to)) = std::min(d(i, static_cast<Eigen::Index>(e.to)), e.weight);
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
}

// Random connected graph: a random spanning tree plus extra random edges.
inline geoc::NeighborGraph random_connected_graph(std::size_t n, std::uint64_t seed, double extra_density = 0.2) {
    geoc::SplitMix64 rng(seed);
    geoc::NeighborGraph g;
    g.n = n;
    g.adjacency.assign(n, {});
    for (std::size_t v = 1; v < n; ++v) g.add_edge(v, rng.below(v), rng.uniform(0.1, 5.0));
    const auto extra = static_cast<std::size_t>(extra_density * static_cast<double>(n * (n - 1) / 2));
    for (std::size_t e = 0; e < extra; ++e) {
        const std::size_t a = rng.below(n), b = rng.below(n);
        if (a != b) g.add_edge(a, b, rng.uniform(0.1, 5.0));
    }
    return g;
}

// The k nearest other rows of row i by full sort of (distance, index).
inline std::vector<std::size_t> brute_force_knn(const geoc::RowMatrix& x, std::size_t i, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
        if (static_cast<std::size_t>(j) == i) continue;
        double s = 0.0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double diff = x(static_cast<Eigen::Index>(i), c) - x(j, c);
            s += diff * diff;
        }
        all.emplace_back(s, static_cast<std::size_t>(j));
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < k; ++c) out.push_back(all[c].second);
    return out;
}

inline double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::ArrayXd x = a.array() - a.mean();
    const Eigen::ArrayXd y = b.array() - b.mean();
    return (x * y).sum() / std::sqrt((x * x).sum() * (y * y).sum());
}

// Random batch whose hidden pre-activations cannot change sign under a
// central-difference step of size h on any single parameter. Rows that fail
// are redrawn.
inline geoc::RowMatrix kink_free_batch(const geoc::MlpClassifier& model, Eigen::Index rows, std::uint64_t seed,
                                       double h = 1e-5) {
    geoc::SplitMix64 rng(seed);
    const auto& p = model.parameters();
    geoc::RowMatrix x(rows, model.input_dim());
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.gaussian();
            const Eigen::RowVectorXd pre = x.row(r) * p.w1 + p.b1.transpose();
            const double reach = 2.0 * h * std::max(1.0, x.row(r).cwiseAbs().maxCoeff());
            if (pre.cwiseAbs().minCoeff() > reach) break;
        }
    }
    return x;
}

inline Eigen::MatrixXd pairwise_distances(const geoc::RowMatrix& x) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
    return d;
}

// Largest principal angle (radians) between the column spans of a and b,
// both with orthonormal columns and equal width. Uses the sine form, which
// stays accurate for tiny angles.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::MatrixXd residual = b - a * (a.transpose() * b);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
    return std::asin(std::min(1.0, svd.singularValues()(0)));
}

}  // namespace oracle
