#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "geoc/neighbors.hpp"

namespace geoc {

// n x n shortest-path distances over a neighbor graph.
struct GeodesicMatrix {
    std::size_t n = 0;
    Eigen::MatrixXd distances;
};

struct GeodesicOptions {
    unsigned threads = 0;
    // Abort before allocating an n x n matrix larger than this many bytes.
    std::uint64_t memory_ceiling_bytes = 2ULL << 30;
};

/// Single-source shortest paths (binary-heap Dijkstra) from `source`.
std::vector<double> dijkstra(const NeighborGraph& g, std::size_t source);

/// Exact all-pairs shortest paths by repeated Dijkstra. The result is exactly
/// symmetric: each pair keeps the smaller of its two directional sums.
GeodesicMatrix all_pairs_geodesic(const NeighborGraph& g, const GeodesicOptions& options = {});

/// A link from an out-of-sample point to an existing vertex.
struct EntryEdge {
    std::size_t vertex;
    double weight;
};

/// Distances from a virtual vertex attached through `entry`, read off the
/// precomputed geodesic matrix: min over entries of (w + geodesic(v, i)).
std::vector<double> single_source_geodesic(const GeodesicMatrix& geo, std::span<const EntryEdge> entry);

/// Same distances from one Dijkstra pass over the graph augmented with the
/// virtual vertex.
std::vector<double> single_source_geodesic(const NeighborGraph& g, std::span<const EntryEdge> entry);

/// Dumps the matrix in the binary dataset format (d = n, no labels).
void write_geodesic_matrix(const GeodesicMatrix& geo, const std::filesystem::path& path);

}  // namespace geoc
