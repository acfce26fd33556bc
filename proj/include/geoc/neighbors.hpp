#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "geoc/dataio.hpp"

namespace geoc {

struct Edge {
    std::size_t to;
    double weight;
};

struct BridgedEdge {
    std::size_t a;  // a < b
    std::size_t b;
    double weight;
};

// Undirected weighted graph over dataset rows. Each adjacency list is sorted by
// neighbor index and every edge is stored in both directions.
struct NeighborGraph {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::vector<Edge>> adjacency;
    std::vector<BridgedEdge> bridged_edges;

    /// Number of undirected edges.
    std::size_t edge_count() const;
    /// Connected component id per vertex, numbered by smallest member.
    std::vector<std::size_t> component_labels() const;
    std::size_t component_count() const;
    bool is_connected() const { return component_count() <= 1; }
    /// Weight of edge (i, j) or a negative value if absent.
    double edge_weight(std::size_t i, std::size_t j) const;
    /// Inserts or keeps the undirected edge (i, j), preserving sorted order.
    void add_edge(std::size_t i, std::size_t j, double weight);
};

/// Euclidean distance between rows i and j, evaluated identically for (i, j) and (j, i).
double row_distance(const RowMatrix& x, std::size_t i, std::size_t j);

/// Links every row to its k nearest other rows (ties by lower index),
/// union-symmetrizes, then bridges components if the result is disconnected.
NeighborGraph build_knn_graph(const EmbeddingDataset& ds, std::size_t k, unsigned threads = 0);

/// Greedily adds the shortest edge between the two closest components until the
/// graph is connected. Added edges are appended to bridged_edges in the order
/// they were chosen.
NeighborGraph connect_components(NeighborGraph g, const EmbeddingDataset& ds, unsigned threads = 0);

/// Writes `i,j,weight,bridged` with one line per undirected edge (i < j).
void write_edge_list(const NeighborGraph& g, const std::filesystem::path& path);

}  // namespace geoc
