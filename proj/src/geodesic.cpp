#include "geoc/geodesic.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "geoc/dataio.hpp"
#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QueueItem = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

void run_dijkstra(const NeighborGraph& g, MinQueue& queue, std::vector<double>& dist) {
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;  // stale entry
        for (const Edge& e : g.adjacency[u]) {
            const double candidate = d + e.weight;
            if (candidate < dist[e.to]) {
                dist[e.to] = candidate;
                queue.emplace(candidate, e.to);
            }
        }
    }
}

void check_entry(std::span<const EntryEdge> entry, std::size_t n) {
    if (entry.empty()) throw InputError("out-of-sample point needs at least one entry edge");
    for (const EntryEdge& e : entry)
        if (e.vertex >= n) throw InputError("entry edge references vertex " + std::to_string(e.vertex));
}

}  // namespace

std::vector<double> dijkstra(const NeighborGraph& g, std::size_t source) {
    if (source >= g.n) throw InputError("Dijkstra source out of range");
    std::vector<double> dist(g.n, kInf);
    MinQueue queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    run_dijkstra(g, queue, dist);
    return dist;
}

GeodesicMatrix all_pairs_geodesic(const NeighborGraph& g, const GeodesicOptions& options) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(g.n) * g.n * sizeof(double);
    if (bytes > options.memory_ceiling_bytes)
        throw ResourceError("geodesic matrix for n=" + std::to_string(g.n) + " needs " + std::to_string(bytes) +
                            " bytes, above the ceiling of " + std::to_string(options.memory_ceiling_bytes));

    GeodesicMatrix geo;
    geo.n = g.n;
    geo.distances.resize(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n));
    // Column s holds the distances from source s; columns are disjoint per task.
    parallel_for(g.n, options.threads, [&](std::size_t s) {
        const std::vector<double> dist = dijkstra(g, s);
        for (std::size_t i = 0; i < g.n; ++i) {
            if (dist[i] == kInf)
                throw InputError("graph is disconnected: no path from " + std::to_string(s) + " to " + std::to_string(i));
            geo.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = dist[i];
        }
    });
    for (Eigen::Index j = 0; j < geo.distances.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < geo.distances.rows(); ++i) {
            const double v = std::min(geo.distances(i, j), geo.distances(j, i));
            geo.distances(i, j) = v;
            geo.distances(j, i) = v;
        }
    }
    return geo;
}

std::vector<double> single_source_geodesic(const GeodesicMatrix& geo, std::span<const EntryEdge> entry) {
    check_entry(entry, geo.n);
    std::vector<double> dist(geo.n, kInf);
    for (const EntryEdge& e : entry) {
        const auto column = geo.distances.col(static_cast<Eigen::Index>(e.vertex));
        for (std::size_t i = 0; i < geo.n; ++i) dist[i] = std::min(dist[i], e.weight + column(static_cast<Eigen::Index>(i)));
    }
    return dist;
}

std::vector<double> single_source_geodesic(const NeighborGraph& g, std::span<const EntryEdge> entry) {
    check_entry(entry, g.n);
    std::vector<double> dist(g.n, kInf);
    MinQueue queue;
    for (const EntryEdge& e : entry) {
        if (e.weight < dist[e.vertex]) {
            dist[e.vertex] = e.weight;
            queue.emplace(e.weight, e.vertex);
        }
    }
    run_dijkstra(g, queue, dist);
    return dist;
}

void write_geodesic_matrix(const GeodesicMatrix& geo, const std::filesystem::path& path) {
    EmbeddingDataset ds;
    ds.vectors = geo.distances;
    write_dataset(ds, path, FileFormat::binary);
}

}  // namespace geoc
