#include "geoc/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "geoc/error.hpp"
#include "geoc/parallel.hpp"

namespace geoc {

namespace {

struct BridgeKey {
    double weight = std::numeric_limits<double>::infinity();
    std::size_t a = 0;
    std::size_t b = 0;

    bool operator<(const BridgeKey& o) const { return std::tie(weight, a, b) < std::tie(o.weight, o.a, o.b); }
};

}  // namespace

double row_distance(const RowMatrix& x, std::size_t i, std::size_t j) {
    const auto lo = static_cast<Eigen::Index>(std::min(i, j));
    const auto hi = static_cast<Eigen::Index>(std::max(i, j));
    return (x.row(lo) - x.row(hi)).norm();
}

std::size_t NeighborGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& list : adjacency) twice += list.size();
    return twice / 2;
}

std::vector<std::size_t> NeighborGraph::component_labels() const {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(n, unset);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] != unset) continue;
        label[s] = s;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const Edge& e : adjacency[u]) {
                if (label[e.to] == unset) {
                    label[e.to] = s;
                    stack.push_back(e.to);
                }
            }
        }
    }
    return label;
}

std::size_t NeighborGraph::component_count() const {
    const auto labels = component_labels();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += labels[i] == i;
    return count;
}

double NeighborGraph::edge_weight(std::size_t i, std::size_t j) const {
    const auto& list = adjacency.at(i);
    const auto it = std::lower_bound(list.begin(), list.end(), j, [](const Edge& e, std::size_t v) { return e.to < v; });
    return (it != list.end() && it->to == j) ? it->weight : -1.0;
}

void NeighborGraph::add_edge(std::size_t i, std::size_t j, double weight) {
    if (i == j) throw InputError("self-loops are not allowed");
    auto insert = [](std::vector<Edge>& list, std::size_t to, double w) {
        const auto it = std::lower_bound(list.begin(), list.end(), to, [](const Edge& e, std::size_t v) { return e.to < v; });
        if (it == list.end() || it->to != to) list.insert(it, Edge{to, w});
    };
    insert(adjacency.at(i), j, weight);
    insert(adjacency.at(j), i, weight);
}

NeighborGraph build_knn_graph(const EmbeddingDataset& ds, std::size_t k, unsigned threads) {
    const std::size_t n = ds.size();
    if (k < 1 || k + 1 > n)
        throw InputError("neighbor count k=" + std::to_string(k) + " outside [1, n-1] for n=" + std::to_string(n));

    std::vector<std::vector<std::size_t>> chosen(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> candidates;
        candidates.reserve(n - 1);
        const auto row = ds.vectors.row(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            candidates.emplace_back((row - ds.vectors.row(static_cast<Eigen::Index>(j))).squaredNorm(), j);
        }
        std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k - 1), candidates.end());
        std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
        auto& out = chosen[i];
        out.reserve(k);
        for (std::size_t c = 0; c < k; ++c) out.push_back(candidates[c].second);
    });

    NeighborGraph g;
    g.n = n;
    g.k = k;
    g.adjacency.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : chosen[i]) {
            const double w = row_distance(ds.vectors, i, j);
            g.adjacency[i].push_back({j, w});
            g.adjacency[j].push_back({i, w});
        }
    }
    for (auto& list : g.adjacency) {
        std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
        list.erase(std::unique(list.begin(), list.end(), [](const Edge& a, const Edge& b) { return a.to == b.to; }),
                   list.end());
    }
    return connect_components(std::move(g), ds, threads);
}

// Repeatedly joining the two closest components is Kruskal's algorithm on the
// graph whose intra-component edges cost nothing. Its result is the unique
// minimum spanning forest under the total order (weight, a, b), which dense
// Prim reaches in O(n^2) distance evaluations and O(n) memory. Sorting the
// chosen edges by that order reproduces the greedy insertion sequence.
NeighborGraph connect_components(NeighborGraph g, const EmbeddingDataset& ds, unsigned threads) {
    if (g.n != ds.size()) throw InputError("graph and dataset sizes differ");
    const std::vector<std::size_t> comp = g.component_labels();
    std::vector<std::vector<std::size_t>> members(g.n);
    std::size_t component_total = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        component_total += comp[i] == i;
        members[comp[i]].push_back(i);
    }
    if (component_total <= 1) return g;

    std::vector<char> in_tree(g.n, 0);
    std::vector<BridgeKey> key(g.n);
    std::vector<BridgeKey> bridges;

    auto absorb = [&](std::size_t component) {
        const auto& added = members[component];
        for (std::size_t v : added) in_tree[v] = 1;
        parallel_for(g.n, threads, [&](std::size_t v) {
            if (in_tree[v]) return;
            for (std::size_t u : added) {
                const BridgeKey candidate{row_distance(ds.vectors, u, v), std::min(u, v), std::max(u, v)};
                if (candidate < key[v]) key[v] = candidate;
            }
        });
    };

    absorb(comp[0]);
    for (std::size_t step = 1; step < component_total; ++step) {
        std::size_t best = g.n;
        for (std::size_t v = 0; v < g.n; ++v)
            if (!in_tree[v] && (best == g.n || key[v] < key[best])) best = v;
        bridges.push_back(key[best]);
        absorb(comp[best]);
    }

    std::sort(bridges.begin(), bridges.end());
    for (const BridgeKey& b : bridges) {
        g.add_edge(b.a, b.b, b.weight);
        g.bridged_edges.push_back({b.a, b.b, b.weight});
    }
    return g;
}

void write_edge_list(const NeighborGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    auto is_bridge = [&](std::size_t a, std::size_t b) {
        return std::any_of(g.bridged_edges.begin(), g.bridged_edges.end(),
                           [&](const BridgedEdge& e) { return e.a == a && e.b == b; });
    };
    out << "i,j,weight,bridged\n";
    char buf[40];
    for (std::size_t i = 0; i < g.n; ++i) {
        for (const Edge& e : g.adjacency[i]) {
            if (e.to <= i) continue;
            std::snprintf(buf, sizeof buf, "%.17g", e.weight);
            out << i << ',' << e.to << ',' << buf << ',' << (is_bridge(i, e.to) ? 1 : 0) << '\n';
        }
    }
    if (!out) throw InputError("cannot write file: " + path.string());
}

}  // namespace geoc
