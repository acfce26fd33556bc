#pragma once

#include <cstdint>
#include <filesystem>

#include "geoc/dataio.hpp"

namespace geoc {

// A generated dataset together with the manifold coordinates of each row.
struct ManifoldSample {
    EmbeddingDataset dataset;
    RowMatrix latent;  // n x latent_dim
};

/// Swiss roll (t cos t, h, t sin t), t in [1.5 pi, 4.5 pi], h in [0, 21], plus
/// isotropic Gaussian noise. Latent columns: arc length along the spiral
/// measured from t = 1.5 pi, and h.
ManifoldSample gen_swiss_roll(std::size_t n, double noise, std::uint64_t seed);

struct MoonsOptions {
    double noise = 0.05;       // per ambient coordinate
    double warp = 1.0;         // amplitude of the cosine warp
    bool identity_lift = false;  // ambient_dim must be 2; no map, no warp
};

/// Two interleaved half moons (row i has label i % 2) lifted into ambient_dim
/// by a fixed random linear map followed by an element-wise cosine warp.
/// Latent columns are the 2-d moon coordinates.
ManifoldSample gen_lifted_moons(std::size_t n, std::size_t ambient_dim, std::uint64_t seed, const MoonsOptions& options = {});

/// Collinear points origin + t * direction with t uniform in [0, 10].
ManifoldSample gen_line(std::size_t n, std::size_t ambient_dim, std::uint64_t seed);

/// Writes `row,z0,z1,...`.
void write_latent_csv(const ManifoldSample& sample, const std::filesystem::path& path);

}  // namespace geoc
