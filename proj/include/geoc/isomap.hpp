#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "geoc/dataio.hpp"
#include "geoc/geodesic.hpp"
#include "geoc/linalg.hpp"
#include "geoc/neighbors.hpp"

namespace geoc {

// Classical MDS of a distance matrix: the double-centering statistics of the
// squared distances and the retained (strictly positive) Gram eigenpairs.
struct MdsEmbedding {
    Eigen::VectorXd row_mean_sq;
    double grand_mean_sq = 0.0;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // n x m

    /// Training coordinates sqrt(lambda_c) * v_c, one row per point.
    RowMatrix coordinates() const;
};

/// B = -1/2 J D^2 J with J = I - 11^T/n; exactly symmetric for symmetric D.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& distances);

/// Embeds a symmetric distance matrix in m dimensions. Throws if fewer than m
/// eigenvalues of the Gram matrix are positive.
MdsEmbedding classical_mds(const Eigen::MatrixXd& distances, Eigen::Index m, const EigenOptions& options = {});

struct IsomapOptions {
    // Neighbors used to attach out-of-sample points; 0 means "same as k".
    std::size_t entry_k = 0;
    unsigned threads = 0;
    std::uint64_t memory_ceiling_bytes = 2ULL << 30;
    EigenOptions eigen;
};

struct IsomapModel {
    RowMatrix train_vectors;
    NeighborGraph graph;
    GeodesicMatrix geodesics;
    MdsEmbedding mds;
    std::size_t m = 0;
    std::size_t k = 0;
    std::size_t entry_k = 0;

    std::size_t input_dim() const { return static_cast<std::size_t>(train_vectors.cols()); }
    RowMatrix embedding() const { return mds.coordinates(); }
};

IsomapModel isomap_fit(const EmbeddingDataset& train, std::size_t m, std::size_t k, const IsomapOptions& options = {});

/// Out-of-sample projection: geodesics through the entry_k nearest training
/// rows, centered against the training statistics, projected on the eigenvectors.
EmbeddingDataset isomap_transform(const IsomapModel& model, const EmbeddingDataset& ds, unsigned threads = 0);

}  // namespace geoc
